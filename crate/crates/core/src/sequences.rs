//! m-step Fibonacci numbers, their partial sums, and representations of integers as
//! sums of distinct terms.
//!
//! Indexing follows `F_0 = 1`, `F_n = 2^(n-1)` for `1 <= n < m`, then each term is the
//! sum of the previous `m`. For `m = 2` this is `1, 1, 2, 3, 5, 8, ...`.
//! Representations only use indices `>= 1`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::words::Word;

fn check_m(m: usize) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidParameter(format!(
            "m must be at least 1, got {m}"
        )));
    }
    Ok(())
}

/// Lazily extended table of `F_0^(m), F_1^(m), ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibSequence {
    m: usize,
    values: Vec<BigUint>,
}

impl FibSequence {
    pub fn new(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(Self {
            m,
            values: vec![BigUint::one()],
        })
    }

    /// Table holding at least `F_0 ..= F_n`.
    pub fn up_to(m: usize, n: usize) -> Result<Self> {
        let mut seq = Self::new(m)?;
        seq.extend_to(n);
        Ok(seq)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn extend_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let k = self.values.len();
            let next = if k < self.m {
                BigUint::one() << (k - 1)
            } else {
                self.values[k - self.m..].iter().sum()
            };
            self.values.push(next);
        }
    }

    pub fn get(&mut self, n: usize) -> &BigUint {
        self.extend_to(n);
        &self.values[n]
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }
}

/// `F_n^(m)`.
pub fn fib(m: usize, n: usize) -> Result<BigUint> {
    Ok(FibSequence::up_to(m, n)?.values[n].clone())
}

/// Running sums `S_n = F_0 + ... + F_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSums {
    m: usize,
    sums: Vec<BigUint>,
}

impl PartialSums {
    pub fn up_to(m: usize, n: usize) -> Result<Self> {
        let fibs = FibSequence::up_to(m, n)?;
        let mut acc = BigUint::zero();
        let sums = fibs.values[..=n]
            .iter()
            .map(|f| {
                acc += f;
                acc.clone()
            })
            .collect();
        Ok(Self { m, sums })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sums(&self) -> &[BigUint] {
        &self.sums
    }
}

/// `S_n = F_0^(m) + ... + F_n^(m)`.
pub fn partial_sum(m: usize, n: usize) -> Result<BigUint> {
    Ok(PartialSums::up_to(m, n)?.sums[n].clone())
}

/// `N_u = sum_i u_i F_i^(m)`.
pub fn word_value(m: usize, u: &Word) -> Result<BigUint> {
    let fibs = FibSequence::up_to(m, u.len())?;
    Ok(u.letters()
        .zip(&fibs.values[1..])
        .filter(|(letter, _)| *letter)
        .map(|(_, f)| f)
        .sum())
}

/// A set of distinct indices `i >= 1` selecting terms `F_i^(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    m: usize,
    terms: Vec<(usize, BigUint)>,
}

impl Representation {
    pub fn m(&self) -> usize {
        self.m
    }

    /// `(index, value)` pairs in increasing index order.
    pub fn terms(&self) -> &[(usize, BigUint)] {
        &self.terms
    }

    pub fn indices(&self) -> Vec<usize> {
        self.terms.iter().map(|(i, _)| *i).collect()
    }

    pub fn total(&self) -> BigUint {
        self.terms.iter().map(|(_, v)| v).sum()
    }

    /// The word with `u_i = 1` exactly at the selected indices.
    pub fn to_word(&self, len: usize) -> Result<Word> {
        let mut bits = 0u64;
        for &(i, _) in &self.terms {
            if i > len {
                return Err(Error::InvalidParameter(format!(
                    "index {i} does not fit in a word of length {len}"
                )));
            }
            bits |= 1 << (i - 1);
        }
        Word::new(len, bits)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (i, v)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({i}, {v})")?;
        }
        f.write_str("]")
    }
}

/// Greedy Zeckendorf representation over `F_1^(2) = 1, F_2^(2) = 2, F_3^(2) = 3, ...`.
pub fn zeckendorf(n: &BigUint) -> Representation {
    let mut fibs = FibSequence::new(2).expect("m = 2 is valid");
    let mut top = 1;
    while fibs.get(top + 1) <= n {
        top += 1;
    }
    let mut rest = n.clone();
    let mut terms = Vec::new();
    let mut i = top;
    while i >= 1 && !rest.is_zero() {
        let f = fibs.get(i).clone();
        if f <= rest {
            rest -= &f;
            terms.push((i, f));
            i = i.saturating_sub(2);
        } else {
            i -= 1;
        }
    }
    terms.reverse();
    Representation { m: 2, terms }
}

/// Number of subsets of `{F_1^(m), ..., F_max_index^(m)}` (by index) summing to `n`.
///
/// Equals `R^(m)(n)` once `F_{max_index + 1}^(m) > n`.
pub fn count_representations(m: usize, n: &BigUint, max_index: usize) -> Result<BigUint> {
    if max_index < 1 {
        return Err(Error::InvalidParameter(
            "max_index must be at least 1".into(),
        ));
    }
    let fibs = FibSequence::up_to(m, max_index)?;
    let terms = &fibs.values[1..=max_index];
    // reach[k] = F_1 + ... + F_k
    let mut reach = vec![BigUint::zero()];
    for t in terms {
        let next = reach.last().unwrap() + t;
        reach.push(next);
    }
    let mut memo = HashMap::new();
    Ok(count_subsets(
        terms,
        &reach,
        terms.len(),
        n.clone(),
        &mut memo,
    ))
}

fn count_subsets(
    terms: &[BigUint],
    reach: &[BigUint],
    k: usize,
    target: BigUint,
    memo: &mut HashMap<(usize, BigUint), BigUint>,
) -> BigUint {
    if target.is_zero() {
        return BigUint::one();
    }
    if k == 0 || target > reach[k] {
        return BigUint::zero();
    }
    if let Some(hit) = memo.get(&(k, target.clone())) {
        return hit.clone();
    }
    let term = &terms[k - 1];
    let mut total = count_subsets(terms, reach, k - 1, target.clone(), memo);
    if *term <= target {
        total += count_subsets(terms, reach, k - 1, &target - term, memo);
    }
    memo.insert((k, target), total.clone());
    total
}

/// `max { R^(m)(N) : F_n^(m) <= N < F_{n+1}^(m) }`.
pub fn max_representations(m: usize, n: usize) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let fibs = FibSequence::up_to(m, n + 1)?;
    let (lo, hi) = (&fibs.values[n], &fibs.values[n + 1]);
    if lo >= hi {
        return Err(Error::InvalidParameter(format!(
            "the range [F_{n}, F_{}) is empty for m = {m}",
            n + 1
        )));
    }
    // Distribution of subset sums of F_1..F_n. Every N < F_{n+1} uses only those terms.
    let mut counts: HashMap<BigUint, BigUint> = HashMap::from([(BigUint::zero(), BigUint::one())]);
    for term in &fibs.values[1..=n] {
        let mut next = counts.clone();
        for (sum, c) in &counts {
            *next.entry(sum + term).or_default() += c;
        }
        counts = next;
    }
    Ok(counts
        .into_iter()
        .filter(|(sum, _)| sum >= lo && sum < hi)
        .map(|(_, c)| c)
        .max()
        .unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn row(m: usize, n: usize) -> Vec<u64> {
        (0..=n)
            .map(|k| u64::try_from(fib(m, k).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn fib_examples() {
        assert_eq!(fib(1, 7).unwrap(), big(1));
        assert_eq!(row(2, 6), vec![1, 1, 2, 3, 5, 8, 13]);
        assert_eq!(row(3, 5), vec![1, 1, 2, 4, 7, 13]);
        assert_eq!(row(4, 7), vec![1, 1, 2, 4, 8, 15, 29, 56]);
        assert!(matches!(fib(0, 3), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn fib_is_arbitrary_precision() {
        // F_100^(2) in this indexing is the 101st Fibonacci number.
        assert_eq!(fib(2, 100).unwrap().to_string(), "573147844013817084101");
    }

    #[test]
    fn partial_sum_examples() {
        let s: Vec<_> = (1..=6).map(|n| partial_sum(2, n).unwrap()).collect();
        assert_eq!(s, [2u64, 4, 7, 12, 20, 33].map(big));
        assert_eq!(partial_sum(3, 3).unwrap(), big(8));
        assert_eq!(partial_sum(2, 4).unwrap(), big(12));
        assert_eq!(partial_sum(1, 9).unwrap(), big(10));
    }

    #[test]
    fn partial_sums_satisfy_doubling_recurrence() {
        for m in 1..=5 {
            let sums = PartialSums::up_to(m, 40).unwrap();
            let s = sums.sums();
            for n in 0..=40 {
                if n <= m {
                    assert_eq!(s[n], BigUint::one() << n, "m = {m}, n = {n}");
                } else {
                    assert_eq!(&s[n] + &s[n - m - 1], &s[n - 1] * 2u32, "m = {m}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn fibonacci_partial_sum_identity() {
        for n in 0..40 {
            assert_eq!(partial_sum(2, n).unwrap() + 1u32, fib(2, n + 2).unwrap());
        }
    }

    #[test]
    fn word_value_examples() {
        assert_eq!(word_value(2, &Word::zeros(7).unwrap()).unwrap(), big(0));
        assert_eq!(word_value(2, &"1111".parse().unwrap()).unwrap(), big(11));
        assert_eq!(word_value(2, &"00010".parse().unwrap()).unwrap(), big(5));
        assert_eq!(word_value(3, &"0001".parse().unwrap()).unwrap(), big(7));
    }

    #[test]
    fn zeckendorf_examples() {
        assert!(zeckendorf(&big(0)).terms().is_empty());
        assert_eq!(zeckendorf(&big(16)).indices(), vec![3, 6]);
        assert_eq!(zeckendorf(&big(11)).indices(), vec![3, 5]);
        assert_eq!(zeckendorf(&big(1)).indices(), vec![1]);
        assert_eq!(zeckendorf(&big(16)).to_string(), "[(3, 3), (6, 13)]");
    }

    /// Exhaustive subset enumeration over indices 1..=k.
    fn subset_oracle(m: usize, k: usize) -> Vec<Vec<usize>> {
        let fibs: Vec<u64> = (1..=k)
            .map(|i| u64::try_from(fib(m, i).unwrap()).unwrap())
            .collect();
        let total: u64 = fibs.iter().sum();
        let mut by_sum = vec![Vec::new(); total as usize + 1];
        for mask in 0u32..1 << k {
            let sum: u64 = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| fibs[b]).sum();
            by_sum[sum as usize].push(mask as usize);
        }
        by_sum
    }

    #[test]
    fn zeckendorf_is_the_unique_nonconsecutive_representation() {
        let by_sum = subset_oracle(2, 14);
        for n in 0..=500u64 {
            let rep = zeckendorf(&big(n));
            assert_eq!(rep.total(), big(n));
            let idx = rep.indices();
            assert!(idx.windows(2).all(|w| w[1] >= w[0] + 2), "{n}: {idx:?}");
            let nonconsecutive: Vec<_> = by_sum[n as usize]
                .iter()
                .filter(|&&mask| mask & (mask >> 1) == 0)
                .collect();
            assert_eq!(nonconsecutive.len(), 1, "N = {n}");
            let mask = idx.iter().fold(0usize, |acc, i| acc | 1 << (i - 1));
            assert_eq!(*nonconsecutive[0], mask);
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_representations(2, &big(0), 5).unwrap(), big(1));
        assert_eq!(count_representations(2, &big(8), 10).unwrap(), big(3));
        assert_eq!(count_representations(2, &big(16), 10).unwrap(), big(4));
        assert!(count_representations(2, &big(3), 0).is_err());
        assert!(count_representations(0, &big(3), 4).is_err());
    }

    #[test]
    fn counts_match_subset_enumeration() {
        // F_14 = 610 > 500
        for m in 2..=3 {
            let by_sum = subset_oracle(m, 13);
            for n in 0..=500u64 {
                assert_eq!(
                    count_representations(m, &big(n), 13).unwrap(),
                    big(by_sum[n as usize].len() as u64),
                    "m = {m}, N = {n}"
                );
            }
        }
    }

    #[test]
    fn max_examples() {
        assert_eq!(max_representations(2, 6).unwrap(), big(4));
        assert_eq!(max_representations(2, 5).unwrap(), big(3));
        assert_eq!(max_representations(2, 1).unwrap(), big(1));
        assert!(max_representations(1, 3).is_err());
        assert!(max_representations(2, 0).is_err());
    }

    #[test]
    fn max_matches_known_closed_forms() {
        for k in 0..=9 {
            assert_eq!(
                max_representations(2, 2 * k + 1).unwrap(),
                fib(2, k + 1).unwrap(),
                "2k+1, k = {k}"
            );
        }
        for k in 1..=9 {
            assert_eq!(
                max_representations(2, 2 * k + 2).unwrap(),
                fib(2, k).unwrap() * 2u32,
                "2k+2, k = {k}"
            );
        }
    }
}
