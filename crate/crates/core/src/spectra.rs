//! Words avoiding both `a` and `not a`, i.e. the singleton classes.
//!
//! Three independent routes produce the counts `c_n`:
//! exhaustive enumeration, a transfer matrix over the last `m` letters, and the
//! rational generating function `G(z) = sum c_n z^-n` read off the keyword's
//! prefix/suffix overlaps.
//!
//! The generating function is used in the form
//!
//! ```text
//!            z (z^(m+1) + Q(z))
//! G(z) = ----------------------------------,   Q(z) = sum_{i=1..m} z^i [a[1..i] ~ a[m+2-i..m+1]]
//!        (z - 2)(z^(m+1) + Q(z)) + 2z
//! ```
//!
//! where `~` means "equal to, or equal to the negation of". The variant written with
//! `P1 + P2` (powers `z^(m-i)`) in place of `z^(m+1) + Q` does not match enumeration
//! (for `a = 110` it yields `1, 2, 2, 0, ...`), so only the form above is expanded.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::settings::Settings;
use crate::words::{low_mask, prefix_matches_suffix, Keyword};

/// Overlap lengths `i in 1..=m+1` at which the keyword's prefix equals its suffix or
/// the suffix's negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CorrelationFingerprint {
    flags: Vec<bool>,
}

impl CorrelationFingerprint {
    pub fn m(&self) -> usize {
        self.flags.len() - 1
    }

    /// Flag for overlap length `i` (1-based).
    pub fn flag(&self, i: usize) -> bool {
        i >= 1 && self.flags.get(i - 1).copied().unwrap_or(false)
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn overlaps(&self) -> Vec<usize> {
        (1..=self.flags.len()).filter(|&i| self.flag(i)).collect()
    }
}

impl fmt::Display for CorrelationFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.overlaps().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", list.join(","))
    }
}

pub fn fingerprint(a: &Keyword) -> CorrelationFingerprint {
    CorrelationFingerprint {
        flags: (1..=a.len()).map(|i| prefix_matches_suffix(a, i)).collect(),
    }
}

/// Whether `a` and `b` have the same number of singleton classes for every `n`.
pub fn same_size1_counts(a: &Keyword, b: &Keyword) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(fingerprint(a) == fingerprint(b))
}

/// Integer polynomial, coefficients by ascending power.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<i64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn monomial(power: usize, coeff: i64) -> Self {
        let mut coeffs = vec![0; power + 1];
        coeffs[power] = coeff;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> i64 {
        self.coeffs.get(power).copied().unwrap_or(0)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::default();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (power, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            match (power, abs) {
                (0, _) => write!(f, "{abs}")?,
                (1, 1) => f.write_str("z")?,
                (1, _) => write!(f, "{abs}z")?,
                (_, 1) => write!(f, "z^{power}")?,
                _ => write!(f, "{abs}z^{power}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// The correlation polynomials of a keyword.
///
/// `p1` marks overlaps where prefix equals suffix, `p2` where prefix equals the negated
/// suffix, both at power `m - i` for overlap length `i in 1..=m`. `q` carries the same
/// combined flags at power `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationPolynomials {
    pub p1: Polynomial,
    pub p2: Polynomial,
    pub q: Polynomial,
}

pub fn correlation_polynomials(a: &Keyword) -> CorrelationPolynomials {
    let m = a.m();
    let k = a.len();
    let bits = a.word().bits();
    let mut p1 = vec![0; m + 1];
    let mut p2 = vec![0; m + 1];
    let mut q = vec![0; m + 1];
    for i in 1..=m {
        let prefix = bits & low_mask(i);
        let suffix = bits >> (k - i);
        let same = i64::from(prefix == suffix);
        let opposite = i64::from(prefix == suffix ^ low_mask(i));
        p1[m - i] = same;
        p2[m - i] = opposite;
        q[i] = same + opposite;
    }
    CorrelationPolynomials {
        p1: Polynomial::new(p1),
        p2: Polynomial::new(p2),
        q: Polynomial::new(q),
    }
}

/// `G(z) = numerator / denominator`, both monic of degree `m + 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingFunction {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
}

impl GeneratingFunction {
    pub fn of(a: &Keyword) -> Self {
        let m = a.m();
        let base = Polynomial::monomial(m + 1, 1).add(&correlation_polynomials(a).q);
        let z = Polynomial::monomial(1, 1);
        let numerator = z.mul(&base);
        let denominator = Polynomial::new(vec![-2, 1])
            .mul(&base)
            .add(&Polynomial::monomial(1, 2));
        Self {
            numerator,
            denominator,
        }
    }

    /// Coefficients `c_0..=c_{n_max}` of the expansion in powers of `1/z`.
    pub fn expand(&self, n_max: usize) -> SeriesCoefficients {
        let d = self.denominator.degree().expect("denominator is nonzero");
        debug_assert_eq!(self.denominator.coeff(d), 1);
        // with w = 1/z: N(w) = sum num[d-j] w^j, D(w) = sum den[d-j] w^j, D(0) = 1
        let num = |j: usize| {
            if j <= d {
                self.numerator.coeff(d - j)
            } else {
                0
            }
        };
        let den: Vec<BigInt> = (0..=d)
            .map(|j| BigInt::from(self.denominator.coeff(d - j)))
            .collect();
        let mut c: Vec<BigInt> = Vec::with_capacity(n_max + 1);
        for k in 0..=n_max {
            let mut s = BigInt::from(num(k));
            for j in 1..=k.min(d) {
                s -= &den[j] * &c[k - j];
            }
            c.push(s);
        }
        let values = c
            .into_iter()
            .map(|v| {
                debug_assert!(!v.is_negative());
                v.to_biguint().unwrap_or_default()
            })
            .collect();
        SeriesCoefficients { values }
    }
}

/// `c_0, c_1, ..., c_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCoefficients {
    values: Vec<BigUint>,
}

impl SeriesCoefficients {
    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,c_n\n");
        for (n, c) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{c}\n"));
        }
        out
    }

    /// JSON array of decimal integers of any size.
    pub fn to_json(&self) -> String {
        let items: Vec<String> = self.values.iter().map(|c| c.to_string()).collect();
        format!("[{}]", items.join(","))
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::from_str(&self.to_json()).expect("decimal array is valid JSON")
    }
}

/// Words avoiding both `a` and `not a`, by enumeration up to `settings.max_n` and by the
/// transfer matrix beyond.
pub fn size1_series_brute(a: &Keyword, n_max: usize) -> SeriesCoefficients {
    size1_series_brute_with(a, n_max, &Settings::default())
}

pub fn size1_series_brute_with(
    a: &Keyword,
    n_max: usize,
    settings: &Settings,
) -> SeriesCoefficients {
    let rule = a.rule();
    let exhaustive = n_max.min(settings.max_n);
    let mut values: Vec<BigUint> = (0..=exhaustive)
        .map(|n| {
            let count = (0..1u64 << n)
                .filter(|&u| rule.neighbors(u, n).next().is_none())
                .count();
            BigUint::from(count)
        })
        .collect();
    if n_max > exhaustive {
        let tail = size1_series_transfer(a, n_max);
        values.extend_from_slice(&tail.values[exhaustive + 1..]);
    }
    SeriesCoefficients { values }
}

/// Transfer-matrix count over states holding the last `m` letters.
pub fn size1_series_transfer(a: &Keyword, n_max: usize) -> SeriesCoefficients {
    let m = a.m();
    let pattern = a.word().bits();
    let negated = pattern ^ low_mask(m + 1);
    let mut values: Vec<BigUint> = (0..=n_max.min(m)).map(|n| BigUint::one() << n).collect();
    if n_max <= m {
        return SeriesCoefficients { values };
    }
    // state bit 0 is the oldest of the last m letters
    let states = 1usize << m;
    let mut counts = vec![BigUint::one(); states];
    for _ in m + 1..=n_max {
        let mut next = vec![BigUint::zero(); states];
        for (state, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for letter in 0..2u64 {
                let window = state as u64 | letter << m;
                if window == pattern || window == negated {
                    continue;
                }
                next[(window >> 1) as usize] += c;
            }
        }
        counts = next;
        values.push(counts.iter().sum());
    }
    SeriesCoefficients { values }
}

/// Series expanded from the rational generating function.
pub fn size1_series_gf(a: &Keyword, n_max: usize) -> SeriesCoefficients {
    GeneratingFunction::of(a).expand(n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::histogram;

    fn k(s: &str) -> Keyword {
        s.parse().unwrap()
    }

    fn small(series: &SeriesCoefficients) -> Vec<u64> {
        series
            .values()
            .iter()
            .map(|v| u64::try_from(v).unwrap())
            .collect()
    }

    #[test]
    fn fingerprint_examples() {
        assert_eq!(fingerprint(&k("10001")).overlaps(), vec![1, 2, 5]);
        assert_eq!(fingerprint(&k("01001")).overlaps(), vec![1, 2, 5]);
        assert_eq!(fingerprint(&k("110")).overlaps(), vec![1, 3]);
        assert_eq!(fingerprint(&k("110")).to_string(), "{1,3}");
        for len in 2..=8 {
            for a in Keyword::all_of_length(len).unwrap() {
                assert!(fingerprint(&a).flag(len));
            }
        }
    }

    #[test]
    fn same_size1_examples() {
        assert!(same_size1_counts(&k("10001"), &k("01001")).unwrap());
        assert!(!same_size1_counts(&k("110"), &k("101")).unwrap());
        assert!(same_size1_counts(&k("0111"), &k("0111").reverse()).unwrap());
        assert_eq!(
            same_size1_counts(&k("110"), &k("1010")),
            Err(Error::LengthMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn fingerprint_is_invariant_under_keyword_symmetries() {
        for len in 2..=9 {
            for a in Keyword::all_of_length(len).unwrap() {
                let f = fingerprint(&a);
                assert_eq!(fingerprint(&a.negate()), f);
                assert_eq!(fingerprint(&a.reverse()), f);
                assert_eq!(fingerprint(&a.seminegate()), f);
            }
        }
    }

    #[test]
    fn polynomials() {
        let polys = correlation_polynomials(&k("110"));
        // overlap 1: "1" vs "0" -> negated match
        assert_eq!(polys.p1, Polynomial::default());
        assert_eq!(polys.p2, Polynomial::monomial(1, 1));
        assert_eq!(polys.q, Polynomial::monomial(1, 1));
        for len in 2..=7 {
            for a in Keyword::all_of_length(len).unwrap() {
                let p = correlation_polynomials(&a);
                let sum = p.p1.add(&p.p2);
                for power in 0..a.m() {
                    assert!(matches!(sum.coeff(power), 0 | 1));
                }
            }
        }
        let gf = GeneratingFunction::of(&k("110"));
        assert_eq!(gf.numerator.to_string(), "z^2 + z^4");
        assert_eq!(gf.denominator.to_string(), "z^2 - 2z^3 + z^4");
        assert_eq!(Polynomial::default().to_string(), "0");
        assert_eq!(Polynomial::new(vec![-1, 0, 3]).to_string(), "-1 + 3z^2");
    }

    #[test]
    fn series_examples() {
        assert_eq!(small(&size1_series_brute(&k("110"), 4))[4], 8);
        assert_eq!(small(&size1_series_brute(&k("101"), 6))[6], 26);
        assert_eq!(small(&size1_series_brute(&k("10001"), 0)), vec![1]);
        assert_eq!(
            small(&size1_series_gf(&k("110"), 6)),
            vec![1, 2, 4, 6, 8, 10, 12]
        );
        assert_eq!(
            small(&size1_series_gf(&k("101"), 6)),
            vec![1, 2, 4, 6, 10, 16, 26]
        );
        assert_eq!(small(&size1_series_gf(&k("10001"), 11))[11], 1262);
    }

    #[test]
    fn three_routes_agree() {
        for len in 2..=5 {
            for a in Keyword::all_of_length(len).unwrap() {
                let brute = size1_series_brute(&a, 12);
                assert_eq!(size1_series_gf(&a, 12), brute, "a = {a}");
                assert_eq!(size1_series_transfer(&a, 12), brute, "a = {a}");
            }
        }
    }

    #[test]
    fn transfer_matrix_extends_past_the_enumeration_limit() {
        let settings = Settings::sequential().with_max_n(10).unwrap();
        for a in ["110", "10001", "0110"] {
            let a = k(a);
            let series = size1_series_brute_with(&a, 40, &settings);
            assert_eq!(series.len(), 41);
            assert_eq!(series, size1_series_gf(&a, 40));
        }
    }

    #[test]
    fn series_sanity() {
        for len in 2..=6 {
            for a in Keyword::all_of_length(len).unwrap() {
                let s = size1_series_gf(&a, 30);
                for n in 0..=30 {
                    if n <= a.m() {
                        assert_eq!(s.values()[n], BigUint::one() << n);
                    }
                    if n > 0 {
                        assert!(s.values()[n] <= &s.values()[n - 1] * 2u32);
                    }
                }
            }
        }
    }

    #[test]
    fn fingerprint_decides_singleton_counts() {
        let mut table = Vec::new();
        for len in 2..=4 {
            for a in Keyword::all_of_length(len).unwrap() {
                let singles: Vec<u64> =
                    (0..=12).map(|n| histogram(&a, n).unwrap().get(1)).collect();
                table.push((a, fingerprint(&a), singles));
            }
        }
        for (a, fa, sa) in &table {
            for (b, fb, sb) in &table {
                if a.len() == b.len() {
                    assert_eq!(fa == fb, sa == sb, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn serialization() {
        let s = size1_series_gf(&k("110"), 3);
        assert_eq!(s.to_csv(), "n,c_n\n0,1\n1,2\n2,4\n3,6\n");
        assert_eq!(s.to_json(), "[1,2,4,6]");
        assert_eq!(s.to_json_value(), serde_json::json!([1, 2, 4, 6]));
    }
}
