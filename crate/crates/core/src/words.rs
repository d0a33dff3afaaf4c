//! Bit-packed binary words, keywords and simple maps.
//!
//! Letter `u_i` (1-based) lives in bit `i - 1`, so the string form `u_1 u_2 ... u_n`
//! reads from the least significant bit upwards.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::settings::Settings;

/// Storage width of a [`Word`].
pub const WORD_CAPACITY: usize = 64;

#[inline]
pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A binary word of length at most [`WORD_CAPACITY`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len > WORD_CAPACITY {
            return Err(Error::CapacityExceeded {
                requested: len,
                limit: WORD_CAPACITY,
            });
        }
        if bits & !low_mask(len) != 0 {
            return Err(Error::InvalidParameter(format!(
                "bitmask {bits:#x} has bits set beyond length {len}"
            )));
        }
        Ok(Self {
            len: len as u8,
            bits,
        })
    }

    /// Caller guarantees `len <= 64` and no stray high bits.
    #[inline]
    pub(crate) fn from_raw(len: usize, bits: u64) -> Self {
        debug_assert!(len <= WORD_CAPACITY && bits & !low_mask(len) == 0);
        Self {
            len: len as u8,
            bits,
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(len, 0)
    }

    pub fn ones(len: usize) -> Result<Self> {
        if len > WORD_CAPACITY {
            return Err(Error::CapacityExceeded {
                requested: len,
                limit: WORD_CAPACITY,
            });
        }
        Ok(Self::from_raw(len, low_mask(len)))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Letter `i` (1-based), or `None` outside `1..=len`.
    pub fn letter(&self, i: usize) -> Option<bool> {
        (1..=self.len())
            .contains(&i)
            .then(|| (self.bits >> (i - 1)) & 1 == 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |k| (self.bits >> k) & 1 == 1)
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn negate(&self) -> Self {
        Self::from_raw(self.len(), self.bits ^ low_mask(self.len()))
    }

    pub fn reverse(&self) -> Self {
        if self.len == 0 {
            return *self;
        }
        Self::from_raw(self.len(), self.bits.reverse_bits() >> (64 - self.len()))
    }

    /// Flips the letters at even positions `2, 4, ...`.
    pub fn seminegate(&self) -> Self {
        const EVEN_POSITIONS: u64 = 0xAAAA_AAAA_AAAA_AAAA;
        Self::from_raw(
            self.len(),
            self.bits ^ (EVEN_POSITIONS & low_mask(self.len())),
        )
    }

    pub fn concat(&self, other: &Word) -> Result<Self> {
        let len = self.len() + other.len();
        if len > WORD_CAPACITY {
            return Err(Error::CapacityExceeded {
                requested: len,
                limit: WORD_CAPACITY,
            });
        }
        let tail = if self.len() == 64 {
            0
        } else {
            other.bits << self.len()
        };
        Ok(Self::from_raw(len, self.bits | tail))
    }

    /// The subword `u_i ... u_j` for `1 <= i <= j <= len`.
    pub fn subword(&self, i: usize, j: usize) -> Result<Self> {
        if i < 1 || i > j || j > self.len() {
            return Err(Error::IndexOutOfRange {
                i,
                j,
                len: self.len(),
            });
        }
        let len = j - i + 1;
        Ok(Self::from_raw(len, (self.bits >> (i - 1)) & low_mask(len)))
    }

    /// All words of length `n` in increasing bitmask order.
    pub fn all(n: usize, settings: &Settings) -> Result<impl Iterator<Item = Word>> {
        settings.check_n(n)?;
        Ok((0..1u64 << n).map(move |bits| Word::from_raw(n, bits)))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in self.letters() {
            f.write_str(if letter { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let len = s.chars().count();
        if len > WORD_CAPACITY {
            return Err(Error::CapacityExceeded {
                requested: len,
                limit: WORD_CAPACITY,
            });
        }
        let mut bits = 0u64;
        for (k, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << k,
                other => return Err(Error::InvalidCharacter(other)),
            }
        }
        Ok(Self::from_raw(len, bits))
    }
}

/// The substitution pattern `a` of length `m + 1` with `m >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Keyword {
    word: Word,
}

#[allow(clippy::len_without_is_empty)]
impl Keyword {
    pub fn new(word: Word) -> Result<Self> {
        if word.len() < 2 {
            return Err(Error::KeywordTooShort(word.len()));
        }
        Ok(Self { word })
    }

    /// Every keyword of the given length, in increasing bitmask order.
    pub fn all_of_length(len: usize) -> Result<Vec<Keyword>> {
        if len < 2 {
            return Err(Error::KeywordTooShort(len));
        }
        if len > 24 {
            return Err(Error::CapacityExceeded {
                requested: len,
                limit: 24,
            });
        }
        Ok((0..1u64 << len)
            .map(|bits| Keyword {
                word: Word::from_raw(len, bits),
            })
            .collect())
    }

    #[inline]
    pub fn word(&self) -> Word {
        self.word
    }

    /// Length of the keyword minus one.
    #[inline]
    pub fn m(&self) -> usize {
        self.word.len() - 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn negate(&self) -> Self {
        Self {
            word: self.word.negate(),
        }
    }

    pub fn reverse(&self) -> Self {
        Self {
            word: self.word.reverse(),
        }
    }

    pub fn seminegate(&self) -> Self {
        Self {
            word: self.word.seminegate(),
        }
    }

    pub(crate) fn rule(&self) -> Rule {
        Rule::new(self)
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

impl fmt::Debug for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Keyword({self})")
    }
}

impl FromStr for Keyword {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Keyword::new(s.parse()?)
    }
}

/// Raw-bitmask form of a keyword used by the enumeration loops.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Rule {
    pattern: u64,
    negated: u64,
    mask: u64,
    span: usize,
}

impl Rule {
    fn new(keyword: &Keyword) -> Self {
        let span = keyword.len();
        let mask = low_mask(span);
        Self {
            pattern: keyword.word.bits,
            negated: keyword.word.bits ^ mask,
            mask,
            span,
        }
    }

    /// Result of the simple map at 0-based `shift` if it fires.
    #[inline]
    pub(crate) fn fire(&self, bits: u64, shift: usize) -> Option<u64> {
        let segment = (bits >> shift) & self.mask;
        (segment == self.pattern || segment == self.negated).then(|| bits ^ (self.mask << shift))
    }

    /// Number of starting positions for a word of length `n`.
    #[inline]
    pub(crate) fn positions(&self, n: usize) -> usize {
        (n + 1).saturating_sub(self.span)
    }

    /// Every word reachable by one substitution, one entry per firing position.
    #[inline]
    pub(crate) fn neighbors(&self, bits: u64, n: usize) -> impl Iterator<Item = u64> + '_ {
        (0..self.positions(n)).filter_map(move |shift| self.fire(bits, shift))
    }
}

pub fn negate(u: &Word) -> Word {
    u.negate()
}

pub fn reverse(u: &Word) -> Word {
    u.reverse()
}

pub fn seminegate(u: &Word) -> Word {
    u.seminegate()
}

pub fn concat(u: &Word, w: &Word) -> Result<Word> {
    u.concat(w)
}

pub fn subword(u: &Word, i: usize, j: usize) -> Result<Word> {
    u.subword(i, j)
}

/// Whether `a` or its negation occurs in `u` starting at letter `i`.
///
/// A line of action running past the end of `u` is not an error; it is simply
/// not applicable.
pub fn applicable(a: &Keyword, u: &Word, i: usize) -> bool {
    i >= 1 && i + a.m() <= u.len() && a.rule().fire(u.bits, i - 1).is_some()
}

/// The simple map of index `i`: negates letters `i..=i+m` when `a` is applicable there.
pub fn simple_map(a: &Keyword, i: usize, u: &Word) -> Word {
    if i >= 1 && i + a.m() <= u.len() {
        if let Some(bits) = a.rule().fire(u.bits, i - 1) {
            return Word::from_raw(u.len(), bits);
        }
    }
    *u
}

/// Whether every simple map in `indices` changes the word. `indices[0]` is applied first.
pub fn acts_completely(a: &Keyword, indices: &[usize], u: &Word) -> bool {
    let mut current = *u;
    for &i in indices {
        let next = simple_map(a, i, &current);
        if next == current {
            return false;
        }
        current = next;
    }
    true
}

/// Prefix of length `len` equals the suffix of length `len`, or its negation.
pub(crate) fn prefix_matches_suffix(a: &Keyword, len: usize) -> bool {
    let word = a.word();
    let k = word.len();
    if len == 0 || len > k {
        return false;
    }
    let prefix = word.bits & low_mask(len);
    let suffix = word.bits >> (k - len);
    prefix == suffix || prefix == suffix ^ low_mask(len)
}

/// Whether simple maps of indices `i` and `i + delta` commute on every word long enough
/// to hold both lines of action.
pub fn commutes_by_criterion(a: &Keyword, delta: i64) -> Result<bool> {
    if delta < 1 {
        return Err(Error::InvalidDelta(delta));
    }
    let delta = delta as usize;
    let m = a.m();
    if delta > m {
        return Ok(true);
    }
    Ok(!prefix_matches_suffix(a, m + 1 - delta))
}

/// Exhaustive check that `phi_i . phi_j = phi_j . phi_i` on all of `{0,1}^n`.
pub fn commutes_brute_force(a: &Keyword, i: usize, j: usize, n: usize) -> Result<bool> {
    commutes_brute_force_with(a, i, j, n, &Settings::default())
}

pub fn commutes_brute_force_with(
    a: &Keyword,
    i: usize,
    j: usize,
    n: usize,
    settings: &Settings,
) -> Result<bool> {
    settings.check_n(n)?;
    if i < 1 || i >= j || j + a.m() > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= i < j <= n - m, got i = {i}, j = {j}, n = {n}, m = {}",
            a.m()
        )));
    }
    let rule = a.rule();
    let step = |bits: u64, shift: usize| rule.fire(bits, shift).unwrap_or(bits);
    Ok((0..1u64 << n).all(|bits| step(step(bits, j - 1), i - 1) == step(step(bits, i - 1), j - 1)))
}

/// Closure of `{a}` under negation, reversal and seminegation.
pub fn keyword_orbit(a: &Keyword) -> BTreeSet<Keyword> {
    let mut orbit = BTreeSet::from([*a]);
    let mut frontier = vec![*a];
    while let Some(k) = frontier.pop() {
        for next in [k.negate(), k.reverse(), k.seminegate()] {
            if orbit.insert(next) {
                frontier.push(next);
            }
        }
    }
    orbit
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn k(s: &str) -> Keyword {
        s.parse().unwrap()
    }

    #[test]
    fn string_form_is_letter_one_first() {
        let u = w("100");
        assert_eq!(u.bits(), 1);
        assert_eq!(u.letter(1), Some(true));
        assert_eq!(u.letter(3), Some(false));
        assert_eq!(u.letter(0), None);
        assert_eq!(u.to_string(), "100");
        assert_eq!(Word::empty().to_string(), "");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert_eq!("1021".parse::<Word>(), Err(Error::InvalidCharacter('2')));
        assert_eq!("".parse::<Keyword>(), Err(Error::KeywordTooShort(0)));
        assert_eq!("1".parse::<Keyword>(), Err(Error::KeywordTooShort(1)));
        assert!(Word::new(3, 0b1000).is_err());
    }

    #[test]
    fn negate_examples() {
        assert_eq!(negate(&w("101")), w("010"));
        assert_eq!(negate(&Word::empty()), Word::empty());
        assert_eq!(negate(&w("0000")), w("1111"));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(reverse(&w("110")), w("011"));
        assert_eq!(reverse(&w("10001")), w("10001"));
        assert_eq!(reverse(&w("01000")), w("00010"));
        assert_eq!(reverse(&Word::empty()), Word::empty());
    }

    #[test]
    fn seminegate_examples() {
        assert_eq!(seminegate(&w("110")), w("100"));
        assert_eq!(seminegate(&w("101")), w("111"));
        assert_eq!(seminegate(&w("10001")), w("11011"));
    }

    #[test]
    fn concat_and_subword() {
        assert_eq!(concat(&w("10"), &w("010")).unwrap(), w("10010"));
        assert_eq!(concat(&w("0110"), &Word::empty()).unwrap(), w("0110"));
        assert_eq!(concat(&Word::empty(), &w("1")).unwrap(), w("1"));
        let long = Word::ones(40).unwrap();
        assert_eq!(
            concat(&long, &Word::zeros(30).unwrap()),
            Err(Error::CapacityExceeded {
                requested: 70,
                limit: 64
            })
        );

        assert_eq!(subword(&w("10110"), 1, 3).unwrap(), w("101"));
        assert_eq!(subword(&w("10110"), 1, 5).unwrap(), w("10110"));
        assert_eq!(subword(&w("01101"), 3, 5).unwrap(), w("101"));
        assert!(matches!(
            subword(&w("01101"), 0, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            subword(&w("01101"), 4, 6),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            subword(&w("01101"), 3, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn applicability() {
        let a = k("101");
        assert!(applicable(&a, &w("10110"), 1));
        assert!(!applicable(&a, &w("10110"), 3));
        assert!(!applicable(&a, &w("11"), 1));
        assert!(!applicable(&a, &w("10110"), 0));
        assert!(!applicable(&a, &w("10110"), 4));
    }

    #[test]
    fn simple_map_examples() {
        let a = k("101");
        assert_eq!(simple_map(&a, 1, &w("10110")), w("01010"));
        assert_eq!(simple_map(&a, 3, &w("01010")), w("01101"));
        assert_eq!(simple_map(&a, 2, &w("10110")), w("10110"));
        // the two non-commuting compositions on 01010 / 10110
        assert_eq!(
            simple_map(&a, 2, &simple_map(&a, 1, &w("01010"))),
            w("10110")
        );
        assert_eq!(
            simple_map(&a, 1, &simple_map(&a, 2, &w("01010"))),
            w("00100")
        );
    }

    #[test]
    fn acts_completely_examples() {
        let a = k("101");
        assert!(acts_completely(&a, &[1, 3], &w("10110")));
        assert!(acts_completely(&a, &[], &w("10110")));
        assert!(!acts_completely(&a, &[2], &w("10110")));
        assert!(!acts_completely(&a, &[3, 1], &w("10110")));
    }

    #[test]
    fn commutativity_examples() {
        assert!(!commutes_by_criterion(&k("101"), 1).unwrap());
        assert!(!commutes_by_criterion(&k("101"), 2).unwrap());
        assert!(commutes_by_criterion(&k("110"), 3).unwrap());
        assert_eq!(
            commutes_by_criterion(&k("110"), 0),
            Err(Error::InvalidDelta(0))
        );

        assert!(!commutes_brute_force(&k("101"), 1, 3, 5).unwrap());
        assert!(commutes_brute_force(&k("110"), 1, 2, 6).unwrap());
        assert!(commutes_brute_force(&k("101"), 1, 5, 8).unwrap());
        assert!(commutes_brute_force(&k("101"), 2, 2, 8).is_err());
        assert!(commutes_brute_force(&k("101"), 1, 7, 8).is_err());
        assert!(matches!(
            commutes_brute_force(&k("101"), 1, 2, 30),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    /// Independent composition check built from the `Word`-level API.
    fn commute_by_words(a: &Keyword, i: usize, j: usize, n: usize) -> bool {
        (0..1u64 << n).map(|b| Word::new(n, b).unwrap()).all(|u| {
            simple_map(a, i, &simple_map(a, j, &u)) == simple_map(a, j, &simple_map(a, i, &u))
        })
    }

    #[test]
    fn criterion_matches_exhaustive_check_small() {
        for len in 2..=4 {
            for a in Keyword::all_of_length(len).unwrap() {
                let m = a.m();
                for n in m + 2..=9 {
                    for i in 1..=n - m {
                        for j in i + 1..=n - m {
                            let expected = commute_by_words(&a, i, j, n);
                            assert_eq!(commutes_brute_force(&a, i, j, n).unwrap(), expected);
                            assert_eq!(
                                commutes_by_criterion(&a, (j - i) as i64).unwrap(),
                                expected,
                                "a = {a}, i = {i}, j = {j}, n = {n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let set = |xs: &[&str]| xs.iter().map(|s| k(s)).collect::<BTreeSet<_>>();
        assert_eq!(keyword_orbit(&k("110")), set(&["110", "001", "011", "100"]));
        assert_eq!(keyword_orbit(&k("101")), set(&["101", "010", "111", "000"]));
        assert_eq!(
            keyword_orbit(&k("10001")),
            set(&["10001", "01110", "11011", "00100"])
        );
    }

    #[test]
    fn orbits_partition_keywords() {
        for len in 2..=7 {
            let all = Keyword::all_of_length(len).unwrap();
            let mut seen = BTreeSet::new();
            for a in &all {
                let orbit = keyword_orbit(a);
                assert!(
                    8 % orbit.len() == 0,
                    "orbit of {a} has size {}",
                    orbit.len()
                );
                assert!(orbit
                    .iter()
                    .all(|b| b.len() == len && keyword_orbit(b) == orbit));
                seen.extend(orbit);
            }
            assert_eq!(seen.len(), all.len());
        }
    }

    fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
        (0..=max_len).prop_flat_map(|len| {
            (0..=low_mask(len)).prop_map(move |bits| Word::new(len, bits).unwrap())
        })
    }

    fn keyword_strategy() -> impl Strategy<Value = Keyword> {
        (2usize..=6).prop_flat_map(|len| {
            (0..=low_mask(len))
                .prop_map(move |bits| Keyword::new(Word::new(len, bits).unwrap()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn involutions(u in word_strategy(64)) {
            prop_assert_eq!(u.negate().negate(), u);
            prop_assert_eq!(u.reverse().reverse(), u);
            prop_assert_eq!(u.seminegate().seminegate(), u);
            prop_assert_eq!(u.reverse().negate(), u.negate().reverse());
            prop_assert_eq!(u.seminegate().negate(), u.negate().seminegate());
        }

        #[test]
        fn string_round_trip(u in word_strategy(64)) {
            prop_assert_eq!(u.to_string().parse::<Word>().unwrap(), u);
        }

        #[test]
        fn reverse_matches_letters(u in word_strategy(30)) {
            let r = u.reverse();
            for i in 1..=u.len() {
                prop_assert_eq!(r.letter(i), u.letter(u.len() - i + 1));
            }
        }

        #[test]
        fn simple_maps_are_involutions(a in keyword_strategy(), u in word_strategy(20), i in 0usize..22) {
            prop_assert_eq!(simple_map(&a, i, &simple_map(&a, i, &u)), u);
        }

        #[test]
        fn disjoint_lines_commute(a in keyword_strategy(), u in word_strategy(24), i in 1usize..20, gap in 0usize..6) {
            let j = i + a.m() + 1 + gap;
            prop_assert_eq!(
                simple_map(&a, i, &simple_map(&a, j, &u)),
                simple_map(&a, j, &simple_map(&a, i, &u))
            );
        }

        #[test]
        fn concat_then_split(u in word_strategy(30), v in word_strategy(30)) {
            let uv = u.concat(&v).unwrap();
            prop_assert_eq!(uv.len(), u.len() + v.len());
            if !u.is_empty() {
                prop_assert_eq!(uv.subword(1, u.len()).unwrap(), u);
            }
            if !v.is_empty() {
                prop_assert_eq!(uv.subword(u.len() + 1, uv.len()).unwrap(), v);
            }
        }
    }
}
