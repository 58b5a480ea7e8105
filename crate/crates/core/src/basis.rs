//! Graded generators of `W`, words over them, and the deterministic
//! enumeration of `T^n(W)`.
//!
//! Generators are ordered `e1 < .. < er < f1 < .. < fs`; words of a fixed
//! length are ordered lexicographically by generator position. The rank of a
//! word is its index in that ordering, i.e. its base-`(r+s)` value.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default limit on basis cochains per degree.
pub const DEFAULT_CAP: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Even,
    Odd,
}

/// One of `e_i` (even) or `f_j` (odd). Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId {
    pub kind: Kind,
    pub index: u16,
}

impl GeneratorId {
    pub const fn even(index: u16) -> Self {
        GeneratorId { kind: Kind::Even, index }
    }

    pub const fn odd(index: u16) -> Self {
        GeneratorId { kind: Kind::Odd, index }
    }

    pub fn parity(self) -> u8 {
        match self.kind {
            Kind::Even => 0,
            Kind::Odd => 1,
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Even => write!(f, "e{}", self.index),
            Kind::Odd => write!(f, "f{}", self.index),
        }
    }
}

impl FromStr for GeneratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownGenerator(s.to_string());
        let kind = match s.as_bytes().first() {
            Some(b'e') => Kind::Even,
            Some(b'f') => Kind::Odd,
            _ => return Err(bad()),
        };
        let index: u16 = s[1..].parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(GeneratorId { kind, index })
    }
}

/// A word `I = (i_1, .., i_n)` in the generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<GeneratorId>);

impl MultiIndex {
    pub fn new(word: Vec<GeneratorId>) -> Self {
        MultiIndex(word)
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Exterior degree `l(I)`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[GeneratorId] {
        &self.0
    }

    pub fn parity(&self) -> u8 {
        parity_of(&self.0)
    }

    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut word = Vec::with_capacity(self.len() + other.len());
        word.extend_from_slice(&self.0);
        word.extend_from_slice(&other.0);
        MultiIndex(word)
    }

    /// `(I, J, k)`: replace the letter at `slot` by the word `J`.
    pub fn insert_at(&self, slot: usize, inner: &MultiIndex) -> MultiIndex {
        let mut word = Vec::with_capacity(self.len() + inner.len() - 1);
        word.extend_from_slice(&self.0[..slot]);
        word.extend_from_slice(&inner.0);
        word.extend_from_slice(&self.0[slot + 1..]);
        MultiIndex(word)
    }
}

impl From<Vec<GeneratorId>> for MultiIndex {
    fn from(word: Vec<GeneratorId>) -> Self {
        MultiIndex(word)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Sum of generator parities mod 2.
pub fn parity_of(word: &[GeneratorId]) -> u8 {
    word.iter().fold(0, |acc, g| acc ^ g.parity())
}

/// The `r|s`-dimensional graded space `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradedBasis {
    r: u16,
    s: u16,
    cap: u64,
}

impl GradedBasis {
    pub fn new(r: u16, s: u16) -> Result<Self> {
        if r == 0 && s == 0 {
            return Err(Error::EmptyBasis);
        }
        Ok(GradedBasis { r, s, cap: DEFAULT_CAP })
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn r(&self) -> u16 {
        self.r
    }

    pub fn s(&self) -> u16 {
        self.s
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// `dim W = r + s`.
    pub fn dim(&self) -> usize {
        self.r as usize + self.s as usize
    }

    pub fn generators(&self) -> Vec<GeneratorId> {
        (1..=self.r).map(GeneratorId::even).chain((1..=self.s).map(GeneratorId::odd)).collect()
    }

    pub fn contains(&self, g: GeneratorId) -> bool {
        g.index >= 1
            && match g.kind {
                Kind::Even => g.index <= self.r,
                Kind::Odd => g.index <= self.s,
            }
    }

    pub fn check(&self, g: GeneratorId) -> Result<GeneratorId> {
        if self.contains(g) {
            Ok(g)
        } else {
            Err(Error::UnknownGenerator(g.to_string()))
        }
    }

    /// Position of `g` in the fixed generator order.
    pub fn position(&self, g: GeneratorId) -> usize {
        debug_assert!(self.contains(g));
        match g.kind {
            Kind::Even => g.index as usize - 1,
            Kind::Odd => self.r as usize + g.index as usize - 1,
        }
    }

    pub fn generator_at(&self, pos: usize) -> GeneratorId {
        debug_assert!(pos < self.dim());
        if pos < self.r as usize {
            GeneratorId::even(pos as u16 + 1)
        } else {
            GeneratorId::odd((pos - self.r as usize) as u16 + 1)
        }
    }

    /// `(r+s)^n`, or `None` on overflow.
    pub fn word_count(&self, n: usize) -> Option<u64> {
        (self.dim() as u64).checked_pow(n as u32)
    }

    /// Number of basis cochains `phi^I_i` with `l(I) = n`, checked against the cap.
    pub fn cochain_count(&self, n: usize) -> Result<usize> {
        let count = self.word_count(n).and_then(|w| w.checked_mul(self.dim() as u64)).unwrap_or(u64::MAX);
        if count > self.cap {
            return Err(Error::CapExceeded { needed: count, cap: self.cap });
        }
        Ok(count as usize)
    }

    fn checked_word_count(&self, n: usize) -> Result<usize> {
        let count = self.word_count(n).unwrap_or(u64::MAX);
        if count > self.cap {
            return Err(Error::CapExceeded { needed: count, cap: self.cap });
        }
        Ok(count as usize)
    }

    /// All words of length `n` in increasing rank.
    pub fn enumerate_multiindices(&self, n: usize) -> Result<Vec<MultiIndex>> {
        let count = self.checked_word_count(n)?;
        Ok((0..count).map(|k| self.unrank_unchecked(n, k)).collect())
    }

    pub fn rank_of(&self, word: &MultiIndex) -> Result<usize> {
        let base = self.dim();
        word.letters().iter().try_fold(0usize, |acc, &g| {
            let g = self.check(g)?;
            Ok(acc * base + self.position(g))
        })
    }

    pub fn unrank(&self, n: usize, k: usize) -> Result<MultiIndex> {
        let count = self.word_count(n).unwrap_or(u64::MAX);
        if k as u64 >= count {
            return Err(Error::IndexOutOfRange { index: k as u64, len: count });
        }
        Ok(self.unrank_unchecked(n, k))
    }

    fn unrank_unchecked(&self, n: usize, mut k: usize) -> MultiIndex {
        let base = self.dim();
        let mut word = vec![GeneratorId::even(1); n];
        for slot in word.iter_mut().rev() {
            *slot = self.generator_at(k % base);
            k /= base;
        }
        MultiIndex(word)
    }

    pub fn parse_generator(&self, name: &str) -> Result<GeneratorId> {
        self.check(name.parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(basis: &GradedBasis, names: &[&str]) -> MultiIndex {
        MultiIndex::new(names.iter().map(|n| basis.parse_generator(n).unwrap()).collect())
    }

    #[test]
    fn make_basis_orders_even_first() {
        let b = GradedBasis::new(2, 3).unwrap();
        let names: Vec<String> = b.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["e1", "e2", "f1", "f2", "f3"]);
        let b = GradedBasis::new(1, 1).unwrap();
        assert_eq!(b.generators(), vec![GeneratorId::even(1), GeneratorId::odd(1)]);
        assert!(matches!(GradedBasis::new(0, 0), Err(Error::EmptyBasis)));
    }

    #[test]
    fn parity_examples() {
        let b = GradedBasis::new(1, 2).unwrap();
        assert_eq!(word(&b, &["e1", "e1"]).parity(), 0);
        assert_eq!(word(&b, &["f1"]).parity(), 1);
        assert_eq!(word(&b, &["e1", "f2", "f1"]).parity(), 0);
    }

    #[test]
    fn enumeration_examples() {
        let b = GradedBasis::new(1, 1).unwrap();
        let words: Vec<String> = b.enumerate_multiindices(2).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["e1 e1", "e1 f1", "f1 e1", "f1 f1"]);
        assert_eq!(b.enumerate_multiindices(0).unwrap(), vec![MultiIndex::empty()]);

        let b = GradedBasis::new(1, 2).unwrap();
        let words = b.enumerate_multiindices(3).unwrap();
        assert_eq!(words.len(), 27);
        assert_eq!(words[0], word(&b, &["e1", "e1", "e1"]));
        assert_eq!(words[26], word(&b, &["f2", "f2", "f2"]));
    }

    #[test]
    fn rank_examples() {
        let b = GradedBasis::new(1, 1).unwrap();
        assert_eq!(b.rank_of(&word(&b, &["e1", "f1"])).unwrap(), 1);
        assert_eq!(b.unrank(2, 3).unwrap(), word(&b, &["f1", "f1"]));
        assert!(matches!(b.unrank(2, 4), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn cap_guards_enumeration() {
        let b = GradedBasis::new(2, 2).unwrap().with_cap(100);
        assert!(b.enumerate_multiindices(3).is_ok());
        assert!(matches!(b.enumerate_multiindices(4), Err(Error::CapExceeded { needed: 256, .. })));
        assert!(matches!(b.cochain_count(3), Err(Error::CapExceeded { needed: 256, .. })));
    }

    #[test]
    fn unknown_generators_rejected() {
        let b = GradedBasis::new(1, 2).unwrap();
        assert!(b.parse_generator("e2").is_err());
        assert!(b.parse_generator("f0").is_err());
        assert!(b.parse_generator("g1").is_err());
        assert!(b.parse_generator("f2").is_ok());
    }

    #[test]
    fn enumeration_is_strictly_increasing_and_complete() {
        let b = GradedBasis::new(1, 2).unwrap();
        for n in 0..=6 {
            let words = b.enumerate_multiindices(n).unwrap();
            assert_eq!(words.len(), 3usize.pow(n as u32));
            assert!(words.windows(2).all(|w| w[0] < w[1]));
            for (k, w) in words.iter().enumerate() {
                assert_eq!(b.rank_of(w).unwrap(), k);
                assert_eq!(&b.unrank(n, k).unwrap(), w);
            }
        }
    }
}
