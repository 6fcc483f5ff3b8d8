//! Finite binary words over the alphabet {A, B}.
//!
//! Derivated and control words over {0, 1} use the same type with the
//! convention A = 0, B = 1; only rendering differs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
        }
    }

    pub fn to_binary_char(self) -> char {
        match self {
            Letter::A => '0',
            Letter::B => '1',
        }
    }

    pub fn from_char(c: char) -> Result<Letter> {
        match c {
            'A' | 'a' | '0' => Ok(Letter::A),
            'B' | 'b' | '1' => Ok(Letter::B),
            other => Err(Error::ParseWord(format!("unexpected letter {other:?}"))),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A finite word over {A, B}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FiniteWord {
    letters: Vec<Letter>,
}

impl FiniteWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        FiniteWord { letters }
    }

    pub fn empty() -> Self {
        FiniteWord { letters: Vec::new() }
    }

    pub fn from_letter(l: Letter) -> Self {
        FiniteWord { letters: vec![l] }
    }

    /// `letter` repeated `count` times.
    pub fn repeated(letter: Letter, count: usize) -> Self {
        FiniteWord { letters: vec![letter; count] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }

    /// Letter counts (|w|_A, |w|_B).
    pub fn counts(&self) -> (usize, usize) {
        let a = self.count(Letter::A);
        (a, self.letters.len() - a)
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn extend_from(&mut self, other: &FiniteWord) {
        self.letters.extend_from_slice(&other.letters);
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        FiniteWord { letters }
    }

    pub fn slice(&self, start: usize, end: usize) -> FiniteWord {
        FiniteWord { letters: self.letters[start..end].to_vec() }
    }

    pub fn truncated(&self, len: usize) -> FiniteWord {
        FiniteWord { letters: self.letters[..len.min(self.len())].to_vec() }
    }

    pub fn starts_with(&self, prefix: &FiniteWord) -> bool {
        self.letters.starts_with(&prefix.letters)
    }

    /// The length-`len` prefix of the periodic word `self^∞`.
    pub fn power_prefix(&self, len: usize) -> FiniteWord {
        assert!(!self.is_empty(), "power_prefix of the empty word");
        let letters = (0..len).map(|i| self.letters[i % self.len()]).collect();
        FiniteWord { letters }
    }

    /// True iff `self` is a prefix of `base^∞`, i.e. a rational power of `base`.
    pub fn is_power_of(&self, base: &FiniteWord) -> bool {
        !base.is_empty()
            && self
                .letters
                .iter()
                .enumerate()
                .all(|(i, &l)| l == base.letters[i % base.len()])
    }

    /// Run-length encoding as (letter, run length) pairs.
    pub fn runs(&self) -> Vec<(Letter, usize)> {
        let mut out = Vec::new();
        for &l in &self.letters {
            match out.last_mut() {
                Some((prev, n)) if *prev == l => *n += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// Occurrence positions of `pattern` in `self`, in increasing order.
    pub fn occurrences(&self, pattern: &FiniteWord) -> Vec<usize> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return Vec::new();
        }
        let p = pattern.letters();
        (0..=self.len() - pattern.len())
            .filter(|&i| &self.letters[i..i + p.len()] == p)
            .collect()
    }

    pub fn contains(&self, pattern: &FiniteWord) -> bool {
        let p = pattern.letters();
        !p.is_empty()
            && p.len() <= self.len()
            && (0..=self.len() - p.len()).any(|i| &self.letters[i..i + p.len()] == p)
    }

    /// Rendering over {A, B}.
    pub fn to_ab_string(&self) -> String {
        self.letters.iter().map(|l| l.to_char()).collect()
    }

    /// Rendering over {0, 1} (A = 0, B = 1), used for derivated and control words.
    pub fn to_binary_string(&self) -> String {
        self.letters.iter().map(|l| l.to_binary_char()).collect()
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ab_string())
    }
}

/// Accepts either alphabet: A/B (case-insensitive) or 0/1.
impl FromStr for FiniteWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<FiniteWord> {
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(Letter::from_char)
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteWord { letters })
    }
}

/// Convenience for tests and fixtures: parse, panicking on bad input.
pub fn word(s: &str) -> FiniteWord {
    s.parse().expect("literal word")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_both_alphabets() {
        let w = word("ABAAB");
        assert_eq!(w.to_ab_string(), "ABAAB");
        assert_eq!(w.to_binary_string(), "01001");
        assert_eq!(word("01001"), w);
    }

    #[test]
    fn counts_sum_to_length() {
        let w = word("ABAABABAABAAB");
        let (a, b) = w.counts();
        assert_eq!(a + b, w.len());
        assert_eq!(a, 8);
        assert_eq!(b, 5);
    }

    #[test]
    fn runs_encode_blocks() {
        assert_eq!(
            word("ABAAB").runs(),
            vec![(Letter::A, 1), (Letter::B, 1), (Letter::A, 2), (Letter::B, 1)]
        );
        assert_eq!(word("AAAA").runs(), vec![(Letter::A, 4)]);
    }

    #[test]
    fn power_prefix_wraps() {
        assert_eq!(word("AB").power_prefix(5), word("ABABA"));
        assert!(word("ABABA").is_power_of(&word("AB")));
        assert!(!word("ABAAB").is_power_of(&word("AB")));
    }

    #[test]
    fn occurrences_report_all_positions() {
        let w = word("ABAABABAABAAB");
        assert_eq!(w.occurrences(&word("AB")), vec![0, 3, 5, 8, 11]);
        assert_eq!(w.occurrences(&word("BB")), Vec::<usize>::new());
    }
}
