//! Certified prefixes of Sturmian words and control words.
//!
//! A [`LanguageView`] couples a finite prefix with the maximal factor
//! length `certified_n` for which the prefix provably contains the whole
//! length-n language of the infinite word. For slope-based views the
//! certificate comes from the closed-form recurrence function (a window
//! of length R(n) contains every length-n factor); for substitution
//! fixed points it comes from a fixpoint argument on the factor sets of
//! successive iterates; for periodic words it is immediate.

use std::sync::OnceLock;

use num::BigInt;

use crate::automaton::SuffixAutomaton;
use crate::confrac::{normalize_slope, value_bracket, CFExpansion, ExactRational};
use crate::error::{Error, Result};
use crate::morphisms::{compose, BinaryMorphism};
use crate::returns::recurrence_closed;
use crate::word::{FiniteWord, Letter};

/// Length-`len` prefix of the characteristic Sturmian word of the given
/// normalized slope, by the standard-word recursion
/// s_0 = A, s_1 = A^{a_2} B, s_k = s_{k-1}^{a_{k+1}} s_{k-2}.
/// Each s_k is a prefix of the next, and |s_k| = q_{k+1}.
pub fn characteristic_prefix(cf: &CFExpansion, len: usize) -> Result<FiniteWord> {
    cf.require_normalized()?;
    if len == 0 {
        return Err(Error::InvalidParameter("prefix length must be positive".into()));
    }
    if len == 1 {
        return Ok(FiniteWord::from_letter(Letter::A));
    }

    let a2 = cf.coefficient_checked(2)?;
    let mut prev = FiniteWord::from_letter(Letter::A); // s_0
    let mut cur = {
        let mut s1 = Vec::new();
        for _ in 0..a2 {
            s1.push(Letter::A);
            if s1.len() >= len {
                return Ok(FiniteWord::new(s1));
            }
        }
        s1.push(Letter::B);
        FiniteWord::new(s1)
    };

    let mut k = 1usize;
    while cur.len() < len {
        k += 1;
        let a = cf.coefficient_checked(k + 1)?;
        let mut next = FiniteWord::empty();
        for _ in 0..a {
            next.extend_from(&cur);
            if next.len() >= len {
                break;
            }
        }
        if next.len() < len {
            next.extend_from(&prev);
        }
        prev = cur;
        cur = next;
    }
    Ok(cur.truncated(len))
}

/// Which half-open intervals the exchange uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntervalConvention {
    /// I_A = [0, alpha), I_B = [alpha, 1).
    #[default]
    HalfOpenLeft,
    /// I_A = (0, alpha], I_B = (alpha, 1].
    HalfOpenRight,
}

/// Exact brackets for the slope and the initial point of a two-interval
/// exchange. The true values are irrational; every emitted letter is
/// certified against the brackets.
#[derive(Debug, Clone)]
pub struct ExchangeSpec {
    alpha_lo: ExactRational,
    alpha_hi: ExactRational,
    x0_lo: ExactRational,
    x0_hi: ExactRational,
    convention: IntervalConvention,
}

impl ExchangeSpec {
    pub fn new(
        alpha: (ExactRational, ExactRational),
        x0: (ExactRational, ExactRational),
        convention: IntervalConvention,
    ) -> Result<Self> {
        let half = ExactRational::new(BigInt::from(1), BigInt::from(2));
        let one = ExactRational::from(BigInt::from(1));
        let zero = ExactRational::from(BigInt::from(0));
        if !(half < alpha.0 && alpha.0 <= alpha.1 && alpha.1 < one) {
            return Err(Error::InvalidParameter(
                "alpha bracket must satisfy 1/2 < lo <= hi < 1".into(),
            ));
        }
        if !(zero <= x0.0 && x0.0 <= x0.1 && x0.1 < one) {
            return Err(Error::InvalidParameter(
                "x0 bracket must satisfy 0 <= lo <= hi < 1".into(),
            ));
        }
        Ok(ExchangeSpec {
            alpha_lo: alpha.0,
            alpha_hi: alpha.1,
            x0_lo: x0.0,
            x0_hi: x0.1,
            convention,
        })
    }

    /// Spec whose coding is the characteristic word of `cf`: the slope is
    /// bracketed by consecutive convergents at `bracket_depth`, and the
    /// initial point is the characteristic intercept 1 - alpha.
    pub fn characteristic(cf: &CFExpansion, bracket_depth: usize) -> Result<Self> {
        cf.require_normalized()?;
        let (lo, hi) = value_bracket(cf, bracket_depth.max(3))?;
        let one = ExactRational::from(BigInt::from(1));
        let x0 = (&one - &hi, &one - &lo);
        ExchangeSpec::new((lo, hi), x0, IntervalConvention::HalfOpenLeft)
    }
}

/// Certified coding of the exchange orbit: at each step the bracket of
/// T^n(x_0) must lie entirely inside I_A or I_B, otherwise the letter
/// cannot be certified and the caller must tighten the brackets.
pub fn interval_exchange_prefix(spec: &ExchangeSpec, len: usize) -> Result<FiniteWord> {
    let one = ExactRational::from(BigInt::from(1));
    let mut lo = spec.x0_lo.clone();
    let mut hi = spec.x0_hi.clone();
    let mut letters = Vec::with_capacity(len);

    for step in 0..len {
        let letter = match spec.convention {
            IntervalConvention::HalfOpenLeft => {
                if hi < spec.alpha_lo {
                    Letter::A
                } else if lo >= spec.alpha_hi {
                    Letter::B
                } else {
                    return Err(Error::PrecisionExhausted { step });
                }
            }
            IntervalConvention::HalfOpenRight => {
                if hi <= spec.alpha_lo {
                    Letter::A
                } else if lo > spec.alpha_hi {
                    Letter::B
                } else {
                    return Err(Error::PrecisionExhausted { step });
                }
            }
        };
        letters.push(letter);
        match letter {
            // T(x) = x + 1 - alpha on I_A
            Letter::A => {
                lo = &lo + &one - &spec.alpha_hi;
                hi = &hi + &one - &spec.alpha_lo;
            }
            // T(x) = x - alpha on I_B
            Letter::B => {
                lo = &lo - &spec.alpha_hi;
                hi = &hi - &spec.alpha_lo;
            }
        }
    }
    Ok(FiniteWord::new(letters))
}

/// Characteristic word via the exchange coding, deepening the convergent
/// bracket until every letter certifies. Independent of the standard-word
/// recursion; the two must agree letter for letter.
pub fn characteristic_exchange_prefix(cf: &CFExpansion, len: usize) -> Result<FiniteWord> {
    let mut depth = 8usize;
    loop {
        let spec = ExchangeSpec::characteristic(cf, depth)?;
        match interval_exchange_prefix(&spec, len) {
            Ok(w) => return Ok(w),
            Err(Error::PrecisionExhausted { .. }) if depth < 4096 => depth *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Length-`len` prefix of the fixed point of a substitution prolongable
/// on `seed` (the image of `seed` starts with `seed` and has length >= 2).
pub fn substitution_prefix(images: &BinaryMorphism, seed: Letter, len: usize) -> Result<FiniteWord> {
    let seed_image = images.image(seed);
    if seed_image.len() < 2 || seed_image.letters()[0] != seed {
        return Err(Error::NotProlongable);
    }
    let mut w = seed_image.clone();
    while w.len() < len {
        w = images.apply(&w);
    }
    Ok(w.truncated(len))
}

/// Length-`len` prefix of the periodic word `pattern^∞`.
pub fn periodic_prefix(pattern: &FiniteWord, len: usize) -> Result<FiniteWord> {
    if pattern.is_empty() {
        return Err(Error::InvalidParameter("periodic pattern must be non-empty".into()));
    }
    Ok(pattern.power_prefix(len))
}

/// Run-length encoding of a word as (letter, run length) pairs.
///
/// For a certified prefix of a normalized Sturmian slope the interior
/// A-runs take exactly the two values {a_2, a_2 + 1} and every B-run has
/// length 1.
pub fn block_structure(w: &FiniteWord) -> Vec<(Letter, usize)> {
    w.runs()
}

/// A certified prefix of an infinite word.
#[derive(Debug, Clone)]
pub struct LanguageView {
    prefix: FiniteWord,
    slope: Option<CFExpansion>,
    letters_swapped: bool,
    certified_n: usize,
    label: String,
    automaton: OnceLock<SuffixAutomaton>,
}

impl LanguageView {
    /// View of the characteristic word of `cf`, sized for full analysis
    /// (factor sets, return words, and factor indices) at every factor
    /// length up to `depth`.
    ///
    /// Sizing: with R the closed-form recurrence function, every complete
    /// return word of a length-n factor has length at most R(n) + 1, and
    /// every maximal repetition at length n has length at most R(n) - 1.
    /// Certifying factor completeness to depth M = R(depth) + depth
    /// therefore covers both, and that takes a prefix of length R(M) + M.
    pub fn sturmian(cf: &CFExpansion, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be >= 1".into()));
        }
        let (normalized, swapped) = normalize_slope(cf);
        let scan_depth = recurrence_closed(&normalized, depth)? + depth;
        Self::sturmian_sized(normalized, swapped, scan_depth, cf)
    }

    /// View sized only for factor enumeration up to `depth` (membership
    /// scans, complexity); return-word and index queries may need more.
    pub fn sturmian_factors_only(cf: &CFExpansion, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be >= 1".into()));
        }
        let (normalized, swapped) = normalize_slope(cf);
        Self::sturmian_sized(normalized, swapped, depth, cf)
    }

    fn sturmian_sized(
        normalized: CFExpansion,
        swapped: bool,
        certify_to: usize,
        original: &CFExpansion,
    ) -> Result<Self> {
        let prefix_len = recurrence_closed(&normalized, certify_to)? + certify_to;
        let prefix = characteristic_prefix(&normalized, prefix_len)?;
        let certified_n = max_certified_depth(&normalized, prefix.len()).max(certify_to);
        Ok(LanguageView {
            prefix,
            slope: Some(normalized),
            letters_swapped: swapped,
            certified_n,
            label: original.to_string(),
            automaton: OnceLock::new(),
        })
    }

    /// View of `pattern^∞` certified to `depth`: every length-n factor of
    /// a p-periodic word occurs within the first p + n - 1 letters.
    pub fn periodic(pattern: &FiniteWord, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be >= 1".into()));
        }
        let prefix = periodic_prefix(pattern, depth + pattern.len())?;
        Ok(LanguageView {
            prefix,
            slope: None,
            letters_swapped: false,
            certified_n: depth,
            label: format!("periodic:{pattern}"),
            automaton: OnceLock::new(),
        })
    }

    /// View of a substitution fixed point certified to `depth` by factor-set
    /// stabilization.
    ///
    /// Let W_k be the k-th iterate of the substitution on the seed, with
    /// every image of length >= 2 (the substitution is squared first if
    /// needed; the fixed point is unchanged). Every factor of W_{k+1} of
    /// length m is a factor of the image of a factor of W_k of length at
    /// most m/2 + 1, so the map from the factor sets of W_k to those of
    /// W_{k+1} is monotone, and the sets grow toward the language of the
    /// fixed point. Once the per-length factor sets of consecutive
    /// iterates agree for all m <= depth, they equal the language of the
    /// infinite word at those lengths.
    pub fn substitution(
        images: &BinaryMorphism,
        seed: Letter,
        depth: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be >= 1".into()));
        }
        let seed_image = images.image(seed);
        if seed_image.len() < 2 || seed_image.letters()[0] != seed {
            return Err(Error::NotProlongable);
        }
        let mut sigma = images.clone();
        for _ in 0..6 {
            if sigma.min_image_len() >= 2 {
                break;
            }
            sigma = compose(&sigma, &sigma);
        }
        if sigma.min_image_len() < 2 {
            return Err(Error::InvalidParameter(
                "substitution has a letter whose image never grows".into(),
            ));
        }

        let mut word = sigma.apply(&FiniteWord::from_letter(seed));
        let mut counts = SuffixAutomaton::build(word.letters()).distinct_factor_counts(depth);
        for _ in 0..60 {
            if word.len() > 10_000_000 {
                return Err(Error::NumericOverflow(
                    "substitution iterate grew past 10M letters before stabilizing".into(),
                ));
            }
            let next = sigma.apply(&word);
            let next_counts = SuffixAutomaton::build(next.letters()).distinct_factor_counts(depth);
            let stable = word.len() >= depth && counts == next_counts;
            word = next;
            counts = next_counts;
            if stable {
                return Ok(LanguageView {
                    prefix: word,
                    slope: None,
                    letters_swapped: false,
                    certified_n: depth,
                    label: label.into(),
                    automaton: OnceLock::new(),
                });
            }
        }
        Err(Error::InvalidParameter("factor sets did not stabilize".into()))
    }

    /// Thue-Morse fixed point (0 -> 01, 1 -> 10) as a control view.
    pub fn thue_morse(depth: usize) -> Result<Self> {
        let m = BinaryMorphism::new(
            FiniteWord::new(vec![Letter::A, Letter::B]),
            FiniteWord::new(vec![Letter::B, Letter::A]),
        )?;
        Self::substitution(&m, Letter::A, depth, "thue-morse")
    }

    /// Fibonacci substitution fixed point (A -> AB, B -> A) as a control
    /// view, i.e. without a slope attached.
    pub fn fibonacci_substitution(depth: usize) -> Result<Self> {
        let m = BinaryMorphism::new(
            FiniteWord::new(vec![Letter::A, Letter::B]),
            FiniteWord::from_letter(Letter::A),
        )?;
        Self::substitution(&m, Letter::A, depth, "fibonacci-substitution")
    }

    /// Assemble a view from parts whose certification the caller has
    /// already established (derivated words, morphic images).
    pub(crate) fn from_certified_parts(
        prefix: FiniteWord,
        slope: Option<CFExpansion>,
        certified_n: usize,
        label: impl Into<String>,
    ) -> Self {
        LanguageView {
            prefix,
            slope,
            letters_swapped: false,
            certified_n,
            label: label.into(),
            automaton: OnceLock::new(),
        }
    }

    pub fn prefix(&self) -> &FiniteWord {
        &self.prefix
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    /// The normalized slope, if this is a slope-based view.
    pub fn slope(&self) -> Option<&CFExpansion> {
        self.slope.as_ref()
    }

    pub fn slope_checked(&self) -> Result<&CFExpansion> {
        self.slope.as_ref().ok_or(Error::NotSturmianSpec)
    }

    /// Whether normalization exchanged the letters relative to the slope
    /// the view was requested with.
    pub fn letters_swapped(&self) -> bool {
        self.letters_swapped
    }

    pub fn certified_n(&self) -> usize {
        self.certified_n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn require_depth(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidParameter("factor length must be >= 1".into()));
        }
        if n > self.certified_n {
            return Err(Error::BeyondCertifiedDepth { requested: n, certified: self.certified_n });
        }
        Ok(())
    }

    /// The factor index, built on first use.
    pub fn automaton(&self) -> &SuffixAutomaton {
        self.automaton.get_or_init(|| SuffixAutomaton::build(self.prefix.letters()))
    }

    /// Certified membership test: absence is meaningful because every
    /// factor of the infinite word of length <= certified_n occurs in the
    /// prefix.
    pub fn contains_factor(&self, w: &FiniteWord) -> Result<bool> {
        self.require_depth(w.len())?;
        Ok(self.automaton().contains(w.letters()))
    }
}

/// Largest m with R(m) + m <= prefix_len, i.e. the deepest factor length
/// the prefix provably covers. Scans the convergent intervals
/// [q_N, q_{N+1}) where R(m) + m = q_{N+1} + q_N + 2m - 1.
fn max_certified_depth(cf: &CFExpansion, prefix_len: usize) -> usize {
    let mut best = 0usize;
    // (q_{N-1}, q_N) starting at N = 1 (normalized slope: q_0 = q_1 = 1)
    let mut q_prev: u128 = 1;
    let mut q_cur: u128 = 1;
    let mut n = 1usize;
    let len = prefix_len as u128;
    while let Some(a) = cf.coefficient(n + 1) {
        let q_next = (a as u128).saturating_mul(q_cur).saturating_add(q_prev);
        if q_cur > len {
            break;
        }
        // R(m) + m <= len  <=>  m <= (len + 1 - q_{N+1} - q_N) / 2
        let budget = (len + 1).saturating_sub(q_next + q_cur) / 2;
        let hi = budget.min(q_next - 1);
        if hi >= q_cur {
            best = best.max(hi as usize);
        }
        q_prev = q_cur;
        q_cur = q_next;
        n += 1;
    }
    best
}

/// FASTA-like serialization: `>header` then the word wrapped at 60 columns.
pub fn format_fasta(header: &str, w: &FiniteWord) -> String {
    let mut out = String::with_capacity(w.len() + w.len() / 60 + header.len() + 4);
    out.push('>');
    out.push_str(header);
    out.push('\n');
    let text = w.to_ab_string();
    let mut rest = text.as_str();
    while !rest.is_empty() {
        let (line, tail) = rest.split_at(rest.len().min(60));
        out.push_str(line);
        out.push('\n');
        rest = tail;
    }
    out
}

pub fn parse_fasta(text: &str) -> Result<(String, FiniteWord)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix('>'))
        .ok_or_else(|| Error::ParseWord("missing FASTA header line".into()))?
        .to_string();
    let body: String = lines.collect();
    Ok((header, body.parse()?))
}
