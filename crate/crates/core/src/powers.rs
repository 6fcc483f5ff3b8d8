//! Factor indices (maximal fractional powers), the closed-form index
//! bound, Theorem-1 witness search, and the lower-bound audit
//! R(|w|) >= |w| ind(w) + C(|w|) - |w|.

use std::collections::HashMap;

use num::rational::Ratio;
use num::BigInt;

use crate::confrac::{convergents, CFExpansion, ExactRational};
use crate::error::{Error, Result};
use crate::language;
use crate::word::{FiniteWord, Letter};
use crate::wordgen::LanguageView;

/// True iff w is not a proper integer power z^k, k >= 2.
pub fn is_primitive(w: &FiniteWord) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    let letters = w.letters();
    for d in 1..n {
        if !n.is_multiple_of(d) {
            continue;
        }
        if (d..n).all(|i| letters[i] == letters[i - d]) {
            return false;
        }
    }
    true
}

/// The index of a factor: its maximal repetition has length `rep_len`,
/// so ind(w) = rep_len / |w| as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexValue {
    pub word: FiniteWord,
    pub rep_len: usize,
}

impl IndexValue {
    /// ind(w) in reduced form.
    pub fn ind(&self) -> ExactRational {
        Ratio::new(BigInt::from(self.rep_len), BigInt::from(self.word.len()))
    }

    /// ind(w) rendered with denominator exactly |w|, unreduced.
    pub fn display_unreduced(&self) -> String {
        format!("{}/{}", self.rep_len, self.word.len())
    }

    /// The maximal repetition w^{ind(w)}.
    pub fn max_repetition(&self) -> FiniteWord {
        self.word.power_prefix(self.rep_len)
    }
}

/// Longest extension with period n starting at each position:
/// ext[i] = lcp(suffix(i), suffix(i + n)), clipped to the prefix.
fn periodic_extension(letters: &[Letter], n: usize) -> Vec<usize> {
    let len = letters.len();
    let mut ext = vec![0usize; len];
    if len <= n {
        return ext;
    }
    for i in (0..len - n).rev() {
        if letters[i] == letters[i + n] {
            ext[i] = ext[i + 1] + 1;
        }
    }
    ext
}

/// Exact index of a factor. The supremum is certified attained: the
/// maximal repetition occurs in the prefix, and the next-larger power
/// w^{(rep_len+1)/|w|} has length within the certified depth and does
/// not occur, so it is not a factor of the infinite word either.
pub fn index_of_factor(view: &LanguageView, w: &FiniteWord) -> Result<IndexValue> {
    view.require_depth(w.len())?;
    let occ = view.prefix().occurrences(w);
    if occ.is_empty() {
        return Err(Error::FactorNotInLanguage(w.to_string()));
    }
    let n = w.len();
    let ext = periodic_extension(view.prefix().letters(), n);
    let rep_len = occ.iter().map(|&p| n + ext[p]).max().expect("non-empty occurrences");
    finish_index(view, w.clone(), rep_len)
}

fn finish_index(view: &LanguageView, word: FiniteWord, rep_len: usize) -> Result<IndexValue> {
    if rep_len + 1 > view.certified_n() {
        // cannot certify that no larger power occurs
        return Err(Error::BeyondCertifiedDepth {
            requested: rep_len + 1,
            certified: view.certified_n(),
        });
    }
    let next_power = word.power_prefix(rep_len + 1);
    if view.automaton().contains(next_power.letters()) {
        return Err(Error::TheoremViolation(format!(
            "repetition scan missed the power {next_power} of {word}"
        )));
    }
    Ok(IndexValue { word, rep_len })
}

/// Maximal repetition length for every length-n factor, in one pass.
/// Entries are sorted by factor.
pub(crate) fn max_rep_by_factor(view: &LanguageView, n: usize) -> Result<Vec<(FiniteWord, usize)>> {
    view.require_depth(n)?;
    let letters = view.prefix().letters();
    let ext = periodic_extension(letters, n);
    let mut reps: HashMap<&[Letter], usize> = HashMap::new();
    for i in 0..=letters.len() - n {
        let entry = reps.entry(&letters[i..i + n]).or_insert(0);
        *entry = (*entry).max(n + ext[i]);
    }
    let mut out: Vec<(FiniteWord, usize)> = reps
        .into_iter()
        .map(|(k, v)| (FiniteWord::new(k.to_vec()), v))
        .collect();
    out.sort();
    Ok(out)
}

/// (ind(A), ind(B)) = (a_2 + 1, 1) for a normalized slope.
pub fn letter_indices(cf: &CFExpansion) -> Result<(u64, u64)> {
    cf.require_normalized()?;
    let a2 = cf.coefficient_checked(2)?;
    Ok((a2 + 1, 1))
}

/// The bound term 2 + a_{N+1} + (q_{N-1} - 2)/q_N at a given N >= 1.
pub fn index_upper_bound(cf: &CFExpansion, n: usize) -> Result<ExactRational> {
    if n < 1 {
        return Err(Error::InvalidParameter("bound term needs N >= 1".into()));
    }
    cf.require_normalized()?;
    let conv = convergents(cf, n)?;
    let a_next = cf.coefficient_checked(n + 1)?;
    let q_n = BigInt::from(conv.q(n).clone());
    let q_prev = BigInt::from(conv.q(n - 1).clone());
    Ok(ExactRational::from(BigInt::from(2 + a_next)) + ExactRational::new(q_prev - BigInt::from(2), q_n))
}

/// Whether the supremum of the bound terms over all N is finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupClassification {
    /// Periodic expansion: partial quotients are bounded, so the
    /// supremum of the bound terms is finite.
    Finite { quotient_bound: u64 },
    /// Head-only expansion: the tail is unknown, nothing can be said.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordIndexBound {
    /// Largest bound term over 1 <= N <= N_max.
    pub max_term: ExactRational,
    /// Smallest N attaining it.
    pub attained_at: usize,
    pub sup: SupClassification,
}

/// Maximum of the bound terms over 1 <= N <= N_max, plus the supremum
/// classification when the expansion determines its whole tail.
pub fn word_index_bound(cf: &CFExpansion, n_max: usize) -> Result<WordIndexBound> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("need N_max >= 1".into()));
    }
    let mut best: Option<(ExactRational, usize)> = None;
    for n in 1..=n_max {
        let term = index_upper_bound(cf, n)?;
        if best.as_ref().is_none_or(|(b, _)| term > *b) {
            best = Some((term, n));
        }
    }
    let (max_term, attained_at) = best.expect("n_max >= 1");
    let sup = if cf.is_periodic() {
        let quotient_bound = cf
            .head()
            .iter()
            .chain(cf.period().expect("periodic").iter())
            .copied()
            .max()
            .expect("non-empty expansion");
        SupClassification::Finite { quotient_bound }
    } else {
        SupClassification::Unknown
    };
    Ok(WordIndexBound { max_term, attained_at, sup })
}

/// Per-length report of the witness search for R(n) = n ind(w) + 1.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub n: usize,
    pub complexity: usize,
    pub recurrence: usize,
    /// The factor of maximal index at this length (smallest such factor
    /// on ties).
    pub max_index: IndexValue,
    /// All factors w of length n with R(n) = n ind(w) + 1, sorted.
    pub witnesses: Vec<IndexValue>,
    /// The primitive factor with ww in the language of maximal index,
    /// when one exists at this length.
    pub rekindex_witness: Option<IndexValue>,
}

impl WitnessReport {
    pub fn has_witness(&self) -> bool {
        !self.witnesses.is_empty()
    }

    /// Whether the rekindex prediction R(n) = n ind(w*) + 1 holds.
    pub fn rekindex_agrees(&self) -> Option<bool> {
        self.rekindex_witness.as_ref().map(|w| w.rep_len + 1 == self.recurrence)
    }
}

/// Find every Theorem-1 witness at the given lengths.
pub fn theorem_a_witnesses(view: &LanguageView, lengths: &[usize]) -> Result<Vec<WitnessReport>> {
    lengths.iter().map(|&n| witness_report_at(view, n)).collect()
}

fn witness_report_at(view: &LanguageView, n: usize) -> Result<WitnessReport> {
    let rec = crate::returns::recurrence_brute(view, n)?;
    let complexity = language::complexity(view, n)?;
    let reps = max_rep_by_factor(view, n)?;

    let mut witnesses = Vec::new();
    let mut rekindex: Option<IndexValue> = None;
    let mut max_index: Option<IndexValue> = None;
    for (word, rep_len) in reps {
        let idx = finish_index(view, word, rep_len)?;
        if max_index.as_ref().is_none_or(|cur| idx.rep_len > cur.rep_len) {
            max_index = Some(idx.clone());
        }
        // primitive factor with ww in the language, of maximal index
        if idx.rep_len >= 2 * n && is_primitive(&idx.word) {
            let better = rekindex.as_ref().is_none_or(|cur| idx.rep_len > cur.rep_len);
            if better {
                rekindex = Some(idx.clone());
            }
        }
        if idx.rep_len + 1 == rec.r {
            witnesses.push(idx);
        }
    }
    Ok(WitnessReport {
        n,
        complexity,
        recurrence: rec.r,
        max_index: max_index.expect("non-empty factor set"),
        witnesses,
        rekindex_witness: rekindex,
    })
}

#[derive(Debug, Clone)]
pub struct Prop2Row {
    pub n: usize,
    pub complexity: usize,
    pub recurrence: usize,
    pub max_rep_len: usize,
    /// min over audited factors of R(n) - (rep_len + C(n) - n); the
    /// inequality holds iff this is >= 0. None when every factor at this
    /// length was skipped.
    pub min_slack: Option<i64>,
    /// Factors with slack exactly 0.
    pub equality_count: usize,
    /// Factors whose index could not be certified at this view depth
    /// (unbounded repetitions of a periodic word).
    pub skipped_unbounded: usize,
}

#[derive(Debug, Clone)]
pub struct Prop2Report {
    pub rows: Vec<Prop2Row>,
    /// First (n, factor) violating the inequality, if any.
    pub first_violation: Option<(usize, FiniteWord)>,
}

impl Prop2Report {
    pub fn all_pass(&self) -> bool {
        self.first_violation.is_none()
    }

    pub fn total_skipped(&self) -> usize {
        self.rows.iter().map(|r| r.skipped_unbounded).sum()
    }
}

/// Audit R(|w|) >= |w| ind(w) + C(|w|) - |w| for every factor of length
/// <= n_max. Factors whose index cannot be certified at the view's depth
/// are counted, not audited; on aperiodic views sized for analysis this
/// never happens.
pub fn prop2_audit(view: &LanguageView, n_max: usize) -> Result<Prop2Report> {
    let mut rows = Vec::with_capacity(n_max);
    let mut first_violation = None;
    for n in 1..=n_max {
        let rec = crate::returns::recurrence_brute(view, n)?;
        let complexity = language::complexity(view, n)?;
        let reps = max_rep_by_factor(view, n)?;
        let mut min_slack: Option<i64> = None;
        let mut equality_count = 0usize;
        let mut skipped = 0usize;
        let mut max_rep_len = 0usize;
        for (word, rep_len) in reps {
            if rep_len + 1 > view.certified_n() {
                skipped += 1;
                continue;
            }
            max_rep_len = max_rep_len.max(rep_len);
            let slack = rec.r as i64 - (rep_len + complexity - n) as i64;
            min_slack = Some(min_slack.map_or(slack, |m| m.min(slack)));
            if slack == 0 {
                equality_count += 1;
            }
            if slack < 0 && first_violation.is_none() {
                first_violation = Some((n, word));
            }
        }
        rows.push(Prop2Row {
            n,
            complexity,
            recurrence: rec.r,
            max_rep_len,
            min_slack,
            equality_count,
            skipped_unbounded: skipped,
        });
    }
    Ok(Prop2Report { rows, first_violation })
}
