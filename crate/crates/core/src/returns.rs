//! Return words, the recurrence function R(n) by brute force and by the
//! closed form, and derivated words.
//!
//! Completeness of every scan is gated on the view's certificate. For a
//! factor w of length n with certified depth C >= |w|: every complete
//! return word of length <= C occurs in the prefix and is found as a
//! consecutive-occurrence pair, and a hypothetical longer return would
//! leave a length-C factor starting with w and containing no further
//! occurrence of w, which the gate below would observe. So when the gate
//! passes, the observed return set is the whole of Ret(w).

use std::collections::BTreeSet;
use std::collections::HashMap;

use num::BigUint;
use num::{One, Zero};

use crate::confrac::CFExpansion;
use crate::error::{Error, Result};
use crate::language::{self, SturmianVerdict};
use crate::word::{FiniteWord, Letter};
use crate::wordgen::LanguageView;

/// The return words of a base factor, with their complete returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnWordSet {
    pub base: FiniteWord,
    pub returns: BTreeSet<FiniteWord>,
    pub complete_returns: BTreeSet<FiniteWord>,
}

/// R(n) together with a witness realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceValue {
    pub n: usize,
    pub r: usize,
    /// Lexicographically smallest factor whose complete return attains
    /// R(n) + 1.
    pub witness_factor: FiniteWord,
    pub witness_complete_return: FiniteWord,
}

/// A derivated word: the order in which the two return words of a factor
/// tile the suffix of the word starting at the factor's first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivatedWord {
    /// Label sequence over {0, 1}, rendered A = 0, B = 1.
    pub word: FiniteWord,
    /// Return word labelled 0: the one occurring first.
    pub label_zero: FiniteWord,
    /// Return word labelled 1.
    pub label_one: FiniteWord,
}

/// All occurrence positions of `w` in the view's prefix, with certified
/// membership semantics.
fn occurrences_certified(view: &LanguageView, w: &FiniteWord) -> Result<Vec<usize>> {
    view.require_depth(w.len())?;
    let occ = view.prefix().occurrences(w);
    if occ.is_empty() {
        return Err(Error::FactorNotInLanguage(w.to_string()));
    }
    Ok(occ)
}

/// The completeness gate described in the module docs: every occurrence
/// with room for a length-C window after it must be followed by another
/// occurrence within C - n letters.
fn require_complete_returns(view: &LanguageView, occ: &[usize], n: usize) -> Result<()> {
    let c = view.certified_n();
    let len = view.len();
    for (i, &p) in occ.iter().enumerate() {
        if p + c > len {
            break;
        }
        let next = occ.get(i + 1).copied();
        if next.is_none_or(|q| q - p > c - n) {
            return Err(Error::BeyondCertifiedDepth { requested: c + 1, certified: c });
        }
    }
    Ok(())
}

/// The complete set of return words of `w`.
pub fn return_words(view: &LanguageView, w: &FiniteWord) -> Result<ReturnWordSet> {
    let occ = occurrences_certified(view, w)?;
    require_complete_returns(view, &occ, w.len())?;
    let prefix = view.prefix();
    let mut returns = BTreeSet::new();
    let mut complete_returns = BTreeSet::new();
    for pair in occ.windows(2) {
        let (p, q) = (pair[0], pair[1]);
        returns.insert(prefix.slice(p, q));
        complete_returns.insert(prefix.slice(p, q + w.len()));
    }
    Ok(ReturnWordSet { base: w.clone(), returns, complete_returns })
}

/// R(n) by scanning: the longest complete return over all length-n
/// factors, minus one. Also verifies minimality on the prefix: every
/// window of length R(n) contains all of L_n, and some window of length
/// R(n) - 1 misses a factor.
pub fn recurrence_brute(view: &LanguageView, n: usize) -> Result<RecurrenceValue> {
    view.require_depth(n)?;
    let letters = view.prefix().letters();
    let window_count = letters.len() + 1 - n;

    // positions of every length-n factor, one pass
    let mut positions: HashMap<&[Letter], Vec<usize>> = HashMap::new();
    for i in 0..window_count {
        positions.entry(&letters[i..i + n]).or_default().push(i);
    }

    let mut sorted: Vec<(&[Letter], &Vec<usize>)> =
        positions.iter().map(|(k, v)| (*k, v)).collect();
    sorted.sort_by(|a, b| a.0.cmp(b.0));

    let mut best: Option<(usize, usize, usize)> = None; // (complete len, occ pos, gap)
    for (_, occ) in &sorted {
        require_complete_returns(view, occ, n)?;
        for pair in occ.windows(2) {
            let gap = pair[1] - pair[0];
            let complete_len = gap + n;
            if best.is_none_or(|(b, _, _)| complete_len > b) {
                best = Some((complete_len, pair[0], gap));
            }
        }
    }
    let (max_complete, wpos, wgap) = best.ok_or_else(|| {
        Error::BeyondCertifiedDepth { requested: n, certified: view.certified_n() }
    })?;
    let r = max_complete - 1;

    verify_window_minimality(view, n, r, &positions)?;

    Ok(RecurrenceValue {
        n,
        r,
        witness_factor: view.prefix().slice(wpos, wpos + n),
        witness_complete_return: view.prefix().slice(wpos, wpos + wgap + n),
    })
}

/// Check on the prefix that R is exactly the window size that captures
/// all of L_n: every length-R window contains every factor, and some
/// length-(R-1) window does not.
fn verify_window_minimality(
    view: &LanguageView,
    n: usize,
    r: usize,
    positions: &HashMap<&[Letter], Vec<usize>>,
) -> Result<()> {
    let letters = view.prefix().letters();
    let total = positions.len();
    // factor id per window start
    let mut id_of: HashMap<&[Letter], usize> = HashMap::new();
    for (next_id, key) in positions.keys().enumerate() {
        id_of.insert(key, next_id);
    }
    let ids: Vec<usize> = (0..letters.len() + 1 - n)
        .map(|i| id_of[&letters[i..i + n]])
        .collect();

    // every letter-window of length `width` contains all ids iff every
    // id-window of length width - n + 1 does
    let all_windows_cover = |width: usize| -> bool {
        if width < n || ids.len() + n < width + 1 {
            return false;
        }
        let span = width - n + 1;
        let mut counts = vec![0usize; total];
        let mut covered = 0usize;
        let mut ok = true;
        for i in 0..ids.len() {
            let id = ids[i];
            if counts[id] == 0 {
                covered += 1;
            }
            counts[id] += 1;
            if i + 1 >= span {
                if covered < total {
                    ok = false;
                    break;
                }
                let out = ids[i + 1 - span];
                counts[out] -= 1;
                if counts[out] == 0 {
                    covered -= 1;
                }
            }
        }
        ok
    };

    if !all_windows_cover(r) {
        return Err(Error::TheoremViolation(format!(
            "some window of length {r} misses a factor of length {n}"
        )));
    }
    // a window of length r-1 shorter than n trivially misses every factor
    if r > n && all_windows_cover(r - 1) {
        return Err(Error::TheoremViolation(format!(
            "every window of length {} already contains all factors of length {n}",
            r - 1
        )));
    }
    Ok(())
}

/// R(n) by the closed form R(n) = q_{N+1} + q_N + n - 1 where
/// q_N <= n < q_{N+1}.
pub fn recurrence_closed(cf: &CFExpansion, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParameter("recurrence function needs n >= 1".into()));
    }
    let n_big = BigUint::from(n);
    let mut q_prev = BigUint::zero(); // q_{-1}
    let mut q_cur = BigUint::one(); // q_0
    let mut k = 0usize;
    loop {
        let a = cf.coefficient_checked(k + 1)?;
        let q_next = BigUint::from(a) * &q_cur + &q_prev; // q_{k+1}
        if q_cur <= n_big && n_big < q_next {
            let r = q_next + &q_cur + n_big - BigUint::one();
            return usize::try_from(&r)
                .map_err(|_| Error::NumericOverflow(format!("R({n})")));
        }
        q_prev = q_cur;
        q_cur = q_next;
        k += 1;
    }
}

/// Decompose the suffix of the word starting at the first occurrence of
/// `w` into its two return words and code the order, 0 for the return
/// word occurring first.
pub fn derivated_word(view: &LanguageView, w: &FiniteWord, l_out: usize) -> Result<DerivatedWord> {
    let (labels, zero, one) = decode_returns(view, w)?;
    if labels.len() < l_out {
        return Err(Error::BeyondCertifiedDepth { requested: l_out, certified: labels.len() });
    }
    Ok(DerivatedWord {
        word: FiniteWord::new(labels[..l_out].to_vec()),
        label_zero: zero,
        label_one: one,
    })
}

fn decode_returns(
    view: &LanguageView,
    w: &FiniteWord,
) -> Result<(Vec<Letter>, FiniteWord, FiniteWord)> {
    let set = return_words(view, w)?;
    if set.returns.len() != 2 {
        return Err(Error::NotTwoReturnWords { found: set.returns.len() });
    }
    let occ = occurrences_certified(view, w)?;
    let prefix = view.prefix();
    let zero = prefix.slice(occ[0], occ[1]);
    let one = set.returns.iter().find(|r| **r != zero).expect("two distinct returns").clone();
    let labels = occ
        .windows(2)
        .map(|pair| {
            if prefix.slice(pair[0], pair[1]) == zero {
                Letter::A
            } else {
                Letter::B
            }
        })
        .collect();
    Ok((labels, zero, one))
}

/// Run the Sturmian complexity test on the derivated word of `w`.
///
/// A derivated factor of length m concatenates m return words followed by
/// w, so it spans at most m * max_return + |w| letters of the original
/// word; certifying the derivated view to depth `depth` therefore needs
/// the original view certified to depth * max_return + |w|.
pub fn derived_is_sturmian(
    view: &LanguageView,
    w: &FiniteWord,
    depth: usize,
) -> Result<SturmianVerdict> {
    let set = return_words(view, w)?;
    if set.returns.len() != 2 {
        return Err(Error::NotTwoReturnWords { found: set.returns.len() });
    }
    let max_return = set.returns.iter().map(FiniteWord::len).max().expect("non-empty");
    view.require_depth(depth * max_return + w.len())?;

    let (labels, _, _) = decode_returns(view, w)?;
    let derived = LanguageView::from_certified_parts(
        FiniteWord::new(labels),
        None,
        depth,
        format!("derivated({}, {w})", view.label()),
    );
    language::is_sturmian_view(&derived, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::word;

    fn cf(s: &str) -> CFExpansion {
        s.parse().unwrap()
    }

    fn fib_view(depth: usize) -> LanguageView {
        LanguageView::sturmian(&cf("[0;1,(1)]"), depth).unwrap()
    }

    #[test]
    fn fibonacci_returns_of_a() {
        let view = fib_view(10);
        let set = return_words(&view, &word("A")).unwrap();
        assert_eq!(set.returns, [word("A"), word("AB")].into_iter().collect());
        assert_eq!(set.complete_returns, [word("AA"), word("ABA")].into_iter().collect());
    }

    #[test]
    fn fibonacci_returns_of_ab() {
        let view = fib_view(10);
        let set = return_words(&view, &word("AB")).unwrap();
        assert_eq!(set.returns, [word("AB"), word("ABA")].into_iter().collect());
    }

    #[test]
    fn periodic_has_single_return() {
        let view = LanguageView::periodic(&word("AB"), 10).unwrap();
        let set = return_words(&view, &word("AB")).unwrap();
        assert_eq!(set.returns, [word("AB")].into_iter().collect());
    }

    #[test]
    fn return_word_defining_property() {
        // w is a prefix of vw and w occurs in vw exactly twice
        let view = fib_view(12);
        for w in ["A", "B", "AB", "ABA", "ABAAB"] {
            let w = word(w);
            let set = return_words(&view, &w).unwrap();
            assert_eq!(set.returns.len(), 2, "{w} returns");
            for v in &set.returns {
                let vw = v.concat(&w);
                assert!(set.complete_returns.contains(&vw));
                assert!(vw.starts_with(&w));
                assert_eq!(vw.occurrences(&w).len(), 2, "occurrences of {w} in {vw}");
            }
        }
    }

    #[test]
    fn unknown_factor_is_rejected() {
        let view = fib_view(10);
        assert_eq!(
            return_words(&view, &word("BB")).unwrap_err(),
            Error::FactorNotInLanguage("BB".into())
        );
    }

    #[test]
    fn fibonacci_recurrence_small_values() {
        let view = fib_view(10);
        for (n, expected) in [(1, 3), (2, 6), (3, 10), (4, 11)] {
            let rec = recurrence_brute(&view, n).unwrap();
            assert_eq!(rec.r, expected, "R({n})");
            assert_eq!(rec.witness_complete_return.len(), rec.r + 1);
            assert!(rec.witness_complete_return.starts_with(&rec.witness_factor));
        }
    }

    #[test]
    fn closed_form_values() {
        let fib = cf("[0;1,(1)]");
        assert_eq!(recurrence_closed(&fib, 1).unwrap(), 3);
        assert_eq!(recurrence_closed(&fib, 2).unwrap(), 6);
        assert_eq!(recurrence_closed(&fib, 3).unwrap(), 10);
        assert_eq!(recurrence_closed(&fib, 4).unwrap(), 11);
        assert_eq!(recurrence_closed(&cf("[0;1,(2)]"), 1).unwrap(), 4);
    }

    #[test]
    fn closed_form_needs_enough_coefficients() {
        let err = recurrence_closed(&cf("[0;1,1]"), 100).unwrap_err();
        assert!(matches!(err, Error::InsufficientCoefficients { .. }));
    }

    #[test]
    fn brute_matches_closed_form() {
        for s in ["[0;1,(1)]", "[0;1,(2)]", "[0;1,2,(3,1)]"] {
            let slope = cf(s);
            let view = LanguageView::sturmian(&slope, 25).unwrap();
            for n in 1..=25 {
                assert_eq!(
                    recurrence_brute(&view, n).unwrap().r,
                    recurrence_closed(&slope, n).unwrap(),
                    "R({n}) on {s}"
                );
            }
        }
    }

    #[test]
    fn recurrence_is_monotone_and_bounded_below() {
        let view = fib_view(20);
        let mut prev = 0;
        for n in 1..=20 {
            let r = recurrence_brute(&view, n).unwrap().r;
            assert!(r > n, "R({n}) >= n+1");
            assert!(r >= prev, "R monotone at {n}");
            prev = r;
        }
    }

    #[test]
    fn fibonacci_derivated_word_of_a() {
        let view = fib_view(30);
        let d = derivated_word(&view, &word("A"), 8).unwrap();
        assert_eq!(d.label_zero, word("AB"));
        assert_eq!(d.label_one, word("A"));
        assert_eq!(d.word.to_binary_string(), "01001010");
        // the derivated word of A in the Fibonacci word is the Fibonacci
        // word itself under A -> 0, B -> 1
        let fib = crate::wordgen::characteristic_prefix(&cf("[0;1,(1)]"), 8).unwrap();
        assert_eq!(d.word, fib);
    }

    #[test]
    fn fibonacci_derivated_word_of_ab() {
        let view = fib_view(30);
        let d = derivated_word(&view, &word("AB"), 5).unwrap();
        assert_eq!(d.label_zero, word("ABA"));
        assert_eq!(d.label_one, word("AB"));
        assert_eq!(d.word.to_binary_string(), "01001");
    }

    #[test]
    fn periodic_is_not_two_returns() {
        let view = LanguageView::periodic(&word("AB"), 10).unwrap();
        assert_eq!(
            derivated_word(&view, &word("AB"), 3).unwrap_err(),
            Error::NotTwoReturnWords { found: 1 }
        );
    }

    #[test]
    fn thue_morse_letter_has_three_returns() {
        let view = LanguageView::thue_morse(60).unwrap();
        let set = return_words(&view, &word("0")).unwrap();
        assert_eq!(set.returns.len(), 3);
        assert_eq!(
            derived_is_sturmian(&view, &word("0"), 5).unwrap_err(),
            Error::NotTwoReturnWords { found: 3 }
        );
    }

    #[test]
    fn derived_words_of_sturmian_factors_are_sturmian() {
        let view = fib_view(160);
        for w in ["A", "AB", "ABA"] {
            let verdict = derived_is_sturmian(&view, &word(w), 10).unwrap();
            assert!(verdict.is_sturmian(), "derived word of {w}");
        }
    }

    #[test]
    fn vuillon_two_returns_everywhere() {
        let view = fib_view(15);
        for n in 1..=15 {
            for w in language::factors(&view, n).unwrap().iter() {
                let set = return_words(&view, w).unwrap();
                assert_eq!(set.returns.len(), 2, "returns of {w}");
            }
        }
    }

    #[test]
    fn bispecial_return_length_identity() {
        // |r_0(b)| + |r_1(b)| = |b| + 2 for bispecial b
        let view = fib_view(20);
        for (n, b) in language::bispecial_upto(&view, 19).unwrap() {
            let set = return_words(&view, &b).unwrap();
            let total: usize = set.returns.iter().map(FiniteWord::len).sum();
            assert_eq!(total, n + 2, "bispecial {b}");
        }
    }

    #[test]
    fn bispecial_returns_are_the_two_rauzy_cycles() {
        // for a bispecial factor b the two return words are given by the
        // two cycles of the Rauzy graph, which share only the vertex b
        let view = fib_view(12);
        for (n, b) in language::bispecial_upto(&view, 8).unwrap() {
            let graph = language::rauzy_graph(&view, n).unwrap();
            let cycles = graph.cycles_through(&b);
            assert_eq!(cycles.len(), 2, "cycles through bispecial {b}");
            let mut cycle_lens: Vec<usize> = cycles.iter().map(Vec::len).collect();
            cycle_lens.sort_unstable();
            let mut return_lens: Vec<usize> =
                return_words(&view, &b).unwrap().returns.iter().map(FiniteWord::len).collect();
            return_lens.sort_unstable();
            assert_eq!(cycle_lens, return_lens, "cycle lengths through {b}");
            // the cycles share no vertex besides b
            let shared: Vec<_> = cycles[0]
                .iter()
                .filter(|v| cycles[1].contains(v))
                .collect();
            assert_eq!(shared, vec![&b], "shared vertices through {b}");
        }
    }

    #[test]
    fn every_return_word_is_primitive() {
        let view = fib_view(15);
        for n in 1..=15 {
            for w in language::factors(&view, n).unwrap().iter() {
                for v in &return_words(&view, w).unwrap().returns {
                    assert!(crate::powers::is_primitive(v), "return {v} of {w}");
                }
            }
        }
    }
}
