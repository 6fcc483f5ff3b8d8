//! Suffix automaton over the two-letter alphabet.
//!
//! Recognizes exactly the set of factors of the word it was built from,
//! in linear time and space. Used as the accelerated factor index; the
//! naive sliding-window scan in [`crate::language`] stays around as the
//! semantic oracle.

use crate::word::{FiniteWord, Letter};

const NO_STATE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct State {
    len: usize,
    link: u32,
    next: [u32; 2],
}

#[derive(Debug, Clone)]
pub struct SuffixAutomaton {
    states: Vec<State>,
    last: usize,
}

impl SuffixAutomaton {
    pub fn build(letters: &[Letter]) -> Self {
        let mut sa = SuffixAutomaton {
            states: vec![State { len: 0, link: NO_STATE, next: [NO_STATE; 2] }],
            last: 0,
        };
        sa.states.reserve(2 * letters.len());
        for &l in letters {
            sa.extend(l as usize);
        }
        sa
    }

    fn extend(&mut self, c: usize) {
        let cur = self.states.len();
        let cur_len = self.states[self.last].len + 1;
        self.states.push(State { len: cur_len, link: NO_STATE, next: [NO_STATE; 2] });

        let mut p = self.last as u32;
        while p != NO_STATE && self.states[p as usize].next[c] == NO_STATE {
            self.states[p as usize].next[c] = cur as u32;
            p = self.states[p as usize].link;
        }
        if p == NO_STATE {
            self.states[cur].link = 0;
        } else {
            let q = self.states[p as usize].next[c];
            if self.states[q as usize].len == self.states[p as usize].len + 1 {
                self.states[cur].link = q;
            } else {
                let clone = self.states.len();
                let mut cloned = self.states[q as usize].clone();
                cloned.len = self.states[p as usize].len + 1;
                self.states.push(cloned);
                while p != NO_STATE && self.states[p as usize].next[c] == q {
                    self.states[p as usize].next[c] = clone as u32;
                    p = self.states[p as usize].link;
                }
                self.states[q as usize].link = clone as u32;
                self.states[cur].link = clone as u32;
            }
        }
        self.last = cur;
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn contains(&self, pattern: &[Letter]) -> bool {
        let mut s = 0u32;
        for &l in pattern {
            s = self.states[s as usize].next[l as usize];
            if s == NO_STATE {
                return false;
            }
        }
        true
    }

    /// Number of distinct factors of each length 1..=max_len.
    ///
    /// Each non-root state represents the factor lengths in
    /// (len(link), len]; summing those ranges with a difference array
    /// gives every per-length count in one pass.
    pub fn distinct_factor_counts(&self, max_len: usize) -> Vec<u64> {
        let mut diff = vec![0i64; max_len + 2];
        for (i, st) in self.states.iter().enumerate() {
            if i == 0 {
                continue;
            }
            let lo = self.states[st.link as usize].len + 1;
            let hi = st.len;
            if lo > max_len {
                continue;
            }
            diff[lo] += 1;
            diff[hi.min(max_len) + 1] -= 1;
        }
        let mut counts = Vec::with_capacity(max_len);
        let mut acc = 0i64;
        for d in diff.iter().take(max_len + 1).skip(1) {
            acc += d;
            counts.push(acc as u64);
        }
        counts
    }

    /// All distinct factors of length `n`, in lexicographic order
    /// (A before B).
    pub fn factors_of_length(&self, n: usize) -> Vec<FiniteWord> {
        let mut out = Vec::new();
        let mut path: Vec<Letter> = Vec::with_capacity(n);
        self.collect(0, n, &mut path, &mut out);
        out
    }

    fn collect(&self, state: u32, remaining: usize, path: &mut Vec<Letter>, out: &mut Vec<FiniteWord>) {
        if remaining == 0 {
            out.push(FiniteWord::new(path.clone()));
            return;
        }
        for (idx, letter) in [(0usize, Letter::A), (1usize, Letter::B)] {
            let next = self.states[state as usize].next[idx];
            if next != NO_STATE {
                path.push(letter);
                self.collect(next, remaining - 1, path, out);
                path.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::word;
    use std::collections::BTreeSet;

    fn naive_factors(w: &FiniteWord, n: usize) -> BTreeSet<FiniteWord> {
        let mut set = BTreeSet::new();
        if n == 0 || n > w.len() {
            return set;
        }
        for i in 0..=w.len() - n {
            set.insert(w.slice(i, i + n));
        }
        set
    }

    #[test]
    fn counts_and_enumeration_match_naive_scan() {
        for s in ["ABAABABAABAAB", "AAAA", "ABABABAB", "A", "ABBABAABBAABABBA"] {
            let w = word(s);
            let sa = SuffixAutomaton::build(w.letters());
            let counts = sa.distinct_factor_counts(w.len());
            for n in 1..=w.len() {
                let expected = naive_factors(&w, n);
                assert_eq!(counts[n - 1] as usize, expected.len(), "count at n={n} for {s}");
                let enumerated: BTreeSet<_> = sa.factors_of_length(n).into_iter().collect();
                assert_eq!(enumerated, expected, "factors at n={n} for {s}");
            }
        }
    }

    #[test]
    fn membership() {
        let w = word("ABAABABAABAAB");
        let sa = SuffixAutomaton::build(w.letters());
        assert!(sa.contains(word("ABAAB").letters()));
        assert!(!sa.contains(word("BB").letters()));
        assert!(!sa.contains(word("AAA").letters()));
    }
}
