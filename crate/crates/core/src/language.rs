//! Factor-language analytics over a certified view: factor sets,
//! complexity, special factors, Rauzy graphs, and the Sturmian test.
//!
//! Enumeration goes through the suffix automaton of the prefix; the naive
//! sliding-window scan is retained as [`factors_naive`], the semantic
//! oracle the index structure is checked against. Every query is gated on
//! the view's certified depth: an incomplete factor set is an error,
//! never a partial answer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::{FiniteWord, Letter};
use crate::wordgen::LanguageView;

/// The complete set of length-n factors of the underlying infinite word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    pub n: usize,
    pub factors: BTreeSet<FiniteWord>,
}

impl FactorSet {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn contains(&self, w: &FiniteWord) -> bool {
        self.factors.contains(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FiniteWord> {
        self.factors.iter()
    }
}

/// Complete L_n(u), via the factor index.
pub fn factors(view: &LanguageView, n: usize) -> Result<FactorSet> {
    view.require_depth(n)?;
    let factors = view.automaton().factors_of_length(n).into_iter().collect();
    Ok(FactorSet { n, factors })
}

/// Complete L_n(u) by the naive sliding-window scan. Reference
/// implementation: must always agree with [`factors`].
pub fn factors_naive(view: &LanguageView, n: usize) -> Result<FactorSet> {
    view.require_depth(n)?;
    let letters = view.prefix().letters();
    let mut set = BTreeSet::new();
    for i in 0..=letters.len().saturating_sub(n) {
        set.insert(FiniteWord::new(letters[i..i + n].to_vec()));
    }
    Ok(FactorSet { n, factors: set })
}

/// Factor complexity C(n) = #L_n(u).
pub fn complexity(view: &LanguageView, n: usize) -> Result<usize> {
    view.require_depth(n)?;
    let counts = view.automaton().distinct_factor_counts(n);
    Ok(counts[n - 1] as usize)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialFactors {
    pub n: usize,
    pub left: BTreeSet<FiniteWord>,
    pub right: BTreeSet<FiniteWord>,
    pub bispecial: BTreeSet<FiniteWord>,
}

/// Left special (Aw and Bw both factors), right special, and bispecial
/// factors of length n. Needs certified depth n + 1.
pub fn special_factors(view: &LanguageView, n: usize) -> Result<SpecialFactors> {
    view.require_depth(n + 1)?;
    let longer = factors(view, n + 1)?;
    let mut left_ext: BTreeMap<FiniteWord, BTreeSet<Letter>> = BTreeMap::new();
    let mut right_ext: BTreeMap<FiniteWord, BTreeSet<Letter>> = BTreeMap::new();
    for e in longer.iter() {
        let letters = e.letters();
        left_ext.entry(e.slice(1, n + 1)).or_default().insert(letters[0]);
        right_ext.entry(e.slice(0, n)).or_default().insert(letters[n]);
    }
    let left: BTreeSet<_> = left_ext
        .into_iter()
        .filter(|(_, ext)| ext.len() == 2)
        .map(|(w, _)| w)
        .collect();
    let right: BTreeSet<_> = right_ext
        .into_iter()
        .filter(|(_, ext)| ext.len() == 2)
        .map(|(w, _)| w)
        .collect();
    let bispecial = left.intersection(&right).cloned().collect();
    Ok(SpecialFactors { n, left, right, bispecial })
}

/// All bispecial factors of length <= n_max, one pass per length.
pub fn bispecial_upto(view: &LanguageView, n_max: usize) -> Result<Vec<(usize, FiniteWord)>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for w in special_factors(view, n)?.bispecial {
            out.push((n, w));
        }
    }
    Ok(out)
}

/// Rauzy graph: vertices are the length-n factors, edges the
/// length-(n+1) factors, each edge going from its length-n prefix to its
/// length-n suffix.
#[derive(Debug, Clone)]
pub struct RauzyGraph {
    pub n: usize,
    vertices: Vec<FiniteWord>,
    /// (from vertex index, to vertex index, edge word)
    edges: Vec<(usize, usize, FiniteWord)>,
}

impl RauzyGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[FiniteWord] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&FiniteWord, &FiniteWord, &FiniteWord)> {
        self.edges.iter().map(|&(f, t, ref w)| (&self.vertices[f], &self.vertices[t], w))
    }

    fn vertex_index(&self, w: &FiniteWord) -> Option<usize> {
        self.vertices.binary_search(w).ok()
    }

    pub fn outdegree(&self, w: &FiniteWord) -> Option<usize> {
        let i = self.vertex_index(w)?;
        Some(self.edges.iter().filter(|&&(f, _, _)| f == i).count())
    }

    pub fn indegree(&self, w: &FiniteWord) -> Option<usize> {
        let i = self.vertex_index(w)?;
        Some(self.edges.iter().filter(|&&(_, t, _)| t == i).count())
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let reach = |forward: bool| -> usize {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(v) = stack.pop() {
                for &(f, t, _) in &self.edges {
                    let (src, dst) = if forward { (f, t) } else { (t, f) };
                    if src == v && !seen[dst] {
                        seen[dst] = true;
                        count += 1;
                        stack.push(dst);
                    }
                }
            }
            count
        };
        reach(true) == n && reach(false) == n
    }

    /// All simple cycles, as vertex-word sequences. Each cycle is rotated
    /// to start at its smallest vertex index; intended for the small
    /// graphs this crate works with.
    pub fn simple_cycles(&self) -> Vec<Vec<FiniteWord>> {
        let n = self.vertices.len();
        let mut cycles: BTreeSet<Vec<usize>> = BTreeSet::new();
        // successor lists
        let mut succ = vec![Vec::new(); n];
        for &(f, t, _) in &self.edges {
            succ[f].push(t);
        }
        // only collect cycles whose minimal vertex is the DFS root
        for root in 0..n {
            let mut path = vec![root];
            let mut on_path = vec![false; n];
            on_path[root] = true;
            self.cycle_dfs(root, root, &succ, &mut path, &mut on_path, &mut cycles);
        }
        cycles
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.vertices[i].clone()).collect())
            .collect()
    }

    fn cycle_dfs(
        &self,
        root: usize,
        v: usize,
        succ: &[Vec<usize>],
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        cycles: &mut BTreeSet<Vec<usize>>,
    ) {
        for &w in &succ[v] {
            if w == root {
                cycles.insert(path.clone());
            } else if w > root && !on_path[w] {
                path.push(w);
                on_path[w] = true;
                self.cycle_dfs(root, w, succ, path, on_path, cycles);
                on_path[w] = false;
                path.pop();
            }
        }
    }

    /// Cycles passing through the given vertex.
    pub fn cycles_through(&self, w: &FiniteWord) -> Vec<Vec<FiniteWord>> {
        self.simple_cycles()
            .into_iter()
            .filter(|c| c.contains(w))
            .collect()
    }

    /// DOT rendering, deterministic (vertices and edges in lexicographic
    /// order, edges labelled by their length-(n+1) word).
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph rauzy_{} {{", self.n);
        for v in &self.vertices {
            let _ = writeln!(out, "    \"{v}\";");
        }
        let mut lines: Vec<String> = self
            .edges
            .iter()
            .map(|&(f, t, ref w)| {
                format!("    \"{}\" -> \"{}\" [label=\"{}\"];", self.vertices[f], self.vertices[t], w)
            })
            .collect();
        lines.sort();
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        out.push_str("}\n");
        out
    }
}

/// The Rauzy graph at level n. Needs certified depth n + 1.
pub fn rauzy_graph(view: &LanguageView, n: usize) -> Result<RauzyGraph> {
    view.require_depth(n + 1)?;
    let vertices: Vec<FiniteWord> = factors(view, n)?.factors.into_iter().collect();
    let longer = factors(view, n + 1)?;
    let mut edges = Vec::with_capacity(longer.len());
    for e in longer.factors {
        let from = vertices
            .binary_search(&e.slice(0, n))
            .map_err(|_| Error::TheoremViolation(format!("edge {e} has prefix outside L_n")))?;
        let to = vertices
            .binary_search(&e.slice(1, n + 1))
            .map_err(|_| Error::TheoremViolation(format!("edge {e} has suffix outside L_n")))?;
        edges.push((from, to, e));
    }
    Ok(RauzyGraph { n, vertices, edges })
}

/// Outcome of the complexity test C(n) = n + 1 for 1 <= n <= n_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmianVerdict {
    pub checked_to: usize,
    /// First (n, C(n)) with C(n) != n + 1, if any.
    pub failure: Option<(usize, usize)>,
}

impl SturmianVerdict {
    pub fn is_sturmian(&self) -> bool {
        self.failure.is_none()
    }

    /// C(n) <= n for some n means the word is eventually periodic.
    pub fn is_periodic_failure(&self) -> bool {
        matches!(self.failure, Some((n, c)) if c <= n)
    }
}

/// Check minimal complexity C(n) = n + 1 for all n up to n_max.
pub fn is_sturmian_view(view: &LanguageView, n_max: usize) -> Result<SturmianVerdict> {
    view.require_depth(n_max)?;
    let counts = view.automaton().distinct_factor_counts(n_max);
    for n in 1..=n_max {
        let c = counts[n - 1] as usize;
        if c != n + 1 {
            return Ok(SturmianVerdict { checked_to: n_max, failure: Some((n, c)) });
        }
    }
    Ok(SturmianVerdict { checked_to: n_max, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confrac::CFExpansion;
    use crate::word::word;

    fn fib_view(depth: usize) -> LanguageView {
        let cf: CFExpansion = "[0;1,(1)]".parse().unwrap();
        LanguageView::sturmian(&cf, depth).unwrap()
    }

    fn periodic_ab(depth: usize) -> LanguageView {
        LanguageView::periodic(&word("AB"), depth).unwrap()
    }

    #[test]
    fn fibonacci_small_factor_sets() {
        let view = fib_view(10);
        let l1 = factors(&view, 1).unwrap();
        assert_eq!(l1.factors, [word("A"), word("B")].into_iter().collect());
        let l2 = factors(&view, 2).unwrap();
        assert_eq!(l2.factors, [word("AA"), word("AB"), word("BA")].into_iter().collect());
    }

    #[test]
    fn beyond_certified_depth_is_an_error() {
        let view = fib_view(10);
        let too_deep = view.certified_n() + 1;
        assert_eq!(
            factors(&view, too_deep).unwrap_err(),
            Error::BeyondCertifiedDepth { requested: too_deep, certified: view.certified_n() }
        );
    }

    #[test]
    fn complexity_values() {
        let view = fib_view(30);
        assert_eq!(complexity(&view, 2).unwrap(), 3);
        for n in 1..=30 {
            assert_eq!(complexity(&view, n).unwrap(), n + 1, "C({n})");
        }

        let tm = LanguageView::thue_morse(30).unwrap();
        assert_eq!(complexity(&tm, 2).unwrap(), 4);

        let periodic = periodic_ab(10);
        assert_eq!(complexity(&periodic, 3).unwrap(), 2);
    }

    #[test]
    fn automaton_and_naive_scan_agree() {
        let views = [fib_view(20), LanguageView::thue_morse(20).unwrap(), periodic_ab(20)];
        for view in &views {
            for n in 1..=20 {
                assert_eq!(
                    factors(view, n).unwrap(),
                    factors_naive(view, n).unwrap(),
                    "n={n} on {}",
                    view.label()
                );
            }
        }
    }

    #[test]
    fn fibonacci_special_factors() {
        let view = fib_view(10);
        let s1 = special_factors(&view, 1).unwrap();
        assert_eq!(s1.left, [word("A")].into_iter().collect());
        assert_eq!(s1.right, [word("A")].into_iter().collect());
        assert_eq!(s1.bispecial, [word("A")].into_iter().collect());

        let s2 = special_factors(&view, 2).unwrap();
        assert_eq!(s2.left, [word("AB")].into_iter().collect());
        assert_eq!(s2.right, [word("BA")].into_iter().collect());
        assert!(s2.bispecial.is_empty());
    }

    #[test]
    fn periodic_has_no_special_factors() {
        let view = periodic_ab(10);
        let s = special_factors(&view, 2).unwrap();
        assert!(s.left.is_empty());
        assert!(s.right.is_empty());
    }

    #[test]
    fn exactly_one_special_factor_each_length() {
        let view = fib_view(25);
        for n in 1..=24 {
            let s = special_factors(&view, n).unwrap();
            assert_eq!(s.left.len(), 1, "left special at {n}");
            assert_eq!(s.right.len(), 1, "right special at {n}");
        }
    }

    #[test]
    fn fibonacci_rauzy_graph_level_two() {
        let view = fib_view(10);
        let g = rauzy_graph(&view, 2).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 4);
        let edge_words: BTreeSet<_> = g.edges().map(|(_, _, w)| w.clone()).collect();
        assert_eq!(
            edge_words,
            [word("AAB"), word("ABA"), word("BAA"), word("BAB")].into_iter().collect()
        );
        // the unique vertex of indegree 2 is the left special factor AB
        assert_eq!(g.indegree(&word("AB")), Some(2));
        assert_eq!(g.indegree(&word("AA")), Some(1));
        assert_eq!(g.indegree(&word("BA")), Some(1));
        assert!(g.is_strongly_connected());
    }

    #[test]
    fn sturmian_rauzy_graph_shape() {
        let view = fib_view(20);
        for n in 1..=19 {
            let g = rauzy_graph(&view, n).unwrap();
            assert_eq!(g.vertex_count(), n + 1, "vertices at {n}");
            assert_eq!(g.edge_count(), n + 2, "edges at {n}");
            assert!(g.is_strongly_connected(), "connectivity at {n}");
            let out2 = g.vertices().iter().filter(|v| g.outdegree(v) == Some(2)).count();
            let in2 = g.vertices().iter().filter(|v| g.indegree(v) == Some(2)).count();
            assert_eq!((out2, in2), (1, 1), "special vertices at {n}");
        }
    }

    #[test]
    fn periodic_rauzy_graph_is_a_cycle() {
        let view = periodic_ab(10);
        let g = rauzy_graph(&view, 2).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        let cycles = g.simple_cycles();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 2);
    }

    #[test]
    fn dot_export_is_deterministic() {
        let view = fib_view(10);
        let g = rauzy_graph(&view, 2).unwrap();
        let dot = g.to_dot();
        assert_eq!(dot, g.to_dot());
        assert!(dot.starts_with("digraph rauzy_2 {"));
        assert!(dot.contains("\"AA\" -> \"AB\" [label=\"AAB\"];"));
    }

    #[test]
    fn sturmian_verdicts() {
        let view = fib_view(30);
        assert!(is_sturmian_view(&view, 30).unwrap().is_sturmian());

        let tm = LanguageView::thue_morse(30).unwrap();
        let verdict = is_sturmian_view(&tm, 30).unwrap();
        assert_eq!(verdict.failure, Some((2, 4)));
        assert!(!verdict.is_periodic_failure());

        let periodic = periodic_ab(5);
        let verdict = is_sturmian_view(&periodic, 5).unwrap();
        assert_eq!(verdict.failure, Some((2, 2)));
        assert!(verdict.is_periodic_failure());
    }

    #[test]
    fn complexity_is_monotone() {
        for view in [fib_view(25), LanguageView::thue_morse(40).unwrap()] {
            let mut prev = 0;
            for n in 1..=25 {
                let c = complexity(&view, n).unwrap();
                assert!(c > prev, "complexity strictly increasing at {n}");
                prev = c;
            }
        }
    }

    #[test]
    fn bispecial_single_pass() {
        let view = fib_view(15);
        let all = bispecial_upto(&view, 14).unwrap();
        for (n, w) in &all {
            let s = special_factors(&view, *n).unwrap();
            assert!(s.bispecial.contains(w));
        }
        // Fibonacci bispecial factors are the palindromic prefixes of
        // lengths 1, 3, 6, 11, ... — at least the first three show up
        let lengths: Vec<usize> = all.iter().map(|(n, _)| *n).collect();
        assert!(lengths.contains(&1) && lengths.contains(&3) && lengths.contains(&6));
    }
}
