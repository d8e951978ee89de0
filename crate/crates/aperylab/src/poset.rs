//! The Apéry poset: `x ⪯ y` iff `y − x` is an element. Cover edges are
//! exactly the atom differences; gradedness and width are computed from the
//! cover DAG, and the diagram exports to DOT deterministically.

use serde::Serialize;

use crate::semigroup::NumericalSemigroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperyPoset {
    elements: Vec<u64>,
    /// Row-major n×n matrix: leq[i * n + j] == (elements[i] ⪯ elements[j]).
    leq: Vec<bool>,
    /// Hasse cover edges as (lower index, upper index), lexicographic.
    covers: Vec<(usize, usize)>,
}

impl AperyPoset {
    pub fn build(s: &NumericalSemigroup) -> Self {
        let elements: Vec<u64> = s.apery_set().to_vec();
        let n = elements.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] =
                    elements[j] >= elements[i] && s.contains(elements[j] - elements[i]);
            }
        }
        let atoms = s.minimal_generators();
        let mut covers = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let diff = elements[j] - elements[i];
                if atoms.binary_search(&diff).is_ok() {
                    covers.push((i, j));
                }
            }
        }
        AperyPoset {
            elements,
            leq,
            covers,
        }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Cover edges as element values.
    pub fn cover_values(&self) -> Vec<(u64, u64)> {
        self.covers
            .iter()
            .map(|&(i, j)| (self.elements[i], self.elements[j]))
            .collect()
    }

    /// Shortest and longest path lengths from the bottom element 0 along
    /// cover edges. Element order is topological since covers go upward in
    /// value.
    fn path_extremes(&self) -> (Vec<u64>, Vec<u64>) {
        let n = self.len();
        let mut shortest = vec![u64::MAX; n];
        let mut longest = vec![0u64; n];
        shortest[0] = 0;
        for &(i, j) in &self.covers {
            if shortest[i] != u64::MAX {
                shortest[j] = shortest[j].min(shortest[i] + 1);
                longest[j] = longest[j].max(longest[i] + 1);
            }
        }
        (shortest, longest)
    }

    /// A poset with unique minimum is graded exactly when, for every
    /// element, all maximal chains from the bottom have equal length — i.e.
    /// the extremal path lengths coincide. Uses only the cover DAG.
    pub fn is_graded(&self) -> bool {
        let (shortest, longest) = self.path_extremes();
        shortest
            .iter()
            .zip(&longest)
            .all(|(&lo, &hi)| lo == hi)
    }

    /// Maximum antichain size, via Dilworth: a minimum chain cover of an
    /// n-element poset has n − M chains, where M is a maximum matching of
    /// the strict comparability relation viewed as a bipartite graph.
    pub fn width(&self) -> usize {
        let n = self.len();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| j != i && self.leq(i, j)).collect())
            .collect();
        n - hopcroft_karp(n, n, &adj)
    }

    /// All path lengths from the bottom to `idx` along cover edges.
    pub fn chain_lengths_to(&self, idx: usize) -> Vec<u64> {
        let n = self.len();
        // reachable[i] = bitset of path lengths from the bottom to i.
        let words = n / 64 + 1;
        let mut reach = vec![vec![0u64; words]; n];
        reach[0][0] = 1;
        for &(i, j) in &self.covers {
            for w in 0..words {
                let shifted = (reach[i][w] << 1)
                    | if w > 0 { reach[i][w - 1] >> 63 } else { 0 };
                reach[j][w] |= shifted;
            }
        }
        let mut lengths = Vec::new();
        for (w, &word) in reach[idx].iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                lengths.push(w as u64 * 64 + bits.trailing_zeros() as u64);
                bits &= bits - 1;
            }
        }
        lengths
    }

    /// DOT digraph: nodes ascending, one rank group per longest-path depth,
    /// edges ascending. Layout is bottom-up.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let (_, longest) = self.path_extremes();
        let max_depth = longest.iter().copied().max().unwrap_or(0);
        let mut out = String::new();
        out.push_str("digraph apery_poset {\n");
        out.push_str("  rankdir=BT;\n");
        out.push_str("  node [shape=plaintext];\n");
        for &e in &self.elements {
            writeln!(out, "  {e};").unwrap();
        }
        for depth in 0..=max_depth {
            let rank: Vec<String> = self
                .elements
                .iter()
                .zip(&longest)
                .filter(|&(_, &d)| d == depth)
                .map(|(e, _)| format!("{e};"))
                .collect();
            if !rank.is_empty() {
                writeln!(out, "  {{ rank=same; {} }}", rank.join(" ")).unwrap();
            }
        }
        for &(i, j) in &self.covers {
            writeln!(out, "  {} -> {};", self.elements[i], self.elements[j]).unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn record(&self) -> PosetRecord {
        PosetRecord {
            elements: self.elements.clone(),
            covers: self.cover_values(),
        }
    }
}

/// JSON shape: {elements, covers}, covers as value pairs.
#[derive(Debug, Clone, Serialize)]
pub struct PosetRecord {
    pub elements: Vec<u64>,
    pub covers: Vec<(u64, u64)>,
}

/// Maximum bipartite matching (Hopcroft–Karp). `adj[u]` lists the right
/// vertices adjacent to left vertex `u`.
fn hopcroft_karp(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> usize {
    const NIL: usize = usize::MAX;
    let mut match_left = vec![NIL; n_left];
    let mut match_right = vec![NIL; n_right];
    let mut dist = vec![0u32; n_left];
    let mut matching = 0;

    loop {
        // BFS layering from free left vertices.
        let mut queue = std::collections::VecDeque::new();
        for u in 0..n_left {
            if match_left[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found_augmenting = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == NIL {
                    found_augmenting = true;
                } else if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found_augmenting {
            return matching;
        }

        fn try_augment(
            u: usize,
            adj: &[Vec<usize>],
            match_left: &mut [usize],
            match_right: &mut [usize],
            dist: &mut [u32],
        ) -> bool {
            for idx in 0..adj[u].len() {
                let v = adj[u][idx];
                let w = match_right[v];
                let ok = w == NIL
                    || (dist[w] == dist[u] + 1
                        && try_augment(w, adj, match_left, match_right, dist));
                if ok {
                    match_left[u] = v;
                    match_right[v] = u;
                    return true;
                }
            }
            dist[u] = u32::MAX;
            false
        }

        for u in 0..n_left {
            if match_left[u] == NIL
                && try_augment(u, adj, &mut match_left, &mut match_right, &mut dist)
            {
                matching += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poset(gens: &[u64]) -> AperyPoset {
        AperyPoset::build(&NumericalSemigroup::from_generators(gens).unwrap())
    }

    #[test]
    fn chain_poset() {
        let p = poset(&[2, 3]);
        assert_eq!(p.elements(), &[0, 3]);
        assert_eq!(p.cover_values(), vec![(0, 3)]);
        assert!(p.is_graded());
        assert_eq!(p.width(), 1);
    }

    #[test]
    fn worked_example_covers() {
        let p = poset(&[5, 6, 9]);
        assert_eq!(
            p.cover_values(),
            vec![(0, 6), (0, 9), (6, 12), (9, 18), (12, 18)]
        );
        assert!(!p.is_graded());
        assert_eq!(p.width(), 2);
    }

    #[test]
    fn grid_poset() {
        let p = poset(&[9, 12, 19]);
        assert_eq!(p.len(), 9);
        assert_eq!(p.covers().len(), 12);
        assert!(p.is_graded());
        assert_eq!(p.width(), 3);
        // {24, 31, 38} is a maximal antichain of the 3×3 grid.
        let idx = |v: u64| p.elements().iter().position(|&e| e == v).unwrap();
        for (x, y) in [(24, 31), (24, 38), (31, 38)] {
            assert!(!p.leq(idx(x), idx(y)) && !p.leq(idx(y), idx(x)));
        }
    }

    #[test]
    fn small_ahff_poset_is_not_graded() {
        assert!(!poset(&[10, 14, 21]).is_graded());
    }

    #[test]
    fn dot_output_is_deterministic_and_complete() {
        let p = poset(&[2, 3]);
        let dot = p.to_dot();
        assert_eq!(
            dot,
            "digraph apery_poset {\n  rankdir=BT;\n  node [shape=plaintext];\n  0;\n  3;\n  { rank=same; 0; }\n  { rank=same; 3; }\n  0 -> 3;\n}\n"
        );
        let grid = poset(&[9, 12, 19]).to_dot();
        assert_eq!(grid.matches(" -> ").count(), 12);
        assert_eq!(poset(&[9, 12, 19]).to_dot(), grid);
    }

    #[test]
    fn record_serializes_elements_and_covers() {
        let j = serde_json::to_value(poset(&[2, 3]).record()).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"elements": [0, 3], "covers": [[0, 3]]})
        );
    }

    #[test]
    fn chain_lengths_match_gradedness() {
        let p = poset(&[5, 6, 9]);
        let idx = |v: u64| p.elements().iter().position(|&e| e == v).unwrap();
        assert_eq!(p.chain_lengths_to(idx(18)), vec![2, 3]);
        assert_eq!(p.chain_lengths_to(idx(12)), vec![2]);
    }
}
