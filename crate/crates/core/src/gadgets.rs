//! Colouring-forcing gadgets `F(n, d)`.
//!
//! `F(n, d)` lives on `l = d + (d-1)(n-1)` vertices: a distinguished tuple
//! `0..d` (pairwise non-adjacent) and, for each `i < d-1`, a clique `K_i` on
//! `n-1` vertices occupying `d + i(n-1) .. d + (i+1)(n-1)`. Tuple vertices
//! `i` and `i+1` are joined to every vertex of `K_i` but not to each other.
//!
//! In any proper `n`-colouring each `K_i` uses `n-1` distinct colours, so
//! `i` and `i+1` are both forced to the one colour `K_i` misses; chaining
//! over `i` makes the whole tuple constant. The number of proper
//! `n`-colourings is therefore `n * ((n-1)!)^(d-1)` — `n` choices for the
//! forced tuple colour and an ordering of each clique — and the maximum
//! degree is `2(n-1)`, independent of `d`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chromatic::{self, VertexColoring};
use crate::graph::LabeledMultigraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("gadget needs at least 2 colors, got n={0}")]
    PaletteTooSmall(usize),
    #[error("gadget needs degree d >= 1, got d={0}")]
    DegreeTooSmall(usize),
}

/// The gadget graph together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    n: usize,
    d: usize,
    graph: LabeledMultigraph,
}

/// Number of vertices of `F(n, d)`.
pub fn gadget_size(n: usize, d: usize) -> usize {
    d + (d - 1) * (n - 1)
}

impl Gadget {
    pub fn build(n: usize, d: usize) -> Result<Self, GadgetError> {
        if n < 2 {
            return Err(GadgetError::PaletteTooSmall(n));
        }
        if d < 1 {
            return Err(GadgetError::DegreeTooSmall(d));
        }
        let mut edges = Vec::new();
        for i in 0..d.saturating_sub(1) {
            let lo = d + i * (n - 1);
            let hi = lo + (n - 1);
            for a in lo..hi {
                for b in a + 1..hi {
                    edges.push((a, b, 0));
                }
                edges.push((i, a, 0));
                edges.push((i + 1, a, 0));
            }
        }
        let graph = LabeledMultigraph::new(gadget_size(n, d), edges).unwrap();
        Ok(Self { n, d, graph })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn graph(&self) -> &LabeledMultigraph {
        &self.graph
    }

    /// `l = d + (d-1)(n-1)`.
    pub fn size(&self) -> usize {
        gadget_size(self.n, self.d)
    }

    /// The vertices forced to a common colour: `0..d`.
    pub fn tuple(&self) -> std::ops::Range<usize> {
        0..self.d
    }

    /// The canonical proper colouring: 0 on the tuple, and colour `t + 1` on
    /// the `t`-th vertex of every clique.
    pub fn canonical_coloring(&self) -> VertexColoring {
        let mut values = vec![0usize; self.size()];
        for i in 0..self.d.saturating_sub(1) {
            for t in 0..self.n - 1 {
                values[self.d + i * (self.n - 1) + t] = t + 1;
            }
        }
        VertexColoring::new(values, self.n).unwrap()
    }
}

/// Everything `verify_gadget` measures. `pass()` folds the individual flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetReport {
    pub n: usize,
    pub d: usize,
    pub size: usize,
    pub size_ok: bool,
    pub max_degree: usize,
    pub degree_bound: usize,
    pub degree_ok: bool,
    pub canonical_proper: bool,
    /// Every proper `n`-colouring is constant on the tuple.
    pub forcing_ok: bool,
    /// Exhaustive count of proper `n`-colourings.
    pub coloring_count: u64,
    /// Distinct tuple colours observed across all proper colourings; forcing
    /// is non-vacuous when this exceeds 1.
    pub distinct_tuple_values: usize,
}

impl GadgetReport {
    pub fn pass(&self) -> bool {
        self.size_ok
            && self.degree_ok
            && self.canonical_proper
            && self.forcing_ok
            && self.coloring_count > 0
            && self.distinct_tuple_values >= 2
    }
}

/// Exhaustively verifies the three gadget properties: the degree bound
/// `2(n-1)`, properness of the canonical colouring, and tuple-constancy of
/// every proper `n`-colouring.
pub fn verify_gadget(g: &Gadget) -> GadgetReport {
    let degree_bound = 2 * (g.n - 1);
    let max_degree = g.graph.max_degree();
    let canonical_proper = chromatic::is_proper(&g.graph, &g.canonical_coloring())
        .map(|p| p.proper)
        .unwrap_or(false);
    let mut forcing_ok = true;
    let mut seen_values = vec![false; g.n];
    let count = chromatic::for_each_proper_coloring(&g.graph, g.n, |vals| {
        let first = vals[0];
        if vals[..g.d].iter().any(|&c| c != first) {
            forcing_ok = false;
        }
        seen_values[first] = true;
        true
    });
    GadgetReport {
        n: g.n,
        d: g.d,
        size: g.graph.num_vertices(),
        size_ok: g.graph.num_vertices() == gadget_size(g.n, g.d),
        max_degree,
        degree_bound,
        degree_ok: max_degree <= degree_bound,
        canonical_proper,
        forcing_ok,
        coloring_count: count,
        distinct_tuple_values: seen_values.iter().filter(|&&b| b).count(),
    }
}

/// Closed-form count of proper `n`-colourings of `F(n, d)`; the enumeration
/// in `verify_gadget` must reproduce it.
pub fn expected_coloring_count(n: usize, d: usize) -> u64 {
    let fact: u64 = (1..n as u64).product();
    n as u64 * fact.pow(d as u32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The independent oracle: count proper colorings by filtering all n^l
    /// assignments, with no search-tree shortcuts.
    fn oracle_count(g: &LabeledMultigraph, n: usize) -> u64 {
        let nv = g.num_vertices();
        let mut assign = vec![0usize; nv];
        let mut count = 0;
        'outer: loop {
            if g.edges().iter().all(|e| assign[e.u] != assign[e.v]) {
                count += 1;
            }
            for i in 0..nv {
                assign[i] += 1;
                if assign[i] < n {
                    continue 'outer;
                }
                assign[i] = 0;
            }
            return count;
        }
    }

    #[test]
    fn f32_structure() {
        let g = Gadget::build(3, 2).unwrap();
        assert_eq!(g.size(), 4);
        let pairs: Vec<(usize, usize)> = g.graph().edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        // 0 and 1 are deliberately not adjacent.
        assert!(!pairs.contains(&(0, 1)));
    }

    #[test]
    fn f32_has_six_proper_colorings() {
        // Frozen from the 3^4 = 81 assignment oracle: K_0 = {2,3} takes an
        // ordered pair of distinct colors (6 ways) and both tuple vertices
        // are forced to the remaining color.
        let g = Gadget::build(3, 2).unwrap();
        assert_eq!(oracle_count(g.graph(), 3), 6);
        let report = verify_gadget(&g);
        assert_eq!(report.coloring_count, 6);
        assert!(report.pass());
        assert_eq!(report.distinct_tuple_values, 3);
    }

    #[test]
    fn f31_is_a_single_vertex_with_three_colorings() {
        let g = Gadget::build(3, 1).unwrap();
        assert_eq!(g.size(), 1);
        assert_eq!(g.graph().num_edges(), 0);
        let report = verify_gadget(&g);
        assert_eq!(report.coloring_count, 3);
        assert!(report.pass());
    }

    #[test]
    fn counts_match_closed_form_and_oracle() {
        for n in 2..=4 {
            for d in 1..=3 {
                let g = Gadget::build(n, d).unwrap();
                let expected = expected_coloring_count(n, d);
                assert_eq!(oracle_count(g.graph(), n), expected, "oracle n={n} d={d}");
                let report = verify_gadget(&g);
                assert_eq!(report.coloring_count, expected, "enumerated n={n} d={d}");
                assert!(report.pass(), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn degree_bound_is_met_for_larger_gadgets() {
        for (n, d) in [(3, 5), (5, 4), (6, 3)] {
            let g = Gadget::build(n, d).unwrap();
            assert_eq!(g.graph().num_vertices(), gadget_size(n, d));
            assert!(g.graph().max_degree() <= 2 * (n - 1), "n={n} d={d}");
            assert!(
                chromatic::is_proper(g.graph(), &g.canonical_coloring())
                    .unwrap()
                    .proper
            );
        }
    }

    #[test]
    fn mutation_breaks_forcing() {
        // Removing {0, 2} from F(3, 2) lets the tuple take distinct colors.
        let g = LabeledMultigraph::new(4, [(0, 3, 0), (1, 2, 0), (1, 3, 0), (2, 3, 0)]).unwrap();
        let mut constant = true;
        chromatic::for_each_proper_coloring(&g, 3, |vals| {
            if vals[0] != vals[1] {
                constant = false;
            }
            true
        });
        assert!(!constant);
    }

    #[test]
    fn build_validates_parameters() {
        assert!(matches!(Gadget::build(1, 2), Err(GadgetError::PaletteTooSmall(1))));
        assert!(matches!(Gadget::build(3, 0), Err(GadgetError::DegreeTooSmall(0))));
    }
}
