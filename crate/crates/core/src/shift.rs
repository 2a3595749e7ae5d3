//! Finite fragments of the shift graph and the bounded-degree graph `H'`.
//!
//! The shift graph acts on finite subsets of the natural numbers by
//! `S(x) = x \ {min x}`; a vertex `x` has one successor and `min x`
//! predecessors (`{a} ∪ x` for every `a < min x`), so its intrinsic degree
//! is `min(x) + 1`. A *fragment* truncates the picture to subsets of
//! `{0..m-1}` whose size lies in a band `[k_lo, k_hi]`; shift edges whose
//! image leaves the band are simply omitted. Fragments are always forests:
//! every vertex has at most one edge towards smaller sets.
//!
//! `H'` replaces each vertex `x` by a tuple of `l(n, deg(x))` vertices
//! carrying a copy of the gadget `F(n, deg(x))` (built from the intrinsic
//! degree, not the truncated one), and each shift edge `x → y = S(x)` by the
//! single edge `(x, deg(x)-1) — (y, min x)`. Gadget edges carry label 0,
//! shift edges label 1. The forcing property of the gadgets makes every
//! proper `n`-colouring constant on each tuple, which is what lets
//! colourings move back and forth between the fragment and `H'`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chromatic::{self, VertexColoring};
use crate::gadgets::{gadget_size, Gadget};
use crate::graph::{Edge, LabeledMultigraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShiftError {
    #[error("band [{k_lo}, {k_hi}] invalid for ground set of size {m}")]
    BadBand { m: usize, k_lo: usize, k_hi: usize },
    #[error("ground sets larger than {max} are not supported, got {got}")]
    GroundTooLarge { got: usize, max: usize },
    #[error("H' needs at least 3 colors, got n={0}")]
    PaletteTooSmall(usize),
    #[error("base coloring must use values in {{0, 1, 2}}, found {0}")]
    BaseColorOutOfRange(usize),
    #[error("base coloring is not proper on the fragment")]
    BaseColoringImproper,
    #[error("coloring is not proper on H'")]
    HPrimeColoringImproper,
    #[error("coloring has {got} values, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
}

/// Label constants used in the `H'` graph.
pub const GADGET_LABEL: usize = 0;
pub const SHIFT_LABEL: usize = 1;

/// Intrinsic shift degree of a nonempty set: `min(x) + 1`.
pub fn shift_degree(x: &[usize]) -> usize {
    assert!(!x.is_empty(), "shift degree of the empty set is undefined");
    x.iter().copied().min().unwrap() + 1
}

/// The shift successor `S(x) = x \ {min x}` of a sorted set.
pub fn shift_successor(x: &[usize]) -> Vec<usize> {
    assert!(!x.is_empty());
    x[1..].to_vec()
}

const MAX_GROUND: usize = 20;

/// A fragment of the shift graph: all subsets of `{0..m-1}` with size in
/// `[k_lo, k_hi]`, with an edge `x — S(x)` whenever both lie in the band.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftFragment {
    m: usize,
    k_lo: usize,
    k_hi: usize,
    /// Vertex sets in canonical order: by size, then lexicographically.
    sets: Vec<Vec<usize>>,
    graph: LabeledMultigraph,
}

pub fn build_fragment(m: usize, k_lo: usize, k_hi: usize) -> Result<ShiftFragment, ShiftError> {
    if m > MAX_GROUND {
        return Err(ShiftError::GroundTooLarge {
            got: m,
            max: MAX_GROUND,
        });
    }
    if k_lo < 1 || k_lo > k_hi || k_hi > m {
        return Err(ShiftError::BadBand { m, k_lo, k_hi });
    }
    let mut sets: Vec<Vec<usize>> = (1u32..1 << m)
        .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s: &Vec<usize>| (k_lo..=k_hi).contains(&s.len()))
        .collect();
    sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let index = |s: &[usize]| sets.binary_search_by(|t| (t.len(), t.as_slice()).cmp(&(s.len(), s)));
    let mut edges = Vec::new();
    for (i, x) in sets.iter().enumerate() {
        if x.len() > k_lo {
            let succ = shift_successor(x);
            let j = index(&succ).expect("successor stays inside the band");
            edges.push((i, j, 0));
        }
    }
    let graph = LabeledMultigraph::new(sets.len(), edges).unwrap();
    Ok(ShiftFragment {
        m,
        k_lo,
        k_hi,
        sets,
        graph,
    })
}

impl ShiftFragment {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn band(&self) -> (usize, usize) {
        (self.k_lo, self.k_hi)
    }

    pub fn num_vertices(&self) -> usize {
        self.sets.len()
    }

    pub fn graph(&self) -> &LabeledMultigraph {
        &self.graph
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, v: usize) -> &[usize] {
        &self.sets[v]
    }

    pub fn vertex_of(&self, set: &[usize]) -> Option<usize> {
        self.sets
            .binary_search_by(|t| (t.len(), t.as_slice()).cmp(&(set.len(), set)))
            .ok()
    }

    /// Intrinsic shift degree of the vertex (from the infinite graph, not
    /// the fragment).
    pub fn intrinsic_degree(&self, v: usize) -> usize {
        shift_degree(&self.sets[v])
    }

    pub fn successor_of(&self, v: usize) -> Option<usize> {
        let x = &self.sets[v];
        if x.len() > self.k_lo {
            self.vertex_of(&shift_successor(x))
        } else {
            None
        }
    }

    /// A vertex is interior when all its shift neighbours — the successor
    /// and all `min(x)` predecessors — survive the truncation.
    pub fn is_interior(&self, v: usize) -> bool {
        let x = &self.sets[v];
        let successor_present = x.len() > self.k_lo;
        let predecessors_present = x[0] == 0 || x.len() + 1 <= self.k_hi;
        successor_present && predecessors_present
    }

    pub fn interior_mask(&self) -> Vec<bool> {
        (0..self.num_vertices()).map(|v| self.is_interior(v)).collect()
    }

    /// Proper 2-colouring of the (forest) fragment by first-fit along a BFS
    /// order.
    pub fn greedy_two_coloring(&self) -> VertexColoring {
        let g = &self.graph;
        let n = g.num_vertices();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                order.push(x);
                for y in g.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        let c = chromatic::greedy_coloring(g, &order).unwrap();
        debug_assert!(c.num_colors() <= 2, "fragments are forests");
        c
    }
}

/// Serialized form of a fragment: just the defining parameters. The vertex
/// sets and graph are deterministic functions of these, so deserialization
/// rebuilds (and revalidates) them.
#[derive(Serialize, Deserialize)]
struct FragmentRepr {
    m: usize,
    k_lo: usize,
    k_hi: usize,
}

impl Serialize for ShiftFragment {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FragmentRepr {
            m: self.m,
            k_lo: self.k_lo,
            k_hi: self.k_hi,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ShiftFragment {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FragmentRepr::deserialize(deserializer)?;
        build_fragment(repr.m, repr.k_lo, repr.k_hi).map_err(serde::de::Error::custom)
    }
}

/// The bounded-degree companion graph of a fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPrime {
    n: usize,
    fragment: ShiftFragment,
    graph: LabeledMultigraph,
    /// Start of each base vertex's tuple in the flat vertex numbering.
    offsets: Vec<usize>,
}

pub fn build_hprime(fragment: &ShiftFragment, n: usize) -> Result<HPrime, ShiftError> {
    if n < 3 {
        return Err(ShiftError::PaletteTooSmall(n));
    }
    let nb = fragment.num_vertices();
    let mut offsets = Vec::with_capacity(nb + 1);
    let mut total = 0usize;
    for v in 0..nb {
        offsets.push(total);
        total += gadget_size(n, fragment.intrinsic_degree(v));
    }
    offsets.push(total);

    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut gadget_cache: std::collections::BTreeMap<usize, Gadget> = Default::default();
    for v in 0..nb {
        let d = fragment.intrinsic_degree(v);
        let gadget = gadget_cache
            .entry(d)
            .or_insert_with(|| Gadget::build(n, d).expect("valid gadget parameters"));
        for e in gadget.graph().edges() {
            edges.push((offsets[v] + e.u, offsets[v] + e.v, GADGET_LABEL));
        }
    }
    for e in fragment.graph().edges() {
        // Sets are ordered by size, so the successor is the smaller index.
        let (y, x) = (e.u, e.v);
        debug_assert_eq!(shift_successor(fragment.set(x)), fragment.set(y));
        let min_x = fragment.set(x)[0];
        let dx = fragment.intrinsic_degree(x);
        edges.push((offsets[x] + dx - 1, offsets[y] + min_x, SHIFT_LABEL));
    }
    let graph = LabeledMultigraph::new(total, edges).unwrap();
    Ok(HPrime {
        n,
        fragment: fragment.clone(),
        graph,
        offsets,
    })
}

impl HPrime {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fragment(&self) -> &ShiftFragment {
        &self.fragment
    }

    pub fn graph(&self) -> &LabeledMultigraph {
        &self.graph
    }

    pub fn num_base_vertices(&self) -> usize {
        self.fragment.num_vertices()
    }

    /// Length of the tuple sitting over base vertex `x`.
    pub fn tuple_len(&self, x: usize) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    /// Flat index of pair `(x, i)`.
    pub fn vertex(&self, x: usize, i: usize) -> usize {
        debug_assert!(i < self.tuple_len(x));
        self.offsets[x] + i
    }

    /// Inverse of [`Self::vertex`].
    pub fn unpair(&self, v: usize) -> (usize, usize) {
        let x = match self.offsets.binary_search(&v) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (x, v - self.offsets[x])
    }
}

/// Serialized form: palette size plus the fragment parameters; the graph is
/// rebuilt on deserialization.
#[derive(Serialize, Deserialize)]
struct HPrimeRepr {
    n: usize,
    fragment: ShiftFragment,
}

impl Serialize for HPrime {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        HPrimeRepr {
            n: self.n,
            fragment: self.fragment.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HPrime {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = HPrimeRepr::deserialize(deserializer)?;
        build_hprime(&repr.fragment, repr.n).map_err(serde::de::Error::custom)
    }
}

/// Lifts a proper 3-colouring of the fragment to a proper `n`-colouring of
/// `H'`: colour `c(x)` on the first `deg(x)` tuple positions, and the
/// canonical gadget colouring shifted by `c(x)` (mod `n`) on the rest.
pub fn lift_coloring(h: &HPrime, c: &VertexColoring) -> Result<VertexColoring, ShiftError> {
    let nb = h.num_base_vertices();
    if c.len() != nb {
        return Err(ShiftError::LengthMismatch {
            got: c.len(),
            expected: nb,
        });
    }
    if let Some(&bad) = c.values().iter().find(|&&v| v >= 3) {
        return Err(ShiftError::BaseColorOutOfRange(bad));
    }
    let proper = chromatic::is_proper(h.fragment.graph(), c)
        .map_err(|_| ShiftError::BaseColoringImproper)?;
    if !proper.proper {
        return Err(ShiftError::BaseColoringImproper);
    }
    let n = h.n;
    let mut values = vec![0usize; h.graph.num_vertices()];
    for x in 0..nb {
        let d = h.fragment.intrinsic_degree(x);
        let l = h.tuple_len(x);
        let cx = c.get(x);
        for i in 0..l {
            values[h.vertex(x, i)] = if i < d {
                cx
            } else {
                // Canonical gadget colour of position i is ((i - d) mod (n-1)) + 1.
                (((i - d) % (n - 1) + 1) + cx) % n
            };
        }
    }
    Ok(VertexColoring::new(values, n).unwrap())
}

/// What [`project_coloring`] reports alongside the base colouring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub coloring: VertexColoring,
    /// Per base vertex: is the lifted colouring constant on the first
    /// `deg(x)` tuple positions?
    pub tuple_constant: Vec<bool>,
    pub all_tuple_constant: bool,
    /// Properness of the projected colouring across fragment edges whose
    /// endpoints are both interior — the asserted part.
    pub interior_proper: bool,
    pub interior_violations: Vec<Edge>,
    /// Fragment edges with a boundary endpoint, reported informationally.
    pub boundary_proper: bool,
    pub boundary_violations: Vec<Edge>,
}

/// Projects a proper `n`-colouring of `H'` to the base by reading position 0
/// of every tuple.
pub fn project_coloring(h: &HPrime, c: &VertexColoring) -> Result<ProjectionReport, ShiftError> {
    if c.len() != h.graph.num_vertices() {
        return Err(ShiftError::LengthMismatch {
            got: c.len(),
            expected: h.graph.num_vertices(),
        });
    }
    let proper = chromatic::is_proper(&h.graph, c)
        .map_err(|_| ShiftError::HPrimeColoringImproper)?;
    if !proper.proper {
        return Err(ShiftError::HPrimeColoringImproper);
    }
    let nb = h.num_base_vertices();
    let values: Vec<usize> = (0..nb).map(|x| c.get(h.vertex(x, 0))).collect();
    let tuple_constant: Vec<bool> = (0..nb)
        .map(|x| {
            let d = h.fragment.intrinsic_degree(x);
            (0..d).all(|i| c.get(h.vertex(x, i)) == values[x])
        })
        .collect();
    let interior = h.fragment.interior_mask();
    let mut interior_violations = Vec::new();
    let mut boundary_violations = Vec::new();
    for e in h.fragment.graph().edges() {
        if values[e.u] == values[e.v] {
            if interior[e.u] && interior[e.v] {
                interior_violations.push(*e);
            } else {
                boundary_violations.push(*e);
            }
        }
    }
    Ok(ProjectionReport {
        coloring: VertexColoring::new(values, c.num_colors()).unwrap(),
        all_tuple_constant: tuple_constant.iter().all(|&b| b),
        tuple_constant,
        interior_proper: interior_violations.is_empty(),
        interior_violations,
        boundary_proper: boundary_violations.is_empty(),
        boundary_violations,
    })
}
