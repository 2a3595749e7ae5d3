//! Proper colorings: verification, exact decision, bounds, and enumeration.
//!
//! The exact solver is DSATUR-style branch and bound — branch on an
//! uncolored vertex of maximum saturation (ties by degree, then index), try
//! only colors used so far plus one fresh color, pre-color a greedily found
//! clique, and solve connected components independently. A node budget turns
//! the search into an anytime procedure: exceeding it yields
//! [`Decision::Unknown`] rather than a wrong answer; `Yes` always carries a
//! witness and `No` is only reported after exhaustion (or a clique proof).

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Edge, LabeledMultigraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChromaticError {
    #[error("coloring has {got} values, graph has {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },
    #[error("color value {value} exceeds palette of size {num_colors}")]
    ValueOutOfRange { value: usize, num_colors: usize },
    #[error("palettes larger than {max} colors are not supported")]
    PaletteTooLarge { max: usize },
    #[error("order must be a permutation of the vertices")]
    BadOrder,
    #[error("enumeration exceeded cap of {cap} colorings")]
    CapExceeded { cap: u64 },
}

/// Total assignment of colors `0..num_colors` to vertices. Serializes as a
/// bare JSON integer array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexColoring {
    values: Vec<usize>,
    num_colors: usize,
}

impl VertexColoring {
    pub fn new(values: Vec<usize>, num_colors: usize) -> Result<Self, ChromaticError> {
        if let Some(&bad) = values.iter().find(|&&c| c >= num_colors) {
            return Err(ChromaticError::ValueOutOfRange {
                value: bad,
                num_colors,
            });
        }
        Ok(Self { values, num_colors })
    }

    /// Infers the palette as `max + 1` (0 for an empty assignment).
    pub fn from_values(values: Vec<usize>) -> Self {
        let num_colors = values.iter().copied().max().map_or(0, |m| m + 1);
        Self { values, num_colors }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> usize {
        self.values[v]
    }
}

impl Serialize for VertexColoring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexColoring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Self::from_values(Vec::<usize>::deserialize(deserializer)?))
    }
}

/// Assignment of colors to edges, indexed by the canonical edge order of the
/// graph it was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub values: Vec<usize>,
    pub num_colors: usize,
}

/// Outcome of [`is_proper`]: a flag plus one violating edge if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Properness {
    pub proper: bool,
    pub violation: Option<Edge>,
}

/// Checks properness; parallel edges impose the same constraint as a single
/// edge. Partial colorings (wrong length) are an error.
pub fn is_proper(g: &LabeledMultigraph, c: &VertexColoring) -> Result<Properness, ChromaticError> {
    if c.len() != g.num_vertices() {
        return Err(ChromaticError::LengthMismatch {
            got: c.len(),
            expected: g.num_vertices(),
        });
    }
    for e in g.edges() {
        if c.values[e.u] == c.values[e.v] {
            return Ok(Properness {
                proper: false,
                violation: Some(*e),
            });
        }
    }
    Ok(Properness {
        proper: true,
        violation: None,
    })
}

/// Result of an exact colorability decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Proper coloring found (witness attached).
    Colorable(VertexColoring),
    /// Search space exhausted, or a clique larger than the palette exists.
    NotColorable,
    /// Node budget exhausted before a conclusion.
    Unknown,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Colorable(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::NotColorable)
    }
}

const MAX_PALETTE: usize = 64; // saturation sets live in a u64 bitmask

/// Decides whether `g` admits a proper coloring with `n` colors.
/// `budget` caps the number of branch nodes; `None` runs to completion.
pub fn n_colorable(
    g: &LabeledMultigraph,
    n: usize,
    budget: Option<u64>,
) -> Result<Decision, ChromaticError> {
    if n > MAX_PALETTE {
        return Err(ChromaticError::PaletteTooLarge { max: MAX_PALETTE });
    }
    if n == 0 {
        return Ok(if g.num_vertices() == 0 {
            Decision::Colorable(VertexColoring::from_values(vec![]))
        } else {
            Decision::NotColorable
        });
    }
    if g.num_edges() > 0 && n == 1 {
        return Ok(Decision::NotColorable);
    }

    let comp = g.component_ids();
    let num_comps = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut values = vec![0usize; g.num_vertices()];
    let mut nodes_left = budget.unwrap_or(u64::MAX);
    let mut unknown = false;
    for ci in 0..num_comps {
        let verts: Vec<usize> = (0..g.num_vertices()).filter(|&v| comp[v] == ci).collect();
        match color_component(g, &verts, n, &mut nodes_left) {
            ComponentOutcome::Colored(assign) => {
                for (local, &v) in verts.iter().enumerate() {
                    values[v] = assign[local];
                }
            }
            ComponentOutcome::Impossible => return Ok(Decision::NotColorable),
            ComponentOutcome::Budget => unknown = true,
        }
    }
    if unknown {
        return Ok(Decision::Unknown);
    }
    Ok(Decision::Colorable(VertexColoring::new(values, n.max(1))?))
}

enum ComponentOutcome {
    Colored(Vec<usize>),
    Impossible,
    Budget,
}

/// Exact search on one component, written against local vertex indices.
fn color_component(
    g: &LabeledMultigraph,
    verts: &[usize],
    n: usize,
    nodes_left: &mut u64,
) -> ComponentOutcome {
    let local: std::collections::HashMap<usize, usize> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let nv = verts.len();
    // Simple (deduplicated) adjacency; parallel edges add nothing here.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &v in verts {
        let lv = local[&v];
        for y in g.neighbors(v) {
            adj[lv].push(local[&y]);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();

    let clique = greedy_clique_local(&adj, &degree);
    if clique.len() > n {
        return ComponentOutcome::Impossible;
    }

    let mut state = Dsatur {
        adj: &adj,
        degree: &degree,
        n,
        color: vec![usize::MAX; nv],
        sat: vec![0u64; nv],
        used: 0,
        nodes_left,
    };
    // Pre-color the clique: any proper coloring can be permuted to agree
    // with this assignment, so no solutions are lost.
    for (i, &v) in clique.iter().enumerate() {
        state.assign(v, i);
    }
    state.used = clique.len();
    match state.solve(nv - clique.len()) {
        SearchResult::Found => ComponentOutcome::Colored(state.color),
        SearchResult::Exhausted => ComponentOutcome::Impossible,
        SearchResult::Budget => ComponentOutcome::Budget,
    }
}

fn greedy_clique_local(adj: &[Vec<usize>], degree: &[usize]) -> Vec<usize> {
    let nv = adj.len();
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degree[v]), v));
    let mut clique: Vec<usize> = Vec::new();
    for &v in &order {
        if clique.iter().all(|&w| adj[w].binary_search(&v).is_ok()) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    clique
}

enum SearchResult {
    Found,
    Exhausted,
    Budget,
}

struct Dsatur<'a> {
    adj: &'a [Vec<usize>],
    degree: &'a [usize],
    n: usize,
    color: Vec<usize>,
    /// Bitmask of neighbor colors per vertex.
    sat: Vec<u64>,
    /// Number of distinct colors assigned so far (for fresh-color symmetry
    /// breaking).
    used: usize,
    nodes_left: &'a mut u64,
}

impl Dsatur<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c;
        for &y in &self.adj[v] {
            self.sat[y] |= 1u64 << c;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v];
        self.color[v] = usize::MAX;
        for &y in &self.adj[v] {
            // Recompute y's mask bit: another neighbor may still carry c.
            if !self.adj[y]
                .iter()
                .any(|&z| z != v && self.color[z] == c)
            {
                self.sat[y] &= !(1u64 << c);
            }
        }
    }

    fn solve(&mut self, remaining: usize) -> SearchResult {
        if remaining == 0 {
            return SearchResult::Found;
        }
        if *self.nodes_left == 0 {
            return SearchResult::Budget;
        }
        *self.nodes_left -= 1;

        // Max saturation, ties by degree then lowest index.
        let mut pick = usize::MAX;
        let mut pick_key = (0usize, 0usize);
        for v in 0..self.color.len() {
            if self.color[v] != usize::MAX {
                continue;
            }
            let key = (self.sat[v].count_ones() as usize, self.degree[v]);
            if pick == usize::MAX || key > pick_key {
                pick = v;
                pick_key = key;
            }
        }
        let v = pick;
        let limit = (self.used + 1).min(self.n);
        let mut saw_budget = false;
        for c in 0..limit {
            if self.sat[v] >> c & 1 == 1 {
                continue;
            }
            let fresh = c == self.used;
            self.assign(v, c);
            if fresh {
                self.used += 1;
            }
            match self.solve(remaining - 1) {
                SearchResult::Found => return SearchResult::Found,
                SearchResult::Budget => saw_budget = true,
                SearchResult::Exhausted => {}
            }
            if fresh {
                self.used -= 1;
            }
            self.unassign(v);
            if saw_budget {
                break;
            }
        }
        if saw_budget {
            SearchResult::Budget
        } else {
            SearchResult::Exhausted
        }
    }
}

/// First-fit coloring along the given vertex order (must be a permutation).
pub fn greedy_coloring(
    g: &LabeledMultigraph,
    order: &[usize],
) -> Result<VertexColoring, ChromaticError> {
    let nv = g.num_vertices();
    let mut seen = vec![false; nv];
    if order.len() != nv {
        return Err(ChromaticError::BadOrder);
    }
    for &v in order {
        if v >= nv || seen[v] {
            return Err(ChromaticError::BadOrder);
        }
        seen[v] = true;
    }
    let mut values = vec![usize::MAX; nv];
    let mut num_colors = 0;
    for &v in order {
        let mut taken: Vec<usize> = g
            .neighbors(v)
            .into_iter()
            .filter(|&y| values[y] != usize::MAX)
            .map(|y| values[y])
            .collect();
        taken.sort_unstable();
        taken.dedup();
        let mut c = 0;
        for t in taken {
            if t == c {
                c += 1;
            } else if t > c {
                break;
            }
        }
        values[v] = c;
        num_colors = num_colors.max(c + 1);
    }
    if nv > 0 && num_colors == 0 {
        num_colors = 1;
    }
    VertexColoring::new(values, num_colors.max(usize::from(nv > 0)))
}

/// Clique found by greedy growth in descending-degree order; a lower bound
/// witness for the chromatic number.
pub fn greedy_clique(g: &LabeledMultigraph) -> Vec<usize> {
    let nv = g.num_vertices();
    let mut adj: Vec<Vec<usize>> = (0..nv).map(|v| g.neighbors(v)).collect();
    for a in &mut adj {
        a.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    greedy_clique_local(&adj, &degree)
}

/// Bracket `[lower, upper]` on the chromatic number; `exact` is set when the
/// two meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticBracket {
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
}

/// Binary refinement between the greedy upper bound and the clique lower
/// bound. `budget` applies to each individual [`n_colorable`] call; on
/// exhaustion the bracket narrows as far as the completed calls allow.
pub fn chromatic_number(
    g: &LabeledMultigraph,
    budget: Option<u64>,
) -> Result<ChromaticBracket, ChromaticError> {
    let nv = g.num_vertices();
    if nv == 0 {
        return Ok(ChromaticBracket {
            lower: 0,
            upper: 0,
            exact: Some(0),
        });
    }
    let order: Vec<usize> = (0..nv).collect();
    let mut upper = greedy_coloring(g, &order)?.num_colors();
    let mut lower = greedy_clique(g).len().max(1);
    while lower < upper {
        let mid = lower + (upper - lower) / 2;
        match n_colorable(g, mid, budget)? {
            Decision::Colorable(_) => upper = mid,
            Decision::NotColorable => lower = mid + 1,
            Decision::Unknown => {
                return Ok(ChromaticBracket {
                    lower,
                    upper,
                    exact: None,
                })
            }
        }
    }
    Ok(ChromaticBracket {
        lower,
        upper,
        exact: Some(lower),
    })
}

/// Visits every proper `n`-coloring of `g` exactly once, in lexicographic
/// order of the value vector (vertex 0 varies slowest). The callback returns
/// `false` to stop early. Returns the number of colorings visited.
pub fn for_each_proper_coloring<F: FnMut(&[usize]) -> bool>(
    g: &LabeledMultigraph,
    n: usize,
    mut f: F,
) -> u64 {
    let nv = g.num_vertices();
    if n == 0 {
        if nv == 0 {
            f(&[]);
            return 1;
        }
        return 0;
    }
    // Deduplicated neighbor lists restricted to already-colored (smaller)
    // vertices, so each partial assignment is checked incrementally.
    let back: Vec<Vec<usize>> = (0..nv)
        .map(|v| {
            let mut b: Vec<usize> = g.neighbors(v).into_iter().filter(|&y| y < v).collect();
            b.dedup();
            b
        })
        .collect();
    let mut values = vec![0usize; nv];
    let mut count = 0u64;
    let mut running = true;
    fn rec<F: FnMut(&[usize]) -> bool>(
        v: usize,
        nv: usize,
        n: usize,
        back: &[Vec<usize>],
        values: &mut Vec<usize>,
        count: &mut u64,
        running: &mut bool,
        f: &mut F,
    ) {
        if !*running {
            return;
        }
        if v == nv {
            *count += 1;
            if !f(values) {
                *running = false;
            }
            return;
        }
        for c in 0..n {
            if back[v].iter().any(|&y| values[y] == c) {
                continue;
            }
            values[v] = c;
            rec(v + 1, nv, n, back, values, count, running, f);
            if !*running {
                return;
            }
        }
    }
    rec(0, nv, n, &back, &mut values, &mut count, &mut running, &mut f);
    count
}

/// Materializes all proper `n`-colorings, failing once more than `cap` exist.
pub fn enumerate_proper_colorings(
    g: &LabeledMultigraph,
    n: usize,
    cap: u64,
) -> Result<Vec<VertexColoring>, ChromaticError> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_proper_coloring(g, n, |vals| {
        if out.len() as u64 == cap {
            overflow = true;
            return false;
        }
        out.push(VertexColoring::new(vals.to_vec(), n).unwrap());
        true
    });
    if overflow {
        return Err(ChromaticError::CapExceeded { cap });
    }
    Ok(out)
}
