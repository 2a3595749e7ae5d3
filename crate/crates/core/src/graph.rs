//! Edge-labeled undirected multigraphs on dense integer vertices.
//!
//! Vertices are `0..num_vertices`. Edges form a multiset of `(u, v, label)`
//! triples: parallel edges are allowed (including parallel edges with the
//! same label), self-loops are not. Labels are opaque small integers.
//!
//! The edge list is kept in a canonical order (endpoints normalized to
//! `u < v`, triples sorted lexicographically), which makes serialization
//! byte-stable: any two graphs with equal vertex count and equal edge
//! multisets serialize identically.

use std::collections::{BTreeSet, VecDeque};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for graph on {num_vertices} vertices")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("vertex colors have length {got}, expected {expected}")]
    ColorLengthMismatch { got: usize, expected: usize },
}

/// A single undirected edge; the constructor guarantees `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: usize,
}

impl Edge {
    /// The endpoint opposite to `x`, which must be one of the two endpoints.
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Girth of a multigraph: length of a shortest cycle, or `Infinite` for
/// forests. A pair of parallel edges counts as a 2-cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Girth::Infinite)
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(*g),
            Girth::Infinite => None,
        }
    }
}

impl PartialOrd for Girth {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Girth {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Girth::Infinite, Girth::Infinite) => std::cmp::Ordering::Equal,
            (Girth::Infinite, Girth::Finite(_)) => std::cmp::Ordering::Greater,
            (Girth::Finite(_), Girth::Infinite) => std::cmp::Ordering::Less,
            (Girth::Finite(a), Girth::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::fmt::Display for Girth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Incidence {
    neighbor: usize,
    edge: usize,
}

#[derive(Clone, Debug)]
pub struct LabeledMultigraph {
    num_vertices: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Incidence>>,
}

impl PartialEq for LabeledMultigraph {
    fn eq(&self, other: &Self) -> bool {
        self.num_vertices == other.num_vertices && self.edges == other.edges
    }
}

impl Eq for LabeledMultigraph {}

impl LabeledMultigraph {
    /// Builds a graph from an edge multiset. Endpoints are normalized and the
    /// edge list is sorted, so the input order does not matter.
    pub fn new(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (a, b, label) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            for x in [a, b] {
                if x >= num_vertices {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: x,
                        num_vertices,
                    });
                }
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge { u, v, label });
        }
        list.sort_unstable();
        let mut adj = vec![Vec::new(); num_vertices];
        for (idx, e) in list.iter().enumerate() {
            adj[e.u].push(Incidence {
                neighbor: e.v,
                edge: idx,
            });
            adj[e.v].push(Incidence {
                neighbor: e.u,
                edge: idx,
            });
        }
        for inc in &mut adj {
            inc.sort_by_key(|i| (i.neighbor, i.edge));
        }
        Ok(Self {
            num_vertices,
            edges: list,
            adj,
        })
    }

    /// Graph with vertices but no edges.
    pub fn empty(num_vertices: usize) -> Self {
        Self::new(num_vertices, []).unwrap()
    }

    /// Complete graph `K_n`, all edges labeled 0.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v, 0));
            }
        }
        Self::new(n, edges).unwrap()
    }

    /// Cycle `C_n` (`n >= 3`), all edges labeled 0.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n, 0))).unwrap()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order (`u < v`, sorted lexicographically).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.num_vertices {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                num_vertices: self.num_vertices,
            });
        }
        Ok(())
    }

    /// Degree of `v`, counting parallel edges with multiplicity.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree_of_first();
        if self.adj.iter().all(|a| a.len() == d) {
            Some(d)
        } else {
            None
        }
    }

    fn degree_of_first(&self) -> usize {
        self.adj.first().map(Vec::len).unwrap_or(0)
    }

    /// Neighbors of `v` with multiplicity, as `(neighbor, edge index)` pairs
    /// sorted by neighbor.
    pub fn incidences(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[v].iter().map(|i| (i.neighbor, i.edge))
    }

    /// Distinct neighbors of `v` (parallel edges collapsed).
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.adj[v].iter().map(|i| i.neighbor).collect();
        out.dedup();
        out
    }

    pub fn has_parallel_edges(&self) -> bool {
        self.edges
            .windows(2)
            .any(|w| w[0].u == w[1].u && w[0].v == w[1].v)
    }

    /// Distinct labels present on edges, ascending.
    pub fn labels(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.edges.iter().map(|e| e.label).collect();
        set.into_iter().collect()
    }

    /// Number of label classes when labels are read as `0..k`: one more than
    /// the largest label present, or 0 for an edgeless graph.
    pub fn label_count(&self) -> usize {
        self.edges.iter().map(|e| e.label + 1).max().unwrap_or(0)
    }

    /// Subgraph on the same vertex set keeping only edges with `label`.
    pub fn label_class(&self, label: usize) -> LabeledMultigraph {
        LabeledMultigraph::new(
            self.num_vertices,
            self.edges
                .iter()
                .filter(|e| e.label == label)
                .map(|e| (e.u, e.v, e.label)),
        )
        .unwrap()
    }

    /// True when no vertex pair is connected under two distinct labels, i.e.
    /// the label classes are pairwise edge-disjoint as simple graphs.
    pub fn label_classes_disjoint(&self) -> bool {
        self.edges
            .windows(2)
            .all(|w| !(w[0].u == w[1].u && w[0].v == w[1].v && w[0].label != w[1].label))
    }

    /// Component index for every vertex; indices are dense, assigned in
    /// order of the smallest vertex of each component.
    pub fn component_ids(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.num_vertices];
        let mut next = 0;
        for start in 0..self.num_vertices {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for inc in &self.adj[x] {
                    if comp[inc.neighbor] == usize::MAX {
                        comp[inc.neighbor] = next;
                        queue.push_back(inc.neighbor);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn num_components(&self) -> usize {
        self.component_ids().iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    /// Forest test by union-find; agrees with `girth().is_infinite()`.
    pub fn is_acyclic(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.num_vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (ru, rv) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if ru == rv {
                return false;
            }
            parent[ru] = rv;
        }
        true
    }

    /// Exact girth by BFS from every vertex. A non-tree edge met at depths
    /// `(du, dv)` witnesses a cycle of length at most `du + dv + 1`, and for
    /// a root on a shortest cycle the bound is attained, so the minimum over
    /// roots is exact. Parallel edges yield 2-cycles.
    pub fn girth(&self) -> Girth {
        if self.has_parallel_edges() {
            return Girth::Finite(2);
        }
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.num_vertices];
        let mut via = vec![usize::MAX; self.num_vertices];
        let mut touched: Vec<usize> = Vec::new();
        for root in 0..self.num_vertices {
            touched.clear();
            dist[root] = 0;
            via[root] = usize::MAX;
            touched.push(root);
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                let dx = dist[x];
                // Any candidate through x has length >= 2*dx; deeper
                // vertices only do worse.
                if 2 * dx >= best {
                    continue;
                }
                for inc in &self.adj[x] {
                    if inc.edge == via[x] {
                        continue;
                    }
                    let y = inc.neighbor;
                    if dist[y] == usize::MAX {
                        dist[y] = dx + 1;
                        via[y] = inc.edge;
                        touched.push(y);
                        queue.push_back(y);
                    } else if via[y] != inc.edge {
                        best = best.min(dx + dist[y] + 1);
                    }
                }
            }
            for &t in &touched {
                dist[t] = usize::MAX;
            }
            if best == 3 {
                break; // no parallel edges, so 3 is optimal
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    /// Number of cycles of each length `2..=max_len`, indexed by length
    /// (entries 0 and 1 are always zero). Cycles are vertex-simple and
    /// edge-distinct; parallel copies count as distinct cycles. Exponential
    /// in `max_len`, intended for short-cycle censuses of sparse graphs.
    pub fn cycle_counts(&self, max_len: usize) -> Vec<u64> {
        let mut counts = vec![0u64; max_len + 1];
        if max_len < 2 {
            return counts;
        }
        // Enumerate closed walks with distinct edges and distinct interior
        // vertices, anchored at their minimum vertex; each cycle is found
        // once per direction, so halve at the end.
        let mut on_path = vec![false; self.num_vertices];
        let mut used = vec![false; self.edges.len()];
        for start in 0..self.num_vertices {
            on_path[start] = true;
            self.cycle_dfs(start, start, 1, max_len, &mut on_path, &mut used, &mut counts);
            on_path[start] = false;
        }
        for c in counts.iter_mut() {
            *c /= 2;
        }
        counts
    }

    #[allow(clippy::too_many_arguments)]
    fn cycle_dfs(
        &self,
        start: usize,
        x: usize,
        len: usize,
        max_len: usize,
        on_path: &mut Vec<bool>,
        used: &mut Vec<bool>,
        counts: &mut [u64],
    ) {
        for inc in &self.adj[x] {
            if used[inc.edge] {
                continue;
            }
            let y = inc.neighbor;
            if y == start && len >= 2 {
                counts[len] += 1;
            }
            if y > start && !on_path[y] && len < max_len {
                on_path[y] = true;
                used[inc.edge] = true;
                self.cycle_dfs(start, y, len + 1, max_len, on_path, used, counts);
                used[inc.edge] = false;
                on_path[y] = false;
            }
        }
    }

    /// The ball of radius `r` around `v`: the sub-multigraph induced on all
    /// vertices at distance at most `r`, re-indexed in BFS discovery order
    /// so that the root becomes vertex 0. When `colors` is given it must
    /// assign a color to every vertex of `self`; the ball keeps the restriction.
    pub fn rooted_ball(
        &self,
        v: usize,
        r: usize,
        colors: Option<&[usize]>,
    ) -> Result<RootedBall, GraphError> {
        self.check_vertex(v)?;
        if let Some(c) = colors {
            if c.len() != self.num_vertices {
                return Err(GraphError::ColorLengthMismatch {
                    got: c.len(),
                    expected: self.num_vertices,
                });
            }
        }
        let mut new_index = vec![usize::MAX; self.num_vertices];
        let mut order = vec![v];
        new_index[v] = 0;
        let mut dist = vec![0usize; 1];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            let dx = dist[head];
            head += 1;
            if dx == r {
                continue;
            }
            for inc in &self.adj[x] {
                if new_index[inc.neighbor] == usize::MAX {
                    new_index[inc.neighbor] = order.len();
                    order.push(inc.neighbor);
                    dist.push(dx + 1);
                }
            }
        }
        let mut edges = Vec::new();
        for &x in &order {
            for inc in &self.adj[x] {
                let e = self.edges[inc.edge];
                // Take each induced edge once, from its u side.
                if e.u == x && new_index[e.v] != usize::MAX {
                    edges.push((new_index[e.u], new_index[e.v], e.label));
                }
            }
        }
        let graph = LabeledMultigraph::new(order.len(), edges).unwrap();
        let vertex_colors = colors.map(|c| order.iter().map(|&ov| c[ov]).collect());
        Ok(RootedBall {
            graph,
            root: 0,
            depth: r,
            vertex_colors,
        })
    }
}

/// A rooted ball extracted by [`LabeledMultigraph::rooted_ball`]. The root is
/// always vertex 0 of `graph`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedBall {
    pub graph: LabeledMultigraph,
    pub root: usize,
    pub depth: usize,
    pub vertex_colors: Option<Vec<usize>>,
}

impl RootedBall {
    pub fn root_color(&self) -> Option<usize> {
        self.vertex_colors.as_ref().map(|c| c[self.root])
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    num_vertices: usize,
    edges: Vec<(usize, usize, usize)>,
}

impl Serialize for LabeledMultigraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            num_vertices: self.num_vertices,
            edges: self.edges.iter().map(|e| (e.u, e.v, e.label)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabeledMultigraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(deserializer)?;
        LabeledMultigraph::new(repr.num_vertices, repr.edges)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}
