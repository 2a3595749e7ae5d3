//! Edge-labeled graph products.
//!
//! Given a left graph with a proper edge coloring and a right graph whose
//! label classes play the role of one coloring class each, the product `H`
//! has vertex set `X x Y` and joins `(x, y)` to `(x', y')` whenever `x ~ x'`
//! via an edge colored `j` and `y ~ y'` inside label class `j` of the right
//! graph. Every (left edge, right edge) pair with matching color/label
//! contributes *two* product edges: `(x,y)-(x',y')` and `(x,y')-(x',y)`.
//!
//! The product inherits girth from the right side (walks project to
//! homomorphic images of right walks), and colorings transfer both ways:
//! a proper left coloring lifts by ignoring the right coordinate, and a
//! proper product coloring pushes down by per-fiber majority vote.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chromatic::{is_proper, EdgeColoring, VertexColoring};
use crate::graph::{Edge, Girth, LabeledMultigraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProductError {
    #[error("edge coloring requires a simple graph; found parallel edges")]
    ParallelEdges,
    #[error("edge coloring length {got} does not match edge count {expected}")]
    EdgeLengthMismatch { got: usize, expected: usize },
    #[error("edge coloring is improper: edges {0} and {1} share an endpoint and a color")]
    ImproperEdgeColoring(usize, usize),
    #[error("right graph provides {got} label classes, edge coloring needs {needed}")]
    NotEnoughRightLabels { needed: usize, got: usize },
    #[error("coloring length {got} does not match vertex count {expected}")]
    VertexLengthMismatch { got: usize, expected: usize },
    #[error("left coloring is improper on edge ({0}, {1})")]
    LeftColoringImproper(usize, usize),
    #[error("product must have at least one right vertex per fiber")]
    EmptyRight,
}

/// Greedy proper edge coloring in canonical edge order; uses at most
/// `2 * max_degree - 1` colors. Simple graphs only.
pub fn greedy_edge_coloring(g: &LabeledMultigraph) -> Result<EdgeColoring, ProductError> {
    if g.has_parallel_edges() {
        return Err(ProductError::ParallelEdges);
    }
    let cap = (2 * g.max_degree()).saturating_sub(1).max(1);
    let mut used = vec![vec![false; cap]; g.num_vertices()];
    let mut values = Vec::with_capacity(g.num_edges());
    let mut num_colors = 0;
    for e in g.edges() {
        let c = (0..cap)
            .find(|&c| !used[e.u][c] && !used[e.v][c])
            .expect("greedy edge coloring exceeded 2*Delta - 1 colors");
        used[e.u][c] = true;
        used[e.v][c] = true;
        values.push(c);
        num_colors = num_colors.max(c + 1);
    }
    Ok(EdgeColoring { values, num_colors })
}

/// Checks properness of an edge coloring: any two distinct edges sharing an
/// endpoint (parallel edges included) must receive different colors.
pub fn verify_edge_coloring(
    g: &LabeledMultigraph,
    coloring: &EdgeColoring,
) -> Result<(), ProductError> {
    if coloring.values.len() != g.num_edges() {
        return Err(ProductError::EdgeLengthMismatch {
            got: coloring.values.len(),
            expected: g.num_edges(),
        });
    }
    for v in 0..g.num_vertices() {
        let incident: Vec<usize> = g.incidences(v).map(|(_, e)| e).collect();
        for (a, &ea) in incident.iter().enumerate() {
            for &eb in &incident[a + 1..] {
                if ea != eb && coloring.values[ea] == coloring.values[eb] {
                    return Err(ProductError::ImproperEdgeColoring(ea.min(eb), ea.max(eb)));
                }
            }
        }
    }
    Ok(())
}

/// The labeled product of an edge-colored left graph with a labeled right
/// graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductGraph {
    left: LabeledMultigraph,
    edge_colors: EdgeColoring,
    right: LabeledMultigraph,
    graph: LabeledMultigraph,
    left_size: usize,
    right_size: usize,
}

impl ProductGraph {
    pub fn left(&self) -> &LabeledMultigraph {
        &self.left
    }

    pub fn right(&self) -> &LabeledMultigraph {
        &self.right
    }

    pub fn edge_colors(&self) -> &EdgeColoring {
        &self.edge_colors
    }

    pub fn graph(&self) -> &LabeledMultigraph {
        &self.graph
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    /// Product vertex index of the pair `(x, y)`.
    pub fn pair(&self, x: usize, y: usize) -> usize {
        x * self.right_size + y
    }

    /// Inverse of [`Self::pair`].
    pub fn unpair(&self, v: usize) -> (usize, usize) {
        (v / self.right_size, v % self.right_size)
    }
}

/// Serialized form: the two factors and the edge coloring. The product
/// itself is rebuilt (and thereby revalidated) on deserialization.
#[derive(Serialize, Deserialize)]
struct ProductRepr {
    left: LabeledMultigraph,
    edge_colors: EdgeColoring,
    right: LabeledMultigraph,
}

impl Serialize for ProductGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ProductRepr {
            left: self.left.clone(),
            edge_colors: self.edge_colors.clone(),
            right: self.right.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProductGraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ProductRepr::deserialize(deserializer)?;
        build_product(&repr.left, &repr.edge_colors, &repr.right).map_err(serde::de::Error::custom)
    }
}

/// Builds the product. The edge coloring must be proper on the left graph
/// and every color must have a matching right label class.
pub fn build_product(
    left: &LabeledMultigraph,
    edge_colors: &EdgeColoring,
    right: &LabeledMultigraph,
) -> Result<ProductGraph, ProductError> {
    verify_edge_coloring(left, edge_colors)?;
    if right.num_vertices() == 0 {
        return Err(ProductError::EmptyRight);
    }
    let available = right.label_count();
    if available < edge_colors.num_colors {
        return Err(ProductError::NotEnoughRightLabels {
            needed: edge_colors.num_colors,
            got: available,
        });
    }
    let right_size = right.num_vertices();
    // Bucket right edges by label once.
    let mut by_label: Vec<Vec<&Edge>> = vec![Vec::new(); available];
    for f in right.edges() {
        by_label[f.label].push(f);
    }
    let mut edges = Vec::new();
    for (idx, e) in left.edges().iter().enumerate() {
        let j = edge_colors.values[idx];
        for f in &by_label[j] {
            edges.push((e.u * right_size + f.u, e.v * right_size + f.v, j));
            edges.push((e.u * right_size + f.v, e.v * right_size + f.u, j));
        }
    }
    let graph = LabeledMultigraph::new(left.num_vertices() * right_size, edges)
        .expect("product edges are well-formed by construction");
    Ok(ProductGraph {
        left: left.clone(),
        edge_colors: edge_colors.clone(),
        right: right.clone(),
        graph,
        left_size: left.num_vertices(),
        right_size,
    })
}

/// Girth and acyclicity comparison between a product and its right factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthReport {
    pub girth_product: Girth,
    pub girth_right: Girth,
    /// Product girth is no smaller than right girth.
    pub preserved: bool,
    pub right_acyclic: bool,
    pub product_acyclic: bool,
    /// An acyclic right factor forces an acyclic product.
    pub acyclicity_ok: bool,
}

pub fn girth_preservation_check(p: &ProductGraph) -> GirthReport {
    let girth_product = p.graph.girth();
    let girth_right = p.right.girth();
    let right_acyclic = p.right.is_acyclic();
    let product_acyclic = p.graph.is_acyclic();
    GirthReport {
        girth_product,
        girth_right,
        preserved: girth_product >= girth_right,
        right_acyclic,
        product_acyclic,
        acyclicity_ok: !right_acyclic || product_acyclic,
    }
}

/// Lifts a proper left coloring to the product by ignoring the right
/// coordinate; the result is always proper because product edges join
/// distinct left-adjacent vertices.
pub fn lift_product_coloring(
    p: &ProductGraph,
    left_coloring: &VertexColoring,
) -> Result<VertexColoring, ProductError> {
    let c = left_coloring.values();
    if c.len() != p.left_size {
        return Err(ProductError::VertexLengthMismatch {
            got: c.len(),
            expected: p.left_size,
        });
    }
    for e in p.left.edges() {
        if c[e.u] == c[e.v] {
            return Err(ProductError::LeftColoringImproper(e.u, e.v));
        }
    }
    let mut values = Vec::with_capacity(p.left_size * p.right_size);
    for x in 0..p.left_size {
        values.extend(std::iter::repeat_n(c[x], p.right_size));
    }
    Ok(VertexColoring::new(values, left_coloring.num_colors())
        .expect("lifted values stay in range"))
}

/// Result of projecting a product coloring back to the left graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorityReport {
    pub coloring: VertexColoring,
    pub proper: bool,
    pub violation: Option<(usize, usize)>,
}

/// Extracts a left coloring from a product coloring by fiber-wise majority:
/// `c(x)` is the least color whose count within the fiber `{x} x Y` reaches
/// `|Y| / n` (compared exactly, `count * n >= |Y|`). Such a color always
/// exists by pigeonhole.
pub fn majority_extract(
    p: &ProductGraph,
    product_coloring: &VertexColoring,
    n: usize,
) -> Result<MajorityReport, ProductError> {
    let values = product_coloring.values();
    if values.len() != p.left_size * p.right_size {
        return Err(ProductError::VertexLengthMismatch {
            got: values.len(),
            expected: p.left_size * p.right_size,
        });
    }
    let n = n.max(1);
    let mut left_values = Vec::with_capacity(p.left_size);
    for x in 0..p.left_size {
        let fiber = &values[x * p.right_size..(x + 1) * p.right_size];
        let mut counts = vec![0usize; product_coloring.num_colors().max(n)];
        for &c in fiber {
            counts[c] += 1;
        }
        let c = counts
            .iter()
            .position(|&cnt| cnt * n >= p.right_size)
            .expect("pigeonhole guarantees a majority color");
        left_values.push(c);
    }
    let coloring = VertexColoring::from_values(left_values);
    let properness =
        is_proper(&p.left, &coloring).expect("extracted coloring has matching length");
    let violation = properness.violation.map(|e| (e.u, e.v));
    Ok(MajorityReport {
        coloring,
        proper: properness.proper,
        violation,
    })
}
