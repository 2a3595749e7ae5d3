//! Local neighborhood statistics.
//!
//! The `(beta, r)`-statistic of a (possibly vertex-colored) graph is the
//! distribution of isomorphism types of rooted radius-`r` balls, with the
//! root distinguished and colors preserved. Types are keyed by canonical
//! code (see [`crate::canon`]), so two statistics are comparable by key and
//! total variation distance is a sum over the union of their supports.
//!
//! Statistics can be computed exactly (every vertex is a root) or by seeded
//! sampling with replacement. Exact mode also powers the cell-density
//! checks: encoding a pair of vertex subsets as a 4-color assignment turns
//! set sizes into root-color masses, an identity that must hold on the
//! nose for integer counts.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::canonical_code;
use crate::chromatic::VertexColoring;
use crate::graph::{LabeledMultigraph, RootedBall};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("coloring length {got} does not match vertex count {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("subset contains vertex {0} out of range")]
    SubsetOutOfRange(usize),
    #[error("sampling needs at least one trial")]
    NoTrials,
    #[error("sampling needs at least one vertex")]
    EmptyGraph,
    #[error("statistics are incomparable: radii {0} and {1} or color settings differ")]
    Incomparable(usize, usize),
}

/// How roots are chosen when building a statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SampleMode {
    /// Every vertex is a root once; counts are exact.
    Exact,
    /// `trials` roots drawn uniformly with replacement from a seeded stream.
    Sampled { trials: usize, seed: u64 },
}

/// One isomorphism type of rooted ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallObs {
    pub count: u64,
    /// `count / total`, stored so serialized statistics read as a
    /// distribution; exact queries go through the integer counts.
    pub probability: f64,
    /// Color of the root, if the statistic was computed against a coloring.
    pub root_color: Option<usize>,
    /// A concrete representative, kept only in memory (not serialized);
    /// used by predicate queries such as [`BallStatistic::mass_where`].
    #[serde(skip)]
    pub rep: Option<RootedBall>,
}

/// Empirical distribution of rooted ball types.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallStatistic {
    pub r: usize,
    /// Palette size when computed against a coloring.
    pub palette: Option<usize>,
    pub mode: SampleMode,
    pub total: u64,
    pub entries: BTreeMap<String, BallObs>,
}

impl BallStatistic {
    pub fn probability(&self, code: &str) -> f64 {
        self.entries
            .get(code)
            .map_or(0.0, |obs| obs.count as f64 / self.total as f64)
    }

    /// Exact count of roots whose ball type satisfies the predicate. The
    /// predicate must be isomorphism-invariant for the answer to be
    /// meaningful; representative balls exist only on freshly computed
    /// statistics, so deserialized ones contribute nothing.
    pub fn count_where(&self, mut pred: impl FnMut(&RootedBall) -> bool) -> u64 {
        self.entries
            .values()
            .filter(|obs| obs.rep.as_ref().is_some_and(&mut pred))
            .map(|obs| obs.count)
            .sum()
    }

    /// Probability mass of all types whose representative satisfies the
    /// predicate; see [`Self::count_where`].
    pub fn mass_where(&self, pred: impl FnMut(&RootedBall) -> bool) -> f64 {
        self.count_where(pred) as f64 / self.total as f64
    }

    /// Exact count of types whose root color lies in the given set.
    pub fn count_root_colors(&self, colors: &[usize]) -> u64 {
        self.entries
            .values()
            .filter(|obs| obs.root_color.is_some_and(|c| colors.contains(&c)))
            .map(|obs| obs.count)
            .sum()
    }
}

/// Builds the `(beta, r)`-statistic of `g`.
pub fn ball_statistic(
    g: &LabeledMultigraph,
    beta: Option<&VertexColoring>,
    r: usize,
    mode: SampleMode,
) -> Result<BallStatistic, StatsError> {
    let n = g.num_vertices();
    if let Some(c) = beta {
        if c.values().len() != n {
            return Err(StatsError::LengthMismatch {
                got: c.values().len(),
                expected: n,
            });
        }
    }
    let colors = beta.map(|c| c.values());
    let roots: Vec<usize> = match mode {
        SampleMode::Exact => (0..n).collect(),
        SampleMode::Sampled { trials, seed } => {
            if trials == 0 {
                return Err(StatsError::NoTrials);
            }
            if n == 0 {
                return Err(StatsError::EmptyGraph);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..trials).map(|_| rng.random_range(0..n)).collect()
        }
    };
    // Canonicalization dominates; run it in parallel, then merge in root
    // order so the representative choice is deterministic.
    let observed: Vec<(String, Option<usize>, RootedBall)> = roots
        .par_iter()
        .map(|&v| {
            let ball = g
                .rooted_ball(v, r, colors)
                .expect("roots are in range by construction");
            let code = canonical_code(&ball);
            let root_color = ball.root_color();
            (code, root_color, ball)
        })
        .collect();
    let mut entries: BTreeMap<String, BallObs> = BTreeMap::new();
    for (code, root_color, ball) in observed {
        let obs = entries.entry(code).or_insert_with(|| BallObs {
            count: 0,
            probability: 0.0,
            root_color,
            rep: Some(ball),
        });
        obs.count += 1;
    }
    let total = roots.len() as u64;
    for obs in entries.values_mut() {
        obs.probability = obs.count as f64 / total as f64;
    }
    Ok(BallStatistic {
        r,
        palette: beta.map(|c| c.num_colors()),
        mode,
        total,
        entries,
    })
}

/// The point-mass statistic concentrated on one rooted ball type, used as a
/// comparison target (e.g. the regular tree ball of
/// [`tree_ball_reference`]).
pub fn dirac_statistic(ball: &RootedBall, palette: Option<usize>) -> BallStatistic {
    let mut entries = BTreeMap::new();
    entries.insert(
        canonical_code(ball),
        BallObs {
            count: 1,
            probability: 1.0,
            root_color: ball.root_color(),
            rep: Some(ball.clone()),
        },
    );
    BallStatistic {
        r: ball.depth,
        palette,
        mode: SampleMode::Exact,
        total: 1,
        entries,
    }
}

/// Total variation distance between two ball statistics over the union of
/// their supports.
pub fn tv_distance(a: &BallStatistic, b: &BallStatistic) -> Result<f64, StatsError> {
    if a.r != b.r || a.palette.is_some() != b.palette.is_some() {
        return Err(StatsError::Incomparable(a.r, b.r));
    }
    let mut keys: Vec<&String> = a.entries.keys().chain(b.entries.keys()).collect();
    keys.sort();
    keys.dedup();
    let sum: f64 = keys
        .into_iter()
        .map(|k| (a.probability(k) - b.probability(k)).abs())
        .sum();
    Ok(sum / 2.0)
}

/// The radius-`r` ball of the infinite `d`-regular tree: the root has `d`
/// children, every other internal vertex `d - 1`. Optionally colored with
/// one constant color.
pub fn tree_ball_reference(d: usize, r: usize, beta_const: Option<usize>) -> RootedBall {
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1usize;
    for depth in 0..r {
        let mut next = Vec::new();
        for &v in &frontier {
            let children = if depth == 0 { d } else { d - 1 };
            for _ in 0..children {
                edges.push((v, next_id, 0));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    let graph = LabeledMultigraph::new(next_id, edges).expect("tree edges are well-formed");
    let colors = beta_const.map(|c| vec![c; next_id]);
    graph
        .rooted_ball(0, r, colors.as_deref())
        .expect("root 0 exists")
}

/// Cell indices used by [`encode_subsets_as_assignment`].
pub const CELL_B_ONLY: usize = 0;
pub const CELL_BP_ONLY: usize = 1;
pub const CELL_BOTH: usize = 2;
pub const CELL_NEITHER: usize = 3;

/// Encodes a pair of vertex subsets as a 4-color assignment recording, for
/// each vertex, which cells of the Venn diagram it occupies.
pub fn encode_subsets_as_assignment(
    num_vertices: usize,
    b: &[usize],
    bp: &[usize],
) -> Result<VertexColoring, StatsError> {
    let mut in_b = vec![false; num_vertices];
    let mut in_bp = vec![false; num_vertices];
    for (set, flags) in [(b, &mut in_b), (bp, &mut in_bp)] {
        for &v in set {
            if v >= num_vertices {
                return Err(StatsError::SubsetOutOfRange(v));
            }
            flags[v] = true;
        }
    }
    let values: Vec<usize> = (0..num_vertices)
        .map(|v| match (in_b[v], in_bp[v]) {
            (true, false) => CELL_B_ONLY,
            (false, true) => CELL_BP_ONLY,
            (true, true) => CELL_BOTH,
            (false, false) => CELL_NEITHER,
        })
        .collect();
    Ok(VertexColoring::new(values, 4).expect("cell values are below 4"))
}

/// Exact bookkeeping for the subset-encoding identity: root-color masses of
/// the exact statistic must reproduce the subset sizes as integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDensityReport {
    /// Exact root counts per cell, indexed by the `CELL_*` constants.
    pub cell_counts: [u64; 4],
    pub b_size: u64,
    pub bp_size: u64,
    pub b_ok: bool,
    pub bp_ok: bool,
    pub total_ok: bool,
}

impl CellDensityReport {
    pub fn pass(&self) -> bool {
        self.b_ok && self.bp_ok && self.total_ok
    }
}

/// Two counts of `|{x in B : some label-j edge joins x to B'}|`: directly
/// from the graph, and through the radius-1 subset-encoded statistic. The
/// witness predicate is isomorphism-invariant, so both counts must agree
/// exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWitnessReport {
    pub direct: u64,
    pub from_statistic: u64,
    pub agree: bool,
}

pub fn edge_witness_check(
    g: &LabeledMultigraph,
    b: &[usize],
    bp: &[usize],
    label: usize,
) -> Result<EdgeWitnessReport, StatsError> {
    let beta = encode_subsets_as_assignment(g.num_vertices(), b, bp)?;
    let cells = beta.values();
    let in_b = |v: usize| matches!(cells[v], CELL_B_ONLY | CELL_BOTH);
    let in_bp = |v: usize| matches!(cells[v], CELL_BP_ONLY | CELL_BOTH);
    let direct = (0..g.num_vertices())
        .filter(|&x| {
            in_b(x)
                && g.incidences(x)
                    .any(|(y, e)| g.edges()[e].label == label && in_bp(y))
        })
        .count() as u64;
    let stat = ball_statistic(g, Some(&beta), 1, SampleMode::Exact)?;
    let from_statistic = stat.count_where(|ball| {
        let colors = ball
            .vertex_colors
            .as_ref()
            .expect("statistic was computed with colors");
        matches!(colors[ball.root], CELL_B_ONLY | CELL_BOTH)
            && ball.graph.incidences(ball.root).any(|(y, e)| {
                ball.graph.edges()[e].label == label
                    && matches!(colors[y], CELL_BP_ONLY | CELL_BOTH)
            })
    });
    Ok(EdgeWitnessReport {
        direct,
        from_statistic,
        agree: direct == from_statistic,
    })
}

/// Runs the exact `(beta, r)`-statistic with `beta` the subset encoding and
/// checks the cell-density identities exactly.
pub fn cell_density_check(
    g: &LabeledMultigraph,
    b: &[usize],
    bp: &[usize],
    r: usize,
) -> Result<CellDensityReport, StatsError> {
    let beta = encode_subsets_as_assignment(g.num_vertices(), b, bp)?;
    let stat = ball_statistic(g, Some(&beta), r, SampleMode::Exact)?;
    let mut cell_counts = [0u64; 4];
    for obs in stat.entries.values() {
        let c = obs.root_color.expect("statistic was computed with colors");
        cell_counts[c] += obs.count;
    }
    let dedup_size = |s: &[usize]| {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        s.len() as u64
    };
    let b_size = dedup_size(b);
    let bp_size = dedup_size(bp);
    Ok(CellDensityReport {
        cell_counts,
        b_size,
        bp_size,
        b_ok: cell_counts[CELL_B_ONLY] + cell_counts[CELL_BOTH] == b_size,
        bp_ok: cell_counts[CELL_BP_ONLY] + cell_counts[CELL_BOTH] == bp_size,
        total_ok: cell_counts.iter().sum::<u64>() == g.num_vertices() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_code;
    use approx::assert_abs_diff_eq;

    fn heawood() -> LabeledMultigraph {
        // 3-regular, girth 6: the 14-cycle plus chords i -> i+5 from even i.
        let mut edges: Vec<(usize, usize, usize)> = (0..14).map(|i| (i, (i + 1) % 14, 0)).collect();
        for i in (0..14).step_by(2) {
            edges.push((i, (i + 5) % 14, 0));
        }
        LabeledMultigraph::new(14, edges).unwrap()
    }

    #[test]
    fn vertex_transitive_graph_has_one_ball_type() {
        let stat = ball_statistic(&LabeledMultigraph::cycle(6), None, 1, SampleMode::Exact).unwrap();
        assert_eq!(stat.entries.len(), 1);
        assert_eq!(stat.total, 6);
        assert_eq!(stat.entries.values().next().unwrap().count, 6);
    }

    #[test]
    fn path_distinguishes_endpoints_from_interior() {
        let path = LabeledMultigraph::new(5, (0..4).map(|i| (i, i + 1, 0))).unwrap();
        let stat = ball_statistic(&path, None, 1, SampleMode::Exact).unwrap();
        assert_eq!(stat.entries.len(), 2);
        let counts: Vec<u64> = stat.entries.values().map(|o| o.count).collect();
        assert_eq!(counts.iter().sum::<u64>(), 5);
        assert!(counts.contains(&2) && counts.contains(&3));
        // Predicate query through representatives: mass of degree-1 roots.
        let endpoint_mass = stat.mass_where(|ball| ball.graph.degree(0) == 1);
        assert_abs_diff_eq!(endpoint_mass, 0.4, epsilon = 1e-12);
    }

    #[test]
    fn cycles_are_locally_indistinguishable_at_small_radius() {
        let c5 = ball_statistic(&LabeledMultigraph::cycle(5), None, 1, SampleMode::Exact).unwrap();
        let c6 = ball_statistic(&LabeledMultigraph::cycle(6), None, 1, SampleMode::Exact).unwrap();
        assert_abs_diff_eq!(tv_distance(&c5, &c6).unwrap(), 0.0, epsilon = 1e-12);
        // At radius 2 the odd cycle closes up and the types diverge.
        let c5 = ball_statistic(&LabeledMultigraph::cycle(5), None, 2, SampleMode::Exact).unwrap();
        let c6 = ball_statistic(&LabeledMultigraph::cycle(6), None, 2, SampleMode::Exact).unwrap();
        assert_abs_diff_eq!(tv_distance(&c5, &c6).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn incomparable_statistics_are_rejected() {
        let g = LabeledMultigraph::cycle(4);
        let a = ball_statistic(&g, None, 1, SampleMode::Exact).unwrap();
        let b = ball_statistic(&g, None, 2, SampleMode::Exact).unwrap();
        assert!(matches!(tv_distance(&a, &b), Err(StatsError::Incomparable(1, 2))));
        let beta = VertexColoring::new(vec![0, 1, 0, 1], 2).unwrap();
        let c = ball_statistic(&g, Some(&beta), 1, SampleMode::Exact).unwrap();
        assert!(matches!(tv_distance(&a, &c), Err(StatsError::Incomparable(_, _))));
    }

    #[test]
    fn alternating_hexagon_splits_in_half() {
        let g = LabeledMultigraph::cycle(6);
        let beta = VertexColoring::new(vec![0, 1, 0, 1, 0, 1], 2).unwrap();
        let stat = ball_statistic(&g, Some(&beta), 1, SampleMode::Exact).unwrap();
        assert_eq!(stat.entries.len(), 2);
        for obs in stat.entries.values() {
            assert_eq!(obs.count, 3);
            assert_abs_diff_eq!(obs.probability, 0.5, epsilon = 1e-12);
        }
        // Counts sum exactly; stored probabilities sum within 1e-12.
        assert_eq!(stat.entries.values().map(|o| o.count).sum::<u64>(), stat.total);
        let mass: f64 = stat.entries.values().map(|o| o.probability).sum();
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn radius_zero_constant_beta_is_a_point_mass() {
        let g = LabeledMultigraph::cycle(6);
        let beta = VertexColoring::new(vec![1; 6], 2).unwrap();
        let stat = ball_statistic(&g, Some(&beta), 0, SampleMode::Exact).unwrap();
        assert_eq!(stat.entries.len(), 1);
        assert_abs_diff_eq!(
            stat.entries.values().next().unwrap().probability,
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn dirac_statistic_measures_tree_mass() {
        let reference = tree_ball_reference(2, 2, None);
        let dirac = dirac_statistic(&reference, None);
        assert_eq!(dirac.total, 1);
        // C10 at radius 2 is locally a path: tv distance 0.
        let stat =
            ball_statistic(&LabeledMultigraph::cycle(10), None, 2, SampleMode::Exact).unwrap();
        assert_abs_diff_eq!(tv_distance(&stat, &dirac).unwrap(), 0.0, epsilon = 1e-12);
        // C5 at radius 2 closes up: tv distance 1.
        let stat =
            ball_statistic(&LabeledMultigraph::cycle(5), None, 2, SampleMode::Exact).unwrap();
        assert_abs_diff_eq!(tv_distance(&stat, &dirac).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn edge_witness_counts_agree_with_direct_enumeration() {
        // Path 0 -(label 0)- 1 -(label 1)- 2.
        let g = LabeledMultigraph::new(3, [(0, 1, 0), (1, 2, 1)]).unwrap();
        let report = edge_witness_check(&g, &[0, 1], &[2], 1).unwrap();
        assert_eq!(report.direct, 1);
        assert!(report.agree);
        let report = edge_witness_check(&g, &[0, 1], &[2], 0).unwrap();
        assert_eq!(report.direct, 0);
        assert!(report.agree);
        // A labeled graph with overlapping sets.
        let h = heawood();
        let mut labeled: Vec<(usize, usize, usize)> = Vec::new();
        for (i, e) in h.edges().iter().enumerate() {
            labeled.push((e.u, e.v, i % 3));
        }
        let h = LabeledMultigraph::new(14, labeled).unwrap();
        for label in 0..3 {
            let report = edge_witness_check(&h, &[0, 1, 2, 3, 4, 5], &[4, 5, 6, 7], label).unwrap();
            assert!(report.agree, "label {label}: {report:?}");
        }
    }

    #[test]
    fn colors_split_ball_types() {
        let g = LabeledMultigraph::cycle(4);
        let alternating = VertexColoring::new(vec![0, 1, 0, 1], 2).unwrap();
        let constant = VertexColoring::new(vec![0, 0, 0, 0], 2).unwrap();
        let a = ball_statistic(&g, Some(&alternating), 1, SampleMode::Exact).unwrap();
        let c = ball_statistic(&g, Some(&constant), 1, SampleMode::Exact).unwrap();
        assert_eq!(a.entries.len(), 2);
        assert_eq!(c.entries.len(), 1);
        assert_abs_diff_eq!(tv_distance(&a, &c).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tree_reference_matches_locally_treelike_graphs() {
        // Radius-3 balls of a long cycle are paths: the 2-regular tree ball.
        let cycle_ball = LabeledMultigraph::cycle(20).rooted_ball(0, 3, None).unwrap();
        let reference = tree_ball_reference(2, 3, None);
        assert_eq!(canonical_code(&cycle_ball), canonical_code(&reference));
        // The Heawood graph has girth 6, so radius-2 balls are 3-regular
        // tree balls on 10 vertices.
        let heawood_ball = heawood().rooted_ball(0, 2, None).unwrap();
        let reference = tree_ball_reference(3, 2, None);
        assert_eq!(reference.graph.num_vertices(), 10);
        assert_eq!(canonical_code(&heawood_ball), canonical_code(&reference));
        // Colored references carry the constant color through.
        let colored = tree_ball_reference(3, 1, Some(2));
        assert_eq!(colored.root_color(), Some(2));
    }

    #[test]
    fn sampled_mode_is_deterministic_and_converges_on_transitive_graphs() {
        let g = heawood();
        let mode = SampleMode::Sampled { trials: 64, seed: 11 };
        let a = ball_statistic(&g, None, 2, mode).unwrap();
        let b = ball_statistic(&g, None, 2, mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total, 64);
        // Vertex-transitive: the sampled statistic is exactly the one-point
        // exact statistic regardless of which roots were drawn.
        let exact = ball_statistic(&g, None, 2, SampleMode::Exact).unwrap();
        assert_abs_diff_eq!(tv_distance(&a, &exact).unwrap(), 0.0, epsilon = 1e-12);
        assert!(matches!(
            ball_statistic(&g, None, 1, SampleMode::Sampled { trials: 0, seed: 0 }),
            Err(StatsError::NoTrials)
        ));
    }

    #[test]
    fn subset_encoding_cells() {
        let c = encode_subsets_as_assignment(5, &[0, 1], &[1, 2]).unwrap();
        assert_eq!(
            c.values(),
            &[CELL_B_ONLY, CELL_BOTH, CELL_BP_ONLY, CELL_NEITHER, CELL_NEITHER]
        );
        assert_eq!(c.num_colors(), 4);
        assert!(matches!(
            encode_subsets_as_assignment(3, &[3], &[]),
            Err(StatsError::SubsetOutOfRange(3))
        ));
    }

    #[test]
    fn cell_density_identity_is_exact() {
        let g = LabeledMultigraph::new(
            10,
            [
                (0, 1, 0), (1, 2, 0), (2, 3, 0), (3, 4, 0), (4, 0, 0),
                (5, 7, 0), (6, 8, 0), (7, 9, 0), (8, 0, 0), (9, 1, 0),
                (0, 5, 0), (1, 6, 0), (2, 7, 0), (3, 8, 0), (4, 9, 0),
            ],
        )
        .unwrap();
        let b: Vec<usize> = (0..5).collect();
        let bp: Vec<usize> = (2..7).collect();
        let report = cell_density_check(&g, &b, &bp, 1).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.cell_counts.iter().sum::<u64>(), 10);
        assert_eq!(report.cell_counts[CELL_BOTH], 3);
        // Duplicate vertices in the input sets must not double count.
        let report = cell_density_check(&g, &[0, 0, 1], &[1, 1], 2).unwrap();
        assert!(report.pass());
        assert_eq!(report.b_size, 2);
        assert_eq!(report.bp_size, 1);
    }

    #[test]
    fn serde_drops_representatives_but_keeps_counts() {
        let g = LabeledMultigraph::cycle(5);
        let stat = ball_statistic(&g, None, 1, SampleMode::Exact).unwrap();
        let json = serde_json::to_string(&stat).unwrap();
        let back: BallStatistic = serde_json::from_str(&json).unwrap();
        assert_eq!(back.total, stat.total);
        assert_eq!(back.entries.len(), stat.entries.len());
        for obs in back.entries.values() {
            assert!(obs.rep.is_none());
        }
        assert_abs_diff_eq!(tv_distance(&stat, &back).unwrap(), 0.0, epsilon = 1e-12);
    }
}
