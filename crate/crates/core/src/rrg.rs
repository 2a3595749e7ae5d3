//! Seeded random regular multigraphs and one-factorizations.
//!
//! The sampling model is the union of independent uniform perfect matchings:
//! a matching on `l` vertices (`l` even) is drawn by shuffling the vertices
//! with Fisher–Yates and pairing consecutive entries, which is exactly
//! uniform over perfect matchings. A `d`-regular sample takes `d` such
//! matchings; a labeled union takes `k` independent `d`-regular samples and
//! tags the `j`-th one's edges with label `j`.
//!
//! Randomness is fully reproducible: everything derives from a `ChaCha8`
//! generator seeded with a caller-provided 64-bit seed, and the matching
//! with index `t` of sample `j` uses stream `j*d + t` of that seed. Distinct
//! matchings therefore never share a stream, and any single matching can be
//! re-derived in isolation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::LabeledMultigraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RrgError {
    #[error("matchings need an even number of vertices, got {0}")]
    OddVertexCount(usize),
    #[error("need at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("need at least 1 matching per sample, got d={0}")]
    DegreeTooSmall(usize),
    #[error("need at least 1 sample, got k={0}")]
    TooFewSamples(usize),
    #[error("K_{l} has {avail} matchings, cannot take {k} groups of {per_group}")]
    NotEnoughMatchings {
        l: usize,
        avail: usize,
        k: usize,
        per_group: usize,
    },
}

/// Parameters of a labeled union sample: `k` independent `d`-regular graphs
/// on `l` vertices from the given seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub l: usize,
    pub d: usize,
    pub k: usize,
    pub seed: u64,
}

/// The generator for matching `t` of sample `j`: ChaCha8 on the given seed,
/// stream `j*d + t`.
pub fn matching_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One uniform perfect matching on `0..l`, as a list of `l/2` pairs.
pub fn sample_matching(l: usize, rng: &mut impl Rng) -> Result<Vec<(usize, usize)>, RrgError> {
    if l < 2 {
        return Err(RrgError::TooFewVertices(l));
    }
    if l % 2 != 0 {
        return Err(RrgError::OddVertexCount(l));
    }
    let mut perm: Vec<usize> = (0..l).collect();
    perm.shuffle(rng);
    Ok(perm.chunks_exact(2).map(|c| (c[0], c[1])).collect())
}

/// A `d`-regular multigraph: union of `d` uniform matchings (streams
/// `0..d`), all edges labeled 0. Parallel edges are kept.
pub fn sample_rrg(l: usize, d: usize, seed: u64) -> Result<LabeledMultigraph, RrgError> {
    sample_labeled_union(&SampleSpec { l, d, k: 1, seed })
}

/// The labeled union of `spec.k` independent `d`-regular samples; sample `j`
/// contributes its edges under label `j`.
pub fn sample_labeled_union(spec: &SampleSpec) -> Result<LabeledMultigraph, RrgError> {
    if spec.d < 1 {
        return Err(RrgError::DegreeTooSmall(spec.d));
    }
    if spec.k < 1 {
        return Err(RrgError::TooFewSamples(spec.k));
    }
    let mut edges = Vec::new();
    for j in 0..spec.k {
        for t in 0..spec.d {
            let mut rng = matching_rng(spec.seed, (j * spec.d + t) as u64);
            for (u, v) in sample_matching(spec.l, &mut rng)? {
                edges.push((u, v, j));
            }
        }
    }
    Ok(LabeledMultigraph::new(spec.l, edges).unwrap())
}

/// Round-robin one-factorization of `K_l` (`l` even): matching `r` pairs the
/// hub `l-1` with `r` and wraps the remaining vertices symmetrically around
/// the cycle `0..l-1`. Edges of matching `r` carry label `r`.
pub fn one_factorize_complete(l: usize) -> Result<LabeledMultigraph, RrgError> {
    if l < 2 {
        return Err(RrgError::TooFewVertices(l));
    }
    if l % 2 != 0 {
        return Err(RrgError::OddVertexCount(l));
    }
    let m = l - 1;
    let mut edges = Vec::new();
    for r in 0..m {
        edges.push((l - 1, r, r));
        for i in 1..l / 2 {
            let a = (r + i) % m;
            let b = (r + m - i) % m;
            edges.push((a, b, r));
        }
    }
    Ok(LabeledMultigraph::new(l, edges).unwrap())
}

/// Relabels the one-factorization of `K_l` into `k` groups of consecutive
/// matchings. With `per_group = Some(g)` the first `k*g` matchings are used
/// (surplus discarded) and every group is `g`-regular; with `None` all `l-1`
/// matchings are distributed into `k` consecutive blocks whose sizes differ
/// by at most one (the leading blocks take the extra matching).
pub fn one_factorize_grouped(
    l: usize,
    k: usize,
    per_group: Option<usize>,
) -> Result<LabeledMultigraph, RrgError> {
    if k < 1 {
        return Err(RrgError::TooFewSamples(k));
    }
    let full = one_factorize_complete(l)?;
    let avail = l - 1;
    let group_of: Vec<usize> = match per_group {
        Some(g) => {
            if g < 1 || k * g > avail {
                return Err(RrgError::NotEnoughMatchings {
                    l,
                    avail,
                    k,
                    per_group: g,
                });
            }
            (0..avail)
                .map(|r| if r < k * g { r / g } else { usize::MAX })
                .collect()
        }
        None => {
            let base = avail / k;
            let extra = avail % k;
            let mut out = Vec::with_capacity(avail);
            for (j, size) in (0..k)
                .map(|j| base + usize::from(j < extra))
                .enumerate()
            {
                out.extend(std::iter::repeat_n(j, size));
            }
            out
        }
    };
    Ok(LabeledMultigraph::new(
        l,
        full.edges()
            .iter()
            .filter(|e| group_of[e.label] != usize::MAX)
            .map(|e| (e.u, e.v, group_of[e.label])),
    )
    .unwrap())
}

/// Sorted uniform random `size`-subset of `0..l` drawn from the given RNG.
pub fn random_subset(l: usize, size: usize, rng: &mut impl Rng) -> Vec<usize> {
    assert!(size <= l, "subset size {size} exceeds ground set {l}");
    let mut v = rand::seq::index::sample(rng, l, size).into_vec();
    v.sort_unstable();
    v
}
