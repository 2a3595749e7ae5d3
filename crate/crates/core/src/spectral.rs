//! Second eigenvalues, mixing checks, and expander certificates.
//!
//! For a `d`-regular multigraph, `lambda` is the second largest *absolute*
//! eigenvalue of the adjacency matrix: after removing one copy of the Perron
//! value `d`, take `max(|second largest|, |smallest|)`. Bipartite graphs
//! therefore report `lambda = d`, and so do disconnected ones (the `d`
//! eigenvalue has extra multiplicity); a connectivity flag accompanies every
//! report.
//!
//! Two solver routes back each other up: graphs up to a size threshold go
//! through a dense symmetric eigendecomposition, larger ones through Lanczos
//! with full reorthogonalization, run on the orthogonal complement of the
//! all-ones vector so both ends of the non-Perron spectrum converge.
//! Residual norms are measured, reported, and subtracted as slack wherever a
//! certificate threshold is applied. Circulant graphs have an exact
//! closed-form spectrum which serves as an independent oracle for both routes.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::LabeledMultigraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("graph is empty")]
    EmptyGraph,
    #[error("graph is not regular")]
    NotRegular,
    #[error("Lanczos did not converge within {iters} iterations")]
    NoConvergence { iters: usize },
    #[error("circulant offset {0} is zero or out of range")]
    BadOffset(usize),
    #[error("connection set is not symmetric: offset {0} and its complement have different multiplicities")]
    AsymmetricConnectionSet(usize),
    #[error("subset contains vertex {0} out of range")]
    SubsetOutOfRange(usize),
    #[error("graph has no labeled edges")]
    NoLabels,
    #[error("label classes have unequal or irregular degrees: {0:?}")]
    UnequalLabelDegrees(Vec<Option<usize>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

/// Result of a second-eigenvalue computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub degree: usize,
    pub lambda: f64,
    /// Measured residual bound `||A q - theta q||` for the eigenpairs behind
    /// `lambda`; certificates subtract this.
    pub residual: f64,
    pub method: Method,
    pub connected: bool,
}

/// Relative tolerance used when none is given (scaled by the degree).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Graphs up to this size use the dense eigensolver.
const DENSE_THRESHOLD: usize = 512;

const LANCZOS_MAX_ITERS: usize = 260;

/// Friedman's asymptotic bound `2*sqrt(d-1) + 1`, the yardstick for how
/// close random regular graphs come to the optimum.
pub fn friedman_bound(d: usize) -> f64 {
    2.0 * ((d - 1) as f64).sqrt() + 1.0
}

/// Second largest absolute eigenvalue of a regular multigraph.
pub fn lambda2(g: &LabeledMultigraph, tol: Option<f64>) -> Result<SpectralReport, SpectralError> {
    let n = g.num_vertices();
    if n == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    let d = g.regular_degree().ok_or(SpectralError::NotRegular)?;
    let connected = g.is_connected();
    if n <= DENSE_THRESHOLD {
        let (lambda, residual) = dense_lambda(g, d);
        Ok(SpectralReport {
            degree: d,
            lambda,
            residual,
            method: Method::Dense,
            connected,
        })
    } else {
        let tol = tol.unwrap_or(DEFAULT_TOL);
        let (lambda, residual) = lanczos_lambda(g, d, tol)?;
        Ok(SpectralReport {
            degree: d,
            lambda,
            residual,
            method: Method::Iterative,
            connected,
        })
    }
}

fn adjacency_matrix(g: &LabeledMultigraph) -> DMatrix<f64> {
    let n = g.num_vertices();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        m[(e.u, e.v)] += 1.0;
        m[(e.v, e.u)] += 1.0;
    }
    m
}

fn dense_lambda(g: &LabeledMultigraph, d: usize) -> (f64, f64) {
    let n = g.num_vertices();
    let a = adjacency_matrix(g);
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    // order[0] is the Perron value ~ d; lambda comes from order[1] (second
    // largest) or order[n-1] (most negative).
    if n == 1 {
        return (0.0, 0.0);
    }
    let residual_of = |idx: usize| {
        let q = eig.eigenvectors.column(idx);
        (&a * q - q * eig.eigenvalues[idx]).norm()
    };
    let second = order[1];
    let bottom = order[n - 1];
    let lambda = eig.eigenvalues[second]
        .abs()
        .max(eig.eigenvalues[bottom].abs());
    let residual = residual_of(second).max(residual_of(bottom)) + f64::EPSILON * d as f64;
    (lambda, residual)
}

/// Lambda extraction shared with the closed-form circulant oracle: drop one
/// copy of the largest eigenvalue, return the largest remaining magnitude.
pub fn lambda_from_spectrum(eigs: &[f64]) -> f64 {
    if eigs.len() <= 1 {
        return 0.0;
    }
    let mut sorted = eigs.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted[1].abs().max(sorted[sorted.len() - 1].abs())
}

struct SparseAdj {
    /// CSR-style: neighbor lists with multiplicity.
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl SparseAdj {
    fn build(g: &LabeledMultigraph) -> Self {
        let n = g.num_vertices();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * g.num_edges());
        offsets.push(0);
        for v in 0..n {
            targets.extend(g.incidences(v).map(|(y, _)| y));
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (v, y_v) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &t in &self.targets[self.offsets[v]..self.offsets[v + 1]] {
                acc += x[t];
            }
            *y_v = acc;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Removes the component along the all-ones vector (the known Perron
/// eigenvector of a connected regular graph).
fn deflate_ones(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in v.iter_mut() {
        *x -= mean;
    }
}

/// Lanczos with full reorthogonalization on the complement of the all-ones
/// vector. Converges at both spectrum ends; returns
/// `max(|top Ritz|, |bottom Ritz|)` with the larger of the two measured
/// residual bounds.
fn lanczos_lambda(
    g: &LabeledMultigraph,
    d: usize,
    tol: f64,
) -> Result<(f64, f64), SpectralError> {
    let n = g.num_vertices();
    let adj = SparseAdj::build(g);
    let target = tol * (d as f64).max(1.0);

    let mut rng = ChaCha8Rng::seed_from_u64(0x00C0_FFEE);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    deflate_ones(&mut v);
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let max_iters = LANCZOS_MAX_ITERS.min(n.saturating_sub(1)).max(1);

    for j in 0..max_iters {
        adj.matvec(&basis[j], &mut w);
        deflate_ones(&mut w);
        let alpha = dot(&w, &basis[j]);
        alphas.push(alpha);
        // Two passes of reorthogonalization against the whole basis.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                if c != 0.0 {
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= c * bi;
                    }
                }
            }
        }
        let beta = norm(&w);
        let exhausted = beta < 1e-13 * d as f64;
        let check = exhausted || j + 1 == max_iters || (j + 1) % 10 == 0;
        if check {
            if let Some(result) = ritz_extremes(&alphas, &betas, beta, target, exhausted) {
                return Ok(result);
            }
        }
        if exhausted {
            // Krylov space closed without meeting the tolerance; the Ritz
            // values are exact for the invariant subspace, so this only
            // happens when the subspace is degenerate.
            return Err(SpectralError::NoConvergence { iters: j + 1 });
        }
        betas.push(beta);
        let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
        basis.push(next);
    }
    Err(SpectralError::NoConvergence { iters: max_iters })
}

/// Extracts top and bottom Ritz pairs from the tridiagonal matrix; returns
/// the lambda/residual pair once both residual bounds meet the target.
fn ritz_extremes(
    alphas: &[f64],
    betas: &[f64],
    beta_last: f64,
    target: f64,
    exhausted: bool,
) -> Option<(f64, f64)> {
    let k = alphas.len();
    let t = DMatrix::<f64>::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if j + 1 == i || i + 1 == j {
            betas[i.min(j)]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut top = (f64::NEG_INFINITY, 0usize);
    let mut bottom = (f64::INFINITY, 0usize);
    for i in 0..k {
        let val = eig.eigenvalues[i];
        if val > top.0 {
            top = (val, i);
        }
        if val < bottom.0 {
            bottom = (val, i);
        }
    }
    // Residual bound for a Ritz pair: beta_k * |last component of s|.
    let res_of = |idx: usize| beta_last * eig.eigenvectors[(k - 1, idx)].abs();
    let (res_top, res_bottom) = (res_of(top.1), res_of(bottom.1));
    if exhausted || (res_top <= target && res_bottom <= target) {
        let lambda = top.0.abs().max(bottom.0.abs());
        Some((lambda, res_top.max(res_bottom).max(f64::EPSILON)))
    } else {
        None
    }
}

/// Exact adjacency spectrum of the circulant graph on `Z_l` with the given
/// symmetric connection multiset: `lambda_j = sum_s cos(2*pi*j*s/l)`.
pub fn circulant_spectrum(l: usize, offsets: &[usize]) -> Result<Vec<f64>, SpectralError> {
    if l == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    let counts = offset_counts(l, offsets)?;
    let tau = std::f64::consts::TAU;
    Ok((0..l)
        .map(|j| {
            counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(s, &c)| c as f64 * (tau * j as f64 * s as f64 / l as f64).cos())
                .sum()
        })
        .collect())
}

/// The circulant graph itself (label 0): vertices `Z_l`, with
/// `count(j - i mod l)` parallel edges between `i` and `j`.
pub fn circulant_graph(l: usize, offsets: &[usize]) -> Result<LabeledMultigraph, SpectralError> {
    let counts = offset_counts(l, offsets)?;
    let mut edges = Vec::new();
    for i in 0..l {
        for j in i + 1..l {
            for _ in 0..counts[j - i] {
                edges.push((i, j, 0));
            }
        }
    }
    Ok(LabeledMultigraph::new(l, edges).unwrap())
}

fn offset_counts(l: usize, offsets: &[usize]) -> Result<Vec<usize>, SpectralError> {
    let mut counts = vec![0usize; l];
    for &s in offsets {
        if s == 0 || s >= l {
            return Err(SpectralError::BadOffset(s));
        }
        counts[s] += 1;
    }
    for s in 1..l {
        if counts[s] != counts[l - s] {
            return Err(SpectralError::AsymmetricConnectionSet(s));
        }
    }
    Ok(counts)
}

/// Edges between two vertex sets, with multiplicity; an edge with both
/// endpoints in the intersection counts twice (once per direction).
pub fn edges_between(
    g: &LabeledMultigraph,
    b: &[usize],
    bp: &[usize],
) -> Result<u64, SpectralError> {
    let n = g.num_vertices();
    let mut in_b = vec![false; n];
    let mut in_bp = vec![false; n];
    for (&set, flags) in [(&b, &mut in_b), (&bp, &mut in_bp)] {
        for &v in set.iter() {
            if v >= n {
                return Err(SpectralError::SubsetOutOfRange(v));
            }
            flags[v] = true;
        }
    }
    let mut count = 0u64;
    for e in g.edges() {
        if in_b[e.u] && in_bp[e.v] {
            count += 1;
        }
        if in_b[e.v] && in_bp[e.u] {
            count += 1;
        }
    }
    Ok(count)
}

/// One instance of the expander mixing inequality
/// `|e(B,B') - d|B||B'|/l| <= lambda*sqrt(|B||B'|)`, checked with the given
/// eigenvalue estimate and its residual as numerical slack.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmlRecord {
    pub b_size: usize,
    pub bp_size: usize,
    pub edges: u64,
    pub expected: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

pub fn eml_check(
    g: &LabeledMultigraph,
    b: &[usize],
    bp: &[usize],
    lambda: f64,
    residual: f64,
) -> Result<EmlRecord, SpectralError> {
    let d = g.regular_degree().ok_or(SpectralError::NotRegular)?;
    let l = g.num_vertices();
    if l == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    let mut b: Vec<usize> = b.to_vec();
    let mut bp: Vec<usize> = bp.to_vec();
    for s in [&mut b, &mut bp] {
        s.sort_unstable();
        s.dedup();
    }
    let e = edges_between(g, &b, &bp)?;
    let expected = d as f64 * b.len() as f64 * bp.len() as f64 / l as f64;
    let lhs = (e as f64 - expected).abs();
    let scale = (b.len() as f64 * bp.len() as f64).sqrt();
    let rhs = lambda * scale;
    let slack = residual * scale;
    Ok(EmlRecord {
        b_size: b.len(),
        bp_size: bp.len(),
        edges: e,
        expected,
        lhs,
        rhs,
        slack,
        pass: lhs <= rhs + slack,
    })
}

/// Exact rational `d*l / ((n+1)^2 (n+2))`, serialized as numerator and
/// denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub numer: u64,
    pub denom: u64,
}

impl Rational {
    pub fn to_f64(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }

    pub fn ratio(self) -> Ratio<u64> {
        Ratio::new(self.numer, self.denom)
    }
}

impl From<Ratio<u64>> for Rational {
    fn from(r: Ratio<u64>) -> Self {
        Rational {
            numer: *r.numer(),
            denom: *r.denom(),
        }
    }
}

/// The guaranteed lower bound on `e(B, B')` per label class once the
/// certificate holds, for sets larger than `l/(n+1)`.
pub fn cor_bound(l: usize, d: usize, n: usize) -> Ratio<u64> {
    Ratio::new(
        d as u64 * l as u64,
        (n as u64 + 1) * (n as u64 + 1) * (n as u64 + 2),
    )
}

/// Per-label spectral data inside a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelSpectral {
    pub label: usize,
    pub lambda: f64,
    pub residual: f64,
    pub connected: bool,
}

/// Certificate that every label class of a labeled union is a strong enough
/// expander for the `n`-colouring argument: `lambda <= d/(n+2)` with the
/// residual subtracted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingCertificate {
    pub n: usize,
    pub l: usize,
    pub d: usize,
    pub k: usize,
    pub threshold: f64,
    pub per_label: Vec<LabelSpectral>,
    pub holds: bool,
    pub edge_bound: Rational,
}

/// Computes the certificate for all label classes `0..k`. The classes must
/// all be regular of one common degree; eigensolves run in parallel.
pub fn mixing_certificate(
    g: &LabeledMultigraph,
    n: usize,
    tol: Option<f64>,
) -> Result<MixingCertificate, SpectralError> {
    let k = g.label_count();
    if k == 0 {
        return Err(SpectralError::NoLabels);
    }
    let classes: Vec<LabeledMultigraph> = (0..k).map(|j| g.label_class(j)).collect();
    let degrees: Vec<Option<usize>> = classes.iter().map(|c| c.regular_degree()).collect();
    let d = match degrees[0] {
        Some(d) if degrees.iter().all(|&x| x == Some(d)) => d,
        _ => return Err(SpectralError::UnequalLabelDegrees(degrees)),
    };
    let reports: Vec<SpectralReport> = classes
        .par_iter()
        .map(|c| lambda2(c, tol))
        .collect::<Result<_, _>>()?;
    let threshold = d as f64 / (n as f64 + 2.0);
    let per_label: Vec<LabelSpectral> = reports
        .iter()
        .enumerate()
        .map(|(j, r)| LabelSpectral {
            label: j,
            lambda: r.lambda,
            residual: r.residual,
            connected: r.connected,
        })
        .collect();
    let holds = per_label
        .iter()
        .all(|s| s.lambda <= threshold - s.residual);
    Ok(MixingCertificate {
        n,
        l: g.num_vertices(),
        d,
        k,
        threshold,
        per_label,
        holds,
        edge_bound: cor_bound(g.num_vertices(), d, n).into(),
    })
}
