//! Finite combinatorial constructions for chromatic lower bounds.
//!
//! The crate builds and machine-checks the small, finite objects that appear
//! in expander-based colouring arguments:
//!
//! * [`graph`] — edge-labeled multigraphs with girth, acyclicity, rooted
//!   balls, and exact canonical codes for small balls;
//! * [`gadgets`] — the colouring-forcing gadgets `F(n, d)` whose proper
//!   `n`-colourings are constant on a distinguished tuple;
//! * [`shift`] — finite fragments of the shift graph on subsets of
//!   `{0..m-1}` and the bounded-degree companion graph `H'` obtained by
//!   installing a gadget per vertex;
//! * [`rrg`] — seeded random regular multigraphs (unions of uniform perfect
//!   matchings) and one-factorizations of complete graphs;
//! * [`spectral`] — second-eigenvalue computation (dense and Lanczos),
//!   closed-form circulant spectra, expander mixing checks, and mixing
//!   certificates;
//! * [`product`] — the edge-labeled product that pairs an edge-coloured left
//!   graph with per-label right graphs, plus girth preservation and majority
//!   extraction of colourings;
//! * [`chromatic`] — an exact colouring solver (DSATUR branch and bound),
//!   greedy bounds, and exhaustive enumeration of proper colourings;
//! * [`localstats`] — distributions of canonical codes of rooted `r`-balls,
//!   total-variation distance, and regular-tree reference codes.
//!
//! Everything is deterministic: randomized constructions take explicit
//! seeds, and serialization uses canonical orderings so that identical
//! inputs produce byte-identical artifacts.

pub mod canon;
pub mod chromatic;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod localstats;
pub mod product;
pub mod rrg;
pub mod shift;
pub mod spectral;

pub use chromatic::{ChromaticBracket, Decision, EdgeColoring, VertexColoring};
pub use gadgets::Gadget;
pub use graph::{Girth, LabeledMultigraph, RootedBall};
pub use localstats::BallStatistic;
pub use product::ProductGraph;
pub use rrg::SampleSpec;
pub use shift::{HPrime, ShiftFragment};
pub use spectral::{MixingCertificate, SpectralReport};
