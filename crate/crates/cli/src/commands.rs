//! Subcommand definitions and dispatch.
//!
//! Handlers return `Ok(true)` when their checks pass (exit 0), `Ok(false)`
//! when an asserted property fails or a decision stays unknown (exit 1),
//! and `Err` for usage or input problems (exit 2).

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use colorcert::chromatic::{chromatic_number, is_proper, n_colorable, Decision};
use colorcert::gadgets::{verify_gadget, Gadget};
use colorcert::graph::LabeledMultigraph;
use colorcert::io;
use colorcert::localstats::{ball_statistic, tv_distance, BallStatistic, SampleMode};
use colorcert::product::{
    build_product, girth_preservation_check, greedy_edge_coloring, majority_extract, ProductGraph,
};
use colorcert::rrg::{one_factorize_grouped, sample_labeled_union, SampleSpec};
use colorcert::shift::{build_fragment, build_hprime, lift_coloring, project_coloring};
use colorcert::spectral::{eml_check, lambda2, mixing_certificate};
use colorcert::VertexColoring;

use crate::experiments::{self, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "colorcert",
    version,
    about = "Builds and machine-checks finite coloring gadgets, expander certificates, and graph products"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coloring-forcing gadgets F(n, d).
    #[command(subcommand)]
    Gadget(GadgetCmd),
    /// Shift-graph fragments and their bounded-degree companions.
    #[command(subcommand)]
    Shift(ShiftCmd),
    /// Random regular multigraphs and one-factorizations.
    #[command(subcommand)]
    Rrg(RrgCmd),
    /// Second eigenvalues, mixing checks, and certificates.
    #[command(subcommand)]
    Spectral(SpectralCmd),
    /// Edge-labeled graph products.
    #[command(subcommand)]
    Product(ProductCmd),
    /// Exact colorability decisions and verification.
    #[command(subcommand)]
    Color(ColorCmd),
    /// Local neighborhood statistics.
    #[command(subcommand)]
    Stats(StatsCmd),
    /// Config-driven experiment pipelines.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// Construct F(n, d) and optionally write its graph.
    Build(GadgetArgs),
    /// Exhaustively verify the forcing property of F(n, d).
    Verify(GadgetArgs),
}

#[derive(Args)]
struct GadgetArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Write the gadget graph (build) or the full report (verify) here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ShiftCmd {
    /// Build the fragment on subsets of {0..m-1} with sizes in [kmin, kmax].
    Fragment {
        #[arg(long)]
        m: usize,
        #[arg(long = "kmin")]
        k_min: usize,
        #[arg(long = "kmax")]
        k_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the bounded-degree companion of a stored fragment.
    Hprime {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        fragment: PathBuf,
        /// Write the companion (parameters form) here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the companion's raw graph here.
        #[arg(long = "graph-out")]
        graph_out: Option<PathBuf>,
    },
    /// Lift/project round trip over all bands of a ground set.
    Roundtrip {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Restrict to one band instead of all bands.
        #[arg(long = "kmin")]
        k_min: Option<usize>,
        #[arg(long = "kmax", requires = "k_min")]
        k_max: Option<usize>,
    },
}

#[derive(Subcommand)]
enum RrgCmd {
    /// Sample a union of k independent d-regular matching graphs.
    Sample {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        d: usize,
        /// Number of label classes; each gets its own d matchings.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-factorize the complete graph into k labeled groups.
    Factorize {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: usize,
        /// Matchings per group; defaults to spreading all l-1 matchings.
        #[arg(long = "per-group")]
        per_group: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SpectralCmd {
    /// Second largest absolute adjacency eigenvalue of a regular graph.
    Lambda {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-label expansion certificate for an n-coloring argument.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expander mixing inequality on random subset pairs.
    Eml {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ProductCmd {
    /// Build the edge-labeled product of a left graph (greedily
    /// edge-colored) with a labeled right graph.
    Build {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Write the product bundle (factors + edge coloring) here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the raw product graph here.
        #[arg(long = "graph-out")]
        graph_out: Option<PathBuf>,
    },
    /// Girth preservation and acyclicity checks on a stored product.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Majority-extract a left coloring from a product coloring.
    Extract {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        n: usize,
        /// Write the extracted left coloring here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ColorCmd {
    /// Decide n-colorability exactly (optionally budgeted).
    Decide {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        budget: Option<u64>,
        /// Write the found coloring here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bracket (and usually pin down) the chromatic number.
    Chromatic {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a stored coloring against a stored graph.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
    },
}

#[derive(Subcommand)]
enum StatsCmd {
    /// Distribution of rooted radius-r ball types.
    Balls {
        #[arg(long = "in")]
        input: PathBuf,
        /// Optional vertex coloring file.
        #[arg(long)]
        beta: Option<PathBuf>,
        #[arg(long)]
        r: usize,
        /// Monte-Carlo root count; omit for the exact statistic.
        #[arg(long, requires = "seed")]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Total variation distance between two stored statistics.
    Tv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Run an experiment from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Prints the record to stdout and mirrors it to `--out` when given.
fn emit<T: Serialize>(record: &T, out: Option<&PathBuf>) -> Result<()> {
    print!("{}", io::to_canonical_json(record));
    if let Some(path) = out {
        io::write_json(path, record)?;
    }
    Ok(())
}

fn load_graph(path: &PathBuf) -> Result<LabeledMultigraph> {
    io::read_graph(path).with_context(|| format!("reading graph {}", path.display()))
}

fn load_coloring(path: &PathBuf) -> Result<VertexColoring> {
    io::read_coloring(path).with_context(|| format!("reading coloring {}", path.display()))
}

pub fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gadget(cmd) => gadget(cmd),
        Command::Shift(cmd) => shift(cmd),
        Command::Rrg(cmd) => rrg(cmd),
        Command::Spectral(cmd) => spectral(cmd),
        Command::Product(cmd) => product(cmd),
        Command::Color(cmd) => color(cmd),
        Command::Stats(cmd) => stats(cmd),
        Command::Experiment(cmd) => experiment(cmd),
    }
}

fn gadget(cmd: GadgetCmd) -> Result<bool> {
    match cmd {
        GadgetCmd::Build(args) => {
            let g = Gadget::build(args.n, args.d)?;
            if let Some(path) = &args.out {
                io::write_graph(path, g.graph())?;
            }
            emit(
                &json!({
                    "n": g.n(),
                    "d": g.d(),
                    "size": g.size(),
                    "max_degree": g.graph().max_degree(),
                    "tuple": [g.tuple().start, g.tuple().end],
                }),
                None,
            )?;
            Ok(true)
        }
        GadgetCmd::Verify(args) => {
            let g = Gadget::build(args.n, args.d)?;
            let report = verify_gadget(&g);
            emit(&report, args.out.as_ref())?;
            Ok(report.pass())
        }
    }
}

fn shift(cmd: ShiftCmd) -> Result<bool> {
    match cmd {
        ShiftCmd::Fragment { m, k_min, k_max, out } => {
            let f = build_fragment(m, k_min, k_max)?;
            if let Some(path) = &out {
                io::write_json(path, &f)?;
            }
            emit(
                &json!({
                    "m": m,
                    "band": [k_min, k_max],
                    "vertices": f.num_vertices(),
                    "edges": f.graph().num_edges(),
                    "forest": f.graph().is_acyclic(),
                }),
                None,
            )?;
            Ok(true)
        }
        ShiftCmd::Hprime { n, fragment, out, graph_out } => {
            let f: colorcert::ShiftFragment = io::read_json(&fragment)
                .with_context(|| format!("reading fragment {}", fragment.display()))?;
            let h = build_hprime(&f, n)?;
            if let Some(path) = &out {
                io::write_json(path, &h)?;
            }
            if let Some(path) = &graph_out {
                io::write_graph(path, h.graph())?;
            }
            let bound = 2 * n - 1;
            let max_degree = h.graph().max_degree();
            emit(
                &json!({
                    "n": n,
                    "base_vertices": h.num_base_vertices(),
                    "vertices": h.graph().num_vertices(),
                    "max_degree": max_degree,
                    "degree_bound": bound,
                }),
                None,
            )?;
            Ok(max_degree <= bound)
        }
        ShiftCmd::Roundtrip { n, m, k_min, k_max } => {
            let bands: Vec<(usize, usize)> = match (k_min, k_max) {
                (Some(a), b) => vec![(a, b.unwrap_or(a))],
                (None, _) => (1..=m)
                    .flat_map(|lo| (lo..=m).map(move |hi| (lo, hi)))
                    .collect(),
            };
            let mut all = true;
            for (lo, hi) in bands {
                let f = build_fragment(m, lo, hi)?;
                let h = build_hprime(&f, n)?;
                let base = f.greedy_two_coloring();
                let lifted = lift_coloring(&h, &base)?;
                let projection = project_coloring(&h, &lifted)?;
                let pass = projection.all_tuple_constant
                    && projection.interior_proper
                    && projection.coloring.values() == base.values();
                all &= pass;
                emit(
                    &json!({
                        "m": m,
                        "band": [lo, hi],
                        "base_vertices": f.num_vertices(),
                        "hprime_vertices": h.graph().num_vertices(),
                        "roundtrip_identity": projection.coloring.values() == base.values(),
                        "tuple_constant": projection.all_tuple_constant,
                        "interior_proper": projection.interior_proper,
                        "pass": pass,
                    }),
                    None,
                )?;
            }
            Ok(all)
        }
    }
}

fn rrg(cmd: RrgCmd) -> Result<bool> {
    match cmd {
        RrgCmd::Sample { l, d, k, seed, out } => {
            let g = sample_labeled_union(&SampleSpec { l, d, k, seed })?;
            if let Some(path) = &out {
                io::write_graph(path, &g)?;
            }
            emit(
                &json!({
                    "l": l,
                    "d": d,
                    "k": k,
                    "seed": seed,
                    "edges": g.num_edges(),
                    "regular_degree": g.regular_degree(),
                    "girth": g.girth(),
                }),
                None,
            )?;
            Ok(true)
        }
        RrgCmd::Factorize { l, k, per_group, out } => {
            let g = one_factorize_grouped(l, k, per_group)?;
            if let Some(path) = &out {
                io::write_graph(path, &g)?;
            }
            let degrees: Vec<Option<usize>> = (0..k)
                .map(|j| g.label_class(j).regular_degree())
                .collect();
            emit(
                &json!({
                    "l": l,
                    "k": k,
                    "per_group": per_group,
                    "edges": g.num_edges(),
                    "class_degrees": degrees,
                }),
                None,
            )?;
            Ok(true)
        }
    }
}

fn spectral(cmd: SpectralCmd) -> Result<bool> {
    match cmd {
        SpectralCmd::Lambda { input, tol, out } => {
            let g = load_graph(&input)?;
            let report = lambda2(&g, tol)?;
            emit(&report, out.as_ref())?;
            Ok(true)
        }
        SpectralCmd::Certify { input, n, tol, out } => {
            let g = load_graph(&input)?;
            let cert = mixing_certificate(&g, n, tol)?;
            emit(&cert, out.as_ref())?;
            Ok(cert.holds)
        }
        SpectralCmd::Eml { input, seed, trials, out } => {
            let g = load_graph(&input)?;
            let report = lambda2(&g, None)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = g.num_vertices();
            let mut records = Vec::with_capacity(trials);
            let mut passes = 0usize;
            for _ in 0..trials {
                let b: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
                let bp: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
                let rec = eml_check(&g, &b, &bp, report.lambda, report.residual)?;
                passes += rec.pass as usize;
                records.push(rec);
            }
            emit(
                &json!({
                    "lambda": report.lambda,
                    "residual": report.residual,
                    "method": report.method,
                    "trials": trials,
                    "passes": passes,
                    "records": records,
                }),
                out.as_ref(),
            )?;
            Ok(passes == trials)
        }
    }
}

fn product(cmd: ProductCmd) -> Result<bool> {
    match cmd {
        ProductCmd::Build { left, right, out, graph_out } => {
            let left_graph = load_graph(&left)?;
            let right_graph = load_graph(&right)?;
            let edge_colors = greedy_edge_coloring(&left_graph)?;
            let p = build_product(&left_graph, &edge_colors, &right_graph)?;
            if let Some(path) = &out {
                io::write_json(path, &p)?;
            }
            if let Some(path) = &graph_out {
                io::write_graph(path, p.graph())?;
            }
            emit(
                &json!({
                    "left_vertices": p.left_size(),
                    "edge_colors": edge_colors.num_colors,
                    "right_vertices": p.right_size(),
                    "product_vertices": p.graph().num_vertices(),
                    "product_edges": p.graph().num_edges(),
                }),
                None,
            )?;
            Ok(true)
        }
        ProductCmd::Check { input, out } => {
            let p: ProductGraph = io::read_json(&input)
                .with_context(|| format!("reading product {}", input.display()))?;
            let report = girth_preservation_check(&p);
            emit(&report, out.as_ref())?;
            Ok(report.preserved && report.acyclicity_ok)
        }
        ProductCmd::Extract { input, coloring, n, out } => {
            let p: ProductGraph = io::read_json(&input)
                .with_context(|| format!("reading product {}", input.display()))?;
            let c = load_coloring(&coloring)?;
            let report = majority_extract(&p, &c, n)?;
            if let Some(path) = &out {
                io::write_coloring(path, &report.coloring)?;
            }
            emit(&report, None)?;
            Ok(report.proper)
        }
    }
}

fn color(cmd: ColorCmd) -> Result<bool> {
    match cmd {
        ColorCmd::Decide { input, n, budget, out } => {
            let g = load_graph(&input)?;
            let decision = n_colorable(&g, n, budget)?;
            let (text, ok) = match &decision {
                Decision::Colorable(c) => {
                    if let Some(path) = &out {
                        io::write_coloring(path, c)?;
                    }
                    ("colorable", true)
                }
                Decision::NotColorable => ("not-colorable", true),
                Decision::Unknown => ("unknown", false),
            };
            emit(&json!({ "n": n, "decision": text }), None)?;
            Ok(ok)
        }
        ColorCmd::Chromatic { input, budget, out } => {
            let g = load_graph(&input)?;
            let bracket = chromatic_number(&g, budget)?;
            emit(&bracket, out.as_ref())?;
            Ok(bracket.exact.is_some())
        }
        ColorCmd::Verify { input, coloring } => {
            let g = load_graph(&input)?;
            let c = load_coloring(&coloring)?;
            let properness = is_proper(&g, &c)?;
            emit(&properness, None)?;
            Ok(properness.proper)
        }
    }
}

fn stats(cmd: StatsCmd) -> Result<bool> {
    match cmd {
        StatsCmd::Balls { input, beta, r, trials, seed, out } => {
            let g = load_graph(&input)?;
            let beta = beta.as_ref().map(load_coloring).transpose()?;
            let mode = match trials {
                Some(t) => SampleMode::Sampled {
                    trials: t,
                    seed: seed.expect("clap enforces --seed with --trials"),
                },
                None => SampleMode::Exact,
            };
            let stat = ball_statistic(&g, beta.as_ref(), r, mode)?;
            emit(&stat, out.as_ref())?;
            Ok(true)
        }
        StatsCmd::Tv { a, b } => {
            let sa: BallStatistic = io::read_json(&a)
                .with_context(|| format!("reading statistic {}", a.display()))?;
            let sb: BallStatistic = io::read_json(&b)
                .with_context(|| format!("reading statistic {}", b.display()))?;
            let tv = tv_distance(&sa, &sb)?;
            emit(&json!({ "tv": tv }), None)?;
            Ok(true)
        }
    }
}

fn experiment(cmd: ExperimentCmd) -> Result<bool> {
    match cmd {
        ExperimentCmd::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = experiments::run_experiment(&cfg, out.as_deref())?;
            emit(&report.summary(), None)?;
            Ok(report.pass)
        }
    }
}
