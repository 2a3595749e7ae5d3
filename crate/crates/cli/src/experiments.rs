//! Config-driven experiment pipelines.
//!
//! Each experiment reads a TOML config, runs a deterministic pipeline, and
//! writes three kinds of artifacts into its output directory: a
//! `report.json` listing every assertion with its measured values, a flat
//! `series.csv` of numeric rows for external plotting, and the key
//! intermediate objects (graphs, certificates, colorings). Same config +
//! seed always produces byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;

use colorcert::chromatic::{for_each_proper_coloring, is_proper, n_colorable, Decision};
use colorcert::gadgets::{expected_coloring_count, verify_gadget, Gadget};
use colorcert::graph::LabeledMultigraph;
use colorcert::io;
use colorcert::localstats::{
    ball_statistic, cell_density_check, dirac_statistic, edge_witness_check, tree_ball_reference,
    tv_distance, SampleMode,
};
use colorcert::product::{build_product, greedy_edge_coloring, lift_product_coloring, majority_extract};
use colorcert::rrg::{matching_rng, one_factorize_grouped, random_subset, sample_rrg};
use colorcert::shift::{build_fragment, build_hprime, lift_coloring, project_coloring};
use colorcert::spectral::{eml_check, lambda2, mixing_certificate};
use colorcert::VertexColoring;

use rand::Rng;

/// RNG stream reserved for subset draws, disjoint from the matching streams
/// `j*d + t` used while sampling graphs.
const SUBSET_STREAM: u64 = 1 << 32;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    GadgetSuite {
        out_dir: PathBuf,
        n_values: Vec<usize>,
        d_values: Vec<usize>,
    },
    RrgSpectral {
        out_dir: PathBuf,
        l: usize,
        d: usize,
        seeds: Vec<u64>,
        lambda_bound: f64,
        min_pass: usize,
    },
    EmlSuite {
        out_dir: PathBuf,
        l: usize,
        d: usize,
        seeds: Vec<u64>,
        pairs_per_graph: usize,
    },
    ProductChromatic {
        out_dir: PathBuf,
        n: usize,
        instances: Vec<ProductInstance>,
        budget: Option<u64>,
    },
    HprimeRoundtrip {
        out_dir: PathBuf,
        n: usize,
        m_max: usize,
        /// Fragments with at most this many base vertices get their full
        /// proper-coloring enumeration checked for tuple constancy.
        enum_base_max: usize,
    },
    LocalstatsConvergence {
        out_dir: PathBuf,
        d: usize,
        r: usize,
        l_values: Vec<usize>,
        seeds_per_l: usize,
        base_seed: u64,
        /// Number of random (graph, B, B') triples for the exact
        /// cell-density and edge-witness identities.
        triples: usize,
        triple_seed: u64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductInstance {
    pub l: usize,
    pub groups: usize,
    pub per_group: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::GadgetSuite { .. } => "gadget-suite",
            Self::RrgSpectral { .. } => "rrg-spectral",
            Self::EmlSuite { .. } => "eml-suite",
            Self::ProductChromatic { .. } => "product-chromatic",
            Self::HprimeRoundtrip { .. } => "hprime-roundtrip",
            Self::LocalstatsConvergence { .. } => "localstats-convergence",
        }
    }

    fn out_dir(&self) -> &Path {
        match self {
            Self::GadgetSuite { out_dir, .. }
            | Self::RrgSpectral { out_dir, .. }
            | Self::EmlSuite { out_dir, .. }
            | Self::ProductChromatic { out_dir, .. }
            | Self::HprimeRoundtrip { out_dir, .. }
            | Self::LocalstatsConvergence { out_dir, .. } => out_dir,
        }
    }
}

/// One named check with its measured values.
#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub measured: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: String,
    pub pass: bool,
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn summary(&self) -> serde_json::Value {
        json!({
            "experiment": self.experiment,
            "pass": self.pass,
            "assertions": self.assertions.len(),
            "failed": self.assertions.iter().filter(|a| !a.pass).count(),
        })
    }
}

/// Collects assertions and CSV rows while an experiment runs.
struct Recorder {
    assertions: Vec<Assertion>,
    csv: Vec<Vec<String>>,
}

impl Recorder {
    fn new(header: &[&str]) -> Self {
        Recorder {
            assertions: Vec::new(),
            csv: vec![header.iter().map(|s| s.to_string()).collect()],
        }
    }

    fn assert(&mut self, name: impl Into<String>, pass: bool, measured: serde_json::Value) {
        self.assertions.push(Assertion {
            name: name.into(),
            pass,
            measured,
        });
    }

    fn row(&mut self, cells: Vec<String>) {
        self.csv.push(cells);
    }

    fn finish(self, name: &str, out_dir: &Path) -> Result<Report> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for record in &self.csv {
            w.write_record(record)?;
        }
        let bytes = w.into_inner().context("flushing csv")?;
        fs::write(out_dir.join("series.csv"), bytes)
            .with_context(|| format!("writing {}", out_dir.join("series.csv").display()))?;
        let report = Report {
            experiment: name.to_string(),
            pass: self.assertions.iter().all(|a| a.pass),
            assertions: self.assertions,
        };
        io::write_json(out_dir.join("report.json"), &report)?;
        Ok(report)
    }
}

pub fn run_experiment(cfg: &ExperimentConfig, out_override: Option<&Path>) -> Result<Report> {
    let out_dir = out_override.unwrap_or_else(|| cfg.out_dir()).to_path_buf();
    fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    match cfg {
        ExperimentConfig::GadgetSuite { n_values, d_values, .. } => {
            gadget_suite(&out_dir, n_values, d_values)
        }
        ExperimentConfig::RrgSpectral { l, d, seeds, lambda_bound, min_pass, .. } => {
            rrg_spectral(&out_dir, *l, *d, seeds, *lambda_bound, *min_pass)
        }
        ExperimentConfig::EmlSuite { l, d, seeds, pairs_per_graph, .. } => {
            eml_suite(&out_dir, *l, *d, seeds, *pairs_per_graph)
        }
        ExperimentConfig::ProductChromatic { n, instances, budget, .. } => {
            product_chromatic(&out_dir, *n, instances, *budget)
        }
        ExperimentConfig::HprimeRoundtrip { n, m_max, enum_base_max, .. } => {
            hprime_roundtrip(&out_dir, *n, *m_max, *enum_base_max)
        }
        ExperimentConfig::LocalstatsConvergence {
            d, r, l_values, seeds_per_l, base_seed, triples, triple_seed, ..
        } => localstats_convergence(
            &out_dir, *d, *r, l_values, *seeds_per_l, *base_seed, *triples, *triple_seed,
        ),
    }
}

fn gadget_suite(out_dir: &Path, n_values: &[usize], d_values: &[usize]) -> Result<Report> {
    let mut rec = Recorder::new(&[
        "n", "d", "size", "max_degree", "colorings", "expected", "distinct_tuple_values", "pass",
    ]);
    for &n in n_values {
        for &d in d_values {
            let gadget = Gadget::build(n, d)?;
            let report = verify_gadget(&gadget);
            let expected = expected_coloring_count(n, d);
            let counts_match = report.coloring_count == expected;
            let pass = report.pass() && counts_match;
            rec.row(vec![
                n.to_string(),
                d.to_string(),
                report.size.to_string(),
                report.max_degree.to_string(),
                report.coloring_count.to_string(),
                expected.to_string(),
                report.distinct_tuple_values.to_string(),
                pass.to_string(),
            ]);
            rec.assert(
                format!("gadget-{n}-{d}"),
                pass,
                serde_json::to_value(&report)?,
            );
            if n == n_values[0] && d == d_values[0] {
                io::write_graph(out_dir.join(format!("gadget_{n}_{d}.json")), gadget.graph())?;
            }
        }
    }
    rec.finish("gadget-suite", out_dir)
}

fn rrg_spectral(
    out_dir: &Path,
    l: usize,
    d: usize,
    seeds: &[u64],
    lambda_bound: f64,
    min_pass: usize,
) -> Result<Report> {
    let mut rec = Recorder::new(&["seed", "lambda", "residual", "bound", "pass"]);
    let mut passes = 0usize;
    for (i, &seed) in seeds.iter().enumerate() {
        let g = sample_rrg(l, d, seed)?;
        if i == 0 {
            io::write_graph(out_dir.join("sample_first.json"), &g)?;
        }
        let report = lambda2(&g, None)?;
        let pass = report.lambda <= lambda_bound;
        passes += pass as usize;
        rec.row(vec![
            seed.to_string(),
            report.lambda.to_string(),
            report.residual.to_string(),
            lambda_bound.to_string(),
            pass.to_string(),
        ]);
    }
    rec.assert(
        "lambda-within-bound-frequency",
        passes >= min_pass,
        json!({ "passes": passes, "out_of": seeds.len(), "min_pass": min_pass }),
    );
    rec.finish("rrg-spectral", out_dir)
}

fn eml_suite(
    out_dir: &Path,
    l: usize,
    d: usize,
    seeds: &[u64],
    pairs_per_graph: usize,
) -> Result<Report> {
    let mut rec = Recorder::new(&[
        "seed", "pair", "b_size", "bp_size", "edges", "lhs", "rhs", "slack", "pass",
    ]);
    let mut passes = 0usize;
    let total = seeds.len() * pairs_per_graph;
    for &seed in seeds {
        let g = sample_rrg(l, d, seed)?;
        let report = lambda2(&g, None)?;
        let mut rng = matching_rng(seed, SUBSET_STREAM);
        for pair in 0..pairs_per_graph {
            let b: Vec<usize> = (0..l).filter(|_| rng.random_bool(0.5)).collect();
            let bp: Vec<usize> = (0..l).filter(|_| rng.random_bool(0.5)).collect();
            let check = eml_check(&g, &b, &bp, report.lambda, report.residual)?;
            passes += check.pass as usize;
            rec.row(vec![
                seed.to_string(),
                pair.to_string(),
                check.b_size.to_string(),
                check.bp_size.to_string(),
                check.edges.to_string(),
                check.lhs.to_string(),
                check.rhs.to_string(),
                check.slack.to_string(),
                check.pass.to_string(),
            ]);
        }
    }
    rec.assert(
        "mixing-inequality-all-pairs",
        passes == total,
        json!({ "passes": passes, "out_of": total }),
    );
    rec.finish("eml-suite", out_dir)
}

fn product_chromatic(
    out_dir: &Path,
    n: usize,
    instances: &[ProductInstance],
    budget: Option<u64>,
) -> Result<Report> {
    let mut rec = Recorder::new(&[
        "l", "groups", "per_group", "certificate_holds", "lambda_max", "n_colorable",
        "lift_proper", "extract_roundtrip", "pass",
    ]);
    let left = LabeledMultigraph::complete(n + 1);
    let edge_colors = greedy_edge_coloring(&left)?;
    if edge_colors.num_colors != n {
        bail!(
            "complete graph on {} vertices needs {} edge colors, expected {n}",
            n + 1,
            edge_colors.num_colors
        );
    }
    for inst in instances {
        let right = one_factorize_grouped(inst.l, inst.groups, inst.per_group)?;
        let cert = mixing_certificate(&right, n, None)?;
        let p = build_product(&left, &edge_colors, &right)?;
        let tag = format!("l{}", inst.l);
        io::write_graph(out_dir.join(format!("right_{tag}.json")), &right)?;
        io::write_json(out_dir.join(format!("product_{tag}.json")), &p)?;
        io::write_json(out_dir.join(format!("certificate_{tag}.json")), &cert)?;

        // The chromatic conclusion, checked exhaustively.
        let no_n = n_colorable(p.graph(), n, budget)?;
        let not_colorable = matches!(no_n, Decision::NotColorable);
        // A proper (n+1)-coloring of the left factor lifts to the product.
        let full = match n_colorable(&left, n + 1, budget)? {
            Decision::Colorable(c) => c,
            other => bail!("complete graph must be (n+1)-colorable, got {other:?}"),
        };
        let lifted = lift_product_coloring(&p, &full)?;
        let lift_proper = is_proper(p.graph(), &lifted)?.proper;
        io::write_coloring(out_dir.join(format!("lifted_{tag}.json")), &lifted)?;
        // Majority extraction inverts the lift.
        let extract = majority_extract(&p, &lifted, n + 1)?;
        let roundtrip = extract.proper && extract.coloring.values() == full.values();

        let lambda_max = cert
            .per_label
            .iter()
            .map(|s| s.lambda)
            .fold(f64::NEG_INFINITY, f64::max);
        let pass = not_colorable && lift_proper && roundtrip;
        rec.row(vec![
            inst.l.to_string(),
            inst.groups.to_string(),
            inst.per_group.map_or_else(|| "all".into(), |g| g.to_string()),
            cert.holds.to_string(),
            lambda_max.to_string(),
            (!not_colorable).to_string(),
            lift_proper.to_string(),
            roundtrip.to_string(),
            pass.to_string(),
        ]);
        rec.assert(
            format!("chromatic-chain-{tag}"),
            pass,
            json!({
                "certificate_holds": cert.holds,
                "lambda_max": lambda_max,
                "not_n_colorable": not_colorable,
                "lift_proper": lift_proper,
                "extract_roundtrip": roundtrip,
            }),
        );
    }
    rec.finish("product-chromatic", out_dir)
}

fn hprime_roundtrip(out_dir: &Path, n: usize, m_max: usize, enum_base_max: usize) -> Result<Report> {
    let mut rec = Recorder::new(&[
        "m", "k_lo", "k_hi", "base", "hprime", "roundtrip", "enumerated", "tuple_constant",
    ]);
    let mut wrote_artifact = false;
    for m in 1..=m_max {
        for k_lo in 1..=m {
            for k_hi in k_lo..=m {
                let f = build_fragment(m, k_lo, k_hi)?;
                let h = build_hprime(&f, n)?;
                if !wrote_artifact {
                    io::write_json(out_dir.join("hprime_first.json"), &h)?;
                    wrote_artifact = true;
                }
                let base = f.greedy_two_coloring();
                let lifted = lift_coloring(&h, &base)?;
                let projection = project_coloring(&h, &lifted)?;
                let roundtrip = projection.all_tuple_constant
                    && projection.interior_proper
                    && projection.coloring.values() == base.values();

                // Full enumeration on small fragments: every proper
                // n-coloring of the companion is constant on each tuple.
                let (enumerated, constant) = if f.num_vertices() <= enum_base_max {
                    let mut all_constant = true;
                    let count = for_each_proper_coloring(h.graph(), n, |values| {
                        'outer: for x in 0..h.num_base_vertices() {
                            let deg = f.intrinsic_degree(x);
                            let first = values[h.vertex(x, 0)];
                            for i in 1..deg {
                                if values[h.vertex(x, i)] != first {
                                    all_constant = false;
                                    break 'outer;
                                }
                            }
                        }
                        all_constant
                    });
                    (count, all_constant)
                } else {
                    (0, true)
                };
                rec.row(vec![
                    m.to_string(),
                    k_lo.to_string(),
                    k_hi.to_string(),
                    f.num_vertices().to_string(),
                    h.graph().num_vertices().to_string(),
                    roundtrip.to_string(),
                    enumerated.to_string(),
                    constant.to_string(),
                ]);
                rec.assert(
                    format!("roundtrip-m{m}-band{k_lo}-{k_hi}"),
                    roundtrip && constant,
                    json!({
                        "base_vertices": f.num_vertices(),
                        "roundtrip": roundtrip,
                        "enumerated_colorings": enumerated,
                        "tuple_constant": constant,
                    }),
                );
            }
        }
    }
    rec.finish("hprime-roundtrip", out_dir)
}

#[allow(clippy::too_many_arguments)]
fn localstats_convergence(
    out_dir: &Path,
    d: usize,
    r: usize,
    l_values: &[usize],
    seeds_per_l: usize,
    base_seed: u64,
    triples: usize,
    triple_seed: u64,
) -> Result<Report> {
    let mut rec = Recorder::new(&["series", "l", "seed", "value", "pass"]);
    let reference = dirac_statistic(&tree_ball_reference(d, r, Some(0)), Some(1));
    let mut medians = Vec::new();
    for &l in l_values {
        let mut tvs = Vec::with_capacity(seeds_per_l);
        for i in 0..seeds_per_l {
            let seed = base_seed + i as u64;
            let g = sample_rrg(l, d, seed)?;
            let beta = VertexColoring::new(vec![0; l], 1)?;
            let stat = ball_statistic(&g, Some(&beta), r, SampleMode::Exact)?;
            if l == l_values[0] && i == 0 {
                io::write_json(out_dir.join("statistic_first.json"), &stat)?;
            }
            let tv = tv_distance(&stat, &reference)?;
            rec.row(vec![
                "tv".into(),
                l.to_string(),
                seed.to_string(),
                tv.to_string(),
                "true".into(),
            ]);
            tvs.push(tv);
        }
        tvs.sort_by(|a, b| a.total_cmp(b));
        medians.push(tvs[tvs.len() / 2]);
    }
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
    rec.assert(
        "tv-median-decreasing",
        decreasing,
        json!({ "l_values": l_values, "medians": medians }),
    );

    let mut cell_passes = 0usize;
    for t in 0..triples {
        let mut rng = matching_rng(triple_seed, t as u64);
        let l = 20 + (t % 7) * 10;
        let gd = 2 + t % 4;
        let g = sample_rrg(l, gd, rng.random::<u64>())?;
        let b = random_subset(l, rng.random_range(1..=l), &mut rng);
        let bp = random_subset(l, rng.random_range(1..=l), &mut rng);
        let cell = cell_density_check(&g, &b, &bp, 1)?;
        let witness = edge_witness_check(&g, &b, &bp, 0)?;
        let pass = cell.pass() && witness.agree;
        cell_passes += pass as usize;
        rec.row(vec![
            "cell-density".into(),
            l.to_string(),
            t.to_string(),
            cell.cell_counts.iter().sum::<u64>().to_string(),
            pass.to_string(),
        ]);
    }
    rec.assert(
        "cell-density-exact",
        cell_passes == triples,
        json!({ "passes": cell_passes, "out_of": triples }),
    );
    rec.finish("localstats-convergence", out_dir)
}
