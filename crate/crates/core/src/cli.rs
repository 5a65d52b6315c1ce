//! The `rqe` command line.
//!
//! Exit codes: 0 success, 2 usage, 3 bad input data, 4 bad or mismatched
//! index file.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx_renyi::{estimate_additive_renyi, estimate_multiplicative_renyi};
use crate::approx_shannon::{estimate_additive, estimate_multiplicative, query_rng, EstimatorConfig, SamplingIndex};
use crate::entropy::{EntropyKind, EntropySummary};
use crate::error::{Error, Result};
use crate::exact1d::Exact1DIndex;
use crate::exactnd::ExactNDIndex;
use crate::ingest::read_points_file;
use crate::oracle::{random_points, random_rect, ColorLaw, OracleIndex};
use crate::partition::{
    greedy_tree_split, maxpart_approx, maxpart_dp, sumpart_approx, BackendInfo, Bucketing1D, ColorSequence,
    EstimateMode, EstimatorBackend, ExactBackend, ExactSequence, Objective, OracleBackend, RectSequence,
    SequenceEntropy, TreePartition,
};
use crate::persist::{load_file, save_file, AnyIndex, IndexKind};
use crate::points::{ColoredPointSet, QueryRect};
use crate::sweep1d::Sweep1DIndex;

#[derive(Parser, Debug)]
#[command(name = "rqe", version, about = "Range entropy queries over colored points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a CSV/TSV point file and describe it.
    Ingest {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build an index over a point file and save it.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        structure: Structure,
        #[arg(long)]
        out: PathBuf,
        /// Bucket exponent of the exact indexes.
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        /// Rényi orders to tabulate in the exact indexes, comma separated.
        #[arg(long, value_delimiter = ',')]
        orders: Vec<f64>,
        /// Accuracy of the deterministic index.
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Entropy of the deterministic index.
        #[arg(long, value_enum, default_value_t = KindArg::Shannon)]
        kind: KindArg,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// Load an index file and describe it.
    Info {
        #[arg(long)]
        index: PathBuf,
    },
    /// Answer one range query.
    Query {
        #[arg(long)]
        index: PathBuf,
        /// Closed box, one `lo:hi` per dimension; `*` leaves a side open.
        #[arg(long)]
        rect: String,
        #[arg(long, value_enum, default_value_t = KindArg::Shannon)]
        kind: KindArg,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Partition a point file into k buckets.
    Partition {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Algorithm::Dp)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value_t = BackendArg::Oracle)]
        backend: BackendArg,
        /// Approximation factor of maxpart-approx and sumpart.
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Relative error of the sampling backend.
        #[arg(long, default_value_t = 0.2)]
        estimator_epsilon: f64,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Min)]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Time index builds and queries on synthetic data; prints CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1000usize, 10000])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.5, 0.75])]
        t: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 32)]
        colors: usize,
        #[arg(long, default_value_t = 200)]
        queries: usize,
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Structure {
    Oracle,
    Exact1d,
    Exactnd,
    Sampling,
    Deterministic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Shannon,
    Renyi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Additive,
    Multiplicative,
    Deterministic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Dp,
    MaxpartApprox,
    Sumpart,
    GreedyTree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Oracle,
    Exact,
    Estimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Min,
    Max,
}

fn entropy_kind(kind: KindArg, alpha: f64) -> Result<EntropyKind> {
    match kind {
        KindArg::Shannon => Ok(EntropyKind::Shannon),
        KindArg::Renyi => EntropyKind::renyi(alpha),
    }
}

/// Parses `lo:hi,lo:hi,...`; `*` stands for an open side.
pub fn parse_rect(s: &str) -> Result<QueryRect> {
    let bad = |m: String| Error::InvalidParameter(format!("bad --rect `{s}`: {m}"));
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in s.split(',') {
        let (a, b) = part.split_once(':').ok_or_else(|| bad(format!("`{part}` is not lo:hi")))?;
        let side = |x: &str, open: f64| -> Result<f64> {
            let x = x.trim();
            if x == "*" {
                return Ok(open);
            }
            x.parse::<f64>().map_err(|_| bad(format!("`{x}` is not a number")))
        };
        let (l, h) = (side(a, -f64::MAX)?, side(b, f64::MAX)?);
        if l > h {
            return Err(bad(format!("`{part}` has lo above hi")));
        }
        lo.push(l);
        hi.push(h);
    }
    QueryRect::new(lo, hi).map_err(|e| bad(e.to_string()))
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotAnIndex
        | Error::UnsupportedVersion { .. }
        | Error::WrongIndexKind { .. }
        | Error::Corrupt(_)
        | Error::KindMismatch
        | Error::OrderNotIndexed(_) => 4,
        Error::Parse { .. }
        | Error::Io(_)
        | Error::InvalidWeight(_)
        | Error::DimensionMismatch { .. }
        | Error::WeightedInputUnsupported
        | Error::EmptyRange => 3,
        _ => 2,
    }
}

/// Parses `args`, runs the command and returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct DataInfo {
    points: usize,
    dim: usize,
    colors: usize,
    total_weight: f64,
    unit_weights: bool,
}

#[derive(Serialize)]
struct IndexInfo {
    kind: String,
    points: usize,
    dim: usize,
    detail: String,
}

/// Bounds the answer comes with: `H/m - a <= h <= m H + a`; exact answers
/// have `m = 1` and `a = 0`.
#[derive(Serialize, Debug, PartialEq)]
pub struct ClaimedBounds {
    pub multiplicative: f64,
    pub additive: f64,
    /// False when the guarantee only holds with high probability.
    pub deterministic: bool,
}

#[derive(Serialize)]
pub struct QueryOutput {
    pub value: f64,
    pub count: f64,
    pub kind: String,
    pub alpha: Option<f64>,
    pub mode: Mode,
    pub bounds_claimed: ClaimedBounds,
    pub seed: Option<u64>,
    pub wall_time_us: f64,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Ingest { path, json } => {
            let pts = read_points_file(&path)?;
            let info = DataInfo {
                points: pts.len(),
                dim: pts.dim(),
                colors: pts.labels().len(),
                total_weight: pts.total_weight(),
                unit_weights: pts.is_unit_weight(),
            };
            if json {
                emit(out, &info)?;
            } else {
                writeln!(out, "{} points in {} dimensions, {} colors, total weight {}", info.points, info.dim, info.colors, info.total_weight)?;
            }
        }
        Command::Build { input, structure, out: path, t, orders, epsilon, kind, alpha } => {
            let pts = read_points_file(&input)?;
            let index = match structure {
                Structure::Oracle => AnyIndex::Oracle(OracleIndex::build(&pts)),
                Structure::Exact1d => AnyIndex::Exact1D(Exact1DIndex::build(&pts, t, &orders)?),
                Structure::Exactnd => AnyIndex::ExactND(ExactNDIndex::build(&pts, t, &orders)?),
                Structure::Sampling => AnyIndex::Sampling(SamplingIndex::build(&pts)),
                Structure::Deterministic => AnyIndex::Deterministic(match kind {
                    KindArg::Shannon => Sweep1DIndex::build_shannon(&pts, epsilon)?,
                    KindArg::Renyi => Sweep1DIndex::build_renyi(&pts, epsilon, alpha)?,
                }),
            };
            save_file(&index, &path)?;
            writeln!(out, "wrote {} index over {} points to {}", index.kind(), pts.len(), path.display())?;
        }
        Command::Info { index } => {
            let idx = load_file(&index)?;
            emit(out, &describe(&idx))?;
        }
        Command::Query { index, rect, kind, alpha, mode, delta, epsilon, seed, json } => {
            let idx = load_file(&index)?;
            let rect = parse_rect(&rect)?;
            let kind = entropy_kind(kind, alpha)?;
            let res = answer(&idx, &rect, kind, mode, delta, epsilon, seed)?;
            if json {
                emit(out, &res)?;
            } else {
                writeln!(out, "{}", res.value)?;
            }
        }
        Command::Partition { input, k, algorithm, backend, epsilon, estimator_epsilon, objective, t, seed, json } => {
            let pts = read_points_file(&input)?;
            let report = partition(&pts, k, algorithm, backend, epsilon, estimator_epsilon, objective, t, seed)?;
            if json {
                emit(out, &report)?;
            } else {
                writeln!(out, "objective {}", report.objective)?;
                for b in &report.buckets {
                    writeln!(out, "{:?} {:?} {}", b.lo, b.hi, b.score)?;
                }
            }
        }
        Command::Bench { n, t, dim, colors, queries, epsilon, seed } => {
            bench(out, &n, &t, dim, colors, queries, epsilon, seed)?;
        }
    }
    Ok(())
}

fn describe(idx: &AnyIndex) -> IndexInfo {
    let (points, dim, detail) = match idx {
        AnyIndex::Oracle(x) => (x.points().len(), x.points().dim(), String::new()),
        AnyIndex::Exact1D(x) => (x.len(), 1, format!("t={} buckets={} orders={:?}", x.t(), x.num_buckets(), x.orders())),
        AnyIndex::ExactND(x) => (
            x.len(),
            x.dim(),
            format!("t={} buckets={} entries={} orders={:?}", x.t(), x.num_buckets(), x.stored_entries(), x.orders()),
        ),
        AnyIndex::Sampling(x) => (x.len(), x.dim(), String::new()),
        AnyIndex::Deterministic(x) => {
            (x.len(), 1, format!("entropy={:?} epsilon={} nodes={} runs={}", x.kind(), x.epsilon(), x.num_nodes(), x.num_runs()))
        }
    };
    IndexInfo { kind: idx.kind().to_string(), points, dim, detail }
}

/// Answers one query the way `rqe query` does.
pub fn answer(
    idx: &AnyIndex,
    rect: &QueryRect,
    kind: EntropyKind,
    mode: Option<Mode>,
    delta: Option<f64>,
    epsilon: Option<f64>,
    seed: u64,
) -> Result<QueryOutput> {
    let exact = ClaimedBounds { multiplicative: 1.0, additive: 0.0, deterministic: true };
    let need = |x: Option<f64>, name: &str| x.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for this mode")));
    let start = Instant::now();
    let mode = mode.unwrap_or(match idx.kind() {
        IndexKind::Sampling => Mode::Multiplicative,
        IndexKind::Deterministic => Mode::Deterministic,
        _ => Mode::Exact,
    });
    let (summary, bounds, used_seed): (EntropySummary, ClaimedBounds, Option<u64>) = match (idx, mode) {
        (AnyIndex::Oracle(x), Mode::Exact) => (x.query(rect, kind)?, exact, None),
        (AnyIndex::Exact1D(x), Mode::Exact) => (x.query(rect, kind)?, exact, None),
        (AnyIndex::ExactND(x), Mode::Exact) => (x.query(rect, kind)?, exact, None),
        (AnyIndex::Sampling(x), Mode::Exact) => (x.exact(rect, kind)?, exact, None),
        (AnyIndex::Sampling(x), Mode::Additive) => {
            let d = need(delta, "delta")?;
            let cfg = EstimatorConfig::with_seed(seed);
            let mut rng = query_rng(seed, rect);
            let e = match kind {
                EntropyKind::Shannon => estimate_additive(x, rect, d, &cfg, &mut rng)?,
                EntropyKind::Renyi(o) => estimate_additive_renyi(x, rect, o.get(), d, &cfg, &mut rng)?,
            };
            (e.summary, ClaimedBounds { multiplicative: 1.0, additive: d, deterministic: false }, Some(seed))
        }
        (AnyIndex::Sampling(x), Mode::Multiplicative) => {
            let eps = need(epsilon, "epsilon")?;
            let cfg = EstimatorConfig::with_seed(seed);
            let mut rng = query_rng(seed, rect);
            let e = match kind {
                EntropyKind::Shannon => estimate_multiplicative(x, rect, eps, &cfg, &mut rng)?,
                EntropyKind::Renyi(o) => estimate_multiplicative_renyi(x, rect, o.get(), eps, &cfg, &mut rng)?,
            };
            (e.summary, ClaimedBounds { multiplicative: 1.0 + eps, additive: 0.0, deterministic: false }, Some(seed))
        }
        (AnyIndex::Deterministic(x), Mode::Deterministic) => {
            if x.kind() != kind {
                return Err(Error::KindMismatch);
            }
            let s = x.query(rect)?;
            let b = match kind {
                EntropyKind::Shannon => ClaimedBounds { multiplicative: 1.0 + x.epsilon(), additive: x.epsilon(), deterministic: true },
                EntropyKind::Renyi(o) => ClaimedBounds {
                    multiplicative: 1.0,
                    additive: x.epsilon() * (o.get() + 1.0) / (o.get() - 1.0),
                    deterministic: true,
                },
            };
            (s, b, None)
        }
        (idx, mode) => {
            return Err(Error::InvalidParameter(format!("a {} index cannot answer in {mode:?} mode", idx.kind())));
        }
    };
    Ok(QueryOutput {
        value: summary.value,
        count: summary.count,
        kind: match kind {
            EntropyKind::Shannon => "shannon".into(),
            EntropyKind::Renyi(_) => "renyi".into(),
        },
        alpha: kind.alpha(),
        mode,
        bounds_claimed: bounds,
        seed: used_seed,
        wall_time_us: start.elapsed().as_secs_f64() * 1e6,
    })
}

#[derive(Serialize)]
pub struct BucketReport {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub points: usize,
    pub score: f64,
}

#[derive(Serialize)]
pub struct PartitionReport {
    pub algorithm: Algorithm,
    pub k: usize,
    pub backend: BackendInfo,
    /// Largest bucket score for dp, maxpart-approx and greedy-tree; sum for sumpart.
    pub objective: f64,
    /// Position cuts of the 1-D algorithms.
    pub cuts: Option<Vec<usize>>,
    pub buckets: Vec<BucketReport>,
}

fn line_report(pts: &ColoredPointSet, algorithm: Algorithm, b: Bucketing1D) -> PartitionReport {
    let keys: Vec<f64> = pts.order_by_axis(0).iter().map(|&i| pts.coord(i as usize, 0)).collect();
    let buckets = b
        .buckets()
        .zip(&b.scores)
        .map(|((s, e), &score)| BucketReport { lo: vec![keys[s]], hi: vec![keys[e - 1]], points: e - s, score })
        .collect();
    PartitionReport { algorithm, k: b.k, backend: b.backend.clone(), objective: b.objective, cuts: Some(b.cuts.clone()), buckets }
}

fn tree_report(t: TreePartition) -> PartitionReport {
    let leaves = t.leaves();
    let buckets: Vec<BucketReport> = leaves
        .iter()
        .map(|&l| {
            let n = &t.nodes[l];
            BucketReport { lo: n.rect.lo().to_vec(), hi: n.rect.hi().to_vec(), points: n.points.len(), score: n.score }
        })
        .collect();
    let objective = buckets.iter().map(|b| b.score).fold(0.0, f64::max);
    PartitionReport { algorithm: Algorithm::GreedyTree, k: leaves.len(), backend: t.backend, objective, cuts: None, buckets }
}

fn run_line<S: SequenceEntropy + ?Sized>(seq: &S, k: usize, algorithm: Algorithm, eps: f64) -> Result<Bucketing1D> {
    match algorithm {
        Algorithm::Dp => maxpart_dp(seq, k),
        Algorithm::MaxpartApprox => maxpart_approx(seq, k, eps),
        Algorithm::Sumpart => sumpart_approx(seq, k, eps),
        Algorithm::GreedyTree => unreachable!("handled by the tree splitter"),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn partition(
    pts: &ColoredPointSet,
    k: usize,
    algorithm: Algorithm,
    backend: BackendArg,
    eps: f64,
    estimator_eps: f64,
    objective: ObjectiveArg,
    t: f64,
    seed: u64,
) -> Result<PartitionReport> {
    let kind = EntropyKind::Shannon;
    let config = EstimatorConfig::with_seed(seed);
    let mode = EstimateMode::Multiplicative { epsilon: estimator_eps };
    if algorithm == Algorithm::GreedyTree {
        let objective = match objective {
            ObjectiveArg::Min => Objective::Min,
            ObjectiveArg::Max => Objective::Max,
        };
        let tree = match backend {
            BackendArg::Oracle => greedy_tree_split(pts, k, objective, &OracleBackend { index: &OracleIndex::build(pts), kind })?,
            BackendArg::Exact => {
                let index = ExactNDIndex::build(pts, t, &[])?;
                greedy_tree_split(pts, k, objective, &ExactBackend { index: &index, kind })?
            }
            BackendArg::Estimate => {
                let index = SamplingIndex::build(pts);
                greedy_tree_split(pts, k, objective, &EstimatorBackend { index: &index, mode, config })?
            }
        };
        return Ok(tree_report(tree));
    }
    if objective == ObjectiveArg::Max {
        return Err(Error::InvalidParameter("the line partitioners only minimize".into()));
    }
    let b = match backend {
        BackendArg::Oracle => run_line(&ColorSequence::from_points(pts, kind)?, k, algorithm, eps)?,
        BackendArg::Exact => {
            let index = Exact1DIndex::build(pts, t, &[])?;
            run_line(&ExactSequence { index: &index, kind }, k, algorithm, eps)?
        }
        BackendArg::Estimate => {
            let index = SamplingIndex::build(pts);
            run_line(&RectSequence::new(pts, EstimatorBackend { index: &index, mode, config })?, k, algorithm, eps)?
        }
    };
    Ok(line_report(pts, algorithm, b))
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let i = ((sorted.len() - 1) as f64 * p).round() as usize;
    sorted[i]
}

fn time_queries(rects: &[QueryRect], mut f: impl FnMut(&QueryRect) -> Result<f64>) -> Result<Vec<f64>> {
    let mut times = Vec::with_capacity(rects.len());
    for r in rects {
        let s = Instant::now();
        std::hint::black_box(f(r)?);
        times.push(s.elapsed().as_secs_f64() * 1e6);
    }
    times.sort_by(f64::total_cmp);
    Ok(times)
}

#[allow(clippy::too_many_arguments)]
fn bench(out: &mut dyn Write, ns: &[usize], ts: &[f64], dim: usize, colors: usize, queries: usize, eps: f64, seed: u64) -> Result<()> {
    writeln!(out, "structure,n,dim,t,build_ms,space,p50_us,p90_us,p99_us,oracle_p50_us")?;
    for &n in ns {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        let pts = random_points(n, dim, colors, ColorLaw::Zipf(1.0), &mut rng);
        let rects: Vec<QueryRect> = (0..queries).map(|_| random_rect(dim, 1.0, &mut rng)).collect();
        let oracle = OracleIndex::build(&pts);
        let base = time_queries(&rects, |r| Ok(oracle.query(r, EntropyKind::Shannon)?.value))?;
        let base50 = percentile(&base, 0.5);
        let mut row = |name: &str, t: f64, build: f64, space: usize, times: &[f64]| -> Result<()> {
            writeln!(
                out,
                "{name},{n},{dim},{t},{build:.3},{space},{:.3},{:.3},{:.3},{base50:.3}",
                percentile(times, 0.5),
                percentile(times, 0.9),
                percentile(times, 0.99)
            )?;
            Ok(())
        };
        for &t in ts {
            if dim == 1 {
                let s = Instant::now();
                let idx = Exact1DIndex::build(&pts, t, &[])?;
                let build = s.elapsed().as_secs_f64() * 1e3;
                let times = time_queries(&rects, |r| Ok(idx.query(r, EntropyKind::Shannon)?.value))?;
                let nb = idx.num_buckets();
                row("exact1d", t, build, nb * (nb + 1) / 2, &times)?;
            } else {
                let s = Instant::now();
                let idx = ExactNDIndex::build(&pts, t, &[])?;
                let build = s.elapsed().as_secs_f64() * 1e3;
                let times = time_queries(&rects, |r| Ok(idx.query(r, EntropyKind::Shannon)?.value))?;
                row("exactnd", t, build, idx.stored_entries(), &times)?;
            }
        }
        let s = Instant::now();
        let idx = SamplingIndex::build(&pts);
        let build = s.elapsed().as_secs_f64() * 1e3;
        let cfg = EstimatorConfig::with_seed(seed);
        let times = time_queries(&rects, |r| {
            let mut g = query_rng(seed, r);
            match estimate_multiplicative(&idx, r, eps, &cfg, &mut g) {
                Ok(e) => Ok(e.value()),
                Err(Error::EmptyRange) => Ok(0.0),
                Err(e) => Err(e),
            }
        })?;
        row("sampling", f64::NAN, build, idx.len(), &times)?;
        if dim == 1 {
            let s = Instant::now();
            let idx = Sweep1DIndex::build_shannon(&pts, eps)?;
            let build = s.elapsed().as_secs_f64() * 1e3;
            let times = time_queries(&rects, |r| Ok(idx.query(r)?.value))?;
            row("deterministic", f64::NAN, build, idx.num_runs(), &times)?;
        }
    }
    Ok(())
}
