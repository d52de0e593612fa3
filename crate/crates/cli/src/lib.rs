//! The `loh` command: generate inputs, build and check layer-ordered heaps,
//! and run benchmark grids.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loh_core::data::{generate, generate_hypotheses, Distribution};
use loh_core::rng::derive_seed;
use loh_core::{
    expected_quick_alpha, f64_comparator, fdr_threshold_by_loh, fdr_threshold_by_sort, first_violation_by, lohify,
    quick_stats, BenchRecord, FdrQuery, Label, LayerLayout, LohifyStrategy, Rank, ScoredHypothesis, StrategyKind,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("not a layer-ordered heap: layer {layer} has an element greater than one in layer {}", layer + 1)]
    NotLoh { layer: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::NotLoh { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Csv(_) => 3,
        }
    }
}

impl From<loh_core::Error> for CliError {
    fn from(e: loh_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "loh", version, about = "Layer-ordered heap construction and benchmarking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded dataset, one value per line.
    Gen(GenArgs),
    /// Permute a value file into a layer-ordered heap.
    Lohify(LohifyArgs),
    /// Check a value file against a layout file.
    Verify(VerifyArgs),
    /// Run a strategy grid and write comparison counts as CSV.
    Bench(BenchArgs),
    /// Monte Carlo statistics for Quick-LOHify.
    QuickStats(QuickStatsArgs),
    /// Find the most permissive score threshold with FDR at most tau.
    Fdr(FdrArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "uniform-real", value_parser = parse_distribution)]
    pub dist: Distribution,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write `score<TAB>label` hypotheses instead of plain values.
    #[arg(long)]
    pub hypotheses: bool,
    /// Probability that a generated hypothesis is a true positive.
    #[arg(long, default_value_t = 0.9, requires = "hypotheses")]
    pub tp_rate: f64,
    /// Output path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LohifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "PPCCA", value_parser = parse_strategy)]
    pub strategy: StrategyKind,
    #[arg(long, default_value = "2", value_parser = parse_rank)]
    pub alpha: Rank,
    /// Seed for QUICK.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub layout: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub layout: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long = "n", required = true)]
    pub sizes: Vec<usize>,
    #[arg(long = "alpha", default_values = ["2"], value_parser = parse_rank)]
    pub ranks: Vec<Rank>,
    /// Defaults to every strategy.
    #[arg(long = "strategy", value_parser = parse_strategy)]
    pub strategies: Vec<StrategyKind>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "uniform-real", value_parser = parse_distribution)]
    pub dist: Distribution,
    /// Output path; standard output when omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuickStatsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Sort,
    Loh,
}

#[derive(Debug, Args)]
pub struct FdrArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub tau: f64,
    #[arg(long, value_enum, default_value_t = Method::Loh)]
    pub method: Method,
    #[arg(long, default_value = "6", value_parser = parse_rank)]
    pub alpha: Rank,
}

fn parse_rank(s: &str) -> std::result::Result<Rank, String> {
    let alpha: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    Rank::new(alpha).map_err(|e| e.to_string())
}

fn parse_strategy(s: &str) -> std::result::Result<StrategyKind, String> {
    s.parse().map_err(|e: loh_core::Error| e.to_string())
}

fn parse_distribution(s: &str) -> std::result::Result<Distribution, String> {
    s.parse().map_err(|e: loh_core::Error| e.to_string())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Gen(args) => gen(args, out),
        Command::Lohify(args) => lohify_file(args, out),
        Command::Verify(args) => verify(args, out),
        Command::Bench(args) => bench(args, out),
        Command::QuickStats(args) => quick(args, out),
        Command::Fdr(args) => fdr(args, out),
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(io_err(path))
}

fn console(e: io::Error) -> CliError {
    io_err(Path::new("<stdout>"))(e)
}

/// Writes to `path`, or to `fallback` when no path is given.
fn with_output(
    path: Option<&Path>,
    fallback: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            body(&mut w).and_then(|_| w.flush()).map_err(io_err(p))
        }
        None => body(fallback).map_err(console),
    }
}

/// Reads non-empty lines, parsing each with `parse`.
fn read_lines<T>(path: &Path, mut parse: impl FnMut(&str) -> std::result::Result<T, String>) -> Result<Vec<T>> {
    let mut values = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value = parse(line).map_err(|message| CliError::Parse {
            path: path.to_owned(),
            line: i + 1,
            message,
        })?;
        values.push(value);
    }
    Ok(values)
}

pub fn read_values(path: &Path) -> Result<Vec<f64>> {
    read_lines(path, |s| match s.parse::<f64>() {
        Ok(x) if !x.is_nan() => Ok(x),
        _ => Err(format!("`{s}` is not a number")),
    })
}

pub fn read_layout(path: &Path) -> Result<LayerLayout> {
    let boundaries = read_lines(path, |s| {
        s.parse::<usize>().map_err(|_| format!("`{s}` is not an index"))
    })?;
    LayerLayout::from_boundaries(boundaries).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        line: 0,
        message: e.to_string(),
    })
}

pub fn read_hypotheses(path: &Path) -> Result<Vec<ScoredHypothesis>> {
    let mut reader = csv::ReaderBuilder::new().delimiter(b'\t').from_reader(open(path)?);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["score", "label"] {
        return Err(CliError::Parse {
            path: path.to_owned(),
            line: 1,
            message: "expected header `score<TAB>label`".into(),
        });
    }
    let mut data = Vec::new();
    for (id, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |message: String| CliError::Parse {
            path: path.to_owned(),
            line: id + 2,
            message,
        };
        let score = record[0]
            .trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("`{}` is not a score", &record[0])))?;
        let label = record[1].trim().parse::<Label>().map_err(|e| bad(e.to_string()))?;
        data.push(ScoredHypothesis { score, label, id });
    }
    Ok(data)
}

fn write_lines<T: std::fmt::Display>(w: &mut dyn Write, items: &[T]) -> io::Result<()> {
    for x in items {
        writeln!(w, "{x}")?;
    }
    Ok(())
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Result<()> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if args.hypotheses {
        if !(0.0..=1.0).contains(&args.tp_rate) {
            return Err(CliError::Usage("--tp-rate must lie in [0, 1]".into()));
        }
        let data = generate_hypotheses(args.n, args.tp_rate, args.seed);
        return with_output(args.out.as_deref(), out, |w| {
            writeln!(w, "score\tlabel")?;
            for h in &data {
                writeln!(w, "{}\t{}", h.score, h.label)?;
            }
            Ok(())
        });
    }
    let values = generate(args.n, args.dist, args.seed);
    with_output(args.out.as_deref(), out, |w| write_lines(w, &values))
}

fn lohify_file(args: LohifyArgs, out: &mut dyn Write) -> Result<()> {
    let mut values = read_values(&args.input)?;
    let strategy = LohifyStrategy {
        kind: args.strategy,
        rank: args.alpha,
        seed: Some(args.seed),
    };
    let result = lohify(&mut values, &strategy, &mut f64_comparator())?;
    with_output(Some(&args.out), out, |w| write_lines(w, &values))?;
    with_output(Some(&args.layout), out, |w| write_lines(w, result.layout.boundaries()))?;
    writeln!(
        out,
        "n={} layers={} comparisons={} elapsed_ns={}",
        values.len(),
        result.layout.layer_count(),
        result.comparisons,
        result.elapsed.as_nanos()
    )
    .map_err(console)
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let values = read_values(&args.input)?;
    let layout = read_layout(&args.layout)?;
    match first_violation_by(&values, &layout, f64::total_cmp)? {
        Some(layer) => Err(CliError::NotLoh { layer }),
        None => writeln!(out, "ok: {} values in {} layers", values.len(), layout.layer_count()).map_err(console),
    }
}

/// Runs the grid. Every strategy sees the same array for a given
/// `(n, trial)`; QUICK runs once per array since it ignores alpha.
pub fn bench_records(args: &BenchArgs) -> Result<Vec<BenchRecord>> {
    let strategies = if args.strategies.is_empty() {
        StrategyKind::ALL.to_vec()
    } else {
        args.strategies.clone()
    };
    let mut records = Vec::new();
    for &n in &args.sizes {
        if n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        for trial in 0..args.trials {
            let base = generate(n, args.dist, derive_seed(args.seed, &[n as u64, trial as u64]));
            let mut runs: Vec<(LohifyStrategy, Option<f64>)> = Vec::new();
            for &kind in &strategies {
                if kind.uses_rank() {
                    runs.extend(
                        args.ranks
                            .iter()
                            .map(|&rank| (LohifyStrategy::new(kind, rank), Some(rank.alpha()))),
                    );
                } else if !runs.iter().any(|(s, _)| s.kind == kind) {
                    let seed = derive_seed(args.seed, &[n as u64, trial as u64, 1]);
                    runs.push((
                        LohifyStrategy {
                            kind,
                            rank: Rank::SORTED,
                            seed: Some(seed),
                        },
                        None,
                    ));
                }
            }
            for (strategy, alpha) in runs {
                let mut values = base.clone();
                let start = Instant::now();
                let result = lohify(&mut values, &strategy, &mut f64_comparator())?;
                let elapsed_ns = start.elapsed().as_nanos().try_into().unwrap_or(u64::MAX);
                records.push(BenchRecord {
                    strategy: strategy.kind,
                    n,
                    alpha,
                    trial,
                    comparisons: result.comparisons,
                    elapsed_ns,
                });
            }
        }
    }
    records.sort_by_key(BenchRecord::sort_key);
    Ok(records)
}

fn bench(args: BenchArgs, out: &mut dyn Write) -> Result<()> {
    let records = bench_records(&args)?;
    let write = |w: &mut dyn Write| -> io::Result<()> {
        let mut csv = csv::Writer::from_writer(w);
        for r in &records {
            csv.serialize(r)?;
        }
        csv.flush()
    };
    with_output(args.csv.as_deref(), out, write)
}

fn quick(args: QuickStatsArgs, out: &mut dyn Write) -> Result<()> {
    let stats = quick_stats(args.n, args.trials, args.seed)?;
    let expected = stats.expected_comparisons();
    let relative = |x: f64, target: f64| 100.0 * (x - target) / target;
    writeln!(out, "n={} trials={}", stats.n, stats.trials).map_err(console)?;
    writeln!(
        out,
        "mean comparisons {:.2} (se {:.2}); 2n-2 = {expected} ({:+.2}%)",
        stats.mean_comparisons,
        stats.se_comparisons,
        relative(stats.mean_comparisons, expected)
    )
    .map_err(console)?;
    if stats.ratio_trials == 0 {
        return writeln!(out, "no trial produced two or more layers").map_err(console);
    }
    let closed_form = expected_quick_alpha(args.n as u64)?;
    writeln!(
        out,
        "mean last/second-last layer ratio {:.4} (se {:.4}, {} trials); closed form {closed_form:.4} ({:+.2}%)",
        stats.mean_ratio,
        stats.se_ratio,
        stats.ratio_trials,
        relative(stats.mean_ratio, closed_form)
    )
    .map_err(console)
}

fn fdr(args: FdrArgs, out: &mut dyn Write) -> Result<()> {
    let query = FdrQuery::new(args.tau)?;
    let data = read_hypotheses(&args.input)?;
    let run = match args.method {
        Method::Sort => fdr_threshold_by_sort(&data, query)?,
        Method::Loh => fdr_threshold_by_loh(&data, query, args.alpha)?,
    };
    let threshold = run
        .answer
        .threshold_score
        .map_or_else(|| "none".to_string(), |s| s.to_string());
    writeln!(
        out,
        "k={}\nthreshold={threshold}\nachieved_fdr={}\ncomparisons={}",
        run.answer.k, run.answer.achieved_fdr, run.comparisons
    )
    .map_err(console)
}
