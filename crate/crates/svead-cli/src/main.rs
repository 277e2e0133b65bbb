//! `svead`: random-Voronoi ensemble anomaly scoring from the command line.
//!
//! Data goes to `--out` (or standard output); diagnostics and progress go
//! to standard error. Every command is deterministic given `--seed`
//! (timings excepted).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use svead::io::{load_csv, write_dataset_to, write_scores_to, LabelColumn};
use svead::synth;
use svead::{
    derive_partition_seed, fit_score, log_log_slope, repeated_eval, Dataset, DetectorConfig,
    Normalization, ScoringVariant,
};

#[derive(Parser)]
#[command(
    name = "svead",
    version,
    about = "Voronoi-ensemble anomaly scoring for tabular data"
)]
struct Cli {
    /// Worker threads for partition building/scoring (default: all cores).
    /// Results are identical for any thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a dataset; writes index,score,contributions[,label] rows
    Score(ScoreArgs),
    /// AUC-ROC / AUC-PR on a labeled dataset over repeated seeded runs
    Eval(EvalArgs),
    /// Generate a synthetic dataset as CSV
    Synth(SynthArgs),
    /// Evaluate over a grid of anchor counts and ensemble sizes
    Sweep(SweepArgs),
    /// Evaluate at reduced anomaly rates (anomaly subsampling)
    Contaminate(ContaminateArgs),
    /// Time the detector on generated workloads of growing size
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    DualFactor,
    PositionOnly,
    MeanOnly,
}

impl From<VariantArg> for ScoringVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::DualFactor => ScoringVariant::DualFactor,
            VariantArg::PositionOnly => ScoringVariant::PositionOnly,
            VariantArg::MeanOnly => ScoringVariant::MeanOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizeArg {
    None,
    Zscore,
}

impl From<NormalizeArg> for Normalization {
    fn from(v: NormalizeArg) -> Self {
        match v {
            NormalizeArg::None => Normalization::None,
            NormalizeArg::Zscore => Normalization::ZScore,
        }
    }
}

fn parse_label_column(s: &str) -> Result<LabelColumn, String> {
    match s {
        "none" => Ok(LabelColumn::None),
        "last" => Ok(LabelColumn::Last),
        other => other.parse::<usize>().map(LabelColumn::Index).map_err(|_| {
            format!("expected `none`, `last` or a 0-based column index, got {other:?}")
        }),
    }
}

#[derive(Args)]
struct DetectorArgs {
    /// Anchors per partition (clamped to the dataset size)
    #[arg(long, default_value_t = 16)]
    m: usize,
    /// Ensemble size (number of partitions)
    #[arg(long, default_value_t = 100)]
    t: usize,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::DualFactor)]
    variant: VariantArg,
    #[arg(long, value_enum, default_value_t = NormalizeArg::None)]
    normalize: NormalizeArg,
}

impl DetectorArgs {
    fn config(&self) -> DetectorConfig {
        DetectorConfig {
            anchor_count: self.m,
            ensemble_size: self.t,
            seed: self.seed,
            variant: self.variant.into(),
            normalize: self.normalize.into(),
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Input CSV path
    #[arg(long)]
    input: PathBuf,
    /// Skip the first line of the input
    #[arg(long, default_value_t = false)]
    has_header: bool,
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Label column: `none`, `last`, or a 0-based index
    #[arg(long, value_parser = parse_label_column, default_value = "none")]
    label_col: LabelColumn,
    #[command(flatten)]
    detector: DetectorArgs,
    /// Output path (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Label column: `none`, `last`, or a 0-based index
    #[arg(long, value_parser = parse_label_column, default_value = "last")]
    label_col: LabelColumn,
    #[command(flatten)]
    detector: DetectorArgs,
    /// Independent seeded runs to aggregate
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Regime {
    S1,
    S2,
    S3,
    TwoDensity,
}

#[derive(Args)]
struct SynthArgs {
    /// Which generator to run
    #[arg(long, value_enum)]
    regime: Regime,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// two-density only: points in the dense blob
    #[arg(long, default_value_t = 200)]
    n_dense: usize,
    /// two-density only: points in the sparse blob
    #[arg(long, default_value_t = 200)]
    n_sparse: usize,
    /// two-density only: spread ratio of sparse vs dense blob (>= 1)
    #[arg(long, default_value_t = 4.0)]
    scale_ratio: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_label_column, default_value = "last")]
    label_col: LabelColumn,
    /// Anchor counts to sweep
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 4, 8, 16, 32, 64, 128, 256])]
    m_grid: Vec<usize>,
    /// Ensemble sizes to sweep
    #[arg(long, value_delimiter = ',', default_values_t = vec![100])]
    t_grid: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::DualFactor)]
    variant: VariantArg,
    #[arg(long, value_enum, default_value_t = NormalizeArg::None)]
    normalize: NormalizeArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ContaminateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_label_column, default_value = "last")]
    label_col: LabelColumn,
    /// Target anomaly rates (fractions in (0, 1))
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.05, 0.10, 0.20, 0.30])]
    rates: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[command(flatten)]
    detector: DetectorArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset sizes to time
    #[arg(long, value_delimiter = ',', default_values_t = vec![62_500, 125_000, 250_000, 500_000])]
    n_list: Vec<usize>,
    /// Dimensionalities to time
    #[arg(long, value_delimiter = ',', default_values_t = vec![10])]
    d_list: Vec<usize>,
    #[arg(long, default_value_t = 256)]
    m: usize,
    #[arg(long, default_value_t = 100)]
    t: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // First configuration wins; only this binary touches the pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Score(args) => cmd_score(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Contaminate(args) => cmd_contaminate(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn load(input: &InputArgs, label_col: LabelColumn) -> Result<Dataset<f64>> {
    load_csv(&input.input, input.has_header, label_col)
        .with_context(|| format!("cannot load {}", input.input.display()))
}

fn cmd_score(args: ScoreArgs) -> Result<i32> {
    let dataset = load(&args.input, args.label_col)?;
    let config = args.detector.config();
    let start = Instant::now();
    let scores = fit_score(&dataset, &config)?;
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!(
        "scored {}: n={} d={} effective_m={} t={} elapsed={elapsed:.3}s",
        dataset.name(),
        dataset.n(),
        dataset.d(),
        config.effective_anchor_count(dataset.n()),
        config.ensemble_size,
    );
    let mut out = open_out(&args.out)?;
    write_scores_to(&mut out, &scores, &dataset)?;
    out.flush()?;
    Ok(0)
}

fn cmd_eval(args: EvalArgs) -> Result<i32> {
    let dataset = load(&args.input, args.label_col)?;
    let config = args.detector.config();
    let report = repeated_eval(&dataset, &config, args.runs)?;
    eprintln!(
        "evaluated {}: n={} d={} anomalies={} runs={}",
        dataset.name(),
        dataset.n(),
        dataset.d(),
        dataset.anomaly_count().unwrap_or(0),
        report.runs,
    );
    let mut out = open_out(&args.out)?;
    writeln!(
        out,
        "auc_roc,{:.6},{:.6}",
        report.auc_roc_mean, report.auc_roc_std
    )?;
    writeln!(
        out,
        "auc_pr,{:.6},{:.6}",
        report.auc_pr_mean, report.auc_pr_std
    )?;
    out.flush()?;
    Ok(0)
}

fn cmd_synth(args: SynthArgs) -> Result<i32> {
    let dataset: Dataset<f64> = match args.regime {
        Regime::S1 => synth::gen_global_s1(args.seed),
        Regime::S2 => synth::gen_local_s2(args.seed),
        Regime::S3 => synth::gen_dependency_s3(args.seed),
        Regime::TwoDensity => {
            synth::gen_two_density(args.seed, args.n_dense, args.n_sparse, args.scale_ratio)?
        }
    };
    eprintln!(
        "generated {}: n={} d={} anomalies={}",
        dataset.name(),
        dataset.n(),
        dataset.d(),
        dataset
            .anomaly_count()
            .map_or_else(|| "unlabeled".into(), |c| c.to_string()),
    );
    let mut out = open_out(&args.out)?;
    write_dataset_to(&mut out, &dataset)?;
    out.flush()?;
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let dataset = load(&args.input, args.label_col)?;
    if args.m_grid.is_empty() || args.t_grid.is_empty() {
        bail!("grids must be non-empty");
    }
    let mut out = open_out(&args.out)?;
    writeln!(out, "m,t,auc_roc_mean,auc_roc_std,auc_pr_mean,auc_pr_std")?;
    for &m in &args.m_grid {
        for &t in &args.t_grid {
            let config = DetectorConfig {
                anchor_count: m,
                ensemble_size: t,
                seed: args.seed,
                variant: args.variant.into(),
                normalize: args.normalize.into(),
            };
            let start = Instant::now();
            let report = repeated_eval(&dataset, &config, args.runs)?;
            writeln!(
                out,
                "{m},{t},{:.6},{:.6},{:.6},{:.6}",
                report.auc_roc_mean, report.auc_roc_std, report.auc_pr_mean, report.auc_pr_std
            )?;
            eprintln!(
                "m={m} t={t}: auc_roc={:.4} auc_pr={:.4} ({:.2}s)",
                report.auc_roc_mean,
                report.auc_pr_mean,
                start.elapsed().as_secs_f64()
            );
        }
    }
    out.flush()?;
    Ok(0)
}

fn cmd_contaminate(args: ContaminateArgs) -> Result<i32> {
    let dataset = load(&args.input, args.label_col)?;
    let labels = dataset
        .labels()
        .ok_or_else(|| anyhow::anyhow!("contamination study requires labels"))?;
    let anomalies: Vec<usize> = (0..dataset.n()).filter(|&i| labels[i] == 1).collect();
    let normals: Vec<usize> = (0..dataset.n()).filter(|&i| labels[i] == 0).collect();
    if anomalies.is_empty() || normals.is_empty() {
        bail!("need both anomalies and normals to vary the contamination rate");
    }

    let config = args.detector.config();
    let mut out = open_out(&args.out)?;
    writeln!(out, "rate,auc_roc_mean,auc_roc_std,status")?;
    let mut failures = 0;
    for (idx, &rate) in args.rates.iter().enumerate() {
        if !(0.0..1.0).contains(&rate) || rate <= 0.0 {
            writeln!(out, "{rate},nan,nan,error: rate must be in (0 1)")?;
            failures += 1;
            continue;
        }
        // Keep every normal; subsample anomalies to hit the target rate.
        let wanted = ((rate * normals.len() as f64) / (1.0 - rate)).round() as usize;
        if wanted == 0 {
            writeln!(out, "{rate},nan,nan,error: rate keeps zero anomalies")?;
            failures += 1;
            continue;
        }
        if wanted > anomalies.len() {
            writeln!(
                out,
                "{rate},nan,nan,error: needs {wanted} anomalies but the dataset has {}",
                anomalies.len()
            )?;
            failures += 1;
            continue;
        }
        let report = if wanted == anomalies.len() {
            repeated_eval(&dataset, &config, args.runs)?
        } else {
            let subsample_seed = derive_partition_seed(config.seed, idx);
            let keep = subsample(&anomalies, wanted, subsample_seed);
            let mut rows: Vec<usize> = normals.iter().copied().chain(keep).collect();
            rows.sort_unstable();
            let subset = dataset.select_rows(&rows);
            repeated_eval(&subset, &config, args.runs)?
        };
        writeln!(
            out,
            "{rate},{:.6},{:.6},ok",
            report.auc_roc_mean, report.auc_roc_std
        )?;
        eprintln!(
            "rate={rate}: auc_roc={:.4}+/-{:.4}",
            report.auc_roc_mean, report.auc_roc_std
        );
    }
    out.flush()?;
    Ok(if failures > 0 { 1 } else { 0 })
}

/// `count` distinct elements of `pool`, chosen uniformly by a seeded draw.
fn subsample(pool: &[usize], count: usize, seed: u64) -> Vec<usize> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rand::seq::index::sample(&mut rng, pool.len(), count)
        .into_iter()
        .map(|i| pool[i])
        .collect()
}

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    if args.n_list.is_empty() || args.d_list.is_empty() {
        bail!("size lists must be non-empty");
    }
    let mut out = open_out(&args.out)?;
    writeln!(out, "n,d,seconds")?;
    let mut per_dim: Vec<(usize, Vec<(f64, f64)>)> = Vec::new();
    let mut workload = 0usize;
    for &d in &args.d_list {
        let mut curve = Vec::new();
        for &n in &args.n_list {
            let dataset: Dataset<f64> =
                synth::gen_uniform(derive_partition_seed(args.seed, workload), n, d);
            workload += 1;
            let config = DetectorConfig {
                anchor_count: args.m,
                ensemble_size: args.t,
                seed: args.seed,
                ..DetectorConfig::default()
            };
            let start = Instant::now();
            let scores = fit_score(&dataset, &config)?;
            let seconds = start.elapsed().as_secs_f64();
            debug_assert!(scores.scores().iter().all(|s| s.is_finite()));
            writeln!(out, "{n},{d},{seconds:.4}")?;
            eprintln!("n={n} d={d}: {seconds:.3}s");
            curve.push((n as f64, seconds));
        }
        per_dim.push((d, curve));
    }
    out.flush()?;
    for (d, curve) in &per_dim {
        if let Some(slope) = log_log_slope(curve) {
            eprintln!("log-log slope of runtime vs n (d={d}): {slope:.3}");
        }
    }
    Ok(0)
}
