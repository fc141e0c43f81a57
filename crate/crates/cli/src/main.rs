use std::path::{Path, PathBuf};
use std::process::ExitCode;

use antlion::bench::{self, seeded_rng, Algorithm, ExperimentConfig, ReportTable, RunSettings};
use antlion::walk::RatioSchedule;
use antlion::{load_csv, stratified_folds, Dataset, Error, FitnessWeights};
use clap::{Args, Parser, Subcommand};

/// Wrapper feature selection with the binary ant lion optimizer.
#[derive(Debug, Parser)]
#[command(name = "antlion", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a full experiment from a TOML config, or a single seeded run on one CSV.
    Run(RunArgs),
    /// Exhaustively search every feature subset of a small dataset.
    Oracle(OracleArgs),
    /// Rebuild the summary tables from a per-run log.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["config", "dataset"]))]
struct RunArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config's output directory.
    #[arg(long, requires = "config")]
    out: Option<PathBuf>,
    /// Dataset CSV for a single run; the class label is the last column.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Algorithm for a single run.
    #[arg(long, requires = "dataset", default_value = "alo-v3")]
    algo: String,
    #[arg(long, requires = "dataset", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// The CSV starts with a header row.
    #[arg(long)]
    header: bool,
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    /// Cross-validation folds.
    #[arg(long)]
    k_cv: Option<usize>,
    /// Neighbors used by the KNN classifier.
    #[arg(long)]
    k_neighbors: Option<usize>,
    /// Weight of the error rate in the fitness.
    #[arg(long)]
    alpha: Option<f64>,
    /// Report accuracy on a held-out fold instead of the selection folds.
    #[arg(long)]
    holdout: bool,
    /// Walk shrinking schedule for the ant lion variants: linear or power.
    #[arg(long)]
    ratio: Option<RatioSchedule>,
}

impl ParamArgs {
    fn apply(&self, s: &mut RunSettings) {
        if let Some(v) = self.population {
            s.population = v;
        }
        if let Some(v) = self.iterations {
            s.iterations = v;
        }
        if let Some(v) = self.k_cv {
            s.k_cv = v;
        }
        if let Some(v) = self.k_neighbors {
            s.k_neighbors = v;
        }
        if let Some(v) = self.alpha {
            s.alpha = v;
        }
        if self.holdout {
            s.holdout = true;
        }
        if let Some(v) = self.ratio {
            s.ratio = v;
        }
    }
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Seed for the fold plan.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 10)]
    k_cv: usize,
    #[arg(long, default_value_t = antlion::knn::DEFAULT_NEIGHBORS)]
    k_neighbors: usize,
    #[arg(long, default_value_t = FitnessWeights::DEFAULT_ALPHA)]
    alpha: f64,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Per-run log (`runs.jsonl`).
    #[arg(long = "from")]
    from: PathBuf,
    /// Output directory; defaults to the log's directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_dataset(path: &Path, header: bool) -> antlion::Result<Dataset> {
    Ok(load_csv(path, header)?.normalize_min_max())
}

fn run(args: RunArgs) -> antlion::Result<()> {
    if let Some(path) = &args.config {
        let mut cfg = ExperimentConfig::load(path)?;
        args.params.apply(&mut cfg.settings);
        if let Some(out) = args.out {
            cfg.output_dir = out;
        }
        let table = bench::run_experiment(&cfg)?;
        for (name, reason) in &table.failed {
            eprintln!("skipped {name}: {reason}");
        }
        for path in bench::emit_reports(&table, &cfg.output_dir)? {
            println!("{}", path.display());
        }
        return Ok(());
    }
    let path = args.dataset.expect("clap requires --config or --dataset");
    let algorithm: Algorithm = args.algo.parse()?;
    let mut settings = RunSettings::default();
    args.params.apply(&mut settings);
    settings.validate()?;
    let ds = load_dataset(&path, args.data.header)?;
    let record = bench::run_single(&ds, algorithm, &settings, 0, args.seed)?;
    println!("{}", serde_json::to_string(&record).expect("serializable record"));
    Ok(())
}

fn oracle(args: OracleArgs) -> antlion::Result<()> {
    let weights = FitnessWeights::new(args.alpha)?;
    if args.k_neighbors == 0 {
        return Err(Error::Config("k_neighbors must be at least 1".into()));
    }
    let ds = load_dataset(&args.dataset, args.data.header)?;
    let plan = stratified_folds(&ds, args.k_cv, &mut seeded_rng(args.seed))?;
    let (mask, fitness) = bench::oracle_search(&ds, &plan, weights, args.k_neighbors)?;
    let out = serde_json::json!({
        "dataset": ds.name(),
        "seed": args.seed,
        "subsets": (1u64 << ds.n_features()) - 1,
        "mask": mask.to_bitstring(),
        "subset_size": mask.count_ones(),
        "fitness": fitness.value,
        "error_rate": fitness.error_rate,
        "accuracy": fitness.accuracy(),
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable output"));
    Ok(())
}

fn report(args: ReportArgs) -> antlion::Result<()> {
    let records = bench::read_run_log(&args.from)?;
    let table = ReportTable::from_records(records);
    let dir = args
        .out
        .unwrap_or_else(|| args.from.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(".")));
    for path in bench::emit_reports(&table, dir)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Oracle(args) => oracle(args),
        Command::Report(args) => report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("error: {e}");
            if e.is_dataset_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
