use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::report::{ReportTable, RunRecord};
use crate::alo::{self, OptimizerConfig};
use crate::baselines::{run_bgsa_with, run_bpso_with, GsaConfig, PsoConfig};
use crate::dataset::{stratified_folds, Dataset, Manifest};
use crate::error::{Error, Result};
use crate::fitness::{Evaluator, FitnessWeights};
use crate::knn;
use crate::outcome::RunResult;
use crate::transfer::TransferFunction;
use crate::walk::RatioSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    AloS1,
    AloS2,
    AloS3,
    AloV1,
    AloV2,
    AloV3,
    Balo1,
    Balo2,
    Bpso,
    Bgsa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::AloS1,
        Algorithm::AloS2,
        Algorithm::AloS3,
        Algorithm::AloV1,
        Algorithm::AloV2,
        Algorithm::AloV3,
        Algorithm::Balo1,
        Algorithm::Balo2,
        Algorithm::Bpso,
        Algorithm::Bgsa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::AloS1 => "alo-s1",
            Algorithm::AloS2 => "alo-s2",
            Algorithm::AloS3 => "alo-s3",
            Algorithm::AloV1 => "alo-v1",
            Algorithm::AloV2 => "alo-v2",
            Algorithm::AloV3 => "alo-v3",
            Algorithm::Balo1 => "balo1",
            Algorithm::Balo2 => "balo2",
            Algorithm::Bpso => "bpso",
            Algorithm::Bgsa => "bgsa",
        }
    }

    /// Transfer function driving the ant lion variants; `None` for the
    /// swarm baselines.
    pub fn transfer(self) -> Option<TransferFunction> {
        use TransferFunction::*;
        match self {
            Algorithm::AloS1 => Some(S1),
            Algorithm::AloS2 => Some(S2),
            Algorithm::AloS3 => Some(S3),
            Algorithm::AloV1 => Some(V1),
            Algorithm::AloV2 => Some(V2),
            Algorithm::AloV3 => Some(V3),
            Algorithm::Balo1 => Some(S0),
            Algorithm::Balo2 => Some(V0),
            Algorithm::Bpso | Algorithm::Bgsa => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

impl Serialize for Algorithm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Algorithm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Everything a single run needs besides the dataset, algorithm and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunSettings {
    pub population: usize,
    pub iterations: usize,
    pub k_cv: usize,
    pub k_neighbors: usize,
    pub alpha: f64,
    /// Hold out one stratified fold, select features on the rest and report
    /// the accuracy on the held-out fold.
    pub holdout: bool,
    /// Growth of the walk shrinking ratio for the ant lion variants.
    pub ratio: RatioSchedule,
    pub pso: PsoConfig,
    pub gsa: GsaConfig,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            population: 8,
            iterations: 70,
            k_cv: 10,
            k_neighbors: knn::DEFAULT_NEIGHBORS,
            alpha: FitnessWeights::DEFAULT_ALPHA,
            holdout: false,
            ratio: RatioSchedule::Linear,
            pso: PsoConfig::default(),
            gsa: GsaConfig::default(),
        }
    }
}

impl RunSettings {
    pub fn optimizer(&self, algorithm: Algorithm) -> Result<OptimizerConfig> {
        let cfg = OptimizerConfig {
            population: self.population,
            iterations: self.iterations,
            transfer: algorithm.transfer().unwrap_or(TransferFunction::V3),
            weights: FitnessWeights::new(self.alpha)?,
            k_neighbors: self.k_neighbors,
            ratio: self.ratio,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_cv < 2 {
            return Err(Error::Config(format!("k_cv must be at least 2, got {}", self.k_cv)));
        }
        self.pso.validate()?;
        self.gsa.validate()?;
        self.optimizer(Algorithm::AloV3).map(drop)
    }
}

fn optimize(
    algorithm: Algorithm,
    settings: &RunSettings,
    evaluator: &Evaluator<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<RunResult> {
    let cfg = settings.optimizer(algorithm)?;
    match algorithm {
        Algorithm::Bpso => run_bpso_with(&settings.pso, &cfg, evaluator, rng),
        Algorithm::Bgsa => run_bgsa_with(&settings.gsa, &cfg, evaluator, rng),
        _ => alo::run_with(&cfg, evaluator, rng),
    }
}

/// The random stream used for everything derived from `seed`.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One seeded run. The seed drives the fold plan first, then the optimizer.
pub fn run_single(
    ds: &Dataset,
    algorithm: Algorithm,
    settings: &RunSettings,
    run: usize,
    seed: u64,
) -> Result<RunRecord> {
    settings.validate()?;
    let mut rng = seeded_rng(seed);
    let plan = stratified_folds(ds, settings.k_cv, &mut rng)?;
    let weights = FitnessWeights::new(settings.alpha)?;

    let (result, accuracy) = if settings.holdout {
        let test = plan.fold(0);
        let train = plan.training_indices(0);
        let inner = ds.subset(&train);
        let inner_plan = stratified_folds(&inner, settings.k_cv, &mut rng)?;
        let evaluator = Evaluator::new(&inner, &inner_plan, weights, settings.k_neighbors);
        let result = optimize(algorithm, settings, &evaluator, &mut rng)?;
        let accuracy = if result.best_mask.count_ones() == 0 {
            0.0
        } else {
            let errors = knn::count_errors(ds, &train, test, &result.best_mask, settings.k_neighbors)?;
            1.0 - errors as f64 / test.len() as f64
        };
        (result, accuracy)
    } else {
        let evaluator = Evaluator::new(ds, &plan, weights, settings.k_neighbors);
        let result = optimize(algorithm, settings, &evaluator, &mut rng)?;
        let accuracy = result.accuracy;
        (result, accuracy)
    };

    Ok(RunRecord {
        dataset: ds.name().to_string(),
        algorithm,
        run,
        seed,
        n_features: ds.n_features(),
        accuracy,
        error_rate: result.best_fitness.error_rate,
        fitness: result.best_fitness.value,
        subset_size: result.subset_size,
        mask: result.best_mask.to_bitstring(),
        evaluations: result.evaluations,
        classifier_runs: result.classifier_runs,
        fitness_history: result.fitness_history,
        time_seconds: result.elapsed.as_secs_f64(),
    })
}

fn default_manifest() -> PathBuf {
    PathBuf::from("data/manifest.toml")
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

fn default_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}

fn default_runs() -> usize {
    20
}

/// A full experiment, usually read from TOML. Run parameters sit at the top
/// level next to the experiment fields; unspecified ones take the defaults of
/// [`RunSettings`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub manifest: PathBuf,
    /// Manifest entries to run; all of them when absent.
    pub datasets: Option<Vec<String>>,
    pub algorithms: Vec<Algorithm>,
    pub runs: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    /// Worker threads; 0 uses one per core. Use 1 for comparable timings.
    pub threads: usize,
    pub settings: RunSettings,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default = "default_manifest")]
    manifest: PathBuf,
    #[serde(default)]
    datasets: Option<Vec<String>>,
    #[serde(default = "default_algorithms")]
    algorithms: Vec<Algorithm>,
    #[serde(default = "default_runs")]
    runs: usize,
    #[serde(default)]
    base_seed: u64,
    #[serde(default = "default_output")]
    output_dir: PathBuf,
    #[serde(default)]
    threads: usize,
    population: Option<usize>,
    iterations: Option<usize>,
    k_cv: Option<usize>,
    k_neighbors: Option<usize>,
    alpha: Option<f64>,
    holdout: Option<bool>,
    ratio: Option<RatioSchedule>,
    pso: Option<PsoConfig>,
    gsa: Option<GsaConfig>,
}

impl<'de> Deserialize<'de> for ExperimentConfig {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawConfig::deserialize(d)?;
        let def = RunSettings::default();
        Ok(Self {
            manifest: raw.manifest,
            datasets: raw.datasets,
            algorithms: raw.algorithms,
            runs: raw.runs,
            base_seed: raw.base_seed,
            output_dir: raw.output_dir,
            threads: raw.threads,
            settings: RunSettings {
                population: raw.population.unwrap_or(def.population),
                iterations: raw.iterations.unwrap_or(def.iterations),
                k_cv: raw.k_cv.unwrap_or(def.k_cv),
                k_neighbors: raw.k_neighbors.unwrap_or(def.k_neighbors),
                alpha: raw.alpha.unwrap_or(def.alpha),
                holdout: raw.holdout.unwrap_or(def.holdout),
                ratio: raw.ratio.unwrap_or(def.ratio),
                pso: raw.pso.unwrap_or(def.pso),
                gsa: raw.gsa.unwrap_or(def.gsa),
            },
        })
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            manifest: default_manifest(),
            datasets: None,
            algorithms: default_algorithms(),
            runs: default_runs(),
            base_seed: 0,
            output_dir: default_output(),
            threads: 0,
            settings: RunSettings::default(),
        }
    }
}

impl ExperimentConfig {
    /// Reads a TOML config; relative `manifest` and `output_dir` paths are
    /// resolved against the config file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
        let base = path.parent().unwrap_or(Path::new("."));
        if cfg.manifest.is_relative() {
            cfg.manifest = base.join(&cfg.manifest);
        }
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms selected".into()));
        }
        self.settings.validate()
    }
}

/// Runs every `(dataset, algorithm, run)` triple with seed `base_seed + run`.
///
/// A dataset that fails to load is logged and skipped; it is listed in
/// [`ReportTable::failed`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ReportTable> {
    cfg.validate()?;
    let manifest = Manifest::load(&cfg.manifest).map_err(|e| match e {
        Error::Io { .. } => Error::Config(e.to_string()),
        other => other,
    })?;
    let entries = match &cfg.datasets {
        Some(names) => names
            .iter()
            .map(|n| manifest.get(n).ok_or_else(|| Error::Config(format!("dataset {n:?} is not in the manifest"))))
            .collect::<Result<Vec<_>>>()?,
        None => manifest.datasets.iter().collect(),
    };

    let mut datasets = Vec::new();
    let mut failed = Vec::new();
    for entry in entries {
        match entry.load() {
            Ok(ds) => datasets.push(ds),
            Err(e) => {
                log::error!("skipping dataset {}: {e}", entry.name);
                failed.push((entry.name.clone(), e.to_string()));
            }
        }
    }

    let jobs: Vec<(&Dataset, Algorithm, usize)> = datasets
        .iter()
        .flat_map(|ds| cfg.algorithms.iter().flat_map(move |&a| (0..cfg.runs).map(move |r| (ds, a, r))))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let records: Vec<RunRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(ds, algorithm, run)| {
                let seed = cfg.base_seed.wrapping_add(run as u64);
                let record = run_single(ds, algorithm, &cfg.settings, run, seed)?;
                log::info!(
                    "{} {} run {} acc {:.4} size {} in {:.2}s",
                    record.dataset,
                    record.algorithm,
                    run,
                    record.accuracy,
                    record.subset_size,
                    record.time_seconds
                );
                Ok(record)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut table = ReportTable::from_records(records);
    table.failed = failed;
    Ok(table)
}
