//! Binary ant lion optimizer for feature selection.
//!
//! Each iteration, every ant performs two guided random walks: one around
//! the elite and one around an antlion picked by roulette wheel. Each walk
//! lands on a continuous point in `[0, 1]^N`; its offset from the guide is
//! binarized with the configured transfer function, and the two binary
//! walks are mixed by uniform crossover. An antlion takes its ant's position
//! when the ant is strictly fitter.
//!
//! Random draws are taken in a fixed order: at initialization all ant bits
//! then all antlion bits; per ant per iteration the roulette draw, the elite
//! walk, its binarization, the selected-antlion walk, its binarization and
//! finally the crossover coins.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, FoldPlan};
use crate::error::{Error, Result};
use crate::fitness::{Evaluator, FitnessValue, FitnessWeights};
use crate::knn::DEFAULT_NEIGHBORS;
use crate::mask::FeatureMask;
use crate::outcome::{argmin, RunResult};
use crate::transfer::{binarize, TransferFunction};
use crate::walk::{center_bounds, random_walk, roulette_select, shrink_bounds, walk_position, RatioSchedule, WalkBounds};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub population: usize,
    pub iterations: usize,
    pub transfer: TransferFunction,
    pub weights: FitnessWeights,
    pub k_neighbors: usize,
    #[serde(default)]
    pub ratio: RatioSchedule,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            population: 8,
            iterations: 70,
            transfer: TransferFunction::V3,
            weights: FitnessWeights::default(),
            k_neighbors: DEFAULT_NEIGHBORS,
            ratio: RatioSchedule::Linear,
        }
    }
}

impl OptimizerConfig {
    pub fn with_transfer(transfer: TransferFunction) -> Self {
        Self { transfer, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::Config(format!("population must be at least 2, got {}", self.population)));
        }
        if self.iterations < 1 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.k_neighbors < 1 {
            return Err(Error::Config("k_neighbors must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Colony {
    pub ants: Vec<FeatureMask>,
    pub antlions: Vec<FeatureMask>,
    pub ant_fitness: Vec<FitnessValue>,
    pub antlion_fitness: Vec<FitnessValue>,
    pub elite: FeatureMask,
    pub elite_fitness: FitnessValue,
    /// Completed iterations.
    pub iteration: usize,
}

pub(crate) fn random_mask<R: Rng + ?Sized>(n: usize, rng: &mut R) -> FeatureMask {
    FeatureMask::new((0..n).map(|_| rng.random::<f64>() < 0.5).collect())
}

pub(crate) fn evaluate_all(evaluator: &Evaluator<'_>, masks: &[FeatureMask]) -> Result<Vec<FitnessValue>> {
    masks.par_iter().map(|m| evaluator.evaluate(m)).collect()
}

/// Random ants and antlions, all evaluated; the best antlion becomes elite.
pub fn initialize<R: Rng + ?Sized>(cfg: &OptimizerConfig, evaluator: &Evaluator<'_>, rng: &mut R) -> Result<Colony> {
    cfg.validate()?;
    let n = evaluator.n_features();
    let ants: Vec<FeatureMask> = (0..cfg.population).map(|_| random_mask(n, rng)).collect();
    let antlions: Vec<FeatureMask> = (0..cfg.population).map(|_| random_mask(n, rng)).collect();
    let ant_fitness = evaluate_all(evaluator, &ants)?;
    let antlion_fitness = evaluate_all(evaluator, &antlions)?;
    let best = argmin(&antlion_fitness);
    Ok(Colony {
        elite: antlions[best].clone(),
        elite_fitness: antlion_fitness[best],
        ants,
        antlions,
        ant_fitness,
        antlion_fitness,
        iteration: 0,
    })
}

/// One binary random walk guided by `guide` at iteration `t`.
///
/// The walk bounds are the unit domain shrunk by the configured ratio schedule and centered
/// on the guide; each dimension gets its own fresh walk read at `t`. The
/// offset of the resulting point from the guide is then binarized (V-shaped
/// functions flip the guide's bits).
pub fn guided_binary_walk<R: Rng + ?Sized>(
    guide: &FeatureMask,
    cfg: &OptimizerConfig,
    t: usize,
    rng: &mut R,
) -> Result<FeatureMask> {
    let n = guide.len();
    let ratio = cfg.ratio.ratio(t, cfg.iterations)?;
    let unit = WalkBounds::unit(n);
    let shrunk = shrink_bounds(&unit.lower, &unit.upper, ratio)?;
    let anchor = guide.to_reals();
    let bounds = center_bounds(&anchor, &shrunk, rng)?;
    let mut step = Vec::with_capacity(n);
    for d in 0..n {
        let walk = random_walk(cfg.iterations, rng);
        let point = walk_position(&walk, t, bounds.lower[d], bounds.upper[d])?;
        step.push(point - anchor[d]);
    }
    binarize(&step, guide.bits(), cfg.transfer, rng).map(FeatureMask::new)
}

/// Uniform crossover: each bit comes from `a` with probability 0.5.
pub fn crossover<R: Rng + ?Sized>(a: &FeatureMask, b: &FeatureMask, rng: &mut R) -> FeatureMask {
    FeatureMask::new(
        a.bits()
            .iter()
            .zip(b.bits())
            .map(|(&x, &y)| if rng.random::<f64>() < 0.5 { x } else { y })
            .collect(),
    )
}

/// Advances the colony by one iteration.
pub fn step<R: Rng + ?Sized>(
    colony: &mut Colony,
    cfg: &OptimizerConfig,
    evaluator: &Evaluator<'_>,
    rng: &mut R,
) -> Result<()> {
    if colony.iteration >= cfg.iterations {
        return Err(Error::IterationOutOfRange { t: colony.iteration + 1, max: cfg.iterations });
    }
    let t = colony.iteration + 1;
    // Every ant selects from the same pre-update wheel.
    let wheel: Vec<f64> = colony.antlion_fitness.iter().map(|f| f.value).collect();
    let mut ants = Vec::with_capacity(colony.ants.len());
    for _ in 0..colony.ants.len() {
        let selected = roulette_select(&wheel, rng)?;
        let around_elite = guided_binary_walk(&colony.elite, cfg, t, rng)?;
        let around_selected = guided_binary_walk(&colony.antlions[selected], cfg, t, rng)?;
        ants.push(crossover(&around_elite, &around_selected, rng));
    }
    colony.ant_fitness = evaluate_all(evaluator, &ants)?;
    colony.ants = ants;

    for i in 0..colony.ants.len() {
        if colony.ant_fitness[i].value < colony.antlion_fitness[i].value {
            colony.antlions[i] = colony.ants[i].clone();
            colony.antlion_fitness[i] = colony.ant_fitness[i];
        }
    }
    let best = argmin(&colony.antlion_fitness);
    if colony.antlion_fitness[best].value < colony.elite_fitness.value {
        colony.elite = colony.antlions[best].clone();
        colony.elite_fitness = colony.antlion_fitness[best];
    }
    colony.iteration = t;
    Ok(())
}

/// Full run with a fresh evaluator over `ds` and `plan`.
pub fn run<R: Rng + ?Sized>(cfg: &OptimizerConfig, ds: &Dataset, plan: &FoldPlan, rng: &mut R) -> Result<RunResult> {
    let evaluator = Evaluator::new(ds, plan, cfg.weights, cfg.k_neighbors);
    run_with(cfg, &evaluator, rng)
}

/// Full run against a caller-owned evaluator, whose counters end up in the
/// result.
pub fn run_with<R: Rng + ?Sized>(cfg: &OptimizerConfig, evaluator: &Evaluator<'_>, rng: &mut R) -> Result<RunResult> {
    let start = Instant::now();
    let mut colony = initialize(cfg, evaluator, rng)?;
    let mut history = Vec::with_capacity(cfg.iterations + 1);
    history.push(colony.elite_fitness.value);
    for _ in 0..cfg.iterations {
        step(&mut colony, cfg, evaluator, rng)?;
        history.push(colony.elite_fitness.value);
    }
    let elapsed = start.elapsed();
    Ok(RunResult::new(colony.elite, colony.elite_fitness, history, elapsed, evaluator))
}
