//! Binary PSO and binary GSA comparators.
//!
//! Both use the same fitness, population and iteration budget as the binary
//! ant lion optimizer: one evaluation per agent at initialization and one per
//! agent per iteration.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alo::{evaluate_all, random_mask, OptimizerConfig};
use crate::dataset::{Dataset, FoldPlan};
use crate::error::{Error, Result};
use crate::fitness::{Evaluator, FitnessValue};
use crate::mask::FeatureMask;
use crate::outcome::{argmin, RunResult};
use crate::transfer::{binarize, TransferFunction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoConfig {
    pub inertia: f64,
    /// Individual-best acceleration.
    pub c1: f64,
    /// Global-best acceleration.
    pub c2: f64,
    pub v_max: f64,
    pub transfer: TransferFunction,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self { inertia: 0.1, c1: 0.1, c2: 0.1, v_max: 6.0, transfer: TransferFunction::S0 }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.inertia < 0.0 || self.c1 < 0.0 || self.c2 < 0.0 {
            return Err(Error::Config("PSO coefficients must be non-negative".into()));
        }
        if !(self.v_max > 0.0) {
            return Err(Error::Config("PSO v_max must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GsaConfig {
    /// Initial gravitational constant.
    pub g0: f64,
    /// Exponential decay rate of the gravitational constant.
    pub alpha_decay: f64,
    /// Velocity magnitude cap.
    pub v_max: f64,
    pub transfer: TransferFunction,
}

impl Default for GsaConfig {
    fn default() -> Self {
        Self { g0: 100.0, alpha_decay: 20.0, v_max: 6.0, transfer: TransferFunction::V0 }
    }
}

impl GsaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.g0 > 0.0) || !(self.alpha_decay > 0.0) || !(self.v_max > 0.0) {
            return Err(Error::Config("GSA g0, alpha_decay and v_max must be positive".into()));
        }
        Ok(())
    }

    /// `G(t) = g0 * exp(-alpha_decay * t / T)`.
    pub fn gravitational_constant(&self, t: usize, max_t: usize) -> f64 {
        self.g0 * (-self.alpha_decay * t as f64 / max_t as f64).exp()
    }
}

fn bit(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// `v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)`, clamped to `±v_max`.
/// Draws `r1` then `r2` per dimension.
pub fn pso_velocity<R: Rng + ?Sized>(
    cfg: &PsoConfig,
    velocity: &mut [f64],
    position: &FeatureMask,
    personal_best: &FeatureMask,
    global_best: &FeatureMask,
    rng: &mut R,
) {
    for (d, v) in velocity.iter_mut().enumerate() {
        let x = bit(position.get(d));
        let r1: f64 = rng.random();
        let r2: f64 = rng.random();
        let updated = cfg.inertia * *v
            + cfg.c1 * r1 * (bit(personal_best.get(d)) - x)
            + cfg.c2 * r2 * (bit(global_best.get(d)) - x);
        *v = updated.clamp(-cfg.v_max, cfg.v_max);
    }
}

pub fn run_bpso<R: Rng + ?Sized>(
    pso: &PsoConfig,
    cfg: &OptimizerConfig,
    ds: &Dataset,
    plan: &FoldPlan,
    rng: &mut R,
) -> Result<RunResult> {
    let evaluator = Evaluator::new(ds, plan, cfg.weights, cfg.k_neighbors);
    run_bpso_with(pso, cfg, &evaluator, rng)
}

pub fn run_bpso_with<R: Rng + ?Sized>(
    pso: &PsoConfig,
    cfg: &OptimizerConfig,
    evaluator: &Evaluator<'_>,
    rng: &mut R,
) -> Result<RunResult> {
    pso.validate()?;
    cfg.validate()?;
    let start = Instant::now();
    let n = evaluator.n_features();
    let mut positions: Vec<FeatureMask> = (0..cfg.population).map(|_| random_mask(n, rng)).collect();
    let mut velocities = vec![vec![0.0; n]; cfg.population];
    let fitness = evaluate_all(evaluator, &positions)?;
    let mut personal_best = positions.clone();
    let mut personal_fitness = fitness;
    let g = argmin(&personal_fitness);
    let mut global_best = personal_best[g].clone();
    let mut global_fitness = personal_fitness[g];
    let mut history = vec![global_fitness.value];

    for _ in 0..cfg.iterations {
        for i in 0..cfg.population {
            pso_velocity(pso, &mut velocities[i], &positions[i], &personal_best[i], &global_best, rng);
            positions[i] = FeatureMask::new(binarize(&velocities[i], positions[i].bits(), pso.transfer, rng)?);
        }
        let fitness = evaluate_all(evaluator, &positions)?;
        for i in 0..cfg.population {
            if fitness[i].value < personal_fitness[i].value {
                personal_best[i] = positions[i].clone();
                personal_fitness[i] = fitness[i];
            }
        }
        let g = argmin(&personal_fitness);
        if personal_fitness[g].value < global_fitness.value {
            global_best = personal_best[g].clone();
            global_fitness = personal_fitness[g];
        }
        history.push(global_fitness.value);
    }
    Ok(RunResult::new(global_best, global_fitness, history, start.elapsed(), evaluator))
}

/// Number of attracting agents at iteration `t`: falls linearly from the
/// population size at `t = 0` to 1 at `t = T`.
pub fn kbest(population: usize, t: usize, max_t: usize) -> usize {
    let frac = t as f64 / max_t as f64;
    let k = population as f64 - (population as f64 - 1.0) * frac;
    (k.round() as usize).clamp(1, population)
}

/// Normalized masses from minimized fitness: the best agent gets the
/// largest share, the worst none. Equal fitness gives equal masses.
pub fn gsa_masses(fitness: &[f64]) -> Vec<f64> {
    let best = fitness.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = if worst > best {
        fitness.iter().map(|f| (worst - f) / (worst - best)).collect()
    } else {
        vec![1.0; fitness.len()]
    };
    let total: f64 = raw.iter().sum();
    raw.iter().map(|m| m / total).collect()
}

/// Per-agent accelerations. Agent `i` is pulled towards each of the `kbest`
/// heaviest agents `j` by `rand * G * M_j * (x_j - x_i) / (R_ij + eps)`, with
/// `R_ij` the Hamming distance; one uniform per `(i, j)` pair.
pub fn gsa_accelerations<R: Rng + ?Sized>(
    positions: &[FeatureMask],
    fitness: &[f64],
    gravity: f64,
    kbest: usize,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let masses = gsa_masses(fitness);
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));
    let attractors = &order[..kbest.min(order.len())];
    positions
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            let mut acc = vec![0.0; xi.len()];
            for &j in attractors {
                if j == i {
                    continue;
                }
                let xj = &positions[j];
                let hamming = xi.bits().iter().zip(xj.bits()).filter(|(a, b)| a != b).count() as f64;
                let scale = rng.random::<f64>() * gravity * masses[j] / (hamming + f64::EPSILON);
                for (d, a) in acc.iter_mut().enumerate() {
                    *a += scale * (bit(xj.get(d)) - bit(xi.get(d)));
                }
            }
            acc
        })
        .collect()
}

pub fn run_bgsa<R: Rng + ?Sized>(
    gsa: &GsaConfig,
    cfg: &OptimizerConfig,
    ds: &Dataset,
    plan: &FoldPlan,
    rng: &mut R,
) -> Result<RunResult> {
    let evaluator = Evaluator::new(ds, plan, cfg.weights, cfg.k_neighbors);
    run_bgsa_with(gsa, cfg, &evaluator, rng)
}

pub fn run_bgsa_with<R: Rng + ?Sized>(
    gsa: &GsaConfig,
    cfg: &OptimizerConfig,
    evaluator: &Evaluator<'_>,
    rng: &mut R,
) -> Result<RunResult> {
    gsa.validate()?;
    cfg.validate()?;
    let start = Instant::now();
    let n = evaluator.n_features();
    let mut positions: Vec<FeatureMask> = (0..cfg.population).map(|_| random_mask(n, rng)).collect();
    let mut velocities = vec![vec![0.0; n]; cfg.population];
    let mut fitness: Vec<FitnessValue> = evaluate_all(evaluator, &positions)?;
    let b = argmin(&fitness);
    let mut best = positions[b].clone();
    let mut best_fitness = fitness[b];
    let mut history = vec![best_fitness.value];

    for t in 1..=cfg.iterations {
        let gravity = gsa.gravitational_constant(t, cfg.iterations);
        let values: Vec<f64> = fitness.iter().map(|f| f.value).collect();
        let k = kbest(cfg.population, t, cfg.iterations);
        let acc = gsa_accelerations(&positions, &values, gravity, k, rng);
        for i in 0..cfg.population {
            for (v, a) in velocities[i].iter_mut().zip(&acc[i]) {
                *v = (rng.random::<f64>() * *v + a).clamp(-gsa.v_max, gsa.v_max);
            }
            positions[i] = FeatureMask::new(binarize(&velocities[i], positions[i].bits(), gsa.transfer, rng)?);
        }
        fitness = evaluate_all(evaluator, &positions)?;
        let b = argmin(&fitness);
        if fitness[b].value < best_fitness.value {
            best = positions[b].clone();
            best_fitness = fitness[b];
        }
        history.push(best_fitness.value);
    }
    Ok(RunResult::new(best, best_fitness, history, start.elapsed(), evaluator))
}
