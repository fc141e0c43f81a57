//! Wrapper fitness: `alpha * cv_error + beta * selected / total`, minimized.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, FoldPlan};
use crate::error::{Error, Result};
use crate::knn;
use crate::mask::FeatureMask;

/// Weight of the error term; `beta = 1 - alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessWeights {
    alpha: f64,
}

impl FitnessWeights {
    pub const DEFAULT_ALPHA: f64 = 0.99;

    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Config(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn combine(&self, error_rate: f64, subset_size: usize, n_features: usize) -> f64 {
        self.alpha * error_rate + self.beta() * subset_size as f64 / n_features as f64
    }
}

impl Default for FitnessWeights {
    fn default() -> Self {
        Self { alpha: Self::DEFAULT_ALPHA }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessValue {
    pub value: f64,
    pub error_rate: f64,
    pub subset_size: usize,
}

impl FitnessValue {
    /// Worst attainable value, assigned to the empty subset.
    pub const EMPTY: FitnessValue = FitnessValue { value: 1.0, error_rate: 1.0, subset_size: 0 };

    pub fn accuracy(&self) -> f64 {
        1.0 - self.error_rate
    }
}

/// Uncached fitness of `mask`.
pub fn evaluate(
    mask: &FeatureMask,
    ds: &Dataset,
    plan: &FoldPlan,
    weights: FitnessWeights,
    k_neighbors: usize,
) -> Result<FitnessValue> {
    if mask.len() != ds.n_features() {
        return Err(Error::DimensionMismatch { expected: ds.n_features(), found: mask.len() });
    }
    let subset_size = mask.count_ones();
    if subset_size == 0 {
        return Ok(FitnessValue::EMPTY);
    }
    let error_rate = knn::cv_error(ds, mask, plan, k_neighbors)?;
    Ok(FitnessValue { value: weights.combine(error_rate, subset_size, ds.n_features()), error_rate, subset_size })
}

/// Memoizing fitness evaluator for one optimization run.
///
/// Counts every request (the evaluation budget) separately from the requests
/// that actually ran the classifier. Safe to share across threads; a mask
/// raced by two threads may be computed twice but both get the same value.
#[derive(Debug)]
pub struct Evaluator<'a> {
    ds: &'a Dataset,
    plan: &'a FoldPlan,
    weights: FitnessWeights,
    k_neighbors: usize,
    cache: Mutex<HashMap<FeatureMask, FitnessValue>>,
    requests: AtomicUsize,
    classifier_runs: AtomicUsize,
}

impl<'a> Evaluator<'a> {
    pub fn new(ds: &'a Dataset, plan: &'a FoldPlan, weights: FitnessWeights, k_neighbors: usize) -> Self {
        Self {
            ds,
            plan,
            weights,
            k_neighbors,
            cache: Mutex::new(HashMap::new()),
            requests: AtomicUsize::new(0),
            classifier_runs: AtomicUsize::new(0),
        }
    }

    pub fn dataset(&self) -> &Dataset {
        self.ds
    }

    pub fn n_features(&self) -> usize {
        self.ds.n_features()
    }

    pub fn evaluate(&self, mask: &FeatureMask) -> Result<FitnessValue> {
        self.requests.fetch_add(1, Ordering::Relaxed);
        if let Some(hit) = self.cache.lock().expect("fitness cache poisoned").get(mask) {
            return Ok(*hit);
        }
        let value = evaluate(mask, self.ds, self.plan, self.weights, self.k_neighbors)?;
        if mask.count_ones() > 0 {
            self.classifier_runs.fetch_add(1, Ordering::Relaxed);
        }
        self.cache.lock().expect("fitness cache poisoned").insert(mask.clone(), value);
        Ok(value)
    }

    /// Fitness requests made so far, cache hits included.
    pub fn requests(&self) -> usize {
        self.requests.load(Ordering::Relaxed)
    }

    /// Requests that ran cross-validation.
    pub fn classifier_runs(&self) -> usize {
        self.classifier_runs.load(Ordering::Relaxed)
    }

    /// Drops cached values and resets both counters.
    pub fn clear(&mut self) {
        self.cache.get_mut().expect("fitness cache poisoned").clear();
        *self.requests.get_mut() = 0;
        *self.classifier_runs.get_mut() = 0;
    }
}
