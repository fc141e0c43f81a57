use std::time::Duration;

use crate::fitness::{Evaluator, FitnessValue};
use crate::mask::FeatureMask;

/// Result of one optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_mask: FeatureMask,
    pub best_fitness: FitnessValue,
    /// `1 - error_rate` of the best mask.
    pub accuracy: f64,
    pub subset_size: usize,
    /// Best-so-far fitness after initialization and after each iteration.
    pub fitness_history: Vec<f64>,
    pub elapsed: Duration,
    /// Fitness requests, cache hits included.
    pub evaluations: usize,
    /// Requests that actually ran the classifier.
    pub classifier_runs: usize,
}

impl RunResult {
    pub(crate) fn new(
        best_mask: FeatureMask,
        best_fitness: FitnessValue,
        fitness_history: Vec<f64>,
        elapsed: Duration,
        evaluator: &Evaluator<'_>,
    ) -> Self {
        Self {
            accuracy: best_fitness.accuracy(),
            subset_size: best_mask.count_ones(),
            best_mask,
            best_fitness,
            fitness_history,
            elapsed,
            evaluations: evaluator.requests(),
            classifier_runs: evaluator.classifier_runs(),
        }
    }
}

/// Index of the smallest fitness value; the first one wins ties.
pub(crate) fn argmin(values: &[FitnessValue]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if v.value < values[best].value { i } else { best })
}
