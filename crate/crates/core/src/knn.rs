//! Brute-force k-nearest-neighbor classification restricted to the features
//! selected by a [`FeatureMask`].
//!
//! Neighbors are ordered by `(distance, training index)`. Vote ties go to the
//! tied class whose member is nearest to the query.

use crate::dataset::{Dataset, FoldPlan};
use crate::error::{Error, Result};
use crate::mask::FeatureMask;

/// Neighbor count used when none is configured.
pub const DEFAULT_NEIGHBORS: usize = 5;

fn check_mask(mask: &FeatureMask, n_features: usize) -> Result<Vec<usize>> {
    if mask.len() != n_features {
        return Err(Error::DimensionMismatch { expected: n_features, found: mask.len() });
    }
    let selected = mask.selected();
    if selected.is_empty() {
        return Err(Error::EmptyMask);
    }
    Ok(selected)
}

#[inline]
fn squared_distance(a: &[f64], b: &[f64], selected: &[usize]) -> f64 {
    selected
        .iter()
        .map(|&d| {
            let diff = a[d] - b[d];
            diff * diff
        })
        .sum()
}

/// Euclidean distance over the selected dimensions only.
pub fn masked_distance(a: &[f64], b: &[f64], mask: &FeatureMask) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let selected = check_mask(mask, a.len())?;
    Ok(squared_distance(a, b, &selected).sqrt())
}

/// The `k` nearest training instances as `(squared distance, index)`, nearest
/// first.
fn nearest(ds: &Dataset, train: &[usize], query: &[f64], selected: &[usize], k: usize) -> Vec<(f64, usize)> {
    let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
    for &i in train {
        let cand = (squared_distance(query, ds.row(i), selected), i);
        if best.len() == k {
            let last = best[k - 1];
            if cand.0 > last.0 || (cand.0 == last.0 && cand.1 > last.1) {
                continue;
            }
        }
        let pos = best.partition_point(|&(d, j)| d < cand.0 || (d == cand.0 && j < cand.1));
        best.insert(pos, cand);
        best.truncate(k);
    }
    best
}

fn vote(ds: &Dataset, neighbors: &[(f64, usize)], counts: &mut [usize]) -> usize {
    counts.iter_mut().for_each(|c| *c = 0);
    for &(_, i) in neighbors {
        counts[ds.label(i)] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(0);
    neighbors
        .iter()
        .map(|&(_, i)| ds.label(i))
        .find(|&c| counts[c] == top)
        .expect("at least one neighbor")
}

/// Majority label among the `k_neighbors` nearest members of `train`.
pub fn classify(
    ds: &Dataset,
    train: &[usize],
    query: &[f64],
    mask: &FeatureMask,
    k_neighbors: usize,
) -> Result<usize> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if query.len() != ds.n_features() {
        return Err(Error::DimensionMismatch { expected: ds.n_features(), found: query.len() });
    }
    if k_neighbors == 0 {
        return Err(Error::Config("k_neighbors must be at least 1".into()));
    }
    let selected = check_mask(mask, ds.n_features())?;
    let neighbors = nearest(ds, train, query, &selected, k_neighbors);
    Ok(vote(ds, &neighbors, &mut vec![0; ds.n_classes()]))
}

/// Number of `test` instances misclassified when `train` is the reference set.
pub fn count_errors(
    ds: &Dataset,
    train: &[usize],
    test: &[usize],
    mask: &FeatureMask,
    k_neighbors: usize,
) -> Result<usize> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if k_neighbors == 0 {
        return Err(Error::Config("k_neighbors must be at least 1".into()));
    }
    let selected = check_mask(mask, ds.n_features())?;
    let mut counts = vec![0; ds.n_classes()];
    let mut errors = 0;
    for &q in test {
        let neighbors = nearest(ds, train, ds.row(q), &selected, k_neighbors);
        if vote(ds, &neighbors, &mut counts) != ds.label(q) {
            errors += 1;
        }
    }
    Ok(errors)
}

/// Cross-validated error rate: every instance is classified once, using the
/// other folds as the training set.
pub fn cv_error(ds: &Dataset, mask: &FeatureMask, plan: &FoldPlan, k_neighbors: usize) -> Result<f64> {
    check_mask(mask, ds.n_features())?;
    let total = plan.n_instances();
    if total == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    let mut errors = 0;
    for f in 0..plan.k() {
        let train = plan.training_indices(f);
        errors += count_errors(ds, &train, plan.fold(f), mask, k_neighbors)?;
    }
    Ok(errors as f64 / total as f64)
}
