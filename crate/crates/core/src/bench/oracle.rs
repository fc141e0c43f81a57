use rayon::prelude::*;

use crate::dataset::{Dataset, FoldPlan};
use crate::error::{Error, Result};
use crate::fitness::{evaluate, FitnessValue, FitnessWeights};
use crate::mask::FeatureMask;

/// Largest feature count [`oracle_search`] accepts (32767 subsets).
pub const MAX_ORACLE_FEATURES: usize = 15;

/// Exact fitness optimum over all `2^N - 1` nonempty masks. Ties go to the
/// smaller mask code (bit `d` of the code is feature `d`).
pub fn oracle_search(
    ds: &Dataset,
    plan: &FoldPlan,
    weights: FitnessWeights,
    k_neighbors: usize,
) -> Result<(FeatureMask, FitnessValue)> {
    let n = ds.n_features();
    if n > MAX_ORACLE_FEATURES {
        return Err(Error::TooManyFeatures { found: n, max: MAX_ORACLE_FEATURES });
    }
    let (code, value) = (1..1u64 << n)
        .into_par_iter()
        .map(|code| evaluate(&FeatureMask::from_code(code, n), ds, plan, weights, k_neighbors).map(|v| (code, v)))
        .try_reduce_with(|a, b| {
            let keep_a = a.1.value < b.1.value || (a.1.value == b.1.value && a.0 < b.0);
            Ok(if keep_a { a } else { b })
        })
        .expect("at least one feature")?;
    Ok((FeatureMask::from_code(code, n), value))
}
