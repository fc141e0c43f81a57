//! Wrapper feature selection with a binary ant lion optimizer.
//!
//! Candidate feature subsets are scored by the cross-validated error of a
//! k-nearest-neighbor classifier that only sees the selected features, plus a
//! small penalty on the subset size. The optimizer moves through binary
//! space via S-shaped or V-shaped transfer functions; binary PSO and binary
//! GSA are provided for comparison, along with a seeded benchmark runner and
//! an exhaustive search for small feature counts.

pub mod alo;
pub mod baselines;
pub mod bench;
pub mod dataset;
pub mod error;
pub mod fitness;
pub mod knn;
pub mod mask;
mod outcome;
pub mod transfer;
pub mod walk;

#[cfg(test)]
mod testing;

pub use alo::OptimizerConfig;
pub use dataset::{load_csv, stratified_folds, Dataset, FoldPlan, Manifest};
pub use error::{Error, Result};
pub use fitness::{Evaluator, FitnessValue, FitnessWeights};
pub use mask::FeatureMask;
pub use outcome::RunResult;
pub use transfer::{Family, TransferFunction};
