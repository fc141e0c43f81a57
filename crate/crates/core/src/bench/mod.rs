//! Seeded experiment runner, report writer and exhaustive search oracle.

mod experiment;
mod oracle;
mod report;

pub use experiment::{run_experiment, run_single, seeded_rng, Algorithm, ExperimentConfig, RunSettings};
pub use oracle::{oracle_search, MAX_ORACLE_FEATURES};
pub use report::{emit_reports, read_run_log, write_run_log, ReportRow, ReportTable, RunRecord, Stats};
