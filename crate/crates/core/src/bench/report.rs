use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::experiment::Algorithm;
use crate::error::{Error, Result};

/// One line of the run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub n_features: usize,
    pub accuracy: f64,
    pub error_rate: f64,
    pub fitness: f64,
    pub subset_size: usize,
    /// Selected features as `0`/`1`, feature 0 first.
    pub mask: String,
    pub evaluations: usize,
    pub classifier_runs: usize,
    pub fitness_history: Vec<f64>,
    pub time_seconds: f64,
}

/// Summary of one metric over repeated runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub mean: f64,
    /// Sample standard deviation; zero for a single run.
    pub std: f64,
    pub best: f64,
    pub worst: f64,
    pub runs: usize,
}

impl Stats {
    /// `None` for an empty slice. `higher_is_better` decides which extreme is
    /// reported as `best`.
    pub fn from_values(values: &[f64], higher_is_better: bool) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let (best, worst) = if higher_is_better { (max, min) } else { (min, max) };
        Some(Self { mean, std, best, worst, runs: n })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub accuracy: Stats,
    pub features: Stats,
    pub time: Stats,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportTable {
    /// One row per `(dataset, algorithm)`, in dataset then algorithm order.
    pub rows: Vec<ReportRow>,
    pub records: Vec<RunRecord>,
    /// Datasets that could not be loaded, with the reason.
    pub failed: Vec<(String, String)>,
}

impl ReportTable {
    pub fn from_records(mut records: Vec<RunRecord>) -> Self {
        records.sort_by(|a, b| {
            (&a.dataset, a.algorithm, a.run).cmp(&(&b.dataset, b.algorithm, b.run))
        });
        let mut groups: BTreeMap<(&str, Algorithm), Vec<&RunRecord>> = BTreeMap::new();
        for r in &records {
            groups.entry((r.dataset.as_str(), r.algorithm)).or_default().push(r);
        }
        let rows = groups
            .into_iter()
            .map(|((dataset, algorithm), rs)| {
                let metric = |f: fn(&RunRecord) -> f64, higher: bool| {
                    let values: Vec<f64> = rs.iter().map(|r| f(r)).collect();
                    Stats::from_values(&values, higher).expect("group is nonempty")
                };
                ReportRow {
                    dataset: dataset.to_string(),
                    algorithm,
                    accuracy: metric(|r| r.accuracy, true),
                    features: metric(|r| r.subset_size as f64, false),
                    time: metric(|r| r.time_seconds, false),
                }
            })
            .collect();
        Self { rows, records, failed: Vec::new() }
    }

    pub fn row(&self, dataset: &str, algorithm: Algorithm) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.dataset == dataset && r.algorithm == algorithm)
    }

    fn datasets(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.rows.iter().map(|r| r.dataset.as_str()).collect();
        names.dedup();
        names
    }

    fn algorithms(&self) -> Vec<Algorithm> {
        let mut algos: Vec<Algorithm> = self.rows.iter().map(|r| r.algorithm).collect();
        algos.sort();
        algos.dedup();
        algos
    }

    /// Markdown summary with one table per metric. The best mean in each
    /// dataset row is bold.
    pub fn to_markdown(&self) -> String {
        let algos = self.algorithms();
        let mut out = String::new();
        let sections: [(&str, fn(&ReportRow) -> Stats, bool, usize); 3] = [
            ("Accuracy", |r| r.accuracy, true, 4),
            ("Selected features", |r| r.features, false, 2),
            ("Time (s)", |r| r.time, false, 3),
        ];
        for (title, get, higher, digits) in sections {
            let _ = writeln!(out, "## {title}\n");
            let _ = write!(out, "| dataset |");
            for a in &algos {
                let _ = write!(out, " {a} |");
            }
            let _ = write!(out, "\n|---|");
            for _ in &algos {
                out.push_str("---|");
            }
            out.push('\n');
            for ds in self.datasets() {
                let cells: Vec<Option<Stats>> = algos.iter().map(|&a| self.row(ds, a).map(get)).collect();
                let best = cells
                    .iter()
                    .flatten()
                    .map(|s| s.mean)
                    .fold(None, |acc: Option<f64>, m| match acc {
                        None => Some(m),
                        Some(b) if (higher && m > b) || (!higher && m < b) => Some(m),
                        keep => keep,
                    });
                let _ = write!(out, "| {ds} |");
                for cell in cells {
                    match cell {
                        Some(s) => {
                            let text = format!("{:.digits$} ± {:.digits$}", s.mean, s.std);
                            if Some(s.mean) == best {
                                let _ = write!(out, " **{text}** |");
                            } else {
                                let _ = write!(out, " {text} |");
                            }
                        }
                        None => out.push_str(" - |"),
                    }
                }
                out.push('\n');
            }
            out.push('\n');
        }
        if !self.failed.is_empty() {
            out.push_str("## Skipped datasets\n\n");
            for (name, reason) in &self.failed {
                let _ = writeln!(out, "- {name}: {reason}");
            }
        }
        out
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn write_stats_csv(path: &Path, table: &ReportTable, get: fn(&ReportRow) -> Stats) -> Result<()> {
    let mut text = String::from("dataset,algorithm,mean,std,best,worst,runs\n");
    for row in &table.rows {
        let s = get(row);
        let _ = writeln!(text, "{},{},{},{},{},{},{}", row.dataset, row.algorithm, s.mean, s.std, s.best, s.worst, s.runs);
    }
    fs::write(path, text).map_err(io_error(path))
}

/// Writes `accuracy.csv`, `features.csv`, `time.csv`, `results.md` and
/// `runs.jsonl` into `dir` and returns the written paths. Fails with
/// [`Error::EmptyReport`] before touching the filesystem when there are no
/// runs.
pub fn emit_reports(table: &ReportTable, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    if table.records.is_empty() {
        return Err(Error::EmptyReport);
    }
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let mut written = Vec::new();

    let csvs: [(&str, fn(&ReportRow) -> Stats); 3] =
        [("accuracy.csv", |r| r.accuracy), ("features.csv", |r| r.features), ("time.csv", |r| r.time)];
    for (name, get) in csvs {
        let path = dir.join(name);
        write_stats_csv(&path, table, get)?;
        written.push(path);
    }

    let md = dir.join("results.md");
    fs::write(&md, table.to_markdown()).map_err(io_error(&md))?;
    written.push(md);

    let log = dir.join("runs.jsonl");
    write_run_log(&log, &table.records)?;
    written.push(log);
    Ok(written)
}

pub fn write_run_log(path: impl AsRef<Path>, records: &[RunRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(io_error(path))?;
    let mut w = BufWriter::new(file);
    for r in records {
        let line = serde_json::to_string(r).expect("run records serialize");
        writeln!(w, "{line}").map_err(io_error(path))?;
    }
    w.flush().map_err(io_error(path))
}

/// Reads a `runs.jsonl` log. Blank lines are ignored.
pub fn read_run_log(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(io_error(path))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_error(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: format!("line {}: {e}", i + 1),
        })?;
        records.push(record);
    }
    Ok(records)
}
