//! UCI-style datasets: CSV ingestion, min-max scaling and stratified folds.
//!
//! Files are comma-delimited with the class label in the last column and an
//! optional single header row. Labels can be any string; they are re-indexed
//! densely in order of first appearance.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Feature matrix plus dense class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    /// Row-major, `n_instances * n_features`.
    features: Vec<f64>,
    labels: Vec<usize>,
    class_names: Vec<String>,
    n_instances: usize,
    n_features: usize,
}

impl Dataset {
    /// Builds a dataset from in-memory rows. Class names default to the
    /// decimal label index.
    pub fn from_rows(name: impl Into<String>, rows: &[Vec<f64>], labels: &[usize]) -> Result<Self> {
        let n_features = rows.first().map_or(0, Vec::len);
        if n_features == 0 {
            return Err(Error::TooFewColumns(n_features + 1));
        }
        if rows.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), found: labels.len() });
        }
        let mut features = Vec::with_capacity(rows.len() * n_features);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::RaggedRow { row: i, expected: n_features, found: row.len() });
            }
            features.extend_from_slice(row);
        }
        let n_classes = labels.iter().max().map_or(0, |m| m + 1);
        let class_names = (0..n_classes).map(|c| c.to_string()).collect();
        Ok(Self {
            name: name.into(),
            features,
            labels: labels.to_vec(),
            class_names,
            n_instances: rows.len(),
            n_features,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_instances(&self) -> usize {
        self.n_instances
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_instances).map(move |i| self.features[i * self.n_features + j])
    }

    /// Instances per class, indexed by class.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// New dataset holding the given instances in the given order. Class
    /// indices and names are kept as-is.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        for &i in indices {
            features.extend_from_slice(self.row(i));
        }
        Self {
            name: self.name.clone(),
            features,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
            n_instances: indices.len(),
            n_features: self.n_features,
        }
    }

    /// Maps every column to `[0, 1]` via `(x - min) / (max - min)`. Constant
    /// columns become all zeros.
    pub fn normalize_min_max(&self) -> Self {
        let mut out = self.clone();
        for j in 0..self.n_features {
            let (lo, hi) = self
                .column(j)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
            let span = hi - lo;
            for i in 0..self.n_instances {
                let cell = &mut out.features[i * self.n_features + j];
                *cell = if span > 0.0 { (*cell - lo) / span } else { 0.0 };
            }
        }
        out
    }
}

fn is_missing(cell: &str) -> bool {
    matches!(cell, "" | "?" | "NA" | "na" | "NaN" | "nan" | "null")
}

/// Loads a CSV file. Features are returned as parsed, without normalization.
pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    let mut width = None;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|source| Error::Csv { path: path.to_path_buf(), source })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if expected < 2 {
            return Err(Error::TooFewColumns(expected));
        }
        if record.len() != expected {
            return Err(Error::RaggedRow { row: i, expected, found: record.len() });
        }
        let mut row = Vec::with_capacity(expected - 1);
        for (column, cell) in record.iter().take(expected - 1).enumerate() {
            if is_missing(cell) {
                return Err(Error::MissingValue { row: i, column });
            }
            let value: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::NonNumeric { row: i, column, value: cell.to_string() })?;
            row.push(value);
        }
        let label = &record[expected - 1];
        if is_missing(label) {
            return Err(Error::MissingValue { row: i, column: expected - 1 });
        }
        rows.push(row);
        raw_labels.push(label.to_string());
    }

    let Some(width) = width else {
        return Err(Error::TooFewColumns(0));
    };

    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut class_names = Vec::new();
    let labels: Vec<usize> = raw_labels
        .iter()
        .map(|l| {
            *index.entry(l.as_str()).or_insert_with(|| {
                class_names.push(l.clone());
                class_names.len() - 1
            })
        })
        .collect();
    if class_names.len() < 2 {
        return Err(Error::TooFewClasses(class_names.len()));
    }

    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(Dataset {
        name,
        features: rows.into_iter().flatten().collect(),
        n_instances: labels.len(),
        labels,
        class_names,
        n_features: width - 1,
    })
}

/// A partition of instance indices into `k` folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    folds: Vec<Vec<usize>>,
}

impl FoldPlan {
    /// Wraps explicit folds. Each fold is sorted; no partition check is done.
    pub fn from_folds(mut folds: Vec<Vec<usize>>) -> Self {
        folds.iter_mut().for_each(|f| f.sort_unstable());
        Self { folds }
    }

    pub fn k(&self) -> usize {
        self.folds.len()
    }

    pub fn folds(&self) -> &[Vec<usize>] {
        &self.folds
    }

    pub fn fold(&self, f: usize) -> &[usize] {
        &self.folds[f]
    }

    /// Every index outside fold `f`, ascending.
    pub fn training_indices(&self, f: usize) -> Vec<usize> {
        let mut train: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != f)
            .flat_map(|(_, fold)| fold.iter().copied())
            .collect();
        train.sort_unstable();
        train
    }

    pub fn n_instances(&self) -> usize {
        self.folds.iter().map(Vec::len).sum()
    }
}

/// Stratified `k`-fold partition. Each class is shuffled and dealt
/// round-robin; the dealing position carries over between classes so that
/// fold sizes differ by at most one.
pub fn stratified_folds<R: Rng + ?Sized>(ds: &Dataset, k: usize, rng: &mut R) -> Result<FoldPlan> {
    if k < 2 || k > ds.n_instances() {
        return Err(Error::InvalidFoldCount { folds: k, instances: ds.n_instances() });
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); ds.n_classes()];
    for (i, &l) in ds.labels().iter().enumerate() {
        by_class[l].push(i);
    }
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for members in &mut by_class {
        members.shuffle(rng);
        for &i in members.iter() {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    Ok(FoldPlan::from_folds(folds))
}

#[derive(Debug, Clone, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub path: PathBuf,
    #[serde(default)]
    pub has_header: bool,
}

/// Named dataset files, read from a TOML document of `[[dataset]]` tables.
#[derive(Debug, Clone, Deserialize)]
pub struct Manifest {
    #[serde(rename = "dataset", default)]
    pub datasets: Vec<ManifestEntry>,
}

impl Manifest {
    /// Reads a manifest; relative dataset paths are resolved against the
    /// manifest's own directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let mut manifest: Manifest = toml::from_str(&text)
            .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for entry in &mut manifest.datasets {
            if entry.path.is_relative() {
                entry.path = base.join(&entry.path);
            }
        }
        Ok(manifest)
    }

    pub fn get(&self, name: &str) -> Option<&ManifestEntry> {
        self.datasets.iter().find(|d| d.name == name)
    }
}

impl ManifestEntry {
    /// Loads and normalizes the dataset, naming it after the manifest entry.
    pub fn load(&self) -> Result<Dataset> {
        let mut ds = load_csv(&self.path, self.has_header)?.normalize_min_max();
        ds.name.clone_from(&self.name);
        Ok(ds)
    }
}
