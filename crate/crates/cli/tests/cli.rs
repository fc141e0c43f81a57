use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn antlion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antlion")).args(args).output().expect("binary runs")
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn toy_csv(dir: &Path) -> PathBuf {
    let path = dir.join("toy.csv");
    let mut text = String::from("a,b,c,class\n");
    for i in 0..40 {
        let x = i as f64 / 40.0;
        let label = if i % 2 == 0 { "yes" } else { "no" };
        text.push_str(&format!("{x},{},{},{label}\n", (i % 2) as f64, (i * 7 % 5) as f64));
    }
    fs::write(&path, text).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn single_run_prints_a_reproducible_record() {
    let dir = tempfile::tempdir().unwrap();
    let csv = toy_csv(dir.path());
    let args = [
        "run", "--dataset", csv.to_str().unwrap(), "--header", "--algo", "alo-v2", "--seed", "7",
        "--iterations", "5", "--k-cv", "4",
    ];
    let first = antlion(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let a: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(a["dataset"], "toy");
    assert_eq!(a["algorithm"], "alo-v2");
    assert_eq!(a["seed"], 7);
    assert_eq!(a["evaluations"], 2 * 8 + 8 * 5);
    assert_eq!(a["mask"].as_str().unwrap().len(), 3);

    let second: serde_json::Value = serde_json::from_str(&stdout(&antlion(&args))).unwrap();
    for key in ["mask", "accuracy", "fitness", "subset_size", "fitness_history"] {
        assert_eq!(a[key], second[key], "{key}");
    }
}

#[test]
fn oracle_finds_the_label_feature() {
    let dir = tempfile::tempdir().unwrap();
    let csv = toy_csv(dir.path());
    let out = antlion(&["oracle", "--dataset", csv.to_str().unwrap(), "--header", "--k-cv", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mask"], "010");
    assert_eq!(v["subsets"], 7);
    assert_eq!(v["accuracy"], 1.0);
}

#[test]
fn config_run_then_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    fs::write(
        &cfg,
        format!(
            "manifest = {:?}\ndatasets = [\"Zoo\", \"WineEW\"]\nalgorithms = [\"alo-v3\", \"bgsa\"]\nruns = 2\niterations = 4\noutput_dir = \"out\"\n",
            data_dir().join("manifest.toml").to_str().unwrap()
        ),
    )
    .unwrap();
    let out = antlion(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out_dir = dir.path().join("out");
    for name in ["accuracy.csv", "features.csv", "time.csv", "results.md", "runs.jsonl"] {
        assert!(out_dir.join(name).exists(), "{name}");
    }
    let log = fs::read_to_string(out_dir.join("runs.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 2 * 2 * 2);
    let accuracy = fs::read_to_string(out_dir.join("accuracy.csv")).unwrap();
    assert_eq!(accuracy.lines().count(), 1 + 4);

    let again = dir.path().join("again");
    let out = antlion(&[
        "report", "--from", out_dir.join("runs.jsonl").to_str().unwrap(), "--out", again.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["accuracy.csv", "features.csv"] {
        assert_eq!(fs::read_to_string(out_dir.join(name)).unwrap(), fs::read_to_string(again.join(name)).unwrap());
    }
}

#[test]
fn exit_codes_separate_config_and_dataset_errors() {
    let dir = tempfile::tempdir().unwrap();
    let csv = toy_csv(dir.path());

    let missing = antlion(&["run", "--dataset", "/nonexistent/file.csv"]);
    assert_eq!(missing.status.code(), Some(2));

    let ragged = dir.path().join("ragged.csv");
    fs::write(&ragged, "1,2,a\n3,b\n").unwrap();
    assert_eq!(antlion(&["oracle", "--dataset", ragged.to_str().unwrap()]).status.code(), Some(2));

    let bad_algo = antlion(&["run", "--dataset", csv.to_str().unwrap(), "--header", "--algo", "alo-v9"]);
    assert_eq!(bad_algo.status.code(), Some(1));

    let bad_alpha = antlion(&["run", "--dataset", csv.to_str().unwrap(), "--header", "--alpha", "1.5"]);
    assert_eq!(bad_alpha.status.code(), Some(1));

    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "runs = 0\n").unwrap();
    assert_eq!(antlion(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    fs::write(&cfg, "not toml [").unwrap();
    assert_eq!(antlion(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));

    assert_eq!(antlion(&["run"]).status.code(), Some(1));
    assert_eq!(antlion(&["--help"]).status.code(), Some(0));

    let empty_log = dir.path().join("runs.jsonl");
    fs::write(&empty_log, "").unwrap();
    assert_eq!(antlion(&["report", "--from", empty_log.to_str().unwrap()]).status.code(), Some(1));
}
