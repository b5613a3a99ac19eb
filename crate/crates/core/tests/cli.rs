use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ordkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exited normally")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SMALL_SYNTH: &str = r#"{"n_patients": 30, "samples_per_patient": 3, "n_findings": 2,
    "feature_dim": 6, "seed": 4}"#;

#[test]
fn generate_and_split_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let synth = dir.path().join("synth.json");
    fs::write(&synth, SMALL_SYNTH).unwrap();
    let out = ordkit(&[
        "generate",
        "--config",
        path(&synth),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let dataset = dir.path().join("dataset.jsonl");
    assert_eq!(fs::read_to_string(&dataset).unwrap().lines().count(), 90);

    let out = ordkit(&[
        "split",
        "--dataset",
        path(&dataset),
        "--seed",
        "3",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0);
    let plan = ordkit::data::SplitPlan::load(dir.path().join("split.json")).unwrap();
    assert_eq!(plan.test_patient_ids.len(), 6);
    plan.check(&ordkit::data::load(&dataset).unwrap()).unwrap();
}

#[test]
fn generate_to_stdout_is_deterministic() {
    let a = ordkit(&["generate", "--seed", "9"]);
    let b = ordkit(&["generate", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8_lossy(&a.stdout).lines().count(), 2000);
}

#[test]
fn experiment_report_and_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("experiment.json");
    fs::write(
        &config,
        format!(
            r#"{{"scale": {{"class_count": 5}}, "findings": ["congestion", "effusion_left"],
                "encodings": [{{"kind": "one_hot"}}, {{"kind": "continuous"}}],
                "classifiers": ["argmax", "l1_nearest", "dot_nearest"],
                "model": {{"hidden_dims": [16]}},
                "train": {{"epochs": 3}},
                "data": {{"synth": {SMALL_SYNTH}}},
                "n_folds": 3}}"#
        ),
    )
    .unwrap();
    let out_dir = dir.path().join("run");
    let out = ordkit(&[
        "experiment",
        "--config",
        path(&config),
        "--jobs",
        "2",
        "--save-checkpoints",
        "--out",
        path(&out_dir),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for name in [
        "results.csv",
        "rank_change.txt",
        "rank_change.csv",
        "metadata.json",
        "config.json",
    ] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    let csv = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert!(csv.starts_with("target_fn,class_fn,unweighted_kappa"));
    assert_eq!(csv.lines().count(), 3);

    let report = ordkit(&[
        "report",
        "--results",
        path(&out_dir.join("results.csv")),
        "--format",
        "md",
    ]);
    assert_eq!(code(&report), 0);
    assert!(String::from_utf8_lossy(&report.stdout).contains('±'));

    let checkpoint = out_dir.join("checkpoints").join("one-hot_fold0.json");
    let synth = dir.path().join("synth.json");
    fs::write(&synth, SMALL_SYNTH).unwrap();
    ordkit(&[
        "generate",
        "--config",
        path(&synth),
        "--out",
        path(dir.path()),
    ]);
    let eval = ordkit(&[
        "evaluate",
        "--checkpoint",
        path(&checkpoint),
        "--dataset",
        path(&dir.path().join("dataset.jsonl")),
    ]);
    assert_eq!(code(&eval), 0, "{}", String::from_utf8_lossy(&eval.stderr));
    assert!(!eval.stdout.is_empty());
}

#[test]
fn usage_and_config_errors_exit_one() {
    assert_eq!(code(&ordkit(&["frobnicate"])), 1);
    assert_eq!(
        code(&ordkit(&["report", "--results", "x", "--format", "xml"])),
        1
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"scale": {"class_count": 1}}"#).unwrap();
    assert_eq!(code(&ordkit(&["experiment", "--config", path(&bad)])), 1);
    assert_eq!(code(&ordkit(&["--help"])), 0);
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.jsonl");
    fs::write(
        &broken,
        "{\"patient_id\": 1, \"features\": [0.1], \"labels\": {\"a\": 1}}\nnot json\n",
    )
    .unwrap();
    let out = ordkit(&["split", "--dataset", path(&broken)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains('2'));
    assert_eq!(
        code(&ordkit(&["split", "--dataset", "/nonexistent/data.jsonl"])),
        2
    );
}
