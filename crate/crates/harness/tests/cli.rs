use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use czirok_harness::{run_config_with_threads, ExperimentConfig, ResultTable};

fn czirok(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_czirok")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const SIM: &str = r#"{
  "model": {"n": 60, "l": 10, "sigma": 1.0, "dt": 0.1, "steps": 30, "seed": 4,
            "g": {"variant": "cubic", "h": 6}, "kernel": {"variant": "top-hat", "r": 1},
            "averaging": "symmetric"},
  "experiment": {"kind": "simulate", "replicates": 2, "every": 10}
}"#;

#[test]
fn simulate_writes_csv_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sim.json", SIM);
    let out = dir.path().join("out.csv");
    let o = czirok(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t = ResultTable::read(&out).unwrap();
    assert_eq!(t.provenance["seed"], "4");
    assert!(t.provenance.contains_key("config_hash"));
    // steps 0, 10, 20, 30 for each of two replicates
    assert_eq!(t.rows().len(), 8);
    assert_eq!(t.column("step").unwrap(), vec![0.0, 10.0, 20.0, 30.0, 0.0, 10.0, 20.0, 30.0]);
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sim.json", SIM);
    let out = dir.path().join("out.json");
    let o = czirok(&[
        "simulate", "--config", cfg.to_str().unwrap(), "--seed", "77", "--format", "json", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let t = ResultTable::read(&out).unwrap();
    assert_eq!(t.provenance["seed"], "77");
}

#[test]
fn zero_steps_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s0.json",
        &SIM.replace("\"steps\": 30", "\"steps\": 0").replace("\"replicates\": 2", "\"replicates\": 1"),
    );
    let o = czirok(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let t = ResultTable::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows().len(), 1);
    assert_eq!(t.column("t").unwrap(), vec![0.0]);
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", &SIM.replace("\"sigma\": 1.0", "\"sigma\": -1.0"));
    let o = czirok(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("model.sigma"));

    let cfg = write_config(dir.path(), "typo.json", &SIM.replace("\"every\"", "\"evry\""));
    let o = czirok(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("evry"));

    let o = czirok(&["figure", "fig42"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn blow_up_rows_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // dt far beyond the stability limit of the cubic drift
    let cfg = write_config(dir.path(), "blow.json", &SIM.replace("\"dt\": 0.1", "\"dt\": 50.0"));
    let out = dir.path().join("out.csv");
    let o = czirok(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    // the table is still written
    assert!(ResultTable::read(&out).unwrap().has_failures());
}

#[test]
fn thread_count_does_not_change_results() {
    let cfg = ExperimentConfig::from_json_str(
        r#"{"model": {"n": 80, "sigma": 2.0, "steps": 200, "seed": 5, "g": {"variant": "cubic", "h": 6}},
            "experiment": {"kind": "sweep", "axes": {"sigma": [1.5, 2.5], "h": [5.5, 6.5]}, "replicates": 3,
                           "xi": "disorder"}}"#,
    )
    .unwrap();
    let one = run_config_with_threads(&cfg, Some(1)).unwrap();
    let four = run_config_with_threads(&cfg, Some(4)).unwrap();
    assert_eq!(one.to_csv(), four.to_csv());
    assert_eq!(one.rows().len(), 12);
}

#[test]
fn appending_axis_values_keeps_existing_cells() {
    let base = r#"{"model": {"n": 40, "sigma": 2.0, "steps": 50, "seed": 5, "g": {"variant": "cubic", "h": 6}},
                   "experiment": {"kind": "sweep", "axes": {"sigma": AXIS}, "replicates": 2}}"#;
    let short = ExperimentConfig::from_json_str(&base.replace("AXIS", "[1.0, 2.0]")).unwrap();
    let long = ExperimentConfig::from_json_str(&base.replace("AXIS", "[1.0, 2.0, 3.0]")).unwrap();
    let a = run_config_with_threads(&short, Some(2)).unwrap();
    let b = run_config_with_threads(&long, Some(2)).unwrap();
    assert_eq!(a.rows(), &b.rows()[..4]);
}

#[test]
fn stability_and_critical_sigma_tables() {
    let cfg = ExperimentConfig::from_json_str(
        r#"{"model": {"n": 1, "sigma": 2.0, "g": {"variant": "cubic", "h": 6}},
            "experiment": {"kind": "stability", "k_range": 2}}"#,
    )
    .unwrap();
    let t = run_config_with_threads(&cfg, Some(1)).unwrap();
    assert_eq!(t.column("k").unwrap(), vec![0.0, 1.0, 2.0]);
    let gr = t.column("gamma_r").unwrap();
    // G'(xi_e) - 1 = (13 - 2h)/5 - 1 for the cubic family
    assert!((gr[0] - (0.2 - 1.0)).abs() < 1e-12);
    assert_eq!(gr[1], -1.0);
    assert!(t.column("damped_r").unwrap()[1] < 0.0);

    let cfg = ExperimentConfig::from_json_str(
        r#"{"model": {"n": 1, "sigma": 1.0, "g": {"variant": "cubic", "h": 6}},
            "experiment": {"kind": "critical-sigma", "axes": {"h": [6.0]}}}"#,
    )
    .unwrap();
    let t = run_config_with_threads(&cfg, Some(1)).unwrap();
    let sc = t.column("sigma_c").unwrap()[0];
    assert!((sc - 0.85).abs() < 0.1, "{sc}");
}

#[test]
fn fluctuation_table_has_three_functions() {
    let cfg = ExperimentConfig::from_json_str(
        r#"{"model": {"n": 1000, "sigma": 1.5, "seed": 2, "g": {"variant": "cubic", "h": 6}},
            "experiment": {"kind": "fluctuation", "replicates": 200}}"#,
    )
    .unwrap();
    let t = run_config_with_threads(&cfg, None).unwrap();
    assert_eq!(t.column("function").unwrap(), vec![0.0, 1.0, 2.0]);
    let p = t.column("predicted").unwrap();
    assert!(p[0].abs() < 1e-12 && (p[1] - 1.125).abs() < 1e-9 && (p[2] - 0.5).abs() < 1e-9);
}

#[test]
fn figure_is_reproducible_from_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (p, threads) in [(&a, "1"), (&b, "3")] {
        let o = czirok(&["figure", "fig2", "--steps", "40", "--threads", threads, "--out", p.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let t = ResultTable::read(&a).unwrap();
    assert_eq!(t.provenance["preset"], "fig2");
    assert!(t.provenance.keys().any(|k| k.starts_with("expected.")));
}
