use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coinfock"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn verify_algebra_passes() {
    let out = run(&["verify-algebra", "--L", "3", "--n-max", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.len() >= 12);
    assert!(checks.iter().all(|c| c["pass"] == Value::Bool(true)));
    assert_eq!(r["summary"]["total"], r["summary"]["passed"]);
    assert_eq!(r["meta"]["seed"], 7);
    for c in checks {
        for key in ["name", "paper_anchor", "residual", "bound", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn verify_partitions_passes() {
    let out = run(&["verify-partitions", "--L", "2", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn too_few_nodes_is_a_config_error() {
    assert_eq!(run(&["spectrum", "--J", "8"]).status.code(), Some(2));
}

#[test]
fn zero_coupling_is_a_config_error() {
    assert_eq!(run(&["evolve", "--lambda", "0"]).status.code(), Some(2));
}

#[test]
fn unsupported_center_grid_is_a_config_error() {
    assert_eq!(run(&["spectrum", "--J", "16", "--Lc", "3"]).status.code(), Some(2));
}

#[test]
fn truncation_below_field_order_is_a_config_error() {
    let out = run(&["verify-algebra", "--L", "2", "--n-max", "1", "--k-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "colour = blue\n").unwrap();
    let out = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["verify-algebra", "--L", "2", "--n-max", "3", "--seed", "11", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let first = run(&["evolve", "--J", "32", "--steps", "10", "--format", "csv"]);
    let second = run(&["evolve", "--J", "32", "--steps", "10", "--format", "csv"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# spectrum run\nJ = 40\nR = 5\nlambda = 2.5\n").unwrap();
    let path = cfg.to_str().unwrap();

    let r = report(&run(&["spectrum", "--config", path]));
    assert_eq!(r["meta"]["params"]["J"], 40);
    assert_eq!(r["meta"]["params"]["lambda"], 2.5);
    assert_eq!(r["results"]["eigenvalues"].as_array().unwrap().len(), 40);

    let r = report(&run(&["spectrum", "--config", path, "--J", "24"]));
    assert_eq!(r["meta"]["params"]["J"], 24);
    assert_eq!(r["meta"]["params"]["R"], 5.0);
    assert_eq!(r["results"]["eigenvalues"].as_array().unwrap().len(), 24);
}

#[test]
fn csv_output_has_parameter_header() {
    let out = run(&["spectrum", "--J", "20", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let params: Value = serde_json::from_str(header.strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(params["J"], 20);
    assert_eq!(lines.next(), Some("index,eigenvalue"));
    assert_eq!(lines.count(), 20);
}

#[test]
fn two_particle_checks_run_with_center_grid() {
    let out = run(&["spectrum", "--J", "16", "--Lc", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["two_particle_eigenvalues"].as_array().unwrap().len(), 64);
}

#[test]
fn mixing_reports_angles() {
    let out = run(&["mixing", "--J", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["angles"].as_array().unwrap().len(), 50);
    assert!(r["results"]["min_angle"].as_f64().unwrap() > 1e-4);
}
