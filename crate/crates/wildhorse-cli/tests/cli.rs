use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wildhorse"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn params_check_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let ok = run(d.path(), &["params-check"]);
    assert_eq!(code(&ok), 0);
    let report = json(&d.path().join("params.json"));
    let product = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "tau_s*tau_u > 1").unwrap();
    assert!((product["slack"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let bad = run(d.path(), &["params-check", "--set", "lambda=0.45"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL lambda*sigma < 1"));

    let bad = run(d.path(), &["params-check", "--set", "sigma=3.2", "--set", "lambda=0.1"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL sigma < 3"));
}

#[test]
fn config_file_and_unknown_keys() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("exp.cfg");
    fs::write(&cfg, "# standard model\nsigma = 5/2\nlambda = 3/10\nepsilon0 = 0.01\nwindow_halfwidths = 0.05, 0.05\ndepth = 3\n").unwrap();
    let o = run(d.path(), &["cantor", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    fs::write(&cfg, "sigma = 5/2\nlambdaa = 0.3\n").unwrap();
    let o = run(d.path(), &["cantor", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key"));
}

#[test]
fn cantor_tables_are_exact_in_rational_mode() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(d.path(), &["cantor", "--set", "depth=8"])), 0);
    let mut r = csv::Reader::from_path(d.path().join("thickness.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 16);
    for depth in 1..=8 {
        assert_eq!(rows.iter().filter(|row| row[2] == *depth.to_string()).count(), 2);
    }
    assert!(rows.iter().all(|row| row[5].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn link_and_chain_verdicts() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(d.path(), &["link"])), 0);
    let link = json(&d.path().join("link.json"));
    assert_eq!(link["initial"]["n0"], 5);
    assert_eq!(link["initial"]["m0"], 4);
    assert_eq!(link["pairs"].as_array().unwrap().len(), 8);

    assert_eq!(code(&run(d.path(), &["chain"])), 0);
    let chain = json(&d.path().join("chain.json"));
    assert_eq!(chain["verification"]["all_inclusions"], true);
    assert_eq!(chain["records"].as_array().unwrap().len(), 4);
}

#[test]
fn chain_failures_map_to_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    // doubles cannot resolve the perturbation supports of a real chain
    assert_eq!(code(&run(d.path(), &["chain", "--backend", "double"])), 4);
    // too shallow a start leaves no stable bridge in the length window
    assert_eq!(code(&run(d.path(), &["chain", "--set", "chain_first=1", "--set", "window_exp=1"])), 3);
}

#[test]
fn simulations_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["simulate", "--set", "mode=dirac", "--set", "periodic=01"];
    assert_eq!(code(&run(a.path(), &args)), 0);
    assert_eq!(code(&run(b.path(), &args)), 0);
    for f in ["series.csv", "design.json", "simulate.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let s = json(&a.path().join("simulate.json"));
    assert!((s["birkhoff_s1"].as_f64().unwrap() - 0.5).abs() <= 0.05);
}

#[test]
fn historic_simulation_oscillates() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(d.path(), &["simulate", "--set", "mode=historic", "--set", "eras=29,34"])), 0);
    let s = json(&d.path().join("simulate.json"));
    assert!(s["max_consecutive_difference"].as_f64().unwrap() >= 0.2);
    // an era schedule that violates the dominance condition is a parameter error
    assert_eq!(code(&run(d.path(), &["simulate", "--set", "mode=historic", "--set", "eras=29,30,31"])), 2);
}
