use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coronawalk")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn spectrum_pairs(v: &Value) -> Vec<(String, u64)> {
    v["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["value"].as_str().unwrap().to_string(), e["multiplicity"].as_u64().unwrap()))
        .collect()
}

#[test]
fn spectrum_listings() {
    let pairs = spectrum_pairs(&json(&["spectrum", "CP:4"]));
    assert_eq!(pairs, [("12".to_string(), 1), ("6".to_string(), 4), ("4".to_string(), 3)]);
    assert_eq!(spectrum_pairs(&json(&["spectrum", "K:2"])), [("2".to_string(), 1), ("0".to_string(), 1)]);
    assert_eq!(spectrum_pairs(&json(&["spectrum", "empty:3"])), [("0".to_string(), 3)]);
}

#[test]
fn corona_spectrum_cross_checks() {
    let p4 = json(&["corona-spectrum", "K:2", "K:1"]);
    let values: Vec<&str> = p4["closed_form"].as_array().unwrap().iter().map(|e| e["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["2+√2", "2", "2-√2", "0"]);
    for (g, h, n) in [("K:2", "K:1", 4), ("C:4", "K:1", 8), ("C:5", "C:5", 30)] {
        let v = json(&["corona-spectrum", g, h]);
        assert!(v["max_deviation"].as_f64().unwrap() < 1e-8, "{g} {h}");
        assert_eq!(v["multiplicities_match"], Value::Bool(true));
        let total: u64 = v["closed_form"].as_array().unwrap().iter().map(|e| e["multiplicity"].as_u64().unwrap()).sum();
        assert_eq!(total, n);
    }
}

#[test]
fn irregular_corona_names_the_vertex() {
    let out = run(&["corona-spectrum", "file:/dev/null", "K:1"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("coronawalk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p3.txt");
    std::fs::write(&path, "3\n0 1\n1 2\n").unwrap();
    let out = run(&["corona-spectrum", &format!("file:{}", path.display()), "K:1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("vertex"), "{err}");
}

#[test]
fn pst_verdicts() {
    let cp4 = json(&["check-pst", "CP:4", "0", "1"]);
    assert_eq!(cp4["verdict"], "PST");
    assert!((cp4["tau0"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    let c4 = json(&["check-pst", "corona(C:4,K:1)", "base:0", "base:2"]);
    assert_eq!((c4["verdict"].as_str(), c4["basis"].as_str()), (Some("no-PST"), Some("necessary-bounds")));
    let k2 = json(&["check-pst", "corona(K:2,C:3)", "base:0", "base:1"]);
    assert_eq!((k2["verdict"].as_str(), k2["basis"].as_str()), (Some("no-PST"), Some("two-vertex-base-prime-order")));
}

#[test]
fn pgst_searches() {
    let cp = json(&["search-pgst", "cocktail-corona:3", "--epsilon", "0.01"]);
    assert_eq!(cp["achieved"], Value::Bool(true));
    assert!(cp["fidelity"].as_f64().unwrap() >= 0.99);
    let thm = json(&["search-pgst", "corona(CP:4,empty:1)", "0", "1", "--epsilon", "0.01"]);
    assert_eq!(thm["achieved"], Value::Bool(true));
    let starved = json(&["search-pgst", "corona(K:2,K:2)", "base:0", "base:1", "--epsilon", "1e-6", "--l-bound", "10"]);
    assert_eq!(starved["achieved"], Value::Bool(false));
}

#[test]
fn fidelity_outputs() {
    let k2 = json(&["fidelity", "K:2", "0", "1", "--tau", "1.5707963"]);
    assert!((k2["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let same = json(&["fidelity", "HQ:3", "5", "5", "--tau", "0"]);
    assert_eq!(same["fidelity"].as_f64(), Some(1.0));
    let out = run(&["fidelity", "corona(K:2,K:1)", "0", "1", "--grid", "0:20:2000", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tau,fidelity"));
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 2000);
    assert!(values.iter().all(|&f| f < 1.0));
}

#[test]
fn exit_codes_and_parse_positions() {
    let out = run(&["check-pst", "corona(C:4,Q:1)", "0", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 11"));
    assert_eq!(run(&["check-pst", "K:2", "copy:0:0", "1"]).status.code(), Some(2));
    assert_eq!(run(&["search-pgst", "cocktail-corona:2"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "K:2", "--format", "xml"]).status.code(), Some(2));

    // end vertices of the path on 7 vertices: cubic eigenvalues
    let dir = std::env::temp_dir().join(format!("coronawalk-cli-p7-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p7.txt");
    std::fs::write(&path, "7\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n").unwrap();
    let out = run(&["check-pst", "--file", path.to_str().unwrap(), "0", "6"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "undecided-numeric");
}

#[test]
fn env_overrides_and_determinism() {
    let first = run(&["check-pst", "CP:3", "0", "1"]);
    let second = run(&["check-pst", "CP:3", "0", "1"]);
    assert_eq!(first.stdout, second.stdout);
    let out = Command::new(env!("CARGO_BIN_EXE_coronawalk"))
        .args(["spectrum", "K:3"])
        .env("QWC_FORMAT", "csv")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "value,approx,multiplicity\n4,4,1\n1,1,2\n");
}
