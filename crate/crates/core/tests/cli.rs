use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clusterjs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_out(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn estimate_reads_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "y.csv", "y\n2.1\n1.8\n2.3\n-1.9\n-2.2\n-2.0\n");
    let json = write(dir.path(), "y.json", "[2.1, 1.8, 2.3, -1.9, -2.2, -2.0]");
    let a = json_out(&run(&["estimate", "--input", &csv, "--sigma", "1", "--estimator", "js_plus"]));
    let b = json_out(&run(&["estimate", "--input", &json, "--sigma", "1", "--estimator", "js_plus"]));
    assert_eq!(a, b);
    assert_eq!(a["estimate"].as_array().unwrap().len(), 6);
    assert!(a["shrinkage_factor"].as_f64().unwrap() > 0.0);

    let h = json_out(&run(&["estimate", "--input", &csv, "--sigma", "1"]));
    assert_eq!(h["estimator"], "hybrid4");
    assert!(h["selection"]["chosen"].is_u64());

    let c = json_out(&run(&["estimate", "--input", &csv, "--sigma", "1", "--estimator", "cluster2", "--delta", "0.1"]));
    assert_eq!(c["attractors"].as_array().unwrap().len(), 2);
    assert_eq!(c["delta"], 0.1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "1\nabc\n");
    assert_eq!(run(&["estimate", "--input", &bad, "--sigma", "1"]).status.code(), Some(1));
    let missing = dir.path().join("nope.csv");
    let out = run(&["estimate", "--input", missing.to_str().unwrap(), "--sigma", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.csv"));
    let small = write(dir.path(), "small.csv", "1\n2\n3\n");
    let out = run(&["estimate", "--input", &small, "--sigma", "1", "--estimator", "lindley"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["estimate", "--sigma", "1"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn simulate_writes_csv_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
        "n": 20, "sigma": 1, "trials": 50, "seed": 4,
        "estimators": ["ml", "js_plus", "hybrid2"],
        "theta": {"kind": "two_point", "tau": 2, "rho": 1},
        "sweep": {"variable": "tau", "values": [0, 2]}
    }"#;
    let path = write(dir.path(), "cfg.json", cfg);
    let out = run(&["simulate", "--config", &path]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "tau,label,mean_loss,std_error");
    // 2 sweep points × (3 estimators + 3 theory rows)
    assert_eq!(data.len(), 1 + 12);
    assert!(data.iter().any(|l| l.starts_with("2,theory:ml,1,")));

    let out_file = dir.path().join("out.csv");
    assert!(run(&["simulate", "--config", &path, "--out", out_file.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read_to_string(&out_file).unwrap(), text);

    let bad = write(dir.path(), "bad.json", &cfg.replace("\"trials\"", "\"trails\""));
    assert_eq!(run(&["simulate", "--config", &bad]).status.code(), Some(1));
}

#[test]
fn theory_reports_constants() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "t.json", r#"{"kind": "two_point", "tau": 6, "rho": 1}"#);
    let v = json_out(&run(&["theory", "--spec", &spec, "--n", "1000"]));
    assert_eq!(v["gamma"], 36.0);
    let c2 = &v["constants"]["cluster2"];
    assert!(c2["beta"].as_f64().unwrap() >= c2["alpha"].as_f64().unwrap());
    assert!(v["asymptotic_loss"]["cluster2"].as_f64().unwrap() < 0.05);
    assert!(v["asymptotic_loss"]["hybrid4"].is_f64());

    let values = write(dir.path(), "theta.csv", "1\n-1\n1\n-1\n");
    let v = json_out(&run(&["theory", "--theta-values", &values, "--clusters", "2"]));
    assert_eq!(v["n"], 4);
    assert_eq!(v["rho"], 1.0);
}

#[test]
fn figures_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = run(&[
            "figures", "--figure", "fig2,fig5", "--out-dir", d.to_str().unwrap(),
            "--trials", "30", "--seed", "8", "--n", "40", "--sweep", "0,1.5,3",
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["fig2.csv", "fig5a.csv"] {
        let x = std::fs::read(a.join(name)).unwrap();
        assert_eq!(x, std::fs::read(b.join(name)).unwrap());
        assert!(String::from_utf8(x).unwrap().contains("# seed: 8"));
    }
    assert_eq!(run(&["figures", "--figure", "fig9"]).status.code(), Some(1));
}

#[test]
fn check_concentration_reports_shrinking_deviation() {
    let v = json_out(&run(&[
        "check-concentration", "--statistic", "lemma2", "--delta", "0.05",
        "--n-grid", "100,10000", "--trials", "100",
    ]));
    assert_eq!(v["statistic"], "lemma2");
    assert_eq!(v["deviation_shrinks"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(run(&["check-concentration", "--statistic", "lemma9"]).status.code(), Some(1));
}
