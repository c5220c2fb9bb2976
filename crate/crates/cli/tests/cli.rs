use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringhopf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(out.stdout.as_slice())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn pairs(v: &Value) -> Vec<(f64, f64)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
        .collect()
}

#[test]
fn analyze_reference_ring() {
    let out = run(&["analyze", &data("reference_ring.json")]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["imaginary_pair"]["omega"], 1.0);
    assert_eq!(doc["hopf_conditions"]["flags"]["product_identity"], true);
    let theta: Vec<f64> = doc["phase_profile"]["theta"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_f64().unwrap())
        .collect();
    let pi = std::f64::consts::PI;
    let expected = [
        1.25 * pi,
        2.0 * pi - 0.5f64.atan(),
        pi - (1.0f64 / 3.0).atan(),
    ];
    for (t, e) in theta.iter().zip(expected) {
        assert!((t - e).abs() < 1e-12);
    }
}

#[test]
fn analyze_accepts_family_file() {
    assert_eq!(code(&run(&["analyze", &data("reference_family.json")])), 0);
}

#[test]
fn analyze_exit_codes() {
    assert_eq!(code(&run(&["analyze", &data("circulant.json")])), 2);
    assert_eq!(code(&run(&["analyze", "does-not-exist.json"])), 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 3, "a": [1, 2], "b": [1, 1, 1]}"#).unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        code(&run(&["analyze", &data("reference_ring.json"), "--bogus"])),
        1
    );
    assert_eq!(
        code(&run(&[
            "analyze",
            &data("reference_ring.json"),
            "--axis-tol",
            "0"
        ])),
        1
    );
    assert_eq!(
        code(&run(&[
            "perturb",
            &data("reference_ring.json"),
            "--epsilon=-1"
        ])),
        1
    );
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn tables_csv_shape_and_discrepancies() {
    let plain = run(&["tables", "--format", "csv"]);
    assert_eq!(code(&plain), 0);
    let rows = csv_rows(&plain);
    assert_eq!(rows.len(), 1 + 24);
    assert!(rows.iter().all(|r| r.len() == 8));

    let flagged = run(&["tables", "--format", "csv", "--discrepancies"]);
    let rows = csv_rows(&flagged);
    assert!(rows.iter().all(|r| r.len() == 10));
    let hits: Vec<_> = rows[1..].iter().filter(|r| r[9] == "1").collect();
    assert_eq!(hits.len(), 4);
    for r in hits {
        assert!(r[0] == "B" || r[0] == "C");
        assert_eq!(&r[2..5], ["+", "+", "-"]);
    }
}

#[test]
fn tables_case_a_negative_omega() {
    let rows = csv_rows(&run(&["tables", "--format", "csv", "--omega", "neg"]));
    let case_a: Vec<Vec<&str>> = rows[1..]
        .iter()
        .filter(|r| r[0] == "A")
        .map(|r| r[5..8].iter().map(String::as_str).collect())
        .collect();
    assert_eq!(
        case_a,
        vec![
            vec!["2", "2", "2"],
            vec!["2", "4", "4"],
            vec!["4", "2", "4"],
            vec!["4", "4", "2"]
        ]
    );
}

#[test]
fn tables_text_marks_discrepancies() {
    let out = run(&["tables", "--omega", "pos", "--discrepancies"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Case A, omega>0"));
    assert_eq!(text.matches("differs from lemma").count(), 2);
}

#[test]
fn spectrum_of_adjacency_example() {
    let out = run(&["spectrum", "--adjacency", &data("ex5.json")]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let mut eig = pairs(&doc["spectrum"]["eigenvalues"]);
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let expected = [(0.0, -1.0), (0.0, 0.0), (0.0, 0.0), (0.0, 1.0), (3.0, 0.0)];
    for (got, want) in eig.iter().zip(expected) {
        assert!((got.0 - want.0).abs() < 1e-9 && (got.1 - want.1).abs() < 1e-9);
    }
    assert_eq!(doc["resonances"][0]["kind"], "zero_to_one");
}

#[test]
fn perturb_repairs_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let result = dir.path().join("result.json");
    let out = run(&[
        "perturb",
        &data("double_eigenvalue.json"),
        "--epsilon",
        "1e-3",
        "-o",
        result.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&result).unwrap()).unwrap();
    assert!(doc["delta"].as_f64().unwrap() <= 1e-3);
    assert!(doc["achieved_gap"].as_f64().unwrap() > 1e-6);
    assert_eq!(doc["removed"][0]["kind"], "multiple");

    let repaired = dir.path().join("repaired.json");
    std::fs::write(&repaired, doc["perturbed"].to_string()).unwrap();
    let again = json(&run(&["perturb", repaired.to_str().unwrap()]));
    assert_eq!(again["delta"], 0.0);
}

#[test]
fn simulate_csv_and_exit_codes() {
    let out = run(&[
        "simulate",
        &data("reference_family.json"),
        "--lambda",
        "0.05",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1 + 3);
    assert!(rows.iter().all(|r| r.len() == 8));
    assert!(rows[1..].iter().all(|r| r[7] == "ok"));

    // Below onset there is no cycle; the row is kept with an error status.
    let below = run(&[
        "simulate",
        &data("reference_family.json"),
        "--lambda",
        "-0.05,0.05",
    ]);
    assert_eq!(code(&below), 2);
    let rows = csv_rows(&below);
    assert!(rows.iter().all(|r| r.len() == 8));
    assert_eq!(rows[1][0], "-0.05");
    assert_ne!(rows[1][7], "ok");
}

#[test]
fn simulate_is_deterministic_given_seed() {
    let args = |seed: &str| {
        run(&[
            "simulate",
            &data("reference_family.json"),
            "--lambda",
            "0.05",
            "--jitter",
            "1e-3",
            "--seed",
            seed,
        ])
        .stdout
    };
    assert_eq!(args("7"), args("7"));
    assert_ne!(args("7"), args("8"));
}
