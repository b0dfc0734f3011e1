use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use stieltjes_cli::schema::*;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stieltjes"));
    cmd.env_remove("STIELTJES_DIGITS");
    cmd
}

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

/// Parses under the schema, re-serializes, and checks nothing was lost.
fn round_trip<T: DeserializeOwned + Serialize>(json: &str) -> T {
    let parsed: T = serde_json::from_str(json).expect("output parses under its schema");
    let again = serde_json::to_value(&parsed).unwrap();
    let original: Value = serde_json::from_str(json).unwrap();
    assert_eq!(again, original);
    parsed
}

fn golden(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(here(&format!("golden/{name}"))).unwrap()).unwrap()
}

fn as_value(json: &str) -> Value {
    serde_json::from_str(json).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn solve_matches_golden() {
    let input = here("fixtures/charlier_n2.json");
    let json = stdout_ok(&["solve", "--input", input.to_str().unwrap(), "--degree", "4"]);
    let out: SolveOutput = round_trip(&json);
    assert_eq!(as_value(&json), golden("solve_charlier_n2.json"));
    // Monic Charlier polynomial x² - (2a + 1) x + a² at a = 3/2.
    assert_eq!(out.kernel.basis[0].to_string(), "x^2 - 4*x + 9/4");
}

#[test]
fn non_reduced_rationals_are_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "eq.json", r#"{"h": "2/2", "g": ["6/4"], "r": ["2/4", "-3/3"], "u": ["4/2"]}"#);
    let json = stdout_ok(&["solve", "--input", &path, "--degree", "4"]);
    assert_eq!(as_value(&json), golden("solve_charlier_n2.json"));
}

#[test]
fn certify_matches_golden() {
    let input = here("fixtures/charlier_n2.json");
    let json = stdout_ok(&["certify", "--input", input.to_str().unwrap()]);
    let cert: CertifyOutput = round_trip(&json);
    assert_eq!(as_value(&json), golden("certify_charlier.json"));
    assert_eq!(as_value(&json)["verdict"], "T1");
    assert!(cert.witness.is_some());
}

#[test]
fn degenerate_eigenvalue_is_inconclusive_with_two_solutions() {
    let input = here("fixtures/degenerate.json");
    let input = input.to_str().unwrap();
    let json = stdout_ok(&["certify", "--input", input]);
    assert_eq!(as_value(&json)["verdict"], "INCONCLUSIVE");
    let out: SolveOutput = round_trip(&stdout_ok(&["solve", "--input", input, "--degree", "6"]));
    assert_eq!(out.degrees, vec![5, 0]);
}

#[test]
fn gamma_h_matches_golden_and_reports_poles() {
    let json = stdout_ok(&["gamma-h", "--h", "7/3", "--x", "14/3", "--digits", "30"]);
    round_trip::<GammaHOutput>(&json);
    assert_eq!(as_value(&json), golden("gamma_h_7_3.json"));

    let pole: GammaHOutput = round_trip(&stdout_ok(&["gamma-h", "--h", "1/2", "--x", "-3/2"]));
    assert!(pole.pole && pole.value.is_none());
    assert_eq!(pole.pole_index, Some(3));
    assert_eq!(stdout_ok(&["gamma-h", "--h", "1/2", "--x", "-3/2", "--output", "text"]), "pole\n");
}

#[test]
fn digits_come_from_the_environment() {
    let out = bin()
        .env("STIELTJES_DIGITS", "25")
        .args(["gamma-h", "--h", "1", "--x", "1/2"])
        .output()
        .unwrap();
    let v: GammaHOutput = round_trip(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(v.precision_digits, 25);
    // Γ(1/2) = √π.
    assert!(v.value.unwrap().starts_with("1.772453850905516027298167"));
}

#[test]
fn corpus_matches_golden() {
    let json = stdout_ok(&["corpus", "--id", "hahn-a1/2-b3/2-N10", "--max-degree", "3", "--skip-bae"]);
    round_trip::<CorpusOutput>(&json);
    assert_eq!(as_value(&json), golden("corpus_hahn_n10.json"));
}

#[test]
fn corpus_with_bae_checks() {
    let json = stdout_ok(&["corpus", "--max-degree", "5"]);
    let out: CorpusOutput = round_trip(&json);
    assert_eq!(out.entries.len(), 5);
    for e in &out.entries {
        for d in &e.degrees {
            assert_eq!(d.dimension, 1, "{} n = {}", e.id, d.n);
            if d.n > 0 {
                assert!(d.bae_max.unwrap() < 1e-8 && d.bae_pass == Some(true), "{} n = {}", e.id, d.n);
            }
        }
    }
}

#[test]
fn bae_from_degree_and_from_roots() {
    let input = here("fixtures/charlier_n2.json");
    let input = input.to_str().unwrap();
    let out: BaeOutput = round_trip(&stdout_ok(&["bae", "--input", input, "--degree", "2"]));
    assert!(out.report.pass);
    assert_eq!(out.report.n, 2);

    // Zeros of x² - 4x + 9/4 are 2 ± √7/2; moving one by 1/1000 fails.
    let s7 = 7f64.sqrt() / 2.0;
    let roots = format!("{},{}", 2.0 - s7 + 1e-3, 2.0 + s7);
    let out: BaeOutput = round_trip(&stdout_ok(&["bae", "--input", input, "--roots", &roots]));
    assert!(out.polynomial.is_none());
    assert!(!out.report.pass);
}

#[test]
fn casoratian_round_trip_and_seed() {
    let input = here("fixtures/charlier_n2.json");
    let input = input.to_str().unwrap();
    let args = ["casoratian", "--input", input, "--x0", "-5/2", "--points", "8"];
    let out: CasoratianOutput = round_trip(&stdout_ok(&args));
    assert!(out.report.recurrence_exact);
    assert_eq!(out.values.len(), 9);
    assert!(out.report.ratio_rel_stddev.unwrap() < 1e-9);

    let seeded = |seed: &str| {
        let mut a = args.to_vec();
        a.extend(["--random-initial", "--seed", seed]);
        round_trip::<CasoratianOutput>(&stdout_ok(&a))
    };
    let (a, b, c) = (seeded("7"), seeded("7"), seeded("8"));
    assert_eq!(a, b);
    assert_ne!(a.y1_initial, c.y1_initial);
}

#[test]
fn norlund_demos() {
    let out: NorlundOutput = round_trip(&stdout_ok(&["norlund", "--demo", "constant", "--h", "1", "--x", "3", "--c", "0"]));
    assert!((out.report.numeric - 2.5).abs() < 1e-6);
    assert_eq!(out.report.closed_form, Some(2.5));

    let out: NorlundOutput = round_trip(&stdout_ok(&["norlund", "--demo", "exp", "--h", "1", "--x", "0"]));
    let closed = 1.0 - 1.0 / (1.0 - (-1f64).exp());
    assert!((out.report.closed_form.unwrap() - closed).abs() < 1e-12);
    assert!((out.report.direct.unwrap() - closed).abs() < 1e-10);

    let out: NorlundOutput = round_trip(&stdout_ok(&["norlund", "--demo", "log", "--h", "1", "--x", "4", "--p", "2"]));
    assert!((out.report.numeric - out.report.closed_form.unwrap()).abs() < 1e-6);
}

#[test]
fn text_output() {
    let input = here("fixtures/charlier_n2.json");
    let text = stdout_ok(&["solve", "--input", input.to_str().unwrap(), "--degree", "4", "--output", "text"]);
    assert!(text.starts_with("kernel dimension 1"));
    let text = stdout_ok(&["certify", "--input", input.to_str().unwrap(), "--output", "text"]);
    assert!(text.starts_with("verdict T1\n"));
}

#[test]
fn malformed_input_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "bad.json", "{\n  \"h\": \"1\",\n  \"g\": [\"1\"],\n  \"r\": [\"1\", \"x\"]\n}");
    let out = run(&["solve", "--input", &path, "--degree", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("field `r[1]`") && err.contains("line 4"), "{err}");

    let path = write_temp(&dir, "neg.json", r#"{"h": "-1", "g": ["1"]}"#);
    let err = String::from_utf8(run(&["solve", "--input", &path, "--degree", "2"]).stderr).unwrap();
    assert!(err.contains("positive"), "{err}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Usage errors.
    assert_eq!(code(&["solve", "--degree", "2"]), 1);
    assert_eq!(code(&["no-such-command"]), 1);
    assert_eq!(code(&["solve", "--input", "/nonexistent.json", "--degree", "2"]), 1);
    assert_eq!(code(&["--help"]), 0);

    // g = x² has a repeated root.
    let rep = write_temp(&dir, "rep.json", r#"{"h": "1", "g": ["0", "0", "1"]}"#);
    assert_eq!(code(&["certify", "--input", &rep]), 2);
    // No solution of degree 1 at u = 1/2.
    let input = here("fixtures/charlier_n2.json");
    let half = write_temp(&dir, "half.json", r#"{"h": "1", "g": ["3/2"], "r": ["1/2", "-1"], "u": ["1/2"]}"#);
    assert_eq!(code(&["bae", "--input", &half, "--degree", "1"]), 2);
    assert_eq!(code(&["bae", "--input", input.to_str().unwrap(), "--roots", "1,1"]), 2);

    // g = x vanishes on the lattice through -2.
    let pole = write_temp(&dir, "pole.json", r#"{"h": "1", "g": ["0", "1"], "r": ["1"], "u": ["1"]}"#);
    assert_eq!(code(&["casoratian", "--input", &pole, "--x0", "-2", "--points", "4"]), 3);
}
