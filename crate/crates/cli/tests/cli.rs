//! End-to-end checks of the `quorder` binary: exit codes, golden output,
//! and the model round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn demo_model() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models/demo.model")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn quorder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quorder"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_of(out)).expect("json stdout")
}

#[test]
fn validate_demo_model_passes() {
    let out = quorder(&["validate", demo_model().to_str().unwrap()]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert_eq!(text.matches("verdict:     valid POVM").count(), 2);
    assert_eq!(text.matches("projective:  no").count(), 2);
    assert!(text.ends_with("result: PASS\n"));
}

#[test]
fn validate_flags_incomplete_pair() {
    let out = quorder(&["validate", fixture("incomplete.model").to_str().unwrap()]);
    assert_eq!(code_of(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("complete:    FAIL"));
    assert!(text.contains("INVALID"));
    assert!(text.ends_with("result: FAIL\n"));
}

#[test]
fn malformed_models_exit_two() {
    let bad = [
        "bad_json.model",
        "wrong_dims.model",
        "bad_state.model",
        "unknown_key.model",
        "bad_entry.model",
    ];
    for name in bad {
        for cmd in ["validate", "qq"] {
            let out = quorder(&[cmd, fixture(name).to_str().unwrap()]);
            assert_eq!(code_of(&out), 2, "{cmd} {name}: {}", stderr_of(&out));
            assert!(stderr_of(&out).starts_with("error:"), "{cmd} {name}");
        }
    }
    let out = quorder(&["qq", "no_such_file.model"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn pair_commands_need_exactly_two_measurements() {
    let single = fixture("one_measurement.model");
    let out = quorder(&["validate", single.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0, "single-measurement model still validates");
    let out = quorder(&["qq", single.to_str().unwrap()]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("exactly 2 measurements"));
}

#[test]
fn distribution_matches_published_cells() {
    let demo = demo_model();
    let out = quorder(&[
        "distribution",
        demo.to_str().unwrap(),
        "--order",
        "a-first",
        "--convention",
        "literal",
    ]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("p(yes, yes) = 0.343906252599"));
    assert!(text.contains("p(yes, no)  = 0.252643229817"));
    assert!(text.contains("p(no, yes)  = 0.00330801472137"));
    assert!(text.contains("p(no, no)   = 0.0231561030496"));
    assert!(text.contains("normalization defect = 0.376986399813"));

    let out = quorder(&[
        "distribution",
        demo.to_str().unwrap(),
        "--order",
        "b-first",
        "--convention",
        "literal",
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("p(yes, no)  = 0.0460747013280"));
    assert!(text.contains("normalization defect = 0.462519773026"));
}

#[test]
fn distribution_requires_order_and_convention() {
    let demo = demo_model();
    let out = quorder(&["distribution", demo.to_str().unwrap()]);
    assert_eq!(code_of(&out), 2);
    let out = quorder(&["distribution", demo.to_str().unwrap(), "--order", "a-first"]);
    assert_eq!(code_of(&out), 2);
    let out = quorder(&[
        "distribution",
        demo.to_str().unwrap(),
        "--order",
        "sideways",
        "--convention",
        "literal",
    ]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn qq_defaults_to_literal_and_prints_golden_report() {
    let out = quorder(&["qq", demo_model().to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    let tail: String = text.lines().skip(1).collect::<Vec<_>>().join("\n") + "\n";
    let expected = "\
convention: literal
statistic (operator form):    0.0427666866066
statistic (probability form): 0.0427666866066
zero state: no
k operator:
  0.00000000000  0.0427666866066
  0.0427666866066  0.00000000000
a-first: p(yy) = 0.343906252599, p(yn) = 0.252643229817, p(ny) = 0.00330801472137, p(nn) = 0.0231561030496, defect = 0.376986399813
b-first: p(yy) = 0.322522909296, p(yn) = 0.0460747013280, p(ny) = 0.167109856603, p(nn) = 0.00177275974628, defect = 0.462519773026
";
    assert_eq!(tail, expected);
}

#[test]
fn qq_json_mirrors_report_fields() {
    let out = quorder(&["qq", demo_model().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code_of(&out), 0);
    let doc = json_of(&out);
    let c = 2.0 / (27.0 * 3f64.sqrt());
    assert!((doc["statistic"].as_f64().unwrap() - c).abs() <= 1e-12);
    assert!((doc["statistic_from_probabilities"].as_f64().unwrap() - c).abs() <= 1e-12);
    assert_eq!(doc["zero_state"], serde_json::json!(false));
    assert!((doc["k_operator"][0][1].as_f64().unwrap() - c).abs() <= 1e-12);
    assert!(doc["k_operator"][0][0].as_f64().unwrap().abs() <= 1e-12);
    let total = doc["a_first"]["total"].as_f64().unwrap();
    let defect = doc["a_first"]["normalization_defect"].as_f64().unwrap();
    assert!((total + defect - 1.0).abs() <= 1e-12);
}

#[test]
fn qq_convention_flag_overrides_file_field() {
    let literal = fixture("literal.model");
    let out = quorder(&["qq", literal.to_str().unwrap()]);
    assert!(stdout_of(&out).contains("convention: literal"));
    let out = quorder(&["qq", literal.to_str().unwrap(), "--convention", "sqrt"]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("convention: sqrt"));
    assert!(text.contains("statistic (operator form):    -0.0704416218017"));
}

#[test]
fn qq_state_override_reaches_the_zero_manifold() {
    let demo = demo_model();
    let out = quorder(&["qq", demo.to_str().unwrap(), "--state-override", "i,1"]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout_of(&out).contains("zero state: yes"));

    let out = quorder(&["qq", demo.to_str().unwrap(), "--state-override", "2i,1"]);
    assert!(stdout_of(&out).contains("zero state: yes"));

    let out = quorder(&["qq", demo.to_str().unwrap(), "--state-override", "1,1"]);
    assert!(stdout_of(&out).contains("zero state: no"));
}

#[test]
fn qq_state_override_rejects_garbage() {
    let demo = demo_model();
    for bad in ["x,y", "1", "1,2,3", "0,0"] {
        let out = quorder(&["qq", demo.to_str().unwrap(), "--state-override", bad]);
        assert_eq!(code_of(&out), 2, "override {bad:?}");
    }
}

#[test]
fn scan_counts_zero_states_and_rejects_tiny_grids() {
    let demo = demo_model();
    let out = quorder(&["scan", demo.to_str().unwrap(), "--grid", "16", "--format", "json"]);
    assert_eq!(code_of(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["grid"], serde_json::json!(16));
    let points = doc["points"].as_array().unwrap();
    assert_eq!(doc["count"].as_u64().unwrap() as usize, points.len());
    assert!(!points.is_empty());
    for p in points {
        assert!(p["statistic"].as_f64().unwrap().abs() <= 1e-10);
    }

    let out = quorder(&["scan", demo.to_str().unwrap(), "--grid", "1"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn max_reports_the_spectral_peak() {
    let out = quorder(&["max", demo_model().to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("max statistic: 0.0427666866066"));
    assert!(text.contains("0.500000000000"));
}

#[test]
fn lift_restores_order_equality() {
    let out = quorder(&["lift", demo_model().to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("common extended dimension: 3"));
    assert_eq!(text.matches("certificate: PASS").count(), 2);
    assert!(text.contains("statistic before lift: 0.0427666866066"));
    assert!(text.contains("order equality restored: PASS"));
}

#[test]
fn lift_rejects_invalid_povm() {
    let out = quorder(&["lift", fixture("incomplete.model").to_str().unwrap()]);
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).starts_with("error:"));
}

#[test]
fn simulate_is_seed_reproducible() {
    let demo = demo_model();
    let args = [
        "simulate",
        demo.to_str().unwrap(),
        "--n",
        "2000",
        "--seed",
        "9",
        "--format",
        "json",
    ];
    let first = quorder(&args);
    let second = quorder(&args);
    assert_eq!(code_of(&first), 0);
    assert_eq!(stdout_of(&first), stdout_of(&second));
    let doc = json_of(&first);
    let sum: u64 = doc["a_first_counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(sum, 2000);
    assert_eq!(doc["convention"], serde_json::json!("sqrt"));
    assert!((doc["analytic_qq"].as_f64().unwrap() - (-0.07044162180172892)).abs() <= 1e-12);
}

#[test]
fn simulate_rejects_literal_convention_model() {
    let out = quorder(&[
        "simulate",
        fixture("literal.model").to_str().unwrap(),
        "--n",
        "10",
        "--seed",
        "1",
    ]);
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("sqrt"));
}

#[test]
fn sweep_rows_match_sizes_and_reject_bad_lists() {
    let demo = demo_model();
    let out = quorder(&[
        "sweep",
        demo.to_str().unwrap(),
        "--sizes",
        "100,1000",
        "--format",
        "json",
    ]);
    assert_eq!(code_of(&out), 0);
    let doc = json_of(&out);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["n"], serde_json::json!(100));
    assert_eq!(rows[1]["n"], serde_json::json!(1000));
    assert!(
        rows[0]["standard_error"].as_f64().unwrap()
            > rows[1]["standard_error"].as_f64().unwrap()
    );

    for bad in ["100,100", "1000,100", "0,10"] {
        let out = quorder(&["sweep", demo.to_str().unwrap(), "--sizes", bad]);
        assert_eq!(code_of(&out), 2, "sizes {bad:?}");
    }
}

#[test]
fn emit_model_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("emitted.model");
    let out = quorder(&[
        "validate",
        demo_model().to_str().unwrap(),
        "--emit-model",
        emitted.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0);

    let original: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(demo_model()).unwrap()).unwrap();
    let round_trip: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&emitted).unwrap()).unwrap();
    assert_eq!(original, round_trip, "numeric values survive bit for bit");

    let out = quorder(&["qq", emitted.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout_of(&out).contains("0.0427666866066"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code_of(&quorder(&["--help"])), 0);
    assert_eq!(code_of(&quorder(&["--version"])), 0);
    assert_eq!(code_of(&quorder(&["qq", "--help"])), 0);
}

#[test]
fn unknown_flags_and_subcommands_exit_two() {
    assert_eq!(code_of(&quorder(&[])), 2);
    assert_eq!(code_of(&quorder(&["nonsense"])), 2);
    let demo = demo_model();
    assert_eq!(code_of(&quorder(&["qq", demo.to_str().unwrap(), "--bogus"])), 2);
    assert_eq!(
        code_of(&quorder(&["qq", demo.to_str().unwrap(), "--format", "yaml"])),
        2
    );
}
