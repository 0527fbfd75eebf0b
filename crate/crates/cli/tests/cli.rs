use std::path::{Path, PathBuf};
use std::process::Command;

use opnorm_lab::report::round12;
use opnorm_lab::run_cli_with;
use proptest::prelude::*;
use serde_json::Value;

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn example(name: &str) -> PathBuf {
    manifest().join("examples").join(name)
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(manifest().join("schema/opnorm-lab-1.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("opnorm-lab").chain(args.iter().copied());
    let code = run_cli_with(argv, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn temp_config(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("opnorm-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

fn assert_valid(doc: &Value) {
    let v = validator();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}\n{doc:#}");
}

#[test]
fn gap_example_is_zero() {
    let r = run(&["gap", "--config", example("ex_c03.json").to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = json(&r);
    assert!(doc["gap"].as_f64().unwrap().abs() < 1e-6);
    let keys: Vec<&str> = doc.as_object().unwrap().keys().map(String::as_str).take(9).collect();
    assert_eq!(keys, ["schema", "report", "space", "lhs", "rhs", "gap", "per_t", "flags", "rhs_error"]);
    assert_valid(&doc);
}

#[test]
fn certify_example_is_strict() {
    let r = run(&["certify", "--config", example("ex_cm05.json").to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = json(&r);
    assert_eq!(doc["verdict"], "StrictInequalityEvidence");
    assert_eq!(doc["wx_verdict"], "PassEvidence");
    assert!((doc["gap_crosscheck"].as_f64().unwrap() - 0.25).abs() < 1e-6);
    assert_valid(&doc);
}

#[test]
fn certify_equality_example() {
    let r = run(&["certify", "--config", example("ex_c03.json").to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let doc = json(&r);
    assert_eq!(doc["verdict"], "EqualityCertified");
    assert!(doc["candidates"].as_array().unwrap().iter().any(|c| c["passes"] == true));
}

#[test]
fn selftest_passes() {
    let r = run(&["selftest"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let doc = json(&r);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["count"], 10);
    assert_valid(&doc);
}

#[test]
fn every_report_matches_the_schema() {
    let cfg = temp_config(
        "all.json",
        r#"{"symbol": "(c+t+z)*blaschke([0.5]; 1)", "bindings": {"c": -0.25}, "t": 0.3, "z": [0.2, -0.4],
            "space": {"kind": "bergman", "p": 3, "alpha": 0.5}, "k": 6}"#,
    );
    let cfg = cfg.to_str().unwrap();
    for (cmd, report) in [
        ("norm", "norm"),
        ("supnorm", "supnorm"),
        ("opnorm", "opnorm"),
        ("gap", "gap"),
        ("certify", "certificate"),
        ("wx-check", "wx"),
    ] {
        let r = run(&[cmd, "--config", cfg]);
        assert_eq!(r.code, 0, "{cmd}: {}", r.stderr);
        let doc = json(&r);
        assert_eq!(doc["schema"], "opnorm-lab/1");
        assert_eq!(doc["report"], report);
        assert_valid(&doc);
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let v = validator();
    let r = run(&["gap", "--config", example("ex_c03.json").to_str().unwrap()]);
    let mut doc = json(&r);
    assert!(v.is_valid(&doc));
    doc["schema"] = Value::from("opnorm-lab/2");
    assert!(!v.is_valid(&doc));
    let mut doc = json(&r);
    doc.as_object_mut().unwrap().remove("per_t");
    assert!(!v.is_valid(&doc));
}

#[test]
fn norm_reports_extremal_data() {
    let cfg = temp_config("norm.json", r#"{"symbol": "(z+2)/3", "z": [0.5, 0], "space": {"p": 2}}"#);
    let doc = json(&run(&["norm", "--config", cfg.to_str().unwrap()]));
    let eval = doc["extremal"]["eval_norm"].as_f64().unwrap();
    assert!((eval - (1.0f64 / 0.75).sqrt()).abs() < 1e-11);
    let value = doc["extremal"]["value_at_z"]["re"].as_f64().unwrap();
    assert!((value - 2.5 / 3.0).abs() < 1e-11);
}

#[test]
fn opnorm_sequence_approaches_the_norm() {
    let cfg = temp_config("opnorm.json", r#"{"symbol": "(t+z)/2", "t": 0.5}"#);
    let doc = json(&run(&["opnorm", "--config", cfg.to_str().unwrap()]));
    assert!((doc["norm"].as_f64().unwrap() - 0.75).abs() < 1e-10);
    let values = doc["sequence"]["values"].as_array().unwrap();
    assert_eq!(values.len(), 14);
    assert!((values[13].as_f64().unwrap() - 0.75).abs() < 1e-3);
}

#[test]
fn runs_are_byte_identical() {
    for (cmd, cfg) in [("gap", "ex_c03.json"), ("certify", "ex_cm05.json"), ("sweep", "sweep_c.json")] {
        let a = run(&[cmd, "--config", example(cfg).to_str().unwrap()]);
        let b = run(&[cmd, "--config", example(cfg).to_str().unwrap()]);
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().unwrap().iter().map(String::from).collect();
    let rows = rd.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn sweep_csv_layout() {
    let r = run(&["sweep", "--config", example("sweep_c.json").to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(!r.stdout.contains('\r'));
    let (header, rows) = csv_rows(&r.stdout);
    assert_eq!(header, ["c", "lhs", "rhs", "gap", "verdict"]);
    assert_eq!(rows.len(), 11);
    for row in &rows {
        let c: f64 = row[0].parse().unwrap();
        let gap: f64 = row[3].parse().unwrap();
        let expected = if c > -1.0 && c < 0.0 { (c * c).min((c + 1.0) * (c + 1.0)) } else { 0.0 };
        assert!((gap - expected).abs() < 1e-6, "{row:?}");
    }
}

#[test]
fn sweep_records_failures_in_row() {
    let cfg = temp_config(
        "errs.json",
        r#"{"symbol": "(t+z)/(c+z)", "sweep": {"name": "c", "values": [2, 1, -3, 0.5]}}"#,
    );
    let r = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, rows) = csv_rows(&r.stdout);
    assert_eq!(rows.len(), 4);
    let verdicts: Vec<&str> = rows.iter().map(|r| r[4].as_str()).collect();
    assert_eq!(verdicts[1], "Error");
    assert_eq!(verdicts[3], "Error");
    assert_ne!(verdicts[0], "Error");
    assert_ne!(verdicts[2], "Error");
    assert_eq!(rows[1][1], "");
}

#[test]
fn blaschke_factor_leaves_sweep_unchanged() {
    let plain = run(&["sweep", "--config", example("sweep_c.json").to_str().unwrap()]);
    let cfg = temp_config(
        "sweep_b.json",
        r#"{"symbol": "(c+t+z)*blaschke([0.5, 0.9]; 0)",
            "sweep": {"name": "c", "values": [-1.5, -1.25, -1.0, -0.9, -0.75, -0.5, -0.25, -0.1, 0, 0.25, 0.5]}}"#,
    );
    let with = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    let (_, a) = csv_rows(&plain.stdout);
    let (_, b) = csv_rows(&with.stdout);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        let (gx, gy): (f64, f64) = (x[3].parse().unwrap(), y[3].parse().unwrap());
        assert!((gx - gy).abs() < 1e-6, "{x:?} {y:?}");
        assert_eq!(x[4], y[4]);
    }
}

#[test]
fn out_flag_writes_file() {
    let out = std::env::temp_dir().join(format!("opnorm-lab-out-{}.json", std::process::id()));
    let r = run(&["gap", "--config", example("ex_c03.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["report"], "gap");
    std::fs::remove_file(out).unwrap();
}

#[test]
fn divergent_rhs_reports_and_exits_one() {
    let cfg = temp_config("div.json", r#"{"symbol": "t^(-1)*z"}"#);
    let r = run(&["gap", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    let doc = json(&r);
    assert!(doc["flags"].as_array().unwrap().iter().any(|f| f["kind"] == "rhs_not_converged"));
    assert_valid(&doc);
}

#[test]
fn domain_errors_exit_one_with_one_line() {
    let bad_json = temp_config("bad.json", r#"{"symbol": "z", "space": {"kind": "hardy", "p": 2, "q": 1}}"#);
    let bad_symbol = temp_config("badsym.json", r#"{"symbol": "(z+"}"#);
    let bad_quad = temp_config("badquad.json", r#"{"symbol": "z", "quad": {"tol": -1}}"#);
    let cases = [
        (vec!["frobnicate"], "unrecognized subcommand"),
        (vec![], "subcommand"),
        (vec!["gap"], "--config"),
        (vec!["gap", "--config", "/nonexistent/cfg.json"], "cannot read"),
        (vec!["gap", "--config", bad_json.to_str().unwrap()], "`space.q`"),
        (vec!["gap", "--config", bad_symbol.to_str().unwrap()], "`symbol`"),
        (vec!["gap", "--config", bad_quad.to_str().unwrap()], "`quad.tol`"),
    ];
    for (args, needle) in cases {
        let r = run(&args);
        assert_eq!(r.code, 1, "{args:?}");
        assert!(r.stdout.is_empty(), "{args:?}");
        assert_eq!(r.stderr.lines().count(), 1, "{args:?}: {}", r.stderr);
        assert!(r.stderr.contains(needle), "{args:?}: {}", r.stderr);
    }
}

#[test]
fn help_exits_zero() {
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("wx-check"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_opnorm-lab");
    let ok = Command::new(bin).args(["gap", "--config"]).arg(example("ex_c03.json")).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&bad.stderr).lines().count(), 1);
    let unwritable = Command::new(bin)
        .args(["gap", "--config"])
        .arg(example("ex_c03.json"))
        .args(["--out", "/nonexistent/dir/report.json"])
        .output()
        .unwrap();
    assert_eq!(unwritable.status.code(), Some(2));
}

proptest! {
    #[test]
    fn rounding_is_idempotent_and_close(x in -1e12f64..1e12) {
        let r = round12(x);
        prop_assert_eq!(round12(r), r);
        prop_assert!((r - x).abs() <= 5e-12 * x.abs());
    }

    #[test]
    fn rounded_values_survive_a_json_round_trip(x in proptest::num::f64::NORMAL) {
        let v = opnorm_lab::report::real(x);
        let back: Value = serde_json::from_str(&v.to_string()).unwrap();
        prop_assert_eq!(back.as_f64().unwrap(), round12(x));
    }
}
