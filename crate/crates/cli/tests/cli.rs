use std::process::{Command, Output};

use serde_json::Value;

fn lkernel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lkernel")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = lkernel(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: not JSON ({e})"));
    (out.status.code().unwrap(), v)
}

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../schema/run_report.schema.json");
    let s: Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&s).expect("schema compiles")
}

const QUICK: &[&[&str]] = &[
    &["gauss-sum", "--modulus", "5", "--char-index", "1"],
    &["gauss-sum", "--modulus", "12", "--char-index", "0"],
    &["expsum", "k", "--N", "1", "--n", "1", "--m", "1", "--D", "-3"],
    &["expsum", "s", "--N", "2", "--n", "6", "--m", "3", "--D", "-7"],
    &["expsum", "h", "--N", "1", "--n", "5", "--D", "-3", "--r", "1", "--Dp", "-15", "--rp", "1"],
    &["verify", "s-equals-k", "--max-level", "2", "--max-j", "5", "--max-m", "3"],
    &["verify", "gkz-lemma", "--max-level", "2", "--max-nj", "6", "--max-m", "4"],
    &["verify", "waldspurger-kernel", "--k", "4", "--N", "1", "--D", "-8", "--m-max", "2"],
    &["kernel-coeff", "--k", "8", "--N", "1", "--chi-modulus", "4", "--chi-index", "1", "--s-re", "3.7", "--s-im", "1.3", "--m", "2"],
    &["nonvanishing", "min-weight", "--t0", "0", "--eps", "0.25", "--N", "1", "--m", "1", "--h", "3"],
    &["nonvanishing", "min-level", "--t0", "0", "--eps", "0.25", "--k", "6", "--m", "1", "--h", "3"],
    &["nonvanishing", "breakdown", "--k", "48", "--N", "1", "--h", "3", "--m", "1", "--delta", "0.25", "--t0", "0"],
    &["nonvanishing", "breakdown", "--k", "12", "--N", "5", "--h", "3", "--m", "1", "--delta", "0.25", "--t0", "1", "--right"],
    &[
        "nonvanishing", "scan", "--k", "10", "--N", "4", "--chi-modulus", "3", "--chi-index", "1", "--m", "2", "--t0", "0.8",
        "--lo", "4.6", "--hi", "5.4", "--step", "0.2",
    ],
    // a failed computation is still a valid report
    &["--n-cap", "64", "--rel-tol", "1e-14", "kernel-coeff", "--k", "6", "--N", "1", "--chi-modulus", "3", "--chi-index", "1", "--s-re", "3", "--m", "1"],
];

#[test]
fn every_report_validates_against_the_schema() {
    let schema = schema();
    for args in QUICK {
        let (code, v) = report(args);
        assert!(code == 0 || code == 2, "{args:?}: exit {code}");
        let msgs: Vec<String> = match schema.validate(&v) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
        };
        assert!(msgs.is_empty(), "{args:?}: {msgs:?}");
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let schema = schema();
    let (_, mut v) = report(QUICK[2]);
    v["outputs"]["value"] = Value::from(-1.0);
    assert!(!schema.is_valid(&v));
    let (_, mut v) = report(QUICK[2]);
    v["verdicts"] = serde_json::json!([{ "name": "x", "pass": "yes", "detail": "" }]);
    assert!(!schema.is_valid(&v));
}

#[test]
fn k_sum_anchor() {
    let (code, v) = report(QUICK[2]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "expsum k");
    assert!((v["outputs"]["value"]["re"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(v["outputs"]["exact"]["terms"], serde_json::json!([[0, -1]]));
    assert_eq!(v["outputs"]["representatives"], serde_json::json!([1]));
}

#[test]
fn exit_codes() {
    let out = lkernel(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(lkernel(&["expsum", "k", "--N", "1"]).status.code(), Some(1));
    // no root of D mod 4N
    let out = lkernel(&["verify", "waldspurger-kernel", "--k", "3", "--N", "2", "--D", "-3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mod 8"));
    // outside the region where the bound applies
    let out = lkernel(&["nonvanishing", "breakdown", "--k", "3", "--N", "1", "--h", "3", "--m", "1", "--delta", "0.5", "--t0", "0"]);
    assert_eq!(out.status.code(), Some(1));
    // a verdict that fails
    let (code, v) = report(&["nonvanishing", "breakdown", "--k", "12", "--N", "1", "--h", "3", "--m", "1", "--delta", "0.25", "--t0", "0"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdicts"][0]["pass"], false);
    let (code, v) = report(QUICK[QUICK.len() - 1]);
    assert_eq!(code, 2);
    assert_eq!(v["verdicts"][0]["name"], "computation");
    assert_eq!(lkernel(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical() {
    for args in QUICK {
        assert_eq!(lkernel(args).stdout, lkernel(args).stdout, "{args:?}");
    }
}

#[test]
fn timing_is_opt_in() {
    let (_, v) = report(QUICK[0]);
    assert!(v.get("timing_ms").is_none());
    let mut args = QUICK[0].to_vec();
    args.push("--timing");
    let (_, v) = report(&args);
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn out_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut args = QUICK[3].to_vec();
    args.extend(["--out", path.to_str().unwrap()]);
    let out = lkernel(&args);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), lkernel(QUICK[3]).stdout);

    let mut args = QUICK[13].to_vec();
    args.push("--csv");
    let out = lkernel(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sigma,coeff_re,coeff_im,abs,err"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], 4.6);
    assert!(rows.iter().all(|r| r.len() == 5 && (r[1].hypot(r[2]) - r[3]).abs() < 1e-9 * r[3]));
}

#[test]
fn gauss_sums_of_primitive_characters() {
    for h in [3u64, 4, 5, 7, 8, 9, 12] {
        let count = lkernel::ntheory::all_characters(h).unwrap().len();
        for i in 0..count {
            let (code, v) = report(&["gauss-sum", "--modulus", &h.to_string(), "--char-index", &i.to_string()]);
            assert_eq!(code, 0, "h={h} index {i}: {v}");
            let primitive = v["outputs"]["primitive"].as_bool().unwrap();
            assert_eq!(v["verdicts"].as_array().unwrap().len(), if primitive { 2 } else { 0 });
        }
    }
}

#[test]
fn global_truncation_flags_reach_the_kernel() {
    let (_, v) = report(&["--rel-tol", "1e-6", "--n-cap", "4096", "kernel-coeff", "--k", "8", "--N", "1", "--chi-modulus", "3", "--chi-index", "1", "--s-re", "4", "--m", "1"]);
    assert_eq!(v["inputs"]["truncation"]["rel_tol"], 1e-6);
    assert_eq!(v["inputs"]["truncation"]["n_cap"], 4096);
    assert_eq!(lkernel(&["--rel-tol", "2", "kernel-coeff", "--k", "8", "--N", "1", "--chi-modulus", "3", "--chi-index", "1", "--s-re", "4", "--m", "1"]).status.code(), Some(1));
}
