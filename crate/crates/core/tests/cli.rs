//! End-to-end runs of the `sphcub` binary: golden outputs, pipes and exit codes.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn sphcub(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sphcub"))
        .args(args)
        .stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn sphcub");
    if let Some(bytes) = stdin {
        child.stdin.take().unwrap().write_all(bytes).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn run_ok(args: &[&str], stdin: Option<&[u8]>) -> Vec<u8> {
    let out = sphcub(args, stdin);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn golden(name: &str) -> Value {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Structural equality with numbers compared to `tol`.
fn assert_close(actual: &Value, expected: &Value, tol: f64, at: &str) {
    match (actual, expected) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            assert!((a - b).abs() <= tol, "{at}: {a} vs {b}");
        }
        (Value::Array(a), Value::Array(b)) => {
            assert_eq!(a.len(), b.len(), "{at}: length");
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                assert_close(x, y, tol, &format!("{at}[{i}]"));
            }
        }
        (Value::Object(a), Value::Object(b)) => {
            let mut ka: Vec<_> = a.keys().collect();
            let mut kb: Vec<_> = b.keys().collect();
            ka.sort();
            kb.sort();
            assert_eq!(ka, kb, "{at}: keys");
            for (k, v) in a {
                assert_close(v, &b[k], tol, &format!("{at}.{k}"));
            }
        }
        _ => assert_eq!(actual, expected, "{at}"),
    }
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

#[test]
fn construct_matches_golden() {
    let out = run_ok(&["construct", "cross-polytope", "--n", "3"], None);
    assert_close(&json(&out), &golden("cross_polytope_3.json"), 1e-15, "$");
}

#[test]
fn verify_reports_degree_four_failure() {
    let cross = run_ok(&["construct", "cross-polytope", "--n", "3"], None);
    let out = sphcub(&["verify", "--t", "4"], Some(&cross));
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out.stdout);
    assert_close(&report, &golden("verify_cross_polytope_3_t4.json"), 1e-14, "$");
    assert!((report["residuals"][3].as_f64().unwrap() - 2.0 / 15.0).abs() < 1e-14);

    let out = sphcub(&["verify", "--t", "3"], Some(&cross));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out.stdout)["pass"], Value::Bool(true));
}

#[test]
fn theta_bounds_matches_golden() {
    let out = run_ok(&["theta-bounds", "--t", "3", "--theta", "0.5", "--n", "3"], None);
    let v = json(&out);
    assert_close(&v, &golden("theta_bounds_3_0.5_3.json"), 1e-12, "$");
    for key in ["lower", "upper", "exact"] {
        assert!((v[key].as_f64().unwrap() - 6f64.sqrt()).abs() < 1e-12, "{key}");
    }
}

#[test]
fn lp_bound_exit_codes() {
    let out = run_ok(&["lp-bound", "--t", "2", "--n", "3", "--coeffs", "1,6,9"], None);
    assert_close(&json(&out), &golden("lp_bound_1_6_9.json"), 1e-9, "$");

    let out = sphcub(&["lp-bound", "--t", "1", "--n", "3", "--coeffs", "0,0,1"], None);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out.stdout);
    assert_eq!(v["sign_condition"], Value::Bool(false));
    assert!(v["cardinality_bound"].is_null());

    let out = run_ok(&["lp-bound", "--t", "4", "--n", "3", "--kernel-square", "full"], None);
    assert!((json(&out)["cardinality_bound"].as_f64().unwrap() - 9.0).abs() < 1e-8);

    let out = sphcub(&["lp-bound", "--t", "2", "--n", "3", "--coeffs", "1,x"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn audit_matches_golden() {
    let simplex = run_ok(&["construct", "simplex", "--n", "3"], None);
    let out = run_ok(&["audit", "--t", "2"], Some(&simplex));
    assert_close(&json(&out), &golden("audit_simplex_3.json"), 1e-12, "$");
}

#[test]
fn every_family_verifies_at_its_strength() {
    let mut cases: Vec<(Vec<String>, u32)> = Vec::new();
    for n in 2..=8usize {
        let ns = n.to_string();
        cases.push((vec!["antipodal-pair".into(), "--n".into(), ns.clone()], 1));
        cases.push((vec!["simplex".into(), "--n".into(), ns.clone()], 2));
        cases.push((vec!["cross-polytope".into(), "--n".into(), ns.clone(), "--seed".into(), "7".into()], 3));
        for t in 1..=3u32 {
            cases.push((vec!["product".into(), "--n".into(), ns.clone(), "--t".into(), t.to_string()], t));
        }
    }
    for count in 2..=9usize {
        cases.push((vec!["circle".into(), "--count".into(), count.to_string(), "--phase".into(), "0.3".into()], count as u32 - 1));
    }
    for (args, t) in cases {
        let mut full = vec!["construct"];
        full.extend(args.iter().map(String::as_str));
        let measure = run_ok(&full, None);
        let out = sphcub(&["verify", "--t", &t.to_string()], Some(&measure));
        assert_eq!(out.status.code(), Some(0), "{args:?} at strength {t}");
    }
}

#[test]
fn reduce_keeps_strength() {
    let simplex = run_ok(&["construct", "simplex", "--n", "3"], None);
    let out = run_ok(&["reduce", "--t", "2"], Some(&simplex));
    let reduced = json(&out);
    assert!(reduced["weights"].as_array().unwrap().len() <= 4);
    let out = sphcub(&["verify", "--t", "2", "--tol", "1e-8"], Some(&serde_json::to_vec(&reduced).unwrap()));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn optimize_streams_json_lines() {
    let out = run_ok(&["optimize", "--t", "1", "--theta", "0.5", "--n", "3", "--restarts", "3", "--seed", "5"], None);
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    for (i, line) in lines[..3].iter().enumerate() {
        let d = json(line.as_bytes());
        assert_eq!(d["index"].as_u64(), Some(i as u64));
        for key in ["value", "residual", "support", "feasible"] {
            assert!(d.get(key).is_some(), "missing {key}");
        }
    }
    let last = json(lines[3].as_bytes());
    assert!((last["value"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-6);
    assert!(last["residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(last["support"].as_u64(), Some(2));

    // The best measure feeds straight back into verify.
    let measure = serde_json::to_vec(&last["measure"]).unwrap();
    assert_eq!(sphcub(&["verify", "--t", "1"], Some(&measure)).status.code(), Some(0));
}

#[test]
fn usage_and_precondition_exit_codes() {
    assert_eq!(sphcub(&["bogus"], None).status.code(), Some(2));
    assert_eq!(sphcub(&["theta-bounds", "--t", "3"], None).status.code(), Some(2));
    assert_eq!(sphcub(&["--help"], None).status.code(), Some(0));
    assert_eq!(sphcub(&["verify", "--t", "1"], Some(b"not json")).status.code(), Some(2));

    let simplex = run_ok(&["construct", "simplex", "--n", "3"], None);
    let out = sphcub(&["embed", "--t", "2"], Some(&simplex));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precondition"));

    let cross = run_ok(&["construct", "cross-polytope", "--n", "3"], None);
    let out = run_ok(&["embed", "--t", "1"], Some(&cross));
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 6);
}
