use std::process::Command;

fn verify(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("run verify");
    (out.status.code().unwrap_or(-1), out.stdout, String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn unknown_suite_exits_1_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, _, err) = verify(&["no-such-suite", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{err}");
    assert!(!path.exists());
}

#[test]
fn unknown_key_exits_1() {
    let (code, _, err) = verify(&["stwist", "--bogus", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("bogus"));
}

#[test]
fn stwist_json_schema() {
    let (code, out, err) = verify(&["stwist", "--cmax", "12"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&String> = obj.keys().collect();
    keys.sort();
    assert_eq!(keys, ["config", "pass", "rows", "suite"]);
    assert_eq!(v["suite"], "stwist");
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["cmax"], 12.0);
    assert_eq!(v["config"]["seed"], 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r["max_residual"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap()));
}

#[test]
fn empty_result_gives_header_only_csv() {
    let (code, out, _) = verify(&["sieve-classical", "--trials", "0", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), "trial,seed,B,N,M,lhs,bound,ratio\n");
}

#[test]
fn reports_are_byte_identical_for_same_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &std::path::Path, jobs: &'static str| {
        vec![
            "sieve-gallagher".to_string(),
            "--trials".into(),
            "12".into(),
            "--N".into(),
            "200".into(),
            "--seed".into(),
            "7".into(),
            "--format".into(),
            "csv".into(),
            "--jobs".into(),
            jobs.into(),
            "--out".into(),
            p.to_str().unwrap().into(),
        ]
    };
    let run = |v: Vec<String>| Command::new(env!("CARGO_BIN_EXE_verify")).args(v).status().unwrap().code();
    assert_eq!(run(args(&a, "1")), Some(0));
    assert_eq!(run(args(&b, "2")), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (_, other, _) = verify(&["sieve-gallagher", "--trials", "12", "--N", "200", "--seed", "8", "--format", "csv"]);
    assert_ne!(std::fs::read(&a).unwrap(), other);
}

#[test]
fn contract_failure_exits_2_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let (code, _, _) = verify(&["conductor", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(v["rows"].as_array().unwrap().len(), 41 * 40);
}

#[test]
fn csv_quoting_and_nulls() {
    let (code, out, _) = verify(&["voronoi-phi", "--grid", "21", "--format", "csv"]);
    assert!(code == 0 || code == 2);
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,lambda,oracle_re,oracle_im,leading_re,leading_im,scale,ratio,phase_gap"));
    let offset = text.lines().find(|l| l.starts_with("offset,")).unwrap();
    assert!(offset.ends_with(",,"));
}

#[test]
fn list_prints_every_suite() {
    let (code, out, _) = verify(&["list"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    for s in ["stwist", "hcheck", "coeffs", "afe-v", "sieve-hybrid"] {
        assert!(text.contains(&format!("{s}:")), "{s}");
    }
}
