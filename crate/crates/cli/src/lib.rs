//! Experiment runner: named verification suites with typed parameter
//! overrides, deterministic CSV/JSON reports and pass/fail exit codes.

pub mod suites;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Map, Value};
use thiserror::Error;

pub use suites::{find_suite, Suite, SUITES};

/// Report encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("suite '{suite}' has no parameter '{key}' (accepted: {accepted})")]
    UnknownKey { suite: String, key: String, accepted: String },
    #[error("parameter '{key}': cannot parse '{value}' as {expected}")]
    BadValue { key: String, value: String, expected: &'static str },
    #[error("{0}")]
    Evaluation(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// A parsed `verify` invocation.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub suite: String,
    pub overrides: BTreeMap<String, String>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// One declared suite parameter.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub default: f64,
    pub integer: bool,
    pub help: &'static str,
}

/// Resolved parameter values of a suite run.
#[derive(Debug, Clone)]
pub struct Params {
    values: BTreeMap<&'static str, f64>,
}

impl Params {
    pub fn resolve(suite: &Suite, overrides: &BTreeMap<String, String>) -> Result<Self, RunError> {
        let mut values: BTreeMap<&'static str, f64> = suite.params.iter().map(|p| (p.key, p.default)).collect();
        for (k, v) in overrides {
            let spec = suite.params.iter().find(|p| p.key == k.as_str()).ok_or_else(|| RunError::UnknownKey {
                suite: suite.name.to_string(),
                key: k.clone(),
                accepted: suite.params.iter().map(|p| p.key).collect::<Vec<_>>().join(", "),
            })?;
            let parsed = if spec.integer {
                v.parse::<u64>().map(|x| x as f64).map_err(|_| RunError::BadValue {
                    key: k.clone(),
                    value: v.clone(),
                    expected: "a nonnegative integer",
                })?
            } else {
                v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| RunError::BadValue {
                    key: k.clone(),
                    value: v.clone(),
                    expected: "a finite number",
                })?
            };
            values.insert(spec.key, parsed);
        }
        Ok(Self { values })
    }

    pub fn f(&self, key: &str) -> f64 {
        *self.values.get(key).unwrap_or_else(|| panic!("undeclared parameter {key}"))
    }

    pub fn u(&self, key: &str) -> u64 {
        self.f(key) as u64
    }

    pub fn usize(&self, key: &str) -> usize {
        self.f(key) as usize
    }

    fn to_json(&self) -> Map<String, Value> {
        self.values.iter().map(|(k, &v)| (k.to_string(), num(v))).collect()
    }
}

/// Result of a suite: fixed columns, rows, and the contract verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub rows: Vec<Vec<Value>>,
}

/// Finite numbers as JSON numbers, anything else as `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Runs the configured suite; the returned report bytes are not yet written.
pub fn run_suite(config: &ExperimentConfig) -> Result<(Outcome, Vec<u8>), RunError> {
    let suite = find_suite(&config.suite).ok_or_else(|| RunError::UnknownSuite(config.suite.clone()))?;
    let params = Params::resolve(suite, &config.overrides)?;
    let outcome = (suite.run)(&params, config.seed)?;
    let mut buf = Vec::new();
    emit_report(suite, &params, config.seed, &outcome, config.format, &mut buf)?;
    Ok((outcome, buf))
}

/// Writes `{suite, config, pass, rows}` as JSON, or the suite's columns as
/// RFC-4180 CSV (header only when there are no rows).
pub fn emit_report<W: Write>(
    suite: &Suite,
    params: &Params,
    seed: u64,
    outcome: &Outcome,
    format: Format,
    mut out: W,
) -> Result<(), RunError> {
    match format {
        Format::Json => {
            let mut config = params.to_json();
            config.insert("seed".into(), json!(seed));
            let rows: Vec<Value> = outcome
                .rows
                .iter()
                .map(|r| Value::Object(suite.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                .collect();
            let doc = json!({
                "suite": suite.name,
                "config": config,
                "pass": outcome.pass,
                "rows": rows,
            });
            serde_json::to_writer_pretty(&mut out, &doc).map_err(std::io::Error::from)?;
            out.write_all(b"\n")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(suite.columns)?;
            for r in &outcome.rows {
                w.write_record(r.iter().map(|v| match v {
                    Value::Null => String::new(),
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                }))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Splits `--key value` / `--key=value` overrides from the global options so
/// the latter can go through the argument parser. Global options are
/// `--out`, `--format`, `--seed`, `--jobs`, `--help` and `--version`.
pub fn split_args(args: &[String]) -> Result<(Vec<String>, BTreeMap<String, String>), RunError> {
    const GLOBAL: [&str; 4] = ["--out", "--format", "--seed", "--jobs"];
    let mut globals = Vec::new();
    let mut overrides = BTreeMap::new();
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        let (name, inline) = match a.split_once('=') {
            Some((n, v)) if a.starts_with("--") => (n.to_string(), Some(v.to_string())),
            _ => (a.clone(), None),
        };
        if !name.starts_with("--") || name == "--help" || name == "--version" || GLOBAL.contains(&name.as_str()) {
            globals.push(a.clone());
            if GLOBAL.contains(&name.as_str()) && inline.is_none() && i + 1 < args.len() {
                globals.push(args[i + 1].clone());
                i += 1;
            }
            i += 1;
            continue;
        }
        let key = name.trim_start_matches("--").to_string();
        let value = match inline {
            Some(v) => v,
            None => {
                let v = args.get(i + 1).ok_or_else(|| RunError::BadValue {
                    key: key.clone(),
                    value: String::new(),
                    expected: "a value",
                })?;
                i += 1;
                v.clone()
            }
        };
        overrides.insert(key, value);
        i += 1;
    }
    Ok((globals, overrides))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn split_separates_globals_and_overrides() {
        let (g, o) = split_args(&strings(&["hcheck", "--T", "10", "--out", "r.csv", "--delta=4", "--seed", "3", "--format=csv"])).unwrap();
        assert_eq!(g, strings(&["hcheck", "--out", "r.csv", "--seed", "3", "--format=csv"]));
        assert_eq!(o.get("T").map(String::as_str), Some("10"));
        assert_eq!(o.get("delta").map(String::as_str), Some("4"));
        assert!(split_args(&strings(&["stwist", "--cmax"])).is_err());
    }

    #[test]
    fn negative_override_values_are_accepted() {
        let (_, o) = split_args(&strings(&["afe-v", "--t", "-5"])).unwrap();
        assert_eq!(o["t"], "-5");
    }

    #[test]
    fn params_resolve_and_validate() {
        let suite = find_suite("hcheck").unwrap();
        let mut ov = BTreeMap::new();
        ov.insert("T".to_string(), "12.5".to_string());
        let p = Params::resolve(suite, &ov).unwrap();
        assert_eq!(p.f("T"), 12.5);
        assert_eq!(p.f("delta"), 4.0);
        ov.insert("bogus".to_string(), "1".to_string());
        assert!(matches!(Params::resolve(suite, &ov), Err(RunError::UnknownKey { .. })));
        let mut ov = BTreeMap::new();
        ov.insert("points".to_string(), "2.5".to_string());
        assert!(matches!(Params::resolve(suite, &ov), Err(RunError::BadValue { .. })));
    }

    #[test]
    fn registry_is_complete_and_unique() {
        let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
        assert_eq!(names.len(), 15);
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 15);
    }

    #[test]
    fn non_finite_numbers_become_null() {
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(num(1.5), json!(1.5));
    }
}
