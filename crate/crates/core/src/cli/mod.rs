//! Scenario runner behind the `jointmeas` binary.
//!
//! A scenario file names a task, its operands and parameters; running it
//! yields a [`Report`] and an [`ExitStatus`]. Reports are deterministic for a
//! fixed scenario and seed: they contain no timestamps or wall-clock timing
//! unless [`RunOptions::timing`] is set.

pub mod corpus;
pub mod json;
pub mod scenario;
mod tasks;

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::config::Config;
use crate::error::{Error, Result};

pub use corpus::{corpus, generate_examples, CorpusEntry, EXPECTATIONS_FILE};
pub use scenario::{LabeledMatrix, MatrixData, Operand, Params, Requirement, Scenario, Task, SCENARIO_VERSION};

/// Process exit status of `jointmeas run`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitStatus {
    /// Completed; every assertion passed.
    Ok,
    /// Completed with a negative scientific verdict (incompatible, condition fails).
    Negative,
    Undecided,
    /// Unreadable, malformed or invalid input.
    InputError,
    /// An identity that must hold numerically did not, or a solver failed.
    NumericalFailure,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Ok => 0,
            ExitStatus::Negative => 1,
            ExitStatus::Undecided => 2,
            ExitStatus::InputError => 3,
            ExitStatus::NumericalFailure => 4,
        }
    }

    pub fn from_code(code: i32) -> Option<Self> {
        [
            ExitStatus::Ok,
            ExitStatus::Negative,
            ExitStatus::Undecided,
            ExitStatus::InputError,
            ExitStatus::NumericalFailure,
        ]
        .into_iter()
        .find(|s| s.code() == code)
    }

    /// Solver failures and violated identities are numerical; everything else is bad input.
    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::NoConvergence { .. } | Error::Domain { .. } | Error::IdentityViolation { .. } => {
                ExitStatus::NumericalFailure
            }
            _ => ExitStatus::InputError,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    /// `(name, value)` tolerance overrides, applied after the scenario's own.
    pub tol_overrides: Vec<(String, f64)>,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: Config::default().seed,
            tol_overrides: Vec::new(),
            timing: false,
        }
    }
}

/// Parses a `key=value` tolerance override.
pub fn parse_override(text: &str) -> Result<(String, f64)> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| Error::InvalidParameter(format!("override {text:?} is not key=value")))?;
    let value: f64 = v
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("override {text:?}: {v:?} is not a number")))?;
    let key = k.trim().to_string();
    Config::default().tol.set(&key, value)?;
    Ok((key, value))
}

/// Report format version.
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub report_version: u32,
    pub tool: String,
    pub task: Task,
    pub status: ExitStatus,
    pub exit_code: i32,
    /// Every tolerance and cap actually used, including the seed.
    pub config: Config,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        json::to_pretty(self)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: ExitStatus,
    /// Absent only when the scenario could not be read or parsed.
    pub report: Option<Report>,
    /// Human-readable lines for the error stream.
    pub diagnostics: Vec<String>,
}

impl RunOutcome {
    fn input_error(msg: String) -> Self {
        Self {
            status: ExitStatus::InputError,
            report: None,
            diagnostics: vec![msg],
        }
    }
}

pub fn tool_name() -> String {
    format!("jointmeas {}", env!("CARGO_PKG_VERSION"))
}

pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> RunOutcome {
    if let Err(e) = s.check() {
        return RunOutcome::input_error(e.to_string());
    }
    let cfg = match s.config(opts.seed).and_then(|mut cfg| {
        for (k, v) in &opts.tol_overrides {
            cfg.tol.set(k, *v)?;
        }
        Ok(cfg)
    }) {
        Ok(cfg) => cfg,
        Err(e) => return RunOutcome::input_error(e.to_string()),
    };
    let start = Instant::now();
    let (status, result, error, diagnostics) = match tasks::dispatch(s, &cfg) {
        Ok(out) => (out.status, out.result, None, out.diagnostics),
        Err(e) => (ExitStatus::from_error(&e), Value::Null, Some(e.to_string()), vec![e.to_string()]),
    };
    let timing_ms = opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let report = Report {
        report_version: REPORT_VERSION,
        tool: tool_name(),
        task: s.task,
        status,
        exit_code: status.code(),
        config: cfg,
        error,
        diagnostics: diagnostics.clone(),
        result,
        timing_ms,
    };
    RunOutcome {
        status,
        report: Some(report),
        diagnostics,
    }
}

pub fn run_text(text: &str, opts: &RunOptions) -> RunOutcome {
    match Scenario::from_json(text) {
        Ok(s) => run_scenario(&s, opts),
        Err(e) => RunOutcome::input_error(e.to_string()),
    }
}

pub fn run_path(path: &Path, opts: &RunOptions) -> RunOutcome {
    match std::fs::read_to_string(path) {
        Ok(text) => run_text(&text, opts),
        Err(e) => RunOutcome::input_error(format!("{}: {e}", path.display())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, HermitianOperator};
    use crate::povm::spectral_pvm;

    fn projectors(m: crate::linalg::ComplexMatrix) -> Operand {
        let cfg = Config::default();
        Operand::from_povm(&spectral_pvm(&HermitianOperator::new(m, &cfg).unwrap(), &cfg).unwrap().0)
    }

    #[test]
    fn pauli_projectors_are_incompatible() {
        let s = Scenario::new(Task::JmTest)
            .with("first", projectors(pauli::z()))
            .with("second", projectors(pauli::x()));
        let out = run_scenario(&s, &RunOptions::default());
        assert_eq!(out.status, ExitStatus::Negative);
        let r = out.report.unwrap();
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.result["verdict"]["decision"], "incompatible");
        assert!(r.result["verdict"]["infeasibility_gap"].as_f64().unwrap() > 1e-5);
    }

    #[test]
    fn malformed_povm_gives_a_defect_table() {
        let text = r#"{"version": 1, "task": "validate", "operands": {"bad": {"kind": "povm", "outcomes": [
            {"label": "0", "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]},
            {"label": "1", "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}]}}}"#;
        let out = run_text(text, &RunOptions::default());
        assert_eq!(out.status, ExitStatus::InputError);
        let r = out.report.unwrap();
        let table = r.result["bad"]["outcomes"].as_array().unwrap();
        assert_eq!(table.len(), 2);
        assert!((r.result["bad"]["sum_defect"].as_f64().unwrap() - 0.5).abs() < 1e-12);
        assert!(!out.diagnostics.is_empty());
    }

    #[test]
    fn unreadable_input_is_exit_three() {
        assert_eq!(run_text("{", &RunOptions::default()).status.code(), 3);
        assert_eq!(run_path(Path::new("/nonexistent/x.json"), &RunOptions::default()).status.code(), 3);
        let missing = Scenario::new(Task::JmTest);
        assert_eq!(run_scenario(&missing, &RunOptions::default()).status.code(), 3);
    }

    #[test]
    fn overrides_are_echoed() {
        let s = Scenario::new(Task::JmTest)
            .with("first", projectors(pauli::z()))
            .with("second", projectors(pauli::z()));
        let opts = RunOptions {
            seed: 9,
            tol_overrides: vec![parse_override("feas=1e-7").unwrap()],
            timing: false,
        };
        let r = run_scenario(&s, &opts).report.unwrap();
        assert_eq!(r.config.seed, 9);
        assert_eq!(r.config.tol.feas, 1e-7);
        assert!(parse_override("feas").is_err());
        assert!(parse_override("bogus=1").is_err());
        assert!(parse_override("feas=x").is_err());
    }

    #[test]
    fn reports_are_deterministic_without_timing() {
        let s = Scenario::new(Task::RoundtripCns);
        let mut s = s;
        s.params.d = Some(2);
        let a = run_scenario(&s, &RunOptions::default()).report.unwrap().to_json();
        let b = run_scenario(&s, &RunOptions::default()).report.unwrap().to_json();
        assert_eq!(a, b);
        assert!(!a.contains("timing"));
    }

    #[test]
    fn exit_codes_round_trip() {
        for c in 0..5 {
            assert_eq!(ExitStatus::from_code(c).unwrap().code(), c);
        }
        assert!(ExitStatus::from_code(5).is_none());
    }
}
