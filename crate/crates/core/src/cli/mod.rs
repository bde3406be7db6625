//! Library side of the `qubit-approx` binary.
//!
//! Exit codes: 0 ok, 1 I/O, 2 schema, 3 state validation, 4 verification
//! regression, 5 oracle budget exceeded.

pub mod document;
pub mod figure;
pub mod random;

use serde::Serialize;

use crate::closed_form::Branch;
use crate::error::Error;
use crate::oracle::{GridSpec, DEFAULT_EVALUATION_CAP};
use crate::planner::{best_approximation, verify_with_spec, OracleComparison};

pub use document::InstanceDocument;
pub use figure::{Figure, FigureSpec, Param};
pub use random::random_document;

/// Overrides the oracle's evaluation cap.
pub const MAX_EVALS_ENV: &str = "QUBIT_APPROX_MAX_EVALS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid state: {0}")]
    State(String),
    #[error("verification regression: gap {gap:e} outside [{floor:e}, {bound:e}]")]
    Regression { gap: f64, floor: f64, bound: f64 },
    #[error("oracle budget exceeded: {required} evaluations required, cap is {cap}")]
    Budget { required: u128, cap: u64 },
    #[error("solver error: {0}")]
    Solver(Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Solver(_) => 1,
            CliError::Schema(_) => 2,
            CliError::State(_) => 3,
            CliError::Regression { .. } => 4,
            CliError::Budget { .. } => 5,
        }
    }

    pub(crate) fn solver(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { required, cap } => CliError::Budget { required, cap },
            Error::BadStep(step) => CliError::Schema(format!("step {step} must lie in (0, 0.5]")),
            other => CliError::Solver(other),
        }
    }
}

/// Reads the cap from [`MAX_EVALS_ENV`], falling back to the default.
pub fn evaluation_cap() -> Result<u64, CliError> {
    match std::env::var(MAX_EVALS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Schema(format!(
                "{MAX_EVALS_ENV}: expected a non-negative integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_EVALUATION_CAP),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveOutput {
    pub distance: f64,
    pub fidelity: f64,
    pub weights: Vec<f64>,
    pub support: Vec<usize>,
    pub branch: Branch,
    pub kkt_residual: Option<f64>,
    pub candidates_evaluated: usize,
}

pub fn solve_document(doc: &InstanceDocument) -> Result<SolveOutput, CliError> {
    let instance = doc.to_instance()?;
    let report = best_approximation(&instance).map_err(CliError::solver)?;
    let r = report.result;
    Ok(SolveOutput {
        distance: r.distance,
        fidelity: r.fidelity,
        weights: r.weights,
        support: r.support,
        branch: r.branch,
        kkt_residual: r.kkt_residual,
        candidates_evaluated: report.candidates_evaluated,
    })
}

/// Step precedence: explicit argument, then the document's `options.step`,
/// then the oracle default for the set size.
pub fn verify_document(
    doc: &InstanceDocument,
    step: Option<f64>,
    cap: u64,
) -> Result<OracleComparison, CliError> {
    let instance = doc.to_instance()?;
    let mut spec = GridSpec::default_for(instance.set.len()).with_cap(cap);
    if let Some(s) = step.or(instance.options.oracle_step) {
        spec.step = s;
    }
    verify_with_spec(&instance, &spec).map_err(CliError::solver)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("outputs always serialize")
}
