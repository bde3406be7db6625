//! JSON instance documents.
//!
//! ```json
//! {
//!   "target": { "params": { "a": 0.5, "k": 0.4, "phi": 1.449 } },
//!   "set": [
//!     { "amplitudes": [[0.5143, 0.0], [0.8317, 0.2091]] },
//!     { "bloch": [0.0, 0.0, 1.0] }
//!   ],
//!   "options": { "tol": 1e-9, "step": 0.001 }
//! }
//! ```
//!
//! The target is given by exactly one of `matrix` (2x2 of `[re, im]`),
//! `bloch` or `params`. Complex numbers are `[re, im]` pairs and angles are
//! radians. Unknown fields are rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{
    target_from_params, validate_density, BlochVector, ComplexMatrix2, PureState, TargetState,
    DENSITY_TOL,
};
use crate::planner::{Instance, SolverOptions};

use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub target: TargetSpec,
    pub set: Vec<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<DocumentOptions>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[[[f64; 2]; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub a: f64,
    pub k: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<[[f64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl StateSpec {
    pub fn from_amplitudes(a: Complex64, b: Complex64) -> Self {
        StateSpec {
            amplitudes: Some([[a.re, a.im], [b.re, b.im]]),
            bloch: None,
        }
    }

    fn to_state(&self, index: usize) -> Result<PureState, CliError> {
        match (self.amplitudes, self.bloch) {
            (Some(amp), None) => PureState::new(complex(amp[0]), complex(amp[1])),
            (None, Some(r)) => PureState::from_bloch(BlochVector::from_array(r)),
            _ => {
                return Err(CliError::Schema(format!(
                    "set[{index}]: give exactly one of `amplitudes` or `bloch`"
                )))
            }
        }
        .map_err(|e| CliError::State(format!("set[{index}]: {e}")))
    }
}

impl TargetSpec {
    fn to_target(&self, tol: f64) -> Result<TargetState, CliError> {
        let given = [
            self.matrix.is_some(),
            self.bloch.is_some(),
            self.params.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if given != 1 {
            return Err(CliError::Schema(format!(
                "target: give exactly one of `matrix`, `bloch`, `params` (found {given})"
            )));
        }
        let state = if let Some(m) = self.matrix {
            let entries = m.map(|row| row.map(complex));
            validate_density(ComplexMatrix2::new(entries), tol)
        } else if let Some(r) = self.bloch {
            TargetState::from_bloch(BlochVector::from_array(r))
        } else {
            let p = self.params.expect("checked above");
            target_from_params(p.a, p.k, p.phi)
        };
        state.map_err(|e| CliError::State(format!("target: {e}")))
    }
}

impl InstanceDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn tol(&self) -> f64 {
        self.options.and_then(|o| o.tol).unwrap_or(DENSITY_TOL)
    }

    pub fn to_instance(&self) -> Result<Instance, CliError> {
        if self.set.is_empty() {
            return Err(CliError::Schema("set: must not be empty".into()));
        }
        let tol = self.tol();
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Schema(format!(
                "options.tol: must be positive (got {tol})"
            )));
        }
        let target = self.target.to_target(tol)?;
        let set = self
            .set
            .iter()
            .enumerate()
            .map(|(i, s)| s.to_state(i))
            .collect::<Result<Vec<_>, _>>()?;
        let options = SolverOptions {
            tol,
            oracle_step: self.options.and_then(|o| o.step),
            ..SolverOptions::default()
        };
        Ok(Instance::new(target, set).with_options(options))
    }
}
