use thiserror::Error;

/// Errors raised while validating states or solving approximation problems.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    NotUnitTrace(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("state vector has (near) zero norm ({0:e})")]
    ZeroVector(f64),

    #[error("state vector norm {0} is too far from 1 to renormalize")]
    NotNormalized(f64),

    #[error("Bloch vector norm {0} lies outside the Bloch ball")]
    OutsideBall(f64),

    #[error("invalid weights: {0}")]
    BadWeights(String),

    #[error("states are not orthonormal (r1.r2 = {0})")]
    NotOrthonormal(f64),

    #[error("state matrix is rank deficient (singular value ratio {0:e})")]
    RankDeficient(f64),

    #[error("t = {t} outside admissible interval [0, {max}]")]
    TOutOfRange { t: f64, max: f64 },

    #[error("invalid Pauli axes: {0}")]
    BadAxes(String),

    #[error("mixture lies on the Bloch sphere (s = {0:e}); gradient undefined")]
    BoundaryMixture(f64),

    #[error("state set is empty")]
    EmptySet,

    #[error("grid step {0} outside (0, 0.5]")]
    BadStep(f64),

    #[error("oracle needs {required} evaluations, cap is {cap}")]
    BudgetExceeded { required: u128, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
