//! Qubit states in the Bloch representation.
//!
//! A qubit density matrix is written `rho = (I + r . sigma) / 2`. Every
//! solver in this crate works on Bloch vectors, the mixedness
//! `m = 1 - Tr rho^2 = (1 - |r|^2) / 2`, and the two pairwise tables
//!
//! * `Y_ij = 1 - r_i . r_j`, the separation of two set states, and
//! * `M_ij = r_o . (r_i - r_j)`, the difference of their overlaps with the target.
//!
//! With those, the squared fidelity of the target against the mixture
//! `chi(p) = sum_i p_i |phi_i><phi_i|` is
//!
//! ```text
//! F^2 = 1/2 + sum_i p_i (r_o . r_i) / 2 + sqrt(m / 2) * sqrt(s),   s = p^T Y p
//! ```

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for Hermiticity, trace and positivity checks on density matrices.
pub const DENSITY_TOL: f64 = 1e-9;
/// Slack allowed on `|r| <= 1`.
pub const BALL_TOL: f64 = 1e-9;
/// Pure-state amplitudes whose norm is off by at most this much are renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-3;
/// Slack on weight nonnegativity and normalization.
pub const WEIGHT_TOL: f64 = 1e-9;

const ZERO_NORM: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// The axis different from both `a` and `b`.
    pub fn third(a: Axis, b: Axis) -> Option<Axis> {
        if a == b {
            return None;
        }
        Axis::ALL.into_iter().find(|&c| c != a && c != b)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => write!(f, "x"),
            Axis::Y => write!(f, "y"),
            Axis::Z => write!(f, "z"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        BlochVector::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn component(self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn dot(self, other: BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, c: f64) -> Self {
        BlochVector::new(self.x * c, self.y * c, self.z * c)
    }

    /// Density matrix `(I + r . sigma) / 2`.
    pub fn density(self) -> ComplexMatrix2 {
        let half = 0.5;
        ComplexMatrix2::new([
            [
                Complex64::new(half * (1.0 + self.z), 0.0),
                Complex64::new(half * self.x, -half * self.y),
            ],
            [
                Complex64::new(half * self.x, half * self.y),
                Complex64::new(half * (1.0 - self.z), 0.0),
            ],
        ])
    }
}

impl std::ops::Add for BlochVector {
    type Output = BlochVector;

    fn add(self, other: BlochVector) -> BlochVector {
        BlochVector::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }
}

impl std::ops::Sub for BlochVector {
    type Output = BlochVector;

    fn sub(self, other: BlochVector) -> BlochVector {
        BlochVector::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }
}

/// A 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2 {
    pub entries: [[Complex64; 2]; 2],
}

impl ComplexMatrix2 {
    pub const fn new(entries: [[Complex64; 2]; 2]) -> Self {
        ComplexMatrix2 { entries }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        ComplexMatrix2::new([[one, zero], [zero, one]])
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn det(&self) -> Complex64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for v in row.iter_mut() {
                *v *= c;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        ComplexMatrix2::new([
            [e[0][0].conj(), e[1][0].conj()],
            [e[0][1].conj(), e[1][1].conj()],
        ])
    }

    pub fn mul(&self, other: &ComplexMatrix2) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        ComplexMatrix2::new(out)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_defect(&self) -> f64 {
        let e = &self.entries;
        let off = (e[0][1] - e[1][0].conj()).norm();
        let diag = e[0][0].im.abs().max(e[1][1].im.abs()) * 2.0;
        off.max(diag)
    }

    /// Bloch components `r_alpha = Tr(M sigma_alpha)` (real parts).
    pub fn bloch(&self) -> BlochVector {
        let e = &self.entries;
        let x = (e[0][1] + e[1][0]).re;
        let y = (e[1][0] - e[0][1]).im;
        let z = (e[0][0] - e[1][1]).re;
        BlochVector::new(x, y, z)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }
}

/// A normalized pure qubit state with its cached Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amplitudes: [Complex64; 2],
    bloch: BlochVector,
}

impl PureState {
    /// Builds a pure state from amplitudes, renormalizing small norm errors.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        bloch_of_pure([a, b])
    }

    /// The pure state `(cos(theta/2), e^{i phi} sin(theta/2))` pointing along `r`.
    pub fn from_bloch(r: BlochVector) -> Result<Self> {
        let norm = r.norm();
        if (norm - 1.0).abs() > ZERO_NORM {
            return Err(Error::NotNormalized(norm));
        }
        let r = r.scale(1.0 / norm);
        let cos_half = ((1.0 + r.z) / 2.0).max(0.0).sqrt();
        let sin_half = ((1.0 - r.z) / 2.0).max(0.0).sqrt();
        let phase = r.y.atan2(r.x);
        let b = Complex64::from_polar(sin_half, phase);
        let state = PureState::new(Complex64::new(cos_half, 0.0), b)?;
        // Keep the exact input direction; the trig round trip loses an ulp or two.
        Ok(PureState { bloch: r, ..state })
    }

    /// Eigenstate of `sigma_axis` with eigenvalue `+1` (`positive`) or `-1`.
    pub fn pauli_eigenstate(axis: Axis, positive: bool) -> Self {
        let s = if positive { 1.0 } else { -1.0 };
        let h = FRAC_1_SQRT_2;
        let (a, b, r) = match axis {
            Axis::X => (
                Complex64::new(h, 0.0),
                Complex64::new(s * h, 0.0),
                BlochVector::new(s, 0.0, 0.0),
            ),
            Axis::Y => (
                Complex64::new(h, 0.0),
                Complex64::new(0.0, s * h),
                BlochVector::new(0.0, s, 0.0),
            ),
            Axis::Z => {
                let (a, b) = if positive { (1.0, 0.0) } else { (0.0, 1.0) };
                (
                    Complex64::new(a, 0.0),
                    Complex64::new(b, 0.0),
                    BlochVector::new(0.0, 0.0, s),
                )
            }
        };
        PureState {
            amplitudes: [a, b],
            bloch: r,
        }
    }

    /// `|0>`
    pub fn zero() -> Self {
        PureState::pauli_eigenstate(Axis::Z, true)
    }

    /// `|1>`
    pub fn one() -> Self {
        PureState::pauli_eigenstate(Axis::Z, false)
    }

    /// `|+>`
    pub fn plus() -> Self {
        PureState::pauli_eigenstate(Axis::X, true)
    }

    /// `|+i>`
    pub fn plus_i() -> Self {
        PureState::pauli_eigenstate(Axis::Y, true)
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        self.amplitudes
    }

    pub fn bloch(&self) -> BlochVector {
        self.bloch
    }

    pub fn density(&self) -> ComplexMatrix2 {
        let [a, b] = self.amplitudes;
        ComplexMatrix2::new([[a * a.conj(), a * b.conj()], [b * a.conj(), b * b.conj()]])
    }

    pub fn overlap(&self, other: &PureState) -> Complex64 {
        let [a, b] = self.amplitudes;
        let [c, d] = other.amplitudes;
        a.conj() * c + b.conj() * d
    }
}

/// Normalizes a pure-state vector and computes its Bloch vector.
pub fn bloch_of_pure(amplitudes: [Complex64; 2]) -> Result<PureState> {
    let [a, b] = amplitudes;
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if !norm.is_finite() || norm < ZERO_NORM {
        return Err(Error::ZeroVector(norm));
    }
    if (norm - 1.0).abs() > RENORMALIZE_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let (a, b) = (a / norm, b / norm);
    let ab = a.conj() * b;
    let raw = BlochVector::new(2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr());
    let bloch = raw.scale(1.0 / raw.norm());
    Ok(PureState {
        amplitudes: [a, b],
        bloch,
    })
}

/// A validated qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetState {
    matrix: ComplexMatrix2,
    bloch: BlochVector,
    mixedness: f64,
}

impl TargetState {
    pub fn from_bloch(r: BlochVector) -> Result<Self> {
        let norm = r.norm();
        if !norm.is_finite() || norm > 1.0 + BALL_TOL {
            return Err(Error::OutsideBall(norm));
        }
        let r = if norm > 1.0 { r.scale(1.0 / norm) } else { r };
        Ok(TargetState {
            matrix: r.density(),
            bloch: r,
            mixedness: mixedness_of(r),
        })
    }

    pub fn from_params(a: f64, k: f64, phi: f64) -> Result<Self> {
        target_from_params(a, k, phi)
    }

    pub fn matrix(&self) -> ComplexMatrix2 {
        self.matrix
    }

    pub fn bloch(&self) -> BlochVector {
        self.bloch
    }

    /// `m = 1 - Tr rho^2`, in `[0, 1/2]`.
    pub fn mixedness(&self) -> f64 {
        self.mixedness
    }

    pub fn is_pure(&self) -> bool {
        self.mixedness == 0.0
    }
}

fn mixedness_of(r: BlochVector) -> f64 {
    ((1.0 - r.norm_sqr()) / 2.0).max(0.0)
}

/// Checks a matrix is a density matrix within `tol` and returns the cleaned-up state.
///
/// The Hermitian part is kept and the trace rescaled to one, so inputs that are
/// only off by rounding are accepted.
pub fn validate_density(matrix: ComplexMatrix2, tol: f64) -> Result<TargetState> {
    let defect = matrix.hermitian_defect();
    if !defect.is_finite() || defect > tol {
        return Err(Error::NotHermitian(defect));
    }
    let herm = matrix.add_adjoint_half();
    let trace = herm.trace().re;
    if (trace - 1.0).abs() > tol {
        return Err(Error::NotUnitTrace(trace));
    }
    let r = herm.scale(1.0 / trace).bloch();
    let norm = r.norm();
    let min_eig = (1.0 - norm) / 2.0;
    if min_eig < -tol {
        return Err(Error::NotPositive(min_eig));
    }
    TargetState::from_bloch(if norm > 1.0 { r.scale(1.0 / norm) } else { r })
}

impl ComplexMatrix2 {
    fn add_adjoint_half(&self) -> ComplexMatrix2 {
        let adj = self.adjoint();
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.entries[i][j] = (self.entries[i][j] + adj.entries[i][j]) * 0.5;
            }
        }
        out
    }
}

/// The family `rho(a, k, phi)` with diagonal `(1 - a, a)` and coherence
/// `k sqrt(a (1 - a)) e^{-i phi}`.
pub fn target_from_params(a: f64, k: f64, phi: f64) -> Result<TargetState> {
    check_range("a", a, 0.0, 1.0)?;
    check_range("k", k, 0.0, 1.0)?;
    check_range("phi", phi, 0.0, 2.0 * std::f64::consts::PI)?;
    let amp = 2.0 * k * (a * (1.0 - a)).sqrt();
    TargetState::from_bloch(BlochVector::new(
        amp * phi.cos(),
        amp * phi.sin(),
        1.0 - 2.0 * a,
    ))
}

fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    // Angles are compared with a hair of slack so 2*PI computed by callers passes.
    let slack = 1e-12 * max.abs().max(1.0);
    if !(value >= min - slack && value <= max + slack) {
        return Err(Error::ParamOutOfRange {
            name,
            value,
            min,
            max,
        });
    }
    Ok(())
}

/// The tables `Y`, `M` and the overlaps `r_o . r_i` for one target and state set.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseCache {
    n: usize,
    y: Vec<f64>,
    m: Vec<f64>,
    dots: Vec<f64>,
}

impl PairwiseCache {
    pub fn new(target: &TargetState, set: &[PureState]) -> Self {
        pairwise_cache(target, set)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `Y_ij = 1 - r_i . r_j`
    pub fn y(&self, i: usize, j: usize) -> f64 {
        self.y[i * self.n + j]
    }

    /// `M_ij = r_o . (r_i - r_j)`
    pub fn m(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.n + j]
    }

    /// `r_o . r_i`
    pub fn dots(&self) -> &[f64] {
        &self.dots
    }

    /// `s = p^T Y p`, clipped at zero.
    pub fn quadratic(&self, weights: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, &pi) in weights.iter().enumerate() {
            let row = &self.y[i * self.n..(i + 1) * self.n];
            let mut acc = 0.0;
            for (&yij, &pj) in row.iter().zip(weights) {
                acc += yij * pj;
            }
            s += pi * acc;
        }
        s.max(0.0)
    }
}

pub fn pairwise_cache(target: &TargetState, set: &[PureState]) -> PairwiseCache {
    let n = set.len();
    let ro = target.bloch();
    let dots: Vec<f64> = set.iter().map(|s| ro.dot(s.bloch())).collect();
    let mut y = vec![0.0; n * n];
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                y[i * n + j] = 1.0 - set[i].bloch().dot(set[j].bloch());
            }
            m[i * n + j] = dots[i] - dots[j];
        }
    }
    PairwiseCache { n, y, m, dots }
}

/// The squared-fidelity objective with everything but the weights precomputed.
#[derive(Debug, Clone)]
pub(crate) struct Objective {
    cache: PairwiseCache,
    coef: f64,
}

impl Objective {
    pub(crate) fn new(target: &TargetState, set: &[PureState]) -> Self {
        Objective {
            cache: pairwise_cache(target, set),
            coef: (target.mixedness() / 2.0).sqrt(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.cache.len()
    }

    pub(crate) fn cache(&self) -> &PairwiseCache {
        &self.cache
    }

    pub(crate) fn coef(&self) -> f64 {
        self.coef
    }

    pub(crate) fn fidelity_sq(&self, weights: &[f64]) -> f64 {
        let linear: f64 = weights
            .iter()
            .zip(self.cache.dots())
            .map(|(p, d)| p * d)
            .sum();
        let s = self.cache.quadratic(weights);
        (0.5 + 0.5 * linear + self.coef * s.sqrt()).clamp(0.0, 1.0)
    }
}

/// Checks `weights` lie on the probability simplex within [`WEIGHT_TOL`].
pub fn check_weights(weights: &[f64], n: usize) -> Result<()> {
    if weights.len() != n {
        return Err(Error::BadWeights(format!(
            "expected {n} weights, got {}",
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < -WEIGHT_TOL) {
        return Err(Error::BadWeights(format!(
            "negative or non-finite weight {w}"
        )));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::BadWeights(format!("weights sum to {sum}")));
    }
    Ok(())
}

/// Squared fidelity between the target and the mixture with the given weights.
pub fn fidelity_sq_mixture(
    target: &TargetState,
    set: &[PureState],
    weights: &[f64],
) -> Result<f64> {
    check_weights(weights, set.len())?;
    Ok(Objective::new(target, set).fidelity_sq(weights))
}

/// `D = 1 - F`
pub fn distance(fidelity_sq: f64) -> f64 {
    (1.0 - fidelity_sq.clamp(0.0, 1.0).sqrt()).clamp(0.0, 1.0)
}

/// Bloch vector of the mixture `sum_i p_i |phi_i><phi_i|`.
pub fn mixture_bloch(set: &[PureState], weights: &[f64]) -> BlochVector {
    set.iter()
        .zip(weights)
        .fold(BlochVector::ORIGIN, |acc, (s, &p)| acc + s.bloch().scale(p))
}
