//! Analytic solvers for small state sets.
//!
//! | set                                  | solver                        |
//! |--------------------------------------|-------------------------------|
//! | one state                            | [`solve_single`]              |
//! | two states                           | [`solve_pair`]                |
//! | an orthonormal basis                 | [`solve_orthonormal_pair`]    |
//! | three states                         | [`solve_triple`]              |
//! | four states, target inside the hull  | [`exact_quad_decomposition`]  |
//! | eigenstates of two Pauli matrices    | [`solve_pauli_quad`]          |

use std::cmp::Ordering;

use serde::Serialize;

use crate::bloch::{distance, PureState, TargetState};

mod kkt;
mod pair;
mod pauli;
mod quad;
mod triple;

pub use kkt::{kkt_residual, KKT_BOUNDARY_EPS};
pub use pair::{solve_orthonormal_pair, solve_pair, solve_single};
pub use pauli::{pauli_edge_distance, pauli_interior_distance, pauli_set, solve_pauli_quad};
pub use quad::{bloch_matrix, exact_quad_decomposition, QuadOutcome};
pub use triple::{solve_triple, triple_intermediates, TripleIntermediates, DEGENERACY_EPS};

/// Weights at or below this are treated as absent from the support.
pub const SUPPORT_EPS: f64 = 1e-9;

/// Which case of the analytic solution produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Stationary point with every state of the set in use.
    Interior,
    /// Optimum on an edge of the triangle, found by pair enumeration.
    BoundaryPair,
    /// A single state.
    Vertex,
    /// The target is an exact mixture (distance zero).
    Exact,
    PauliInterior,
    PauliEdge,
    /// Best lattice point of the brute-force oracle.
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub weights: Vec<f64>,
    pub distance: f64,
    pub fidelity: f64,
    pub support: Vec<usize>,
    pub branch: Branch,
    pub kkt_residual: Option<f64>,
}

impl SolveResult {
    /// Assembles a result from weights and the squared fidelity they attain.
    pub fn new(weights: Vec<f64>, fidelity_sq: f64, branch: Branch) -> Self {
        let distance = distance(fidelity_sq);
        SolveResult {
            support: support_of(&weights),
            weights,
            distance,
            fidelity: 1.0 - distance,
            branch,
            kkt_residual: None,
        }
    }

    pub(crate) fn with_kkt(mut self, target: &TargetState, set: &[PureState]) -> Self {
        self.kkt_residual = kkt_residual(target, set, &self.weights).ok();
        self
    }

    /// Re-indexes a result computed on `set[indices]` into a set of size `n`.
    pub(crate) fn embed(&self, indices: &[usize], n: usize) -> SolveResult {
        let mut weights = vec![0.0; n];
        for (&i, &w) in indices.iter().zip(&self.weights) {
            weights[i] += w;
        }
        SolveResult {
            support: support_of(&weights),
            weights,
            ..self.clone()
        }
    }

    /// Ordering used to pick among candidates: smaller distance, then smaller
    /// support, then the lexicographically smaller support.
    pub fn preference(&self, other: &SolveResult) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.support.len().cmp(&other.support.len()))
            .then_with(|| self.support.cmp(&other.support))
    }
}

pub(crate) fn support_of(weights: &[f64]) -> Vec<usize> {
    weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > SUPPORT_EPS)
        .map(|(i, _)| i)
        .collect()
}

/// Clamps to `[0, 1]` and rescales so the weights sum to one.
pub(crate) fn clamp_weights(weights: &mut [f64]) {
    for w in weights.iter_mut() {
        *w = w.clamp(0.0, 1.0);
    }
    let sum: f64 = weights.iter().sum();
    if sum > 0.0 {
        for w in weights.iter_mut() {
            *w /= sum;
        }
    }
}

/// Picks the preferred candidate; `None`s are skipped.
pub(crate) fn best_of<I>(candidates: I) -> Option<SolveResult>
where
    I: IntoIterator<Item = SolveResult>,
{
    candidates.into_iter().min_by(|a, b| a.preference(b))
}
