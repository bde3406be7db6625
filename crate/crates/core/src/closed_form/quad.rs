use nalgebra::{Matrix4, Vector4};

use crate::bloch::{PureState, TargetState};
use crate::error::{Error, Result};

use super::{clamp_weights, Branch, SolveResult};

/// Relative singular-value floor below which the state matrix counts as singular.
const RANK_TOL: f64 = 1e-10;
const PSEUDO_SLACK: f64 = 1e-9;

/// Result of trying to write the target as a mixture of four states.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadOutcome {
    /// All pseudo-probabilities are valid; distance is zero.
    Exact(SolveResult),
    /// The unique affine decomposition has a weight outside `[0, 1]`.
    NoExact { pseudo_p: [f64; 4] },
}

/// Columns `[r_j; 1]` for the four states: rows are the x, y, z Bloch
/// components and the identity (trace) row.
pub fn bloch_matrix(states: &[PureState; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| {
        let r = states[j].bloch();
        match i {
            0 => r.x,
            1 => r.y,
            2 => r.z,
            _ => 1.0,
        }
    })
}

/// Solves `A p = [r_o; 1]` and reports whether the solution is a mixture.
pub fn exact_quad_decomposition(
    target: &TargetState,
    states: &[PureState; 4],
) -> Result<QuadOutcome> {
    let a = bloch_matrix(states);
    let sv = a.singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if smax == 0.0 || smin < RANK_TOL * smax {
        return Err(Error::RankDeficient(if smax == 0.0 {
            0.0
        } else {
            smin / smax
        }));
    }
    let r = target.bloch();
    let rhs = Vector4::new(r.x, r.y, r.z, 1.0);
    let p = a
        .lu()
        .solve(&rhs)
        .ok_or(Error::RankDeficient(smin / smax))?;
    let pseudo_p = [p[0], p[1], p[2], p[3]];
    if pseudo_p
        .iter()
        .all(|&w| (-PSEUDO_SLACK..=1.0 + PSEUDO_SLACK).contains(&w))
    {
        let mut w = pseudo_p;
        clamp_weights(&mut w);
        let mut result = SolveResult::new(w.to_vec(), 1.0, Branch::Exact);
        result = result.with_kkt(target, states);
        Ok(QuadOutcome::Exact(result))
    } else {
        Ok(QuadOutcome::NoExact { pseudo_p })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{mixture_bloch, BlochVector};

    #[test]
    fn maximally_mixed_by_inspection() {
        let states = [
            PureState::zero(),
            PureState::one(),
            PureState::plus(),
            PureState::plus_i(),
        ];
        let t = TargetState::from_bloch(BlochVector::ORIGIN).unwrap();
        match exact_quad_decomposition(&t, &states).unwrap() {
            QuadOutcome::Exact(r) => {
                assert_eq!(r.distance, 0.0);
                let expected = [0.5, 0.5, 0.0, 0.0];
                for (w, e) in r.weights.iter().zip(expected) {
                    assert!((w - e).abs() < 1e-12);
                }
                assert_eq!(r.support, vec![0, 1]);
            }
            other => panic!("expected exact, got {other:?}"),
        }
    }

    #[test]
    fn coplanar_square_is_rank_deficient() {
        let states = [
            PureState::plus(),
            PureState::pauli_eigenstate(crate::bloch::Axis::X, false),
            PureState::zero(),
            PureState::one(),
        ];
        let t = TargetState::from_bloch(BlochVector::new(0.1, 0.2, 0.3)).unwrap();
        assert!(matches!(
            exact_quad_decomposition(&t, &states),
            Err(Error::RankDeficient(_))
        ));
    }

    #[test]
    fn outside_the_tetrahedron_reports_pseudo_probabilities() {
        let states = [
            PureState::zero(),
            PureState::one(),
            PureState::plus(),
            PureState::plus_i(),
        ];
        let t = TargetState::from_bloch(BlochVector::new(-0.5, 0.0, 0.0)).unwrap();
        match exact_quad_decomposition(&t, &states).unwrap() {
            QuadOutcome::NoExact { pseudo_p } => {
                assert!((pseudo_p[2] + 0.5).abs() < 1e-12);
                assert!((pseudo_p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            other => panic!("expected NoExact, got {other:?}"),
        }
    }

    #[test]
    fn generated_mixture_is_recovered() {
        let states = [
            PureState::zero(),
            PureState::from_bloch(BlochVector::new(0.6, 0.0, -0.8)).unwrap(),
            PureState::from_bloch(BlochVector::new(-0.6, 0.48, -0.64)).unwrap(),
            PureState::from_bloch(BlochVector::new(0.0, -0.6, -0.8)).unwrap(),
        ];
        let w = [0.1, 0.2, 0.3, 0.4];
        let t = TargetState::from_bloch(mixture_bloch(&states, &w)).unwrap();
        let QuadOutcome::Exact(r) = exact_quad_decomposition(&t, &states).unwrap() else {
            panic!("expected exact");
        };
        for (a, b) in r.weights.iter().zip(w) {
            assert!((a - b).abs() < 1e-8);
        }
    }
}
