use crate::bloch::{check_weights, Objective, PureState, TargetState};
use crate::error::{Error, Result};

use super::SUPPORT_EPS;

/// Below this `s` the mixture is treated as pure and the gradient as undefined.
pub const KKT_BOUNDARY_EPS: f64 = 1e-12;

/// First-order optimality defect of `weights` for maximizing the squared fidelity.
///
/// With `g_i` the partial derivative of `F^2` in `p_i`, stationarity on the
/// active face asks for equal `g_i` over the support; the multiplier of an
/// unused state is `g_support - g_k`, which must be nonnegative. The residual
/// is the largest of the stationarity spread and any negative multiplier.
pub fn kkt_residual(target: &TargetState, set: &[PureState], weights: &[f64]) -> Result<f64> {
    check_weights(weights, set.len())?;
    let objective = Objective::new(target, set);
    let cache = objective.cache();
    let s = cache.quadratic(weights);
    if s <= KKT_BOUNDARY_EPS {
        return Err(Error::BoundaryMixture(s));
    }
    let root_s = s.sqrt();
    let n = set.len();
    let grad: Vec<f64> = (0..n)
        .map(|i| {
            let yp: f64 = (0..n).map(|j| cache.y(i, j) * weights[j]).sum();
            cache.dots()[i] / 2.0 + objective.coef() * yp / root_s
        })
        .collect();

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (g, _) in grad.iter().zip(weights).filter(|(_, &w)| w > SUPPORT_EPS) {
        lo = lo.min(*g);
        hi = hi.max(*g);
    }
    let spread = hi - lo;
    // Multiplier of the face uses the mean of the supported gradients.
    let level = (hi + lo) / 2.0;
    let dual = grad
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w <= SUPPORT_EPS)
        .map(|(g, _)| (g - level).max(0.0))
        .fold(0.0, f64::max);
    Ok(spread.max(dual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::BlochVector;
    use crate::closed_form::solve_pair;

    #[test]
    fn symmetric_instance_is_stationary() {
        let target = TargetState::from_bloch(BlochVector::ORIGIN).unwrap();
        let set = [PureState::zero(), PureState::one()];
        let r = kkt_residual(&target, &set, &[0.5, 0.5]).unwrap();
        assert!(r <= 1e-12);
    }

    #[test]
    fn pure_mixture_has_no_gradient() {
        let target = TargetState::from_bloch(BlochVector::new(0.2, 0.1, 0.3)).unwrap();
        let set = [PureState::zero(), PureState::plus()];
        assert!(matches!(
            kkt_residual(&target, &set, &[1.0, 0.0]),
            Err(Error::BoundaryMixture(_))
        ));
    }

    #[test]
    fn perturbed_weights_are_flagged() {
        // target placed so the optimal weight on |0> is well inside (0, 1)
        let target = TargetState::from_bloch(BlochVector::new(0.3, 0.0, 0.3)).unwrap();
        let set = [PureState::zero(), PureState::plus()];
        let opt = solve_pair(&target, &set[0], &set[1]);
        assert!(opt.weights[0] > 0.2 && opt.weights[0] < 0.8);
        assert!(opt.kkt_residual.unwrap() <= 1e-8);
        let off = kkt_residual(&target, &set, &[0.95, 0.05]).unwrap();
        assert!(off > 1e-3, "residual {off}");
    }

    #[test]
    fn unused_state_with_positive_multiplier_passes() {
        // the unconstrained optimum lies beyond the |0>-|+> edge, so |1> stays unused
        let target = TargetState::from_bloch(BlochVector::new(0.5, 0.0, 0.7)).unwrap();
        let set = [PureState::zero(), PureState::plus(), PureState::one()];
        let pair = solve_pair(&target, &set[0], &set[1]);
        let w = [pair.weights[0], pair.weights[1], 0.0];
        assert!(kkt_residual(&target, &set, &w).unwrap() <= 1e-8);
    }
}
