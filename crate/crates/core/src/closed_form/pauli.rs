use crate::bloch::{Axis, PureState, TargetState};
use crate::error::{Error, Result};

use super::{clamp_weights, Branch, SolveResult};

const RADICAND_EPS: f64 = 1e-24;
const T_SLACK: f64 = 1e-12;

/// `[+alpha, -alpha, +alpha', -alpha']` eigenstates.
pub fn pauli_set(axes: (Axis, Axis)) -> [PureState; 4] {
    let (a, b) = axes;
    [
        PureState::pauli_eigenstate(a, true),
        PureState::pauli_eigenstate(a, false),
        PureState::pauli_eigenstate(b, true),
        PureState::pauli_eigenstate(b, false),
    ]
}

struct PauliFrame {
    ra: f64,
    rb: f64,
    rc: f64,
    flip_a: bool,
    flip_b: bool,
}

fn frame(target: &TargetState, axes: (Axis, Axis)) -> Result<PauliFrame> {
    let (a, b) = axes;
    let c = Axis::third(a, b).ok_or_else(|| Error::BadAxes(format!("{a} and {b} coincide")))?;
    let r = target.bloch();
    let (ra, rb) = (r.component(a), r.component(b));
    Ok(PauliFrame {
        ra: ra.abs(),
        rb: rb.abs(),
        rc: r.component(c),
        flip_a: ra < 0.0,
        flip_b: rb < 0.0,
    })
}

fn interior_fidelity_sq(f: &PauliFrame) -> f64 {
    (1.0 + (1.0 - f.rc * f.rc).max(0.0).sqrt()) / 2.0
}

fn edge_fidelity_sq(f: &PauliFrame, m: f64) -> f64 {
    let d = f.ra - f.rb;
    (2.0 + f.ra + f.rb + (4.0 * m + d * d).max(0.0).sqrt()) / 4.0
}

/// Distance when the optimal mixture lies inside the square of the four states:
/// `1 - sqrt((1 + sqrt(1 - r_alpha''^2)) / 2)`.
pub fn pauli_interior_distance(target: &TargetState, axes: (Axis, Axis)) -> Result<f64> {
    let f = frame(target, axes)?;
    Ok(1.0 - interior_fidelity_sq(&f).sqrt())
}

/// Distance when the optimal mixture lies on the `+alpha`/`+alpha'` edge:
/// `1 - sqrt(2 + r_alpha + r_alpha' + sqrt(4m + (r_alpha - r_alpha')^2)) / 2`.
pub fn pauli_edge_distance(target: &TargetState, axes: (Axis, Axis)) -> Result<f64> {
    let f = frame(target, axes)?;
    Ok(1.0 - edge_fidelity_sq(&f, target.mixedness()).sqrt())
}

/// Optimal mixture of the eigenstates of `sigma_alpha` and `sigma_alpha'`.
///
/// Weights are ordered as in [`pauli_set`]. When the optimum is inside the
/// square the weights are not unique: they form the one-parameter family
/// `(p1 - t, p2 - t, p3 + t, t)`; `t` defaults to zero, which uses the fewest
/// states. Negative target components are handled by swapping the `+`/`-`
/// labels of that axis.
pub fn solve_pauli_quad(
    target: &TargetState,
    axes: (Axis, Axis),
    t: Option<f64>,
) -> Result<SolveResult> {
    let f = frame(target, axes)?;
    let m = target.mixedness();
    let t_value = t.unwrap_or(0.0);

    let (mut weights, f2, branch) = if f.ra * f.rb <= m {
        let root = (1.0 - f.rc * f.rc).max(0.0).sqrt();
        // Target on the +-alpha'' poles: any mixture is equally good.
        let (ua, ub) = if root > 0.0 {
            (f.ra / root, f.rb / root)
        } else {
            (0.0, 0.0)
        };
        let t_max = (0.5 - (ua + ub) / 2.0).max(0.0);
        if !(t_value >= 0.0 && t_value <= t_max + T_SLACK) {
            return Err(Error::TOutOfRange {
                t: t_value,
                max: t_max,
            });
        }
        let tt = t_value.min(t_max);
        let w = [
            0.5 * (1.0 + ua - ub) - tt,
            0.5 * (1.0 - ua - ub) - tt,
            ub + tt,
            tt,
        ];
        (w, interior_fidelity_sq(&f), Branch::PauliInterior)
    } else {
        if t_value != 0.0 {
            return Err(Error::TOutOfRange {
                t: t_value,
                max: 0.0,
            });
        }
        let d = f.ra - f.rb;
        let radicand = 4.0 * m + d * d;
        let p1 = if radicand <= RADICAND_EPS {
            0.5
        } else {
            0.5 * (1.0 + d / radicand.sqrt())
        };
        (
            [p1, 0.0, 1.0 - p1, 0.0],
            edge_fidelity_sq(&f, m),
            Branch::PauliEdge,
        )
    };

    if f.flip_a {
        weights.swap(0, 1);
    }
    if f.flip_b {
        weights.swap(2, 3);
    }
    clamp_weights(&mut weights);
    Ok(SolveResult::new(weights.to_vec(), f2, branch).with_kkt(target, &pauli_set(axes)))
}
