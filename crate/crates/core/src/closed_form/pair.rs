use crate::bloch::{PureState, TargetState};
use crate::error::{Error, Result};

use super::{Branch, SolveResult};

/// Pairs closer than this in `Y` are treated as one state.
const IDENTICAL_EPS: f64 = 1e-14;
/// Radicands at or below this take the symmetric `p1 = 1/2` convention.
const RADICAND_EPS: f64 = 1e-24;
/// `1 + r1 . r2` allowed for an orthonormal pair.
const ORTHONORMAL_EPS: f64 = 2e-9;

/// The only mixture of one state is the state itself.
pub fn solve_single(target: &TargetState, state: &PureState) -> SolveResult {
    let f2 = (1.0 + target.bloch().dot(state.bloch())) / 2.0;
    SolveResult::new(vec![1.0], f2, Branch::Vertex)
}

/// Optimal mixture of two pure states.
///
/// `F^2 = (2 M+ + sqrt(4 m Y12 + M12^2)) / 4` with `M+ = 1 + r_o.(r1 + r2)/2`,
/// attained at `p1 = (1 + M12 / sqrt(4 m Y12 + M12^2)) / 2`.
pub fn solve_pair(target: &TargetState, s1: &PureState, s2: &PureState) -> SolveResult {
    let ro = target.bloch();
    let (r1, r2) = (s1.bloch(), s2.bloch());
    let y12 = 1.0 - r1.dot(r2);
    if y12 <= IDENTICAL_EPS {
        let f2 = (1.0 + ro.dot(r1)) / 2.0;
        return SolveResult::new(vec![1.0, 0.0], f2, Branch::Vertex).with_kkt(target, &[*s1, *s2]);
    }
    let m = target.mixedness();
    let m12 = ro.dot(r1) - ro.dot(r2);
    let m_plus = 1.0 + ro.dot(r1 + r2) / 2.0;
    let radicand = (4.0 * m * y12 + m12 * m12).max(0.0);
    let root = radicand.sqrt();
    let p1 = if radicand <= RADICAND_EPS {
        0.5
    } else {
        ((1.0 + m12 / root) / 2.0).clamp(0.0, 1.0)
    };
    let f2 = (2.0 * m_plus + root) / 4.0;
    let weights = vec![p1, 1.0 - p1];
    let branch = if p1 == 0.0 || p1 == 1.0 {
        Branch::Vertex
    } else {
        Branch::Interior
    };
    SolveResult::new(weights, f2, branch).with_kkt(target, &[*s1, *s2])
}

/// Optimal mixture of an orthonormal basis `{|phi1>, |phi2>}`.
///
/// This is the coherence of the target with respect to that basis:
/// `D = 1 - sqrt((1 + sqrt(2m + (r_o.r1)^2)) / 2)`.
pub fn solve_orthonormal_pair(
    target: &TargetState,
    s1: &PureState,
    s2: &PureState,
) -> Result<SolveResult> {
    let (r1, r2) = (s1.bloch(), s2.bloch());
    let cos = r1.dot(r2);
    if 1.0 + cos > ORTHONORMAL_EPS {
        return Err(Error::NotOrthonormal(cos));
    }
    let d1 = target.bloch().dot(r1);
    let radicand = (2.0 * target.mixedness() + d1 * d1).max(0.0);
    let root = radicand.sqrt();
    let p1 = if 4.0 * radicand <= RADICAND_EPS {
        0.5
    } else {
        ((1.0 + d1 / root) / 2.0).clamp(0.0, 1.0)
    };
    let f2 = (1.0 + root) / 2.0;
    let branch = if p1 == 0.0 || p1 == 1.0 {
        Branch::Vertex
    } else {
        Branch::Interior
    };
    Ok(SolveResult::new(vec![p1, 1.0 - p1], f2, branch).with_kkt(target, &[*s1, *s2]))
}
