use crate::bloch::{Objective, PairwiseCache, PureState, TargetState};

use super::{best_of, clamp_weights, solve_pair, solve_single, Branch, SolveResult};

/// Guard on `4 Y13 Y23 - Y123^2` and on `kappa`.
pub const DEGENERACY_EPS: f64 = 1e-10;
/// Pseudo-probabilities this far outside `[0, 1]` still count as valid.
const PSEUDO_SLACK: f64 = 1e-9;

/// Quantities of the three-state stationary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleIntermediates {
    /// `Y12 - Y13 - Y23`
    pub y123: f64,
    pub kappa: f64,
    /// `4 Y13 Y23 - Y123^2`; four times the squared area of the Bloch triangle
    /// up to a constant, so it vanishes only for degenerate triples.
    pub denominator: f64,
    /// Stationary weights, `None` when the triple or `kappa` is degenerate.
    pub pseudo_p: Option<[f64; 3]>,
}

/// Evaluates the stationary point of `F^2` on the plane of three states.
///
/// `cache` must be built for exactly three states and `mixedness` is the
/// target's `m`.
pub fn triple_intermediates(cache: &PairwiseCache, mixedness: f64) -> TripleIntermediates {
    assert_eq!(cache.len(), 3, "triple_intermediates needs three states");
    let (y12, y13, y23) = (cache.y(0, 1), cache.y(0, 2), cache.y(1, 2));
    let (m31, m32) = (cache.m(2, 0), cache.m(2, 1));
    let y123 = y12 - y13 - y23;
    let denominator = 4.0 * y13 * y23 - y123 * y123;
    let kappa = m31 * m31 * y23 + m32 * m32 * y13 + m31 * m32 * y123 + denominator * mixedness;

    let pseudo_p = (denominator > DEGENERACY_EPS && kappa > DEGENERACY_EPS).then(|| {
        let root = (y12 * y13 * y23 / kappa).max(0.0).sqrt();
        let p1 = (y23 * (y123 + 2.0 * y13) - (y123 * m32 + 2.0 * y23 * m31) * root) / denominator;
        let p2 = (y13 * (y123 + 2.0 * y23) - (y123 * m31 + 2.0 * y13 * m32) * root) / denominator;
        [p1, p2, 1.0 - p1 - p2]
    });

    TripleIntermediates {
        y123,
        kappa,
        denominator,
        pseudo_p,
    }
}

/// Optimal mixture of three pure states.
///
/// A pure target makes the objective linear, so the best single state wins.
/// Otherwise the stationary point is used when its weights are valid, and the
/// best of the three edges (each solved with [`solve_pair`]) when not.
pub fn solve_triple(
    target: &TargetState,
    s1: &PureState,
    s2: &PureState,
    s3: &PureState,
) -> SolveResult {
    let set = [*s1, *s2, *s3];
    let m = target.mixedness();
    if m == 0.0 {
        let best = best_of(
            set.iter()
                .enumerate()
                .map(|(i, s)| solve_single(target, s).embed(&[i], 3)),
        )
        .expect("three candidates");
        return best.with_kkt(target, &set);
    }

    let objective = Objective::new(target, &set);
    let inter = triple_intermediates(objective.cache(), m);
    if let Some(mut p) = inter.pseudo_p {
        let valid = p
            .iter()
            .all(|&w| (-PSEUDO_SLACK..=1.0 + PSEUDO_SLACK).contains(&w));
        if valid {
            clamp_weights(&mut p);
            let f2 = objective.fidelity_sq(&p);
            return SolveResult::new(p.to_vec(), f2, Branch::Interior).with_kkt(target, &set);
        }
    }
    boundary_pairs(target, &set)
}

fn boundary_pairs(target: &TargetState, set: &[PureState; 3]) -> SolveResult {
    let candidates = [(0, 1), (0, 2), (1, 2)].map(|(i, j)| {
        let mut r = solve_pair(target, &set[i], &set[j]).embed(&[i, j], 3);
        r.branch = Branch::BoundaryPair;
        r
    });
    best_of(candidates)
        .expect("three candidates")
        .with_kkt(target, set)
}
