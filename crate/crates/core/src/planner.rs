//! General solver for any number of states.
//!
//! The optimal mixture is a point of the convex hull of the set's Bloch
//! vectors. If the target itself is in the hull, some four states (fewer if
//! they are coplanar) reproduce it exactly. If it is not, the objective is
//! strictly concave in the mixture's Bloch vector (for a mixed target) so the
//! optimum sits on a face of the hull, and every face is covered by triangles
//! of set states. For a pure target the objective is linear and a vertex wins.
//! Hence: try every 4-subset for an exact decomposition, and otherwise take
//! the best of the three-state solutions over all 3-subsets.
//!
//! Cost is `C(N, 4) + C(N, 3)` constant-time solves.

use std::cmp::Ordering;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{PureState, TargetState, DENSITY_TOL};
use crate::closed_form::{
    exact_quad_decomposition, solve_pair, solve_single, solve_triple, QuadOutcome, SolveResult,
};
use crate::error::{Error, Result};
use crate::oracle::{grid_search, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Among equal distances prefer fewer states, then the smaller index set.
    #[default]
    SmallestSupport,
    /// Among equal distances keep the subset enumerated first.
    FirstEvaluated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Density-matrix validation tolerance and Bloch distance under which
    /// two set states count as duplicates.
    pub tol: f64,
    pub tie_break: TieBreak,
    /// Lattice step for oracle checks; `None` picks [`GridSpec::default_for`].
    pub oracle_step: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DENSITY_TOL,
            tie_break: TieBreak::default(),
            oracle_step: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub target: TargetState,
    pub set: Vec<PureState>,
    pub options: SolverOptions,
}

impl Instance {
    pub fn new(target: TargetState, set: Vec<PureState>) -> Self {
        Instance {
            target,
            set,
            options: SolverOptions::default(),
        }
    }

    pub fn with_options(mut self, options: SolverOptions) -> Self {
        self.options = options;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerReport {
    /// Weights are indexed like the instance's set.
    pub result: SolveResult,
    pub candidates_evaluated: usize,
    pub exact_hit: bool,
    /// Original indices of the states in the winning subset.
    pub subset: Vec<usize>,
}

/// Distinct states plus, for each, the index of its first occurrence.
fn deduplicate(set: &[PureState], tol: f64) -> (Vec<PureState>, Vec<usize>) {
    let mut unique: Vec<PureState> = Vec::new();
    let mut first = Vec::new();
    for (i, s) in set.iter().enumerate() {
        if !unique.iter().any(|u| (u.bloch() - s.bloch()).norm() < tol) {
            unique.push(*s);
            first.push(i);
        }
    }
    (unique, first)
}

fn compare(a: &(usize, SolveResult), b: &(usize, SolveResult), tie: TieBreak) -> Ordering {
    match tie {
        TieBreak::SmallestSupport => a.1.preference(&b.1).then(a.0.cmp(&b.0)),
        TieBreak::FirstEvaluated => a.1.distance.total_cmp(&b.1.distance).then(a.0.cmp(&b.0)),
    }
}

/// Globally optimal mixture of the instance's states.
pub fn best_approximation(instance: &Instance) -> Result<PlannerReport> {
    let set = &instance.set;
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let target = &instance.target;
    let (unique, first) = deduplicate(set, instance.options.tol);
    let k = unique.len();

    let (local, local_subset, candidates_evaluated, exact_hit) = match k {
        1 => (solve_single(target, &unique[0]), vec![0], 1, false),
        2 => (
            solve_pair(target, &unique[0], &unique[1]),
            vec![0, 1],
            1,
            false,
        ),
        3 => (
            solve_triple(target, &unique[0], &unique[1], &unique[2]),
            vec![0, 1, 2],
            1,
            false,
        ),
        _ => solve_many(target, &unique, instance.options.tie_break)?,
    };

    // back to original indexing: first occurrence carries the weight
    let mut weights = vec![0.0; set.len()];
    for (&orig, &w) in first.iter().zip(&local.weights) {
        weights[orig] = w;
    }
    let subset: Vec<usize> = local_subset.iter().map(|&i| first[i]).collect();
    let result = SolveResult {
        support: crate::closed_form::support_of(&weights),
        weights,
        ..local
    }
    .with_kkt(target, set);

    Ok(PlannerReport {
        result,
        candidates_evaluated,
        exact_hit,
        subset,
    })
}

fn solve_many(
    target: &TargetState,
    set: &[PureState],
    tie: TieBreak,
) -> Result<(SolveResult, Vec<usize>, usize, bool)> {
    let n = set.len();
    let mut evaluated = 0;
    for quad in (0..n).combinations(4) {
        evaluated += 1;
        let states = [set[quad[0]], set[quad[1]], set[quad[2]], set[quad[3]]];
        match exact_quad_decomposition(target, &states) {
            Ok(QuadOutcome::Exact(r)) => return Ok((r.embed(&quad, n), quad, evaluated, true)),
            Ok(QuadOutcome::NoExact { .. }) | Err(Error::RankDeficient(_)) => {}
            Err(e) => return Err(e),
        }
    }

    let triples: Vec<Vec<usize>> = (0..n).combinations(3).collect();
    evaluated += triples.len();
    let (best_idx, best) = triples
        .par_iter()
        .enumerate()
        .map(|(idx, t)| {
            let r = solve_triple(target, &set[t[0]], &set[t[1]], &set[t[2]]);
            (idx, r.embed(t, n))
        })
        .min_by(|a, b| compare(a, b, tie))
        .expect("at least four states give triples");
    Ok((best, triples[best_idx].clone(), evaluated, false))
}

/// Closed-form distance next to the oracle's for the same instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleComparison {
    pub closed: f64,
    pub grid: f64,
    /// `grid - closed`
    pub gap: f64,
    pub evaluations: u64,
    /// Upper end of the accepted gap for the lattice used.
    pub bound: f64,
}

/// Lower end of the accepted gap; the closed form is a true optimum.
pub const GAP_FLOOR: f64 = -1e-12;

impl OracleComparison {
    pub fn within_bound(&self) -> bool {
        self.gap >= GAP_FLOOR && self.gap <= self.bound
    }
}

/// Compares [`best_approximation`] with a lattice search at `step`, refined as
/// [`GridSpec::default_for`] prescribes for the set size.
pub fn verify_against_oracle(instance: &Instance, step: f64) -> Result<OracleComparison> {
    let spec = GridSpec {
        step,
        ..GridSpec::default_for(instance.set.len())
    };
    verify_with_spec(instance, &spec)
}

pub fn verify_with_spec(instance: &Instance, spec: &GridSpec) -> Result<OracleComparison> {
    spec.validate()?;
    let closed = best_approximation(instance)?.result.distance;
    let grid = grid_search(&instance.target, &instance.set, spec)?;
    Ok(OracleComparison {
        closed,
        grid: grid.result.distance,
        gap: grid.result.distance - closed,
        evaluations: grid.evaluations,
        bound: spec.gap_bound(),
    })
}
