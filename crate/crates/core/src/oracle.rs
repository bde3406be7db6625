//! Exhaustive search over a uniform lattice on the probability simplex.
//!
//! The first `N - 1` weights run over multiples of the step with the last one
//! taking up the rest, so `step = 0.001` with three states visits
//! `p1 = 0:0.001:1, p2 = 0:0.001:1-p1, p3 = 1-p1-p2`. Every lattice point is
//! scored with the same squared-fidelity objective the solvers use, so the
//! oracle can only disagree with them through lattice resolution.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::bloch::{check_weights, Objective, PureState, TargetState};
use crate::closed_form::{support_of, Branch, SolveResult};
use crate::error::{Error, Result};

pub const DEFAULT_EVALUATION_CAP: u64 = 100_000_000;

/// `gap <= GAP_CONSTANT * step` on the finest lattice used.
pub const GAP_CONSTANT: f64 = 0.5;

const MAX_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub step: f64,
    /// Number of local refinements around the incumbent after the full sweep.
    pub refine_rounds: u32,
    /// Each refinement divides the step by this factor and searches a box of
    /// the previous step's radius.
    pub refine_factor: f64,
    pub max_evaluations: u64,
}

impl GridSpec {
    pub fn new(step: f64) -> Self {
        GridSpec {
            step,
            refine_rounds: 0,
            refine_factor: 10.0,
            max_evaluations: DEFAULT_EVALUATION_CAP,
        }
    }

    /// Step 0.001 up to three states; 0.02 refined twice by 10 beyond that.
    pub fn default_for(n: usize) -> Self {
        if n <= 3 {
            GridSpec::new(0.001)
        } else {
            GridSpec::new(0.02).with_refinement(2, 10.0)
        }
    }

    pub fn with_refinement(mut self, rounds: u32, factor: f64) -> Self {
        self.refine_rounds = rounds;
        self.refine_factor = factor;
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.max_evaluations = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step <= MAX_STEP) {
            return Err(Error::BadStep(self.step));
        }
        if self.refine_rounds > 0 && !(self.refine_factor > 1.0 && self.refine_factor.is_finite()) {
            return Err(Error::BadStep(self.step / self.refine_factor));
        }
        Ok(())
    }

    /// Step of the last lattice searched.
    pub fn final_step(&self) -> f64 {
        self.step / self.refine_factor.powi(self.refine_rounds as i32)
    }

    /// Documented upper bound on `D_grid - D_optimal`.
    pub fn gap_bound(&self) -> f64 {
        GAP_CONSTANT * self.final_step()
    }

    /// Objective evaluations needed for `n` states.
    pub fn required_evaluations(&self, n: usize) -> u128 {
        let mut total = lattice_size(n, self.step);
        if self.refine_rounds > 0 {
            let half_width = (self.refine_factor + 1e-9).floor() as u128;
            let per_round = (2 * half_width + 1).saturating_pow(n.saturating_sub(1) as u32);
            total = total.saturating_add(per_round.saturating_mul(self.refine_rounds as u128));
        }
        total
    }
}

/// Number of lattice points, `C(L + n - 1, n - 1)` with `L = floor(1 / step)`.
pub fn lattice_size(n: usize, step: f64) -> u128 {
    if n == 0 {
        return 0;
    }
    let levels = levels(step) as u128;
    let k = (n - 1) as u128;
    // C(levels + k, k) built incrementally; each partial product is itself a binomial.
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c.saturating_mul(levels + i) / i;
    }
    c
}

fn levels(step: f64) -> u32 {
    (1.0 / step + 1e-9).floor() as u32
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    pub result: SolveResult,
    pub evaluations: u64,
}

#[derive(Debug, Clone)]
struct Candidate {
    f2: f64,
    weights: Vec<f64>,
    key: Vec<i64>,
}

impl Candidate {
    /// `Less` means `self` is preferred: larger `F^2`, then smaller support,
    /// then lexicographic support, then lattice order.
    fn cmp_preference(&self, other: &Candidate) -> Ordering {
        other.f2.total_cmp(&self.f2).then_with(|| {
            let (a, b) = (support_of(&self.weights), support_of(&other.weights));
            a.len()
                .cmp(&b.len())
                .then_with(|| a.cmp(&b))
                .then_with(|| self.key.cmp(&other.key))
        })
    }
}

fn pick(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.cmp_preference(&a) == Ordering::Less {
            b
        } else {
            a
        }),
        (a, None) => a,
        (None, b) => b,
    }
}

fn consider(best: &mut Option<Candidate>, objective: &Objective, weights: &[f64], key: &[i64]) {
    let f2 = objective.fidelity_sq(weights);
    if let Some(b) = best {
        // cheap reject before building a candidate
        if f2 < b.f2 {
            return;
        }
    }
    let cand = Candidate {
        f2,
        weights: weights.to_vec(),
        key: key.to_vec(),
    };
    *best = pick(best.take(), Some(cand));
}

struct Sweep<'a> {
    objective: &'a Objective,
    step: f64,
    n: usize,
}

impl Sweep<'_> {
    fn scan(
        &self,
        remaining: u32,
        weights: &mut Vec<f64>,
        key: &mut Vec<i64>,
        best: &mut Option<Candidate>,
        count: &mut u64,
    ) {
        if key.len() == self.n - 1 {
            let used: f64 = weights.iter().sum();
            weights.push((1.0 - used).max(0.0));
            consider(best, self.objective, weights, key);
            weights.pop();
            *count += 1;
            return;
        }
        for k in 0..=remaining {
            weights.push(k as f64 * self.step);
            key.push(k as i64);
            self.scan(remaining - k, weights, key, best, count);
            key.pop();
            weights.pop();
        }
    }
}

/// Best lattice point of the simplex for the given spec, refined if requested.
pub fn grid_search(
    target: &TargetState,
    set: &[PureState],
    spec: &GridSpec,
) -> Result<GridOutcome> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    spec.validate()?;
    let required = spec.required_evaluations(set.len());
    if required > spec.max_evaluations as u128 {
        return Err(Error::BudgetExceeded {
            required,
            cap: spec.max_evaluations,
        });
    }
    let objective = Objective::new(target, set);
    let n = set.len();
    let total = levels(spec.step);

    let (best, mut evaluations) = if n == 1 {
        let mut best = None;
        consider(&mut best, &objective, &[1.0], &[]);
        (best, 1)
    } else {
        let sweep = Sweep {
            objective: &objective,
            step: spec.step,
            n,
        };
        (0..=total)
            .into_par_iter()
            .map(|k0| {
                let mut best = None;
                let mut count = 0;
                let mut weights = vec![k0 as f64 * spec.step];
                let mut key = vec![k0 as i64];
                sweep.scan(total - k0, &mut weights, &mut key, &mut best, &mut count);
                (best, count)
            })
            .reduce(|| (None, 0), |(a, ca), (b, cb)| (pick(a, b), ca + cb))
    };
    let best = best.expect("lattice is never empty");

    let mut result = SolveResult::new(best.weights, best.f2, Branch::Grid);
    let mut step = spec.step;
    for _ in 0..spec.refine_rounds {
        let radius = step;
        step /= spec.refine_factor;
        let refined = refine_with(&objective, &result.weights, radius, step)?;
        evaluations += refined.evaluations;
        result = refined.result;
    }
    Ok(GridOutcome {
        result,
        evaluations,
    })
}

/// Lattice search restricted to a box of half-width `radius` around `incumbent`.
///
/// The lattice is anchored at the incumbent, which is always a candidate, so
/// the returned distance never exceeds the incumbent's.
pub fn local_refine(
    target: &TargetState,
    set: &[PureState],
    incumbent: &[f64],
    radius: f64,
    step: f64,
) -> Result<GridOutcome> {
    check_weights(incumbent, set.len())?;
    if step.is_nan() || step <= 0.0 {
        return Err(Error::BadStep(step));
    }
    let objective = Objective::new(target, set);
    refine_with(&objective, incumbent, radius.clamp(0.0, 1.0), step)
}

fn refine_with(
    objective: &Objective,
    incumbent: &[f64],
    radius: f64,
    step: f64,
) -> Result<GridOutcome> {
    let n = objective.len();
    let half_width = (radius / step + 1e-9).floor() as i64;

    let mut best = None;
    consider(
        &mut best,
        objective,
        incumbent,
        &vec![0; n.saturating_sub(1)],
    );
    let mut evaluations = 1u64;

    if half_width > 0 && n > 1 {
        let free = n - 1;
        let mut offsets = vec![-half_width; free];
        let mut weights = vec![0.0; n];
        loop {
            let mut ok = true;
            let mut used = 0.0;
            for i in 0..free {
                let w = incumbent[i] + offsets[i] as f64 * step;
                if !(-1e-12..=1.0 + 1e-12).contains(&w) {
                    ok = false;
                    break;
                }
                weights[i] = w.clamp(0.0, 1.0);
                used += weights[i];
            }
            let last = 1.0 - used;
            if ok && last >= -1e-12 {
                weights[free] = last.max(0.0);
                consider(&mut best, objective, &weights, &offsets);
                evaluations += 1;
            }
            // odometer over the offset box
            let mut i = 0;
            loop {
                if i == free {
                    let best = best.expect("incumbent is always a candidate");
                    return Ok(GridOutcome {
                        result: SolveResult::new(best.weights, best.f2, Branch::Grid),
                        evaluations,
                    });
                }
                offsets[i] += 1;
                if offsets[i] > half_width {
                    offsets[i] = -half_width;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }
    let best = best.expect("incumbent is always a candidate");
    Ok(GridOutcome {
        result: SolveResult::new(best.weights, best.f2, Branch::Grid),
        evaluations,
    })
}
