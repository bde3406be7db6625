//! Best convex approximation of a qubit state by mixtures of a finite set of
//! pure states, measured by the fidelity distance `D = 1 - F`.
//!
//! * [`bloch`]: states, the fidelity objective and its pairwise tables.
//! * [`closed_form`]: analytic optima for one to four states.
//! * [`planner`]: the general solver for any number of states.
//! * [`oracle`]: brute-force simplex-grid search used to check everything else.
//! * [`cli`]: JSON documents, figure sweeps and random instances behind the binary.

pub mod bloch;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod oracle;
pub mod planner;

pub use bloch::{Axis, BlochVector, ComplexMatrix2, PureState, TargetState};
pub use closed_form::{Branch, SolveResult};
pub use error::{Error, Result};
pub use oracle::GridSpec;
pub use planner::{best_approximation, Instance, PlannerReport};
