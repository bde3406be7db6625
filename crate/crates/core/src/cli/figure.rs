//! Distance curves for the three worked examples, written as CSV.
//!
//! Every panel sweeps one of `(a, k, phi)`, draws four curves over a second
//! one and holds the third fixed.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{target_from_params, Axis, PureState, TargetState};
use crate::closed_form::{pauli_set, solve_pair, solve_pauli_quad, solve_triple};
use crate::oracle::{grid_search, GridSpec};

use super::CliError;

pub const DEFAULT_SAMPLES: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    A,
    K,
    Phi,
}

impl Param {
    pub const ALL: [Param; 3] = [Param::A, Param::K, Param::Phi];

    pub fn domain(self) -> (f64, f64) {
        match self {
            Param::A | Param::K => (0.0, 1.0),
            Param::Phi => (0.0, 2.0 * PI),
        }
    }

    fn in_domain(self, v: f64) -> bool {
        let (lo, hi) = self.domain();
        v.is_finite() && v >= lo - 1e-12 && v <= hi + 1e-12
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Param::A => "a",
            Param::K => "k",
            Param::Phi => "phi",
        })
    }
}

impl std::str::FromStr for Param {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "a" => Ok(Param::A),
            "k" => Ok(Param::K),
            "phi" => Ok(Param::Phi),
            _ => Err(CliError::Schema(format!(
                "unknown parameter `{s}` (expected a, k or phi)"
            ))),
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            _ => Err(CliError::Schema(format!(
                "unknown figure `{s}` (expected fig1, fig2 or fig3)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sweep {
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

impl Sweep {
    pub fn sample(&self, i: usize) -> f64 {
        if self.count <= 1 {
            return self.from;
        }
        if i + 1 == self.count {
            return self.to;
        }
        self.from + (self.to - self.from) * i as f64 / (self.count - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureSpec {
    pub figure: Figure,
    /// The swept parameter.
    pub panel: Param,
    /// Parameter held constant, with its value.
    pub fixed: (Param, f64),
    /// One curve per value of this parameter.
    pub curve: (Param, Vec<f64>),
    pub sweep: Sweep,
    pub with_oracle: bool,
}

const CURVES: [f64; 4] = [0.2, 0.4, 0.6, 0.8];

impl FigureSpec {
    pub fn preset(figure: Figure, panel: Param) -> Self {
        use Param::*;
        let (fixed, curve) = match (figure, panel) {
            (Figure::Fig1, A) => ((Phi, 0.4613 * PI), (K, CURVES.to_vec())),
            (Figure::Fig1, K) => ((A, 0.8468), (Phi, vec![0.0, PI / 2.0, PI, 1.5 * PI])),
            (Figure::Fig1, Phi) => ((K, 0.0131), (A, CURVES.to_vec())),
            (Figure::Fig2, A) => ((K, 0.85), (Phi, vec![0.0, PI / 2.0, 1.5 * PI, 2.0 * PI])),
            (Figure::Fig2, K) => ((Phi, 0.5318 * PI), (A, CURVES.to_vec())),
            (Figure::Fig2, Phi) => ((A, 0.63), (K, CURVES.to_vec())),
            (Figure::Fig3, A) => ((K, 0.5910), (Phi, vec![0.0, PI / 4.0, PI / 3.0, PI / 2.0])),
            (Figure::Fig3, K) => ((Phi, 0.4047 * PI), (A, CURVES.to_vec())),
            (Figure::Fig3, Phi) => ((A, 0.1145), (K, CURVES.to_vec())),
        };
        let (from, to) = match (figure, panel) {
            (Figure::Fig3, Phi) => (0.0, PI / 2.0),
            _ => panel.domain(),
        };
        FigureSpec {
            figure,
            panel,
            fixed,
            curve,
            sweep: Sweep {
                from,
                to,
                count: DEFAULT_SAMPLES,
            },
            with_oracle: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let mut seen = [self.panel, self.fixed.0, self.curve.0];
        seen.sort();
        if seen != Param::ALL {
            return Err(CliError::Schema(
                "figure: sweep, fixed and curve parameters must be a, k and phi in some order"
                    .into(),
            ));
        }
        if self.sweep.count == 0 {
            return Err(CliError::Schema(
                "figure: sample count must be at least 1".into(),
            ));
        }
        for (name, v) in [("from", self.sweep.from), ("to", self.sweep.to)] {
            if !self.panel.in_domain(v) {
                let (lo, hi) = self.panel.domain();
                return Err(CliError::Schema(format!(
                    "figure: sweep {name} = {v} outside [{lo}, {hi}] for {}",
                    self.panel
                )));
            }
        }
        if !self.fixed.0.in_domain(self.fixed.1) {
            return Err(CliError::Schema(format!(
                "figure: fixed {} = {} outside its domain",
                self.fixed.0, self.fixed.1
            )));
        }
        if let Some(v) = self.curve.1.iter().find(|&&v| !self.curve.0.in_domain(v)) {
            return Err(CliError::Schema(format!(
                "figure: curve {} = {v} outside its domain",
                self.curve.0
            )));
        }
        Ok(())
    }

    fn params(&self, sweep: f64, curve: f64) -> (f64, f64, f64) {
        let mut v = [0.0; 3];
        for (p, x) in [(self.panel, sweep), (self.curve.0, curve), self.fixed] {
            v[p as usize] = x;
        }
        (v[0], v[1], v[2])
    }
}

fn amp(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The two states of the first worked example.
pub fn example_pair() -> [PureState; 2] {
    [
        PureState::new(amp(0.5143, 0.0), amp(0.8317, 0.2091)),
        PureState::new(amp(0.6950, 0.5523), amp(0.3633, 0.2827)),
    ]
    .map(|s| s.expect("fixture states are normalized to print precision"))
}

/// The three states of the second worked example.
pub fn example_triple() -> [PureState; 3] {
    [
        PureState::new(amp(0.5063, 0.3025), amp(0.6829, 0.4310)),
        PureState::new(amp(0.1275, 0.5888), amp(0.5452, 0.5829)),
        PureState::new(amp(0.0780, 0.6594), amp(0.1059, 0.7402)),
    ]
    .map(|s| s.expect("fixture states are normalized to print precision"))
}

pub const EXAMPLE_AXES: (Axis, Axis) = (Axis::X, Axis::Z);

pub fn figure_set(figure: Figure) -> Vec<PureState> {
    match figure {
        Figure::Fig1 => example_pair().to_vec(),
        Figure::Fig2 => example_triple().to_vec(),
        Figure::Fig3 => pauli_set(EXAMPLE_AXES).to_vec(),
    }
}

fn closed_distance(
    figure: Figure,
    target: &TargetState,
    set: &[PureState],
) -> Result<f64, CliError> {
    let result = match figure {
        Figure::Fig1 => solve_pair(target, &set[0], &set[1]),
        Figure::Fig2 => solve_triple(target, &set[0], &set[1], &set[2]),
        Figure::Fig3 => solve_pauli_quad(target, EXAMPLE_AXES, None).map_err(CliError::solver)?,
    };
    Ok(result.distance)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureRow {
    pub sweep: f64,
    pub curve: f64,
    pub closed: f64,
    pub grid: Option<f64>,
}

/// All rows, curve by curve, in sweep order.
pub fn generate(spec: &FigureSpec, evaluation_cap: u64) -> Result<Vec<FigureRow>, CliError> {
    spec.validate()?;
    let set = figure_set(spec.figure);
    let grid_spec = GridSpec::default_for(set.len()).with_cap(evaluation_cap);
    let points: Vec<(f64, f64)> = spec
        .curve
        .1
        .iter()
        .flat_map(|&c| (0..spec.sweep.count).map(move |i| (spec.sweep.sample(i), c)))
        .collect();
    points
        .par_iter()
        .map(|&(sweep, curve)| {
            let (a, k, phi) = spec.params(sweep, curve);
            let target =
                target_from_params(a, k, phi).map_err(|e| CliError::Schema(e.to_string()))?;
            let closed = closed_distance(spec.figure, &target, &set)?;
            let grid = if spec.with_oracle {
                let outcome = grid_search(&target, &set, &grid_spec).map_err(CliError::solver)?;
                Some(outcome.result.distance)
            } else {
                None
            };
            Ok(FigureRow {
                sweep,
                curve,
                closed,
                grid,
            })
        })
        .collect()
}

pub fn write_csv<W: Write>(
    rows: &[FigureRow],
    with_oracle: bool,
    mut out: W,
) -> std::io::Result<()> {
    let header = if with_oracle {
        "sweep_param,curve_param,distance_closed,distance_grid"
    } else {
        "sweep_param,curve_param,distance_closed"
    };
    writeln!(out, "{header}")?;
    for row in rows {
        write!(
            out,
            "{:.12},{:.12},{:.15e}",
            row.sweep, row.curve, row.closed
        )?;
        if with_oracle {
            match row.grid {
                Some(g) => write!(out, ",{g:.15e}")?,
                None => write!(out, ",")?,
            }
        }
        writeln!(out)?;
    }
    out.flush()
}

/// Writes to a temporary file beside `path` and renames it into place.
pub fn write_csv_file(rows: &[FigureRow], with_oracle: bool, path: &Path) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write_csv(
        rows,
        with_oracle,
        std::io::BufWriter::new(tmp.as_file_mut()),
    )?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Largest `|closed - grid|` over rows that have a grid value.
pub fn max_gap(rows: &[FigureRow]) -> Option<f64> {
    rows.iter()
        .filter_map(|r| r.grid.map(|g| (g - r.closed).abs()))
        .reduce(f64::max)
}
