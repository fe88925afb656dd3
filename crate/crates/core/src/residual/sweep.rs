//! Residual sweeps over space-time grids and FD convergence studies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{residual_at, Mode, ResidualVector};
use crate::error::{Error, Result};
use crate::exact::Perturbation;
use crate::fd::StencilSpec;
use crate::model::{make_grid, standard_grid, AxisSpec, GridSpec, SpaceTimePoint};
use crate::problem::{Problem, System};
use crate::scalar::Scalar;
use crate::stats::least_squares;

pub const SCHEMA_VERSION: u32 = 1;

/// A component whose FD error stays at or below this relative level for
/// every step is treated as reproduced exactly by the stencil and is not
/// fitted.
pub const EXACT_FLOOR: f64 = 1e-9;

/// Sup norms of one residual component over a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub name: String,
    pub sup_abs: f64,
    pub sup_rel: f64,
    /// Scale reference at the worst point.
    pub scale: f64,
    pub worst_point: Vec<f64>,
    pub worst_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub schema_version: u32,
    pub system: System,
    pub equations: String,
    pub perturbation: Perturbation,
    pub mode: String,
    pub stencil: Option<StencilSpec<f64>>,
    pub components: Vec<ComponentSummary>,
    pub max_rel: f64,
    pub points: usize,
    pub grid_echo: GridSpec<f64>,
}

impl ResidualReport {
    pub fn component(&self, name: &str) -> Option<&ComponentSummary> {
        self.components.iter().find(|c| c.name == name)
    }

    /// Component with the largest relative residual; first on ties.
    pub fn worst(&self) -> Option<&ComponentSummary> {
        self.components
            .iter()
            .fold(None, |best: Option<&ComponentSummary>, c| match best {
                Some(b) if b.sup_rel >= c.sup_rel => Some(b),
                _ => Some(c),
            })
    }
}

fn grid_to_f64<S: Scalar>(grid: &GridSpec<S>) -> GridSpec<f64> {
    GridSpec {
        axes: grid
            .axes
            .iter()
            .map(|a| AxisSpec::new(a.lower.as_f64(), a.upper.as_f64(), a.count))
            .collect(),
        times: grid.times.iter().map(|t| t.as_f64()).collect(),
    }
}

fn stencil_to_f64<S: Scalar>(spec: &StencilSpec<S>) -> StencilSpec<f64> {
    StencilSpec {
        h: spec.h.as_f64(),
        k: spec.k.as_f64(),
        order: spec.order,
    }
}

/// Evaluates `f` at every point in parallel. Results keep enumeration
/// order; the first failing point (lowest index) determines the error,
/// which carries its location.
pub(crate) fn map_points<S, T, F>(points: &[SpaceTimePoint<S>], f: F) -> Result<Vec<T>>
where
    S: Scalar,
    T: Send,
    F: Fn(&SpaceTimePoint<S>) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = points
        .par_iter()
        .map(|pt| f(pt).map_err(|e| e.at(pt.x.iter().map(|v| v.as_f64()).collect(), pt.t.as_f64())))
        .collect();
    results.into_iter().collect()
}

fn check_grid_dim<S: Scalar>(problem: &Problem<S>, grid: &GridSpec<S>) -> Result<()> {
    if grid.dim() != problem.family.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.family.dim(),
            got: grid.dim(),
        });
    }
    Ok(())
}

/// Sup-norm reduction over residual vectors in enumeration order. Ties
/// keep the earliest point.
fn summarize<S: Scalar>(points: &[SpaceTimePoint<S>], residuals: &[ResidualVector<S>]) -> Vec<ComponentSummary> {
    let Some(first) = residuals.first() else {
        return Vec::new();
    };
    first
        .components
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let mut sup_abs = S::zero();
            let mut best = 0;
            let mut best_rel = S::zero();
            for (i, r) in residuals.iter().enumerate() {
                let rc = &r.components[c];
                sup_abs = sup_abs.max(rc.value.abs());
                let rel = rc.relative();
                if rel > best_rel {
                    best_rel = rel;
                    best = i;
                }
            }
            ComponentSummary {
                name: comp.name.to_string(),
                sup_abs: sup_abs.as_f64(),
                sup_rel: best_rel.as_f64(),
                scale: residuals[best].components[c].scale.as_f64(),
                worst_point: points[best].x.iter().map(|v| v.as_f64()).collect(),
                worst_time: points[best].t.as_f64(),
            }
        })
        .collect()
}

/// Residual sup norms over every point of `grid`.
pub fn residual_sweep<S: Scalar>(problem: &Problem<S>, grid: &GridSpec<S>, mode: &Mode<S>) -> Result<ResidualReport> {
    check_grid_dim(problem, grid)?;
    if let Some(spec) = mode.stencil() {
        spec.validate()?;
    }
    let points = make_grid(grid)?;
    let residuals = map_points(&points, |pt| residual_at(problem, &pt.x, pt.t, mode))?;
    let components = summarize(&points, &residuals);
    Ok(ResidualReport {
        schema_version: SCHEMA_VERSION,
        system: problem.family.system(),
        equations: problem.equations().to_string(),
        perturbation: problem.opts.perturbation,
        mode: mode.name().to_string(),
        stencil: mode.stencil().map(stencil_to_f64),
        max_rel: components.iter().map(|c| c.sup_rel).fold(0.0, f64::max),
        components,
        points: points.len(),
        grid_echo: grid_to_f64(grid),
    })
}

/// Keeps the times at which every stencil node stays inside the solution's
/// time domain: `t − 2k ≥ 0` and `t + 2k ≤ 0.99·t_blow` in FD mode,
/// `0 ≤ t < t_blow` analytically. Oldroyd continuation lifts the upper
/// bound except at `t*` itself.
pub fn admissible_times<S: Scalar>(problem: &Problem<S>, times: &[S], mode: &Mode<S>) -> Vec<S> {
    let blow = problem.family.blow_up_time();
    let margin = mode.stencil().map(|s| S::lit(2.0) * s.k).unwrap_or(S::zero());
    let continuation = problem.opts.continuation;
    times
        .iter()
        .copied()
        .filter(|&t| {
            if t - margin < S::zero() {
                return false;
            }
            match blow {
                None => true,
                Some(tb) if continuation => (t - tb).abs() > margin,
                Some(tb) if margin > S::zero() => t + margin <= S::lit(0.99) * tb,
                Some(tb) => t < tb,
            }
        })
        .collect()
}

/// `[-1, 1]^d` with `count` nodes per axis at the standard times
/// `0.1·j·horizon` that are admissible for `mode`. The horizon is the
/// blow-up time, or 1 when there is none.
pub fn standard_sweep_grid<S: Scalar>(problem: &Problem<S>, count: usize, mode: &Mode<S>) -> GridSpec<S> {
    let horizon = problem.family.blow_up_time().unwrap_or(S::one());
    let mut grid = standard_grid(problem.family.dim(), count, horizon);
    grid.times = admissible_times(problem, &grid.times, mode);
    grid
}

/// FD error history of one residual component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentOrder {
    pub name: String,
    /// `sup |r_fd − r_analytic|` over the grid, one per step.
    pub errors: Vec<f64>,
    /// The same differences relative to the scale reference.
    pub relative_errors: Vec<f64>,
    /// `true` when every relative error is at or below [`EXACT_FLOOR`].
    pub exact: bool,
    pub slope: Option<f64>,
    pub slope_stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub schema_version: u32,
    pub system: System,
    pub equations: String,
    pub perturbation: Perturbation,
    pub order: u8,
    pub k_over_h: f64,
    pub steps: Vec<f64>,
    pub components: Vec<ComponentOrder>,
    /// Smallest and largest fitted slope, absent when every component is
    /// exact.
    pub min_slope: Option<f64>,
    pub max_slope: Option<f64>,
    pub points: usize,
    pub grid_echo: GridSpec<f64>,
}

impl ConvergenceReport {
    pub fn component(&self, name: &str) -> Option<&ComponentOrder> {
        self.components.iter().find(|c| c.name == name)
    }

    /// Whether every fitted slope lies within `tol` of `target`.
    pub fn slopes_within(&self, target: f64, tol: f64) -> bool {
        self.components
            .iter()
            .filter_map(|c| c.slope)
            .all(|s| (s - target).abs() <= tol)
    }
}

/// Measures how FD residuals approach the analytic residuals as the steps
/// shrink. Each step `h` in `h_list` uses `base.rescaled(h)`, so `k/h`
/// stays fixed. Grid times must be admissible for the largest step.
pub fn convergence_study<S: Scalar>(
    problem: &Problem<S>,
    grid: &GridSpec<S>,
    base: &StencilSpec<S>,
    h_list: &[S],
) -> Result<ConvergenceReport> {
    base.validate()?;
    check_grid_dim(problem, grid)?;
    if h_list.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: h_list.len(),
        });
    }
    let points = make_grid(grid)?;
    let analytic = map_points(&points, |pt| residual_at(problem, &pt.x, pt.t, &Mode::Analytic))?;
    let names: Vec<&'static str> = analytic.first().map(|r| r.names()).unwrap_or_default();

    let mut errors = vec![Vec::with_capacity(h_list.len()); names.len()];
    let mut relative = vec![Vec::with_capacity(h_list.len()); names.len()];
    for &h in h_list {
        let spec = base.rescaled(h);
        spec.validate()?;
        let mode = Mode::FiniteDifference(spec);
        let fd = map_points(&points, |pt| residual_at(problem, &pt.x, pt.t, &mode))?;
        for c in 0..names.len() {
            let (mut sup, mut sup_rel) = (0.0f64, 0.0f64);
            for (a, f) in analytic.iter().zip(&fd) {
                let (ac, fc) = (&a.components[c], &f.components[c]);
                let diff = (fc.value - ac.value).abs();
                let scale = ac.scale.max(fc.scale).max(S::one());
                sup = sup.max(diff.as_f64());
                sup_rel = sup_rel.max((diff / scale).as_f64());
            }
            errors[c].push(sup);
            relative[c].push(sup_rel);
        }
    }

    let steps: Vec<f64> = h_list.iter().map(|h| h.as_f64()).collect();
    let log_h: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let mut components = Vec::with_capacity(names.len());
    for (c, name) in names.iter().enumerate() {
        let exact = relative[c].iter().all(|&r| r <= EXACT_FLOOR);
        let fit = if exact {
            None
        } else {
            let log_e: Vec<f64> = errors[c].iter().map(|e| e.ln()).collect();
            Some(least_squares(&log_h, &log_e)?)
        };
        components.push(ComponentOrder {
            name: name.to_string(),
            errors: errors[c].clone(),
            relative_errors: relative[c].clone(),
            exact,
            slope: fit.map(|f| f.slope),
            slope_stderr: fit.map(|f| f.slope_stderr),
        });
    }
    let slopes: Vec<f64> = components.iter().filter_map(|c| c.slope).collect();
    Ok(ConvergenceReport {
        schema_version: SCHEMA_VERSION,
        system: problem.family.system(),
        equations: problem.equations().to_string(),
        perturbation: problem.opts.perturbation,
        order: base.order,
        k_over_h: (base.k / base.h).as_f64(),
        steps,
        min_slope: slopes.iter().copied().reduce(f64::min),
        max_slope: slopes.iter().copied().reduce(f64::max),
        components,
        points: points.len(),
        grid_echo: grid_to_f64(grid),
    })
}
