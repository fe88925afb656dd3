use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use blowup_core::diagnostics::{blowup_profile, check_assumptions, fit_exponent, ExponentFit};
use blowup_core::ode::{compare_ode, integrate_reduced, OdeErrorReport};
use blowup_core::output::write_csv;
use blowup_core::residual::{convergence_study, residual_sweep, ConvergenceReport, Mode, ResidualReport};
use blowup_core::{make_grid, EvalOptions, Family, FieldSample, OldroydForm, Problem, System};

use crate::config::{ModeName, RunConfig, Task, SCHEMA_VERSION};
use crate::error::CliError;

/// Whether the run met its tolerance. Commands without one always pass.
pub type Passed = bool;

#[derive(Serialize)]
struct VerifyOutput<'a> {
    #[serde(flatten)]
    report: &'a ResidualReport,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct ConvergenceOutput<'a> {
    #[serde(flatten)]
    report: &'a ConvergenceReport,
    slope_tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct OdeOutput {
    schema_version: u32,
    system: System,
    t_star: Option<f64>,
    tolerance: f64,
    passed: bool,
    report: OdeErrorReport,
}

#[derive(Serialize)]
struct ProfileFit<'a> {
    schema_version: u32,
    system: System,
    label: &'a str,
    point: &'a [f64],
    t_blow: f64,
    fit: ExponentFit,
}

/// Opens `path`, or stdout when absent.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn io_err(path: Option<&Path>, e: std::io::Error) -> CliError {
    CliError::io(path.unwrap_or(Path::new("<stdout>")), e)
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    let mut out = sink(path)?;
    out.write_all(text.as_bytes()).map_err(|e| io_err(path, e))?;
    out.flush().map_err(|e| io_err(path, e))
}

pub fn dump(cfg: &RunConfig) -> Result<(), CliError> {
    write_json(None, cfg)
}

pub fn execute(cfg: &RunConfig) -> Result<Passed, CliError> {
    let family = cfg.family()?;
    let out = cfg.out.as_deref();
    match &cfg.task {
        Task::Eval {
            grid,
            continuation,
            perturbation,
        } => {
            let opts = EvalOptions {
                continuation: *continuation,
                perturbation: *perturbation,
            };
            eval(&family, grid, opts, out)?;
            Ok(true)
        }
        Task::Verify {
            grid,
            equations,
            mode,
            stencil,
            tolerance,
            continuation,
            perturbation,
        } => {
            let problem = problem(family, *equations, *continuation, *perturbation);
            let mode = match mode {
                ModeName::Analytic => Mode::Analytic,
                ModeName::Fd => Mode::FiniteDifference(*stencil),
            };
            let report = residual_sweep(&problem, grid, &mode)?;
            let passed = report.max_rel <= *tolerance;
            write_json(
                out,
                &VerifyOutput {
                    report: &report,
                    tolerance: *tolerance,
                    passed,
                },
            )?;
            Ok(passed)
        }
        Task::Convergence {
            grid,
            equations,
            stencil,
            h_list,
            slope_tolerance,
            perturbation,
        } => {
            let problem = problem(family, *equations, false, *perturbation);
            let report = convergence_study(&problem, grid, stencil, h_list)?;
            let passed = report.slopes_within(f64::from(stencil.order), *slope_tolerance);
            write_json(
                out,
                &ConvergenceOutput {
                    report: &report,
                    slope_tolerance: *slope_tolerance,
                    passed,
                },
            )?;
            Ok(passed)
        }
        Task::OdeCheck {
            t_end,
            dt,
            tolerance,
            trajectory,
        } => {
            let Family::Oldroyd(p) = family else {
                return Err(blowup_core::Error::Unsupported("ode-check applies to the oldroyd system".into()).into());
            };
            let report = compare_ode(&p, *t_end, *dt)?;
            if let Some(path) = trajectory {
                let traj = integrate_reduced(&p, *t_end, *dt)?;
                let mut w = sink(Some(path))?;
                traj.write_csv(&mut w)?;
                w.flush().map_err(|e| CliError::io(path, e))?;
            }
            let passed = report.max <= *tolerance;
            write_json(
                out,
                &OdeOutput {
                    schema_version: SCHEMA_VERSION,
                    system: System::Oldroyd,
                    t_star: family.blow_up_time(),
                    tolerance: *tolerance,
                    passed,
                    report,
                },
            )?;
            Ok(passed)
        }
        Task::BlowupProfile {
            point,
            approach,
            diagnostic,
            fit_out,
        } => {
            let series = blowup_profile(&family, point, *approach, *diagnostic)?;
            let fit = fit_exponent(&series, series.t_blow)?;
            let summary = ProfileFit {
                schema_version: SCHEMA_VERSION,
                system: series.system,
                label: &series.label,
                point: &series.point,
                t_blow: series.t_blow,
                fit,
            };
            profile_outputs(&series, &summary, out, fit_out.as_ref())?;
            Ok(true)
        }
        Task::Assumptions { audit } => {
            write_json(out, &check_assumptions(&family, audit)?)?;
            Ok(true)
        }
    }
}

fn problem(
    family: Family<f64>,
    form: OldroydForm,
    continuation: bool,
    perturbation: blowup_core::Perturbation,
) -> Problem<f64> {
    Problem::new(family).with_form(form).with_options(EvalOptions {
        continuation,
        perturbation,
    })
}

/// CSV to `out` (stdout when absent), then the fit JSON to `fit_out`; when
/// both would land on stdout they are separated by one blank line.
fn profile_outputs(
    series: &blowup_core::ProfileSeries,
    summary: &ProfileFit<'_>,
    out: Option<&Path>,
    fit_out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let mut w = sink(out)?;
    series.write_csv(&mut w)?;
    if out.is_none() && fit_out.is_none() {
        w.write_all(b"\n").map_err(|e| io_err(None, e))?;
    }
    w.flush().map_err(|e| io_err(out, e))?;
    drop(w);
    write_json(fit_out.map(PathBuf::as_path), summary)
}

/// Column names for the eval CSV: coordinates, `t`, velocity, pressure,
/// then the family's extra fields.
fn eval_header(family: &Family<f64>) -> Vec<String> {
    let d = family.dim();
    let mut h: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    h.push("t".into());
    h.extend((1..=d).map(|i| format!("u{i}")));
    h.push("P".into());
    match family {
        Family::Oldroyd(_) => {
            h.extend(["phi1", "phi2", "F11", "F12", "F21", "F22", "p"].map(String::from));
        }
        Family::PhaseField(_) => h.push("phi".into()),
        Family::NavierStokes { .. } => {}
    }
    h
}

fn eval_row(x: &[f64], t: f64, s: &FieldSample<f64>) -> Vec<f64> {
    let mut row = x.to_vec();
    row.push(t);
    row.extend(&s.u);
    row.push(s.pressure);
    row.extend(&s.phi);
    if let Some(f) = s.deformation {
        row.extend([f[0][0], f[0][1], f[1][0], f[1][1]]);
    }
    row.extend(s.original_pressure);
    row
}

fn eval(
    family: &Family<f64>,
    grid: &blowup_core::GridSpec<f64>,
    opts: EvalOptions,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let points = make_grid(grid)?;
    let rows = points
        .iter()
        .map(|pt| {
            family
                .eval(&pt.x, pt.t, opts)
                .map(|s| eval_row(&pt.x, pt.t, &s))
                .map_err(|e| blowup_core::Error::AtPoint {
                    point: pt.x.clone(),
                    t: pt.t,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let header = eval_header(family);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut w = sink(out)?;
    write_csv(&mut w, &header, rows)?;
    w.flush().map_err(|e| io_err(out, e))
}
