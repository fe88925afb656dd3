//! Fully resolved run descriptions. `--dump-config` prints one; `run
//! --config` executes one, so every default is written out explicitly.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use blowup_core::residual::{admissible_times, standard_sweep_grid};
use blowup_core::{
    Approach, AuditConfig, AxisSpec, Diagnostic, EvalOptions, Family, GridSpec, Mode, NsParams, OldroydForm,
    OldroydParams, Perturbation, PhaseFieldParams, PhaseVariant, Problem, StencilSpec, System,
};

use crate::args::{
    AssumptionArgs, Command, Common, ConvergenceArgs, EvalArgs, OdeArgs, ProfileArgs, Sampling, Stencil, VerifyArgs,
};
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub system: System,
    /// Parameter object in the schema of the system's family.
    pub params: Value,
    pub out: Option<PathBuf>,
    pub task: Task,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Analytic,
    Fd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    Eval {
        grid: GridSpec<f64>,
        continuation: bool,
        perturbation: Perturbation,
    },
    Verify {
        grid: GridSpec<f64>,
        equations: OldroydForm,
        mode: ModeName,
        stencil: StencilSpec<f64>,
        tolerance: f64,
        continuation: bool,
        perturbation: Perturbation,
    },
    Convergence {
        grid: GridSpec<f64>,
        equations: OldroydForm,
        stencil: StencilSpec<f64>,
        h_list: Vec<f64>,
        slope_tolerance: f64,
        perturbation: Perturbation,
    },
    OdeCheck {
        t_end: f64,
        dt: f64,
        tolerance: f64,
        trajectory: Option<PathBuf>,
    },
    BlowupProfile {
        point: Vec<f64>,
        approach: Approach,
        diagnostic: Diagnostic,
        fit_out: Option<PathBuf>,
    },
    Assumptions {
        audit: AuditConfig,
    },
}

impl RunConfig {
    /// Validated family described by `system` and `params`.
    pub fn family(&self) -> Result<Family<f64>, CliError> {
        family_from(self.system, &self.params)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "unsupported schema_version {}; expected {SCHEMA_VERSION}",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }
}

fn family_from(system: System, params: &Value) -> Result<Family<f64>, CliError> {
    let bad = |e: serde_json::Error| CliError::config(format!("params for {system}: {e}"));
    let family = match system {
        System::Oldroyd => Family::oldroyd(OldroydParams::deserialize(params).map_err(bad)?)?,
        System::Ns2d | System::Ns3d => {
            Family::navier_stokes(NsParams::deserialize(params).map_err(bad)?, system.dim())?
        }
        System::Nsac2d | System::Nsac3d => {
            let p = PhaseFieldParams::<f64>::deserialize(params).map_err(bad)?;
            if p.dimension != system.dim() {
                return Err(CliError::config(format!(
                    "{system} needs dimension {}, params give {}",
                    system.dim(),
                    p.dimension
                )));
            }
            Family::phase_field(p)?
        }
    };
    Ok(family)
}

fn params_value(family: &Family<f64>) -> Value {
    let v = match family {
        Family::Oldroyd(p) => serde_json::to_value(p),
        Family::NavierStokes { params, .. } => serde_json::to_value(params),
        Family::PhaseField(p) => serde_json::to_value(p),
    };
    v.expect("parameter records serialize")
}

/// Parameters from `--params` (or the reference set) with `--variant` applied.
fn resolve_params(common: &Common) -> Result<(Value, Family<f64>), CliError> {
    let mut value = match &common.params {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
        }
        None => params_value(&Family::reference(common.system)),
    };
    if let Some(name) = &common.variant {
        let variant: PhaseVariant = parse_enum("variant", name)?;
        if !is_phase(common.system) {
            return Err(CliError::config(format!(
                "--variant applies to nsac2d and nsac3d, not {}",
                common.system
            )));
        }
        let Some(obj) = value.as_object_mut() else {
            return Err(CliError::config("params must be a JSON object"));
        };
        obj.insert("variant".into(), serde_json::to_value(variant).unwrap());
        // the reference mobility is incompatible with pure transport
        if common.params.is_none() && variant == PhaseVariant::TransportOnly {
            obj.insert("gamma".into(), Value::from(0.0));
        }
    }
    let family = family_from(common.system, &value)?;
    Ok((params_value(&family), family))
}

fn is_phase(system: System) -> bool {
    matches!(system, System::Nsac2d | System::Nsac3d)
}

/// Parses a kebab-case enum name through its serde representation.
fn parse_enum<T: for<'de> Deserialize<'de>>(what: &str, name: &str) -> Result<T, CliError> {
    T::deserialize(Value::from(name)).map_err(|e| CliError::config(format!("--{what}: {e}")))
}

pub fn parse_list(what: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::config(format!("--{what}: `{item}` is not a finite number")))
        })
        .collect()
}

fn parse_axes(s: &str, dim: usize) -> Result<Vec<AxisSpec<f64>>, CliError> {
    let mut axes = Vec::new();
    for part in s.split(',') {
        let fields: Vec<&str> = part.trim().split(':').collect();
        let [lo, hi, n] = fields[..] else {
            return Err(CliError::config(format!("--grid: `{part}` is not lo:hi:n")));
        };
        let num = |v: &str| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::config(format!("--grid: `{v}` is not a finite number")))
        };
        let count = n
            .parse::<usize>()
            .map_err(|_| CliError::config(format!("--grid: `{n}` is not a node count")))?;
        axes.push(AxisSpec::new(num(lo)?, num(hi)?, count));
    }
    match axes.len() {
        1 => Ok(vec![axes[0]; dim]),
        n if n == dim => Ok(axes),
        n => Err(CliError::config(format!("--grid: {n} axes given for a {dim}-D system"))),
    }
}

fn default_count(dim: usize, coarse: bool) -> usize {
    match (dim, coarse) {
        (2, false) => 21,
        (_, false) => 11,
        (2, true) => 11,
        (_, true) => 7,
    }
}

fn resolve_grid(
    sampling: &Sampling,
    problem: &Problem<f64>,
    mode: &Mode<f64>,
    coarse: bool,
) -> Result<GridSpec<f64>, CliError> {
    let dim = problem.family.dim();
    let mut grid = standard_sweep_grid(problem, default_count(dim, coarse), mode);
    if let Some(s) = &sampling.grid {
        grid.axes = parse_axes(s, dim)?;
    }
    if let Some(s) = &sampling.times {
        grid.times = parse_list("times", s)?;
    }
    grid.validate()?;
    Ok(grid)
}

fn resolve_options(sampling: &Sampling, continuation: bool) -> Result<(EvalOptions, OldroydForm), CliError> {
    let perturbation = match &sampling.perturb {
        Some(name) => parse_enum("perturb", name)?,
        None => Perturbation::None,
    };
    let form = match &sampling.equations {
        Some(name) => parse_enum("equations", name)?,
        None => OldroydForm::default(),
    };
    Ok((
        EvalOptions {
            continuation,
            perturbation,
        },
        form,
    ))
}

fn resolve_stencil(s: &Stencil) -> Result<StencilSpec<f64>, CliError> {
    Ok(StencilSpec::new(s.h, s.k.unwrap_or(s.h), s.order)?)
}

fn config(common: &Common, params: Value, task: Task) -> RunConfig {
    RunConfig {
        schema_version: SCHEMA_VERSION,
        system: common.system,
        params,
        out: common.out.clone(),
        task,
    }
}

fn resolve_eval(a: &EvalArgs) -> Result<RunConfig, CliError> {
    let (params, family) = resolve_params(&a.common)?;
    let (opts, form) = resolve_options(&a.sampling, a.continuation)?;
    let problem = Problem::new(family).with_form(form).with_options(opts);
    let grid = resolve_grid(&a.sampling, &problem, &Mode::Analytic, false)?;
    Ok(config(
        &a.common,
        params,
        Task::Eval {
            grid,
            continuation: opts.continuation,
            perturbation: opts.perturbation,
        },
    ))
}

fn resolve_verify(a: &VerifyArgs) -> Result<RunConfig, CliError> {
    let (params, family) = resolve_params(&a.common)?;
    let (opts, form) = resolve_options(&a.sampling, a.continuation)?;
    let problem = Problem::new(family).with_form(form).with_options(opts);
    let stencil = resolve_stencil(&a.stencil)?;
    let mode: ModeName = parse_enum("mode", &a.mode)?;
    let core_mode = match mode {
        ModeName::Analytic => Mode::Analytic,
        ModeName::Fd => Mode::FiniteDifference(stencil),
    };
    let grid = resolve_grid(&a.sampling, &problem, &core_mode, false)?;
    let tolerance = a.tol.unwrap_or(match mode {
        ModeName::Analytic => 1e-8,
        ModeName::Fd => 1e-3,
    });
    Ok(config(
        &a.common,
        params,
        Task::Verify {
            grid,
            equations: form,
            mode,
            stencil,
            tolerance,
            continuation: opts.continuation,
            perturbation: opts.perturbation,
        },
    ))
}

fn resolve_convergence(a: &ConvergenceArgs) -> Result<RunConfig, CliError> {
    let (params, family) = resolve_params(&a.common)?;
    let (opts, form) = resolve_options(&a.sampling, false)?;
    let problem = Problem::new(family).with_form(form).with_options(opts);
    let stencil = resolve_stencil(&a.stencil)?;
    let h_list = parse_list("h-list", &a.h_list)?;
    let largest = h_list.iter().copied().fold(0.0, f64::max);
    if largest <= 0.0 {
        return Err(CliError::config("--h-list: steps must be positive"));
    }
    let widest = Mode::FiniteDifference(stencil.rescaled(largest));
    let mut grid = resolve_grid(&a.sampling, &problem, &widest, true)?;
    if a.sampling.times.is_none() {
        grid.times = admissible_times(&problem, &grid.times, &widest);
    }
    let slope_tolerance = a.tol.unwrap_or(if stencil.order == 4 { 0.2 } else { 0.1 });
    Ok(config(
        &a.common,
        params,
        Task::Convergence {
            grid,
            equations: form,
            stencil,
            h_list,
            slope_tolerance,
            perturbation: opts.perturbation,
        },
    ))
}

fn resolve_ode(a: &OdeArgs) -> Result<RunConfig, CliError> {
    let (params, family) = resolve_params(&a.common)?;
    if family.system() != System::Oldroyd {
        return Err(blowup_core::Error::Unsupported(format!(
            "ode-check applies to the oldroyd system, not {}",
            family.system()
        ))
        .into());
    }
    let t_end = a
        .t_end
        .unwrap_or_else(|| family.blow_up_time().map_or(1.0, |t| 0.9 * t));
    Ok(config(
        &a.common,
        params,
        Task::OdeCheck {
            t_end,
            dt: a.dt,
            tolerance: a.tol,
            trajectory: a.trajectory.clone(),
        },
    ))
}

fn resolve_profile(a: &ProfileArgs) -> Result<RunConfig, CliError> {
    let (params, family) = resolve_params(&a.common)?;
    let point = match &a.point {
        Some(s) => parse_list("point", s)?,
        None if family.system() == System::Oldroyd => vec![1.0, 1.0],
        None => vec![0.0; family.dim()],
    };
    Ok(config(
        &a.common,
        params,
        Task::BlowupProfile {
            point,
            approach: Approach {
                count: a.count,
                ratio: a.ratio,
            },
            diagnostic: parse_enum("diagnostic", &a.diagnostic)?,
            fit_out: a.fit_out.clone(),
        },
    ))
}

fn resolve_assumptions(a: &AssumptionArgs) -> Result<RunConfig, CliError> {
    let (params, _) = resolve_params(&a.common)?;
    let audit = AuditConfig {
        ladder: parse_list("ladder", &a.ladder)?,
        density: a.density,
        threshold: a.threshold,
    };
    audit.validate()?;
    Ok(config(&a.common, params, Task::Assumptions { audit }))
}

/// Resolved configuration plus the `--dump-config` flag.
pub fn resolve(command: &Command) -> Result<(RunConfig, bool), CliError> {
    let (cfg, dump) = match command {
        Command::Eval(a) => (resolve_eval(a)?, a.common.dump_config),
        Command::Verify(a) => (resolve_verify(a)?, a.common.dump_config),
        Command::Convergence(a) => (resolve_convergence(a)?, a.common.dump_config),
        Command::OdeCheck(a) => (resolve_ode(a)?, a.common.dump_config),
        Command::BlowupProfile(a) => (resolve_profile(a)?, a.common.dump_config),
        Command::Assumptions(a) => (resolve_assumptions(a)?, a.common.dump_config),
        Command::Run(a) => {
            let mut cfg = RunConfig::load(&a.config)?;
            cfg.family()?;
            if a.out.is_some() {
                cfg.out = a.out.clone();
            }
            (cfg, a.dump_config)
        }
    };
    Ok((cfg, dump))
}
