//! Verification lab for explicit finite-time blow-up solutions of an
//! Oldroyd-B viscoelastic system, the incompressible Navier-Stokes equations
//! and a Navier-Stokes/phase-field coupling.
//!
//! The crate evaluates the closed-form fields and their derivative jets,
//! assembles PDE residuals analytically or by finite differences, integrates
//! the separated ODE system, and quantifies the approach to blow-up.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the common double-precision case.
//!
//! ```
//! use blowup_core::{residual_sweep, standard_sweep_grid, Family, Mode, Problem, System};
//!
//! let problem = Problem::new(Family::<f64>::reference(System::Oldroyd));
//! let grid = standard_sweep_grid(&problem, 11, &Mode::Analytic);
//! let report = residual_sweep(&problem, &grid, &Mode::Analytic).unwrap();
//! assert!(report.max_rel <= 1e-10);
//! ```

// `!(x > 0)` doubles as a NaN rejection; tensor loops read best indexed.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod fd;
pub mod model;
pub mod ode;
pub mod output;
pub mod problem;
pub mod residual;
pub mod scalar;
pub mod stats;

pub use diagnostics::{
    blowup_profile, check_assumptions, deformation_metrics, fit_exponent, interface_width, Approach, AssumptionReport,
    AssumptionStatus, AuditConfig, Diagnostic, ExponentFit, ProfileSeries,
};
pub use error::{Error, Result};
pub use exact::{DerivativeJet, EvalOptions, FieldSample, Perturbation};
pub use fd::{Axis, StencilSpec};
pub use model::{
    blow_up_time, make_grid, validate_params, AxisSpec, BlowUpTime, GridSpec, NsParams, OldroydParams,
    PhaseFieldParams, PhaseVariant, SolutionParams,
};
pub use ode::{closed_form_reduced, compare_ode, integrate_reduced, reduced_rhs, OdeErrorReport, ReducedState};
pub use problem::{Family, OldroydForm, Problem, System};
pub use residual::{
    convergence_study, residual_at, residual_sweep, standard_sweep_grid, ConvergenceReport, Mode, ResidualReport,
    ResidualVector,
};
pub use scalar::Scalar;

pub type OldroydParams64 = OldroydParams<f64>;
pub type NsParams64 = NsParams<f64>;
pub type PhaseFieldParams64 = PhaseFieldParams<f64>;
pub type GridSpec64 = GridSpec<f64>;
pub type StencilSpec64 = StencilSpec<f64>;
pub type Family64 = Family<f64>;
pub type Problem64 = Problem<f64>;
pub type Mode64 = Mode<f64>;
