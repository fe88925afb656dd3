//! Uniform access to the three solution families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    ns_eval_with, ns_jet_with, nsac_eval_with, nsac_jet_with, oldroyd_eval_with, oldroyd_jet_with, DerivativeJet,
    EvalOptions, FieldSample,
};
use crate::model::{blow_up_time, NsParams, OldroydParams, PhaseFieldParams, SolutionParams};
use crate::scalar::Scalar;

/// System selector as spelled on the command line and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Oldroyd,
    Ns2d,
    Ns3d,
    Nsac2d,
    Nsac3d,
}

impl System {
    pub const ALL: [System; 5] = [
        System::Oldroyd,
        System::Ns2d,
        System::Ns3d,
        System::Nsac2d,
        System::Nsac3d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            System::Oldroyd => "oldroyd",
            System::Ns2d => "ns2d",
            System::Ns3d => "ns3d",
            System::Nsac2d => "nsac2d",
            System::Nsac3d => "nsac3d",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            System::Ns3d | System::Nsac3d => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        System::ALL
            .into_iter()
            .find(|sys| sys.name() == s)
            .ok_or_else(|| Error::InvalidParameter {
                name: "system",
                reason: format!("unknown system `{s}`; expected one of oldroyd, ns2d, ns3d, nsac2d, nsac3d"),
            })
    }
}

/// A validated solution family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<S> {
    Oldroyd(OldroydParams<S>),
    NavierStokes { params: NsParams<S>, dim: usize },
    PhaseField(PhaseFieldParams<S>),
}

impl<S: Scalar> Family<S> {
    pub fn oldroyd(params: OldroydParams<S>) -> Result<Self> {
        params.validate()?;
        Ok(Family::Oldroyd(params))
    }

    pub fn navier_stokes(params: NsParams<S>, dim: usize) -> Result<Self> {
        params.validate()?;
        if dim != 2 && dim != 3 {
            return Err(Error::DimensionMismatch { expected: 2, got: dim });
        }
        Ok(Family::NavierStokes { params, dim })
    }

    pub fn phase_field(params: PhaseFieldParams<S>) -> Result<Self> {
        params.validate()?;
        Ok(Family::PhaseField(params))
    }

    /// Reference parameters used when none are supplied: Oldroyd
    /// `{f0=1, α=3, β=1, ν=λ=1}`; Navier-Stokes `{T=1, ν=1, c1=1, c2=0.3}`;
    /// phase-field `{T=1, ν=λ=γ=1, ε=0.1}` with zero shifts and the
    /// Allen-Cahn closure.
    pub fn reference(system: System) -> Self {
        let one = S::one();
        let zero = S::zero();
        let ns = NsParams {
            t_blow: one,
            nu: one,
            c1: one,
            c2: S::lit(0.3),
            c3: zero,
            c4: zero,
            c5: zero,
        };
        match system {
            System::Oldroyd => Family::Oldroyd(OldroydParams {
                f0: one,
                alpha: S::lit(3.0),
                beta: one,
                nu: one,
                lambda: one,
            }),
            System::Ns2d | System::Ns3d => Family::NavierStokes {
                params: ns,
                dim: system.dim(),
            },
            System::Nsac2d | System::Nsac3d => Family::PhaseField(PhaseFieldParams {
                t_blow: one,
                nu: one,
                c1: zero,
                c2: zero,
                c3: zero,
                c4: zero,
                c5: zero,
                lambda: one,
                gamma: one,
                epsilon: S::lit(0.1),
                dimension: system.dim(),
                variant: crate::model::PhaseVariant::AllenCahn,
            }),
        }
    }

    pub fn system(&self) -> System {
        match self {
            Family::Oldroyd(_) => System::Oldroyd,
            Family::NavierStokes { dim: 3, .. } => System::Ns3d,
            Family::NavierStokes { .. } => System::Ns2d,
            Family::PhaseField(p) if p.dimension == 3 => System::Nsac3d,
            Family::PhaseField(_) => System::Nsac2d,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Family::Oldroyd(_) => 2,
            Family::NavierStokes { dim, .. } => *dim,
            Family::PhaseField(p) => p.dimension,
        }
    }

    /// `t*` for Oldroyd (if finite), `T` otherwise.
    pub fn blow_up_time(&self) -> Option<S> {
        match self {
            Family::Oldroyd(p) => blow_up_time(p).finite(),
            Family::NavierStokes { params, .. } => Some(params.t_blow),
            Family::PhaseField(p) => Some(p.t_blow),
        }
    }

    pub fn eval(&self, x: &[S], t: S, opts: EvalOptions) -> Result<FieldSample<S>> {
        match self {
            Family::Oldroyd(p) => oldroyd_eval_with(p, x, t, opts),
            Family::NavierStokes { params, dim } => {
                crate::exact::check_dim(*dim, x)?;
                ns_eval_with(params, x, t, opts)
            }
            Family::PhaseField(p) => nsac_eval_with(p, x, t, opts),
        }
    }

    pub fn jet(&self, x: &[S], t: S, opts: EvalOptions) -> Result<DerivativeJet<S>> {
        match self {
            Family::Oldroyd(p) => oldroyd_jet_with(p, x, t, opts),
            Family::NavierStokes { params, dim } => {
                crate::exact::check_dim(*dim, x)?;
                ns_jet_with(params, x, t, opts)
            }
            Family::PhaseField(p) => nsac_jet_with(p, x, t, opts),
        }
    }
}

/// Which form of the Oldroyd-B system the residual is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OldroydForm {
    /// Momentum with the potential stress `∇·(∇φ⊗∇φ)` and transport of `φ`.
    #[default]
    Transformed,
    /// Momentum with `∇·(FFᵀ)`, transport of `F` and `∇·F = 0`.
    Original,
}

/// A family plus the equation set and evaluation switches for a residual run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem<S> {
    pub family: Family<S>,
    /// Ignored by the Navier-Stokes and phase-field families.
    pub form: OldroydForm,
    pub opts: EvalOptions,
}

impl<S: Scalar> Problem<S> {
    pub fn new(family: Family<S>) -> Self {
        Problem {
            family,
            form: OldroydForm::default(),
            opts: EvalOptions::default(),
        }
    }

    pub fn with_form(mut self, form: OldroydForm) -> Self {
        self.form = form;
        self
    }

    pub fn with_options(mut self, opts: EvalOptions) -> Self {
        self.opts = opts;
        self
    }

    /// Label of the equation set: `transformed`/`original` for Oldroyd, the
    /// phase variant for phase-field, `navier-stokes` otherwise.
    pub fn equations(&self) -> &'static str {
        match (&self.family, self.form) {
            (Family::Oldroyd(_), OldroydForm::Transformed) => "transformed",
            (Family::Oldroyd(_), OldroydForm::Original) => "original",
            (Family::NavierStokes { .. }, _) => "navier-stokes",
            (Family::PhaseField(p), _) => match p.variant {
                crate::model::PhaseVariant::AllenCahn => "allen-cahn",
                crate::model::PhaseVariant::CahnHilliard => "cahn-hilliard",
                crate::model::PhaseVariant::TransportOnly => "transport-only",
            },
        }
    }
}
