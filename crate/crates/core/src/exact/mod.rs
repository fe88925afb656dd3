//! Closed-form evaluators for the blow-up families and their analytic
//! derivative jets.
//!
//! Index conventions used throughout:
//! - `grad_u[i][j] = ∂u_i/∂x_j`
//! - `grad_phi[a][j] = ∂φ_a/∂x_j`, `hess_phi[a][i][j] = ∂²φ_a/∂x_i∂x_j`
//! - `grad_f[k][i][j] = ∂F_ij/∂x_k`
//! - `(∇·F)_j = Σ_i ∂F_ij/∂x_i` (column divergence), `(∇·M)_i = Σ_j ∂M_ij/∂x_j`
//!   for the symmetric stresses `FFᵀ` and `∇φ⊗∇φ`.
//!
//! The derivation of each jet is written next to its evaluator.

mod navier_stokes;
mod oldroyd;

pub use navier_stokes::{
    ns_eval, ns_eval_with, ns_jet, ns_jet_with, nsac_eval, nsac_eval_with, nsac_jet, nsac_jet_with,
};
pub use oldroyd::{
    oldroyd_amplitudes, oldroyd_eval, oldroyd_eval_with, oldroyd_jet, oldroyd_jet_with, OldroydAmplitudes,
};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A 2×2 tensor stored row-major, `t[i][j]`.
pub type Tensor2<S> = [[S; 2]; 2];

/// Field values at one space-time point.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample<S> {
    /// Velocity, 2 or 3 components.
    pub u: Vec<S>,
    /// Pressure appearing in the system's momentum equation: the modified
    /// pressure `P` for the Oldroyd and phase-field families, `p` for plain
    /// Navier-Stokes.
    pub pressure: S,
    /// Oldroyd only: the pressure `p = P + h₁² + h₂²` of the original system.
    pub original_pressure: Option<S>,
    /// `(φ₁, φ₂)` for Oldroyd, the scalar phase for phase-field, empty for
    /// Navier-Stokes.
    pub phi: Vec<S>,
    /// Oldroyd only: the deformation tensor `F = ∇⊥φ`.
    pub deformation: Option<Tensor2<S>>,
}

/// Deformation-tensor part of an Oldroyd jet.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationJet<S> {
    pub original_pressure: S,
    pub grad_original_pressure: Vec<S>,
    pub f: Tensor2<S>,
    pub f_t: Tensor2<S>,
    /// `grad_f[k][i][j] = ∂F_ij/∂x_k`.
    pub grad_f: [Tensor2<S>; 2],
    /// `(∇·F)_j = Σ_i ∂_i F_ij`.
    pub div_f: [S; 2],
    /// `(∇·(FFᵀ))_i = Σ_j ∂_j (FFᵀ)_ij`.
    pub div_fft: [S; 2],
}

/// Phase-field chemistry: `f(φ) = (φ³ − φ)/ε²` and the fourth-order terms.
#[derive(Debug, Clone, PartialEq)]
pub struct ChemistryJet<S> {
    pub well: S,
    /// `Δf(φ)`, present for Cahn-Hilliard.
    pub lap_well: Option<S>,
    /// `Δ²φ`, present for Cahn-Hilliard.
    pub bilap_phi: Option<S>,
}

/// Values plus every partial derivative the residual operators consume.
///
/// Produced either from hand-derived closed forms (the `*_jet` functions) or
/// by finite differences of the evaluators (see `residual`).
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeJet<S> {
    pub u: Vec<S>,
    pub u_t: Vec<S>,
    pub grad_u: Vec<Vec<S>>,
    pub lap_u: Vec<S>,
    pub pressure: S,
    pub grad_pressure: Vec<S>,
    pub phi: Vec<S>,
    pub phi_t: Vec<S>,
    pub grad_phi: Vec<Vec<S>>,
    pub hess_phi: Vec<Vec<Vec<S>>>,
    pub lap_phi: Vec<S>,
    pub chemistry: Option<ChemistryJet<S>>,
    pub deformation: Option<DeformationJet<S>>,
}

impl<S: Scalar> DerivativeJet<S> {
    pub fn dim(&self) -> usize {
        self.u.len()
    }
}

/// Evaluation switches shared by the families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalOptions {
    /// Oldroyd only: evaluate the absolute-value continuation past `t*`.
    pub continuation: bool,
    pub perturbation: Perturbation,
}

/// Which registered non-solution to evaluate instead of the exact family.
/// Used as negative controls for the residual checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Perturbation {
    #[default]
    None,
    /// Oldroyd: `h₁` takes the negated exponent.
    FlippedExponent,
    /// Phase-field: kink travels with coefficient `2d − 1` instead of `2d`.
    SlowWave,
    /// Navier-Stokes and phase-field: last velocity amplitude has its sign
    /// flipped, breaking incompressibility.
    FlippedAmplitudeSign,
}

/// `∇⊥φ` for a 2-vector potential: rows `(−∂₂φ₁, −∂₂φ₂)` and `(∂₁φ₁, ∂₁φ₂)`.
pub fn perp_gradient<S: Scalar>(grad_phi: &[Vec<S>]) -> Tensor2<S> {
    [[-grad_phi[0][1], -grad_phi[1][1]], [grad_phi[0][0], grad_phi[1][0]]]
}

/// `(∇·F)_j = Σ_i ∂_i F_ij`.
pub fn column_divergence<S: Scalar>(grad_f: &[Tensor2<S>; 2]) -> [S; 2] {
    [grad_f[0][0][0] + grad_f[1][1][0], grad_f[0][0][1] + grad_f[1][1][1]]
}

/// `(∇·(FFᵀ))_i = Σ_j Σ_m (∂_j F_im F_jm + F_im ∂_j F_jm)`.
pub fn divergence_of_f_ft<S: Scalar>(f: &Tensor2<S>, grad_f: &[Tensor2<S>; 2]) -> [S; 2] {
    let mut out = [S::zero(); 2];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = S::zero();
        for j in 0..2 {
            for m in 0..2 {
                acc = acc + grad_f[j][i][m] * f[j][m] + f[i][m] * grad_f[j][j][m];
            }
        }
        *slot = acc;
    }
    out
}

pub(crate) fn check_dim(expected: usize, x: &[impl Sized]) -> crate::Result<()> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(crate::Error::DimensionMismatch { expected, got: x.len() })
    }
}
