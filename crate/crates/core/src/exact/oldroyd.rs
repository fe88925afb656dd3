//! Separable Oldroyd-B blow-up solution.
//!
//! With `κ = (α+β)/(α−β)` and `b(t) = 1 − κ f₀ t`:
//!
//! ```text
//! u  = (x₁ f, −x₂ f),             f  = f₀ / b,            f' = κ f²
//! P  = ½(α x₁² − β x₂²) g,        g  = 2 f² / (β − α)
//! φ  = (−x₂ h₁, x₁ h₂),           h₁ = |b|^((β−α)/(α+β)),  h₂ = 1/h₁ in exponent form
//! F  = ∇⊥φ = diag(h₁, h₂),        p  = P + |∂₁φ|² + |∂₂φ|² = P + h₁² + h₂²
//! ```
//!
//! Jet: `h₁' = f h₁` and `h₂' = −f h₂` (differentiate `exp(e·ln|b|)` with
//! `e = −1/κ`), `∇u = diag(f, −f)`, `Δu = 0`, `∇P = (α x₁ g, −β x₂ g)`,
//! `∇φ = ((0, −h₁), (h₂, 0))`, all second derivatives of `φ` vanish, `F` is
//! spatially constant so `∇F = 0`, `∇·F = 0`, `∇·(FFᵀ) = 0`, and `∇p = ∇P`.
//! When `α + β = 0` the amplitudes are `f = f₀`, `h₁ = e^{f₀t}`,
//! `h₂ = e^{−f₀t}`.

use crate::error::{Error, Result};
use crate::exact::{
    check_dim, column_divergence, divergence_of_f_ft, perp_gradient, DeformationJet, DerivativeJet, EvalOptions,
    FieldSample, Perturbation,
};
use crate::model::{blow_up_time, growth_coefficient, BlowUpTime, OldroydParams};
use crate::scalar::Scalar;

/// Time amplitudes of the separable ansatz and their time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OldroydAmplitudes<S> {
    pub f: S,
    pub f_t: S,
    pub g: S,
    pub h1: S,
    pub h1_t: S,
    pub h2: S,
    pub h2_t: S,
}

fn domain_limit<S: Scalar>(p: &OldroydParams<S>) -> f64 {
    blow_up_time(p).finite().map_or(f64::INFINITY, Scalar::as_f64)
}

/// Amplitudes `f, g, h₁, h₂` at time `t`.
///
/// `t` must lie in `[0, t*)`; with `opts.continuation` any `t ≥ 0` except
/// `t*` itself is accepted and `|b|` is used past the blow-up.
pub fn oldroyd_amplitudes<S: Scalar>(p: &OldroydParams<S>, t: S, opts: EvalOptions) -> Result<OldroydAmplitudes<S>> {
    if p.alpha == p.beta {
        return Err(Error::DegenerateSeparation(p.alpha.as_f64()));
    }
    let sign = match opts.perturbation {
        Perturbation::None => S::one(),
        Perturbation::FlippedExponent => -S::one(),
        other => {
            return Err(Error::Unsupported(format!(
                "perturbation {other:?} does not apply to the Oldroyd family"
            )))
        }
    };
    let out_of_domain = || Error::OutOfDomain {
        t: t.as_f64(),
        limit: domain_limit(p),
    };
    if !(t >= S::zero()) || !t.is_finite() {
        return Err(out_of_domain());
    }
    if let BlowUpTime::Finite { t_star } = blow_up_time(p) {
        if t >= t_star && !opts.continuation {
            return Err(out_of_domain());
        }
    }

    let sum = p.alpha + p.beta;
    let (f, f_t, h1, h2) = if sum == S::zero() {
        (p.f0, S::zero(), (sign * p.f0 * t).exp(), (-p.f0 * t).exp())
    } else {
        let kappa = growth_coefficient(p);
        let base = S::one() - kappa * p.f0 * t;
        if base == S::zero() || (base < S::zero() && !opts.continuation) {
            return Err(out_of_domain());
        }
        let f = p.f0 / base;
        let exponent = (p.beta - p.alpha) / sum;
        let log_base = base.abs().ln();
        (
            f,
            kappa * f * f,
            (sign * exponent * log_base).exp(),
            (-exponent * log_base).exp(),
        )
    };
    let two = S::lit(2.0);
    Ok(OldroydAmplitudes {
        f,
        f_t,
        g: two * f * f / (p.beta - p.alpha),
        h1,
        h1_t: sign * f * h1,
        h2,
        h2_t: -f * h2,
    })
}

pub fn oldroyd_eval<S: Scalar>(p: &OldroydParams<S>, x: &[S], t: S) -> Result<FieldSample<S>> {
    oldroyd_eval_with(p, x, t, EvalOptions::default())
}

pub fn oldroyd_eval_with<S: Scalar>(p: &OldroydParams<S>, x: &[S], t: S, opts: EvalOptions) -> Result<FieldSample<S>> {
    check_dim(2, x)?;
    let a = oldroyd_amplitudes(p, t, opts)?;
    let (x1, x2) = (x[0], x[1]);
    let half = S::lit(0.5);
    let grad_phi = potential_gradient(&a);
    let pressure = half * (p.alpha * x1 * x1 - p.beta * x2 * x2) * a.g;
    Ok(FieldSample {
        u: vec![x1 * a.f, -x2 * a.f],
        pressure,
        original_pressure: Some(original_pressure(pressure, &grad_phi)),
        phi: vec![-x2 * a.h1, x1 * a.h2],
        deformation: Some(perp_gradient(&grad_phi)),
    })
}

fn potential_gradient<S: Scalar>(a: &OldroydAmplitudes<S>) -> Vec<Vec<S>> {
    vec![vec![S::zero(), -a.h1], vec![a.h2, S::zero()]]
}

/// `p = P + |∂₁φ|² + |∂₂φ|²`, with `∂_jφ` the vector `(∂_jφ₁, ∂_jφ₂)`.
fn original_pressure<S: Scalar>(pressure: S, grad_phi: &[Vec<S>]) -> S {
    let mut extra = S::zero();
    for row in grad_phi {
        for d in row {
            extra = extra + *d * *d;
        }
    }
    pressure + extra
}

pub fn oldroyd_jet<S: Scalar>(p: &OldroydParams<S>, x: &[S], t: S) -> Result<DerivativeJet<S>> {
    oldroyd_jet_with(p, x, t, EvalOptions::default())
}

pub fn oldroyd_jet_with<S: Scalar>(p: &OldroydParams<S>, x: &[S], t: S, opts: EvalOptions) -> Result<DerivativeJet<S>> {
    let sample = oldroyd_eval_with(p, x, t, opts)?;
    let a = oldroyd_amplitudes(p, t, opts)?;
    let (x1, x2) = (x[0], x[1]);
    let zero = S::zero();

    let grad_phi = potential_gradient(&a);
    let grad_phi_t = vec![vec![zero, -a.h1_t], vec![a.h2_t, zero]];
    let hess_phi = vec![vec![vec![zero; 2]; 2]; 2];
    let grad_f = std::array::from_fn(|k| {
        let slice: Vec<Vec<S>> = hess_phi
            .iter()
            .map(|h: &Vec<Vec<S>>| h.iter().map(|row| row[k]).collect())
            .collect();
        perp_gradient(&slice)
    });
    let f = sample.deformation.expect("Oldroyd sample carries F");
    let grad_pressure = vec![p.alpha * x1 * a.g, -p.beta * x2 * a.g];

    Ok(DerivativeJet {
        u_t: vec![x1 * a.f_t, -x2 * a.f_t],
        grad_u: vec![vec![a.f, zero], vec![zero, -a.f]],
        lap_u: vec![zero; 2],
        u: sample.u,
        pressure: sample.pressure,
        grad_pressure: grad_pressure.clone(),
        phi_t: vec![-x2 * a.h1_t, x1 * a.h2_t],
        phi: sample.phi,
        lap_phi: vec![zero; 2],
        chemistry: None,
        deformation: Some(DeformationJet {
            original_pressure: sample.original_pressure.expect("Oldroyd sample carries p"),
            // h₁, h₂ depend on t only
            grad_original_pressure: grad_pressure,
            f,
            f_t: perp_gradient(&grad_phi_t),
            div_f: column_divergence(&grad_f),
            div_fft: divergence_of_f_ft(&f, &grad_f),
            grad_f,
        }),
        grad_phi,
        hess_phi,
    })
}
