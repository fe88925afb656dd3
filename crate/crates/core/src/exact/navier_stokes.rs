//! Navier-Stokes blow-up solution and its phase-field extension, in 2-D and 3-D.
//!
//! With `d` the dimension, `τ = T − t`, `r = τ^{-1/2}`, `s = Σ x_i` and
//!
//! ```text
//! a(s, t) = s² / (4 d ν τ) − s r / ν + c_shift,       E = exp(a)
//! u_i     = r (−1 + A_i E),                            Σ A_i = 0
//! p       = s r³ / 2 + c_p / τ
//! ```
//!
//! where `(A_i) = (c₁, −c₁)` in 2-D and `(c₁, c₂, −(c₁+c₂))` in 3-D, `c_shift`
//! is `c₃` (2-D) or `c₄` (3-D) and `c_p` is `c₂` (2-D) or `c₃` (3-D).
//!
//! Jet, writing `w_i = A_i E r`:
//!
//! ```text
//! a_s  = s / (2 d ν τ) − r / ν        a_ss = 1 / (2 d ν τ)
//! a_t  = s² / (4 d ν τ²) − s r³ / (2ν)
//! ∂_t u_i = −r³/2 + w_i (r²/2 + a_t)  ∂_j u_i = w_i a_s
//! Δu_i    = d w_i (a_ss + a_s²)       ∂_j p   = r³ / 2
//! ```
//!
//! Phase-field: `φ = tanh(z)`, `z = (s − 2d √τ + c_k) / δ`, `δ = ε √(2d)`, with
//! `c_k = c₄` (2-D) or `c₅` (3-D). Writing `T = tanh z`, `S = sech² z`:
//!
//! ```text
//! φ_s = S/δ   φ_ss = −2TS/δ²   φ_ssss = 8TS(2 − 3T²)/δ⁴
//! ∂_jφ = φ_s,  ∂_i∂_jφ = φ_ss,  Δφ = d φ_ss,  Δ²φ = d² φ_ssss
//! φ_t  = φ_s · 2d / (2√τ)
//! P    = p − λ/(2ε²) · sech⁴ z,    ∂_j P = r³/2 + 2λ sech⁴(z) T / (ε² δ)
//! Δf(φ) = f''(φ) |∇φ|² + f'(φ) Δφ,  f(φ) = (φ³ − φ)/ε²
//! ```
//!
//! The kink shift enters the pressure's `sech⁴` argument as well, so that
//! `P = p − dλ(φ_s)²` holds identically.

use crate::error::{Error, Result};
use crate::exact::{ChemistryJet, DerivativeJet, EvalOptions, FieldSample, Perturbation};
use crate::model::{NsParams, PhaseFieldParams, PhaseVariant};
use crate::scalar::{sum, Scalar};

struct Kernel<S> {
    dim: usize,
    tau: S,
    r: S,
    s: S,
    e: S,
    a_s: S,
    a_ss: S,
    a_t: S,
    amps: Vec<S>,
    pressure_const: S,
}

impl<S: Scalar> Kernel<S> {
    fn new(p: &NsParams<S>, x: &[S], t: S, flip_last: bool) -> Result<Self> {
        let dim = x.len();
        if !(2..=3).contains(&dim) {
            return Err(Error::DimensionMismatch {
                expected: if dim < 2 { 2 } else { 3 },
                got: dim,
            });
        }
        if !(t >= S::zero()) || !(t < p.t_blow) {
            return Err(Error::OutOfDomain {
                t: t.as_f64(),
                limit: p.t_blow.as_f64(),
            });
        }
        let d = S::from_usize(dim).unwrap();
        let two = S::lit(2.0);
        let four = S::lit(4.0);
        let tau = p.t_blow - t;
        let r = S::one() / tau.sqrt();
        let s = sum(x.iter().copied());
        let nu = p.nu;
        let (shift, pressure_const) = if dim == 2 { (p.c3, p.c2) } else { (p.c4, p.c3) };
        let a = s * s / (four * d * nu * tau) - s * r / nu + shift;
        let mut amps = if dim == 2 {
            vec![p.c1, -p.c1]
        } else {
            vec![p.c1, p.c2, -(p.c1 + p.c2)]
        };
        if flip_last {
            let last = amps.last_mut().unwrap();
            *last = -*last;
        }
        Ok(Kernel {
            dim,
            tau,
            r,
            s,
            e: a.exp(),
            a_s: s / (two * d * nu * tau) - r / nu,
            a_ss: S::one() / (two * d * nu * tau),
            a_t: s * s / (four * d * nu * tau * tau) - s * r * r * r / (two * nu),
            amps,
            pressure_const,
        })
    }

    fn velocity(&self) -> Vec<S> {
        self.amps.iter().map(|&a| self.r * (-S::one() + a * self.e)).collect()
    }

    fn pressure(&self) -> S {
        self.s * self.r * self.r * self.r / S::lit(2.0) + self.pressure_const / self.tau
    }

    /// Jet of the velocity and the NS pressure.
    fn jet(&self) -> DerivativeJet<S> {
        let half = S::lit(0.5);
        let d = S::from_usize(self.dim).unwrap();
        let r3 = self.r * self.r * self.r;
        let w: Vec<S> = self.amps.iter().map(|&a| a * self.e * self.r).collect();
        DerivativeJet {
            u: self.velocity(),
            u_t: w
                .iter()
                .map(|&wi| -half * r3 + wi * (half * self.r * self.r + self.a_t))
                .collect(),
            grad_u: w.iter().map(|&wi| vec![wi * self.a_s; self.dim]).collect(),
            lap_u: w.iter().map(|&wi| d * wi * (self.a_ss + self.a_s * self.a_s)).collect(),
            pressure: self.pressure(),
            grad_pressure: vec![half * r3; self.dim],
            phi: Vec::new(),
            phi_t: Vec::new(),
            grad_phi: Vec::new(),
            hess_phi: Vec::new(),
            lap_phi: Vec::new(),
            chemistry: None,
            deformation: None,
        }
    }
}

fn ns_flip(opts: EvalOptions, allow_slow_wave: bool) -> Result<bool> {
    match opts.perturbation {
        Perturbation::None => Ok(false),
        Perturbation::FlippedAmplitudeSign => Ok(true),
        Perturbation::SlowWave if allow_slow_wave => Ok(false),
        other => Err(Error::Unsupported(format!(
            "perturbation {other:?} does not apply to this family"
        ))),
    }
}

/// Velocity and pressure of the NS blow-up solution; dimension from `x.len()`.
pub fn ns_eval<S: Scalar>(p: &NsParams<S>, x: &[S], t: S) -> Result<FieldSample<S>> {
    ns_eval_with(p, x, t, EvalOptions::default())
}

pub fn ns_eval_with<S: Scalar>(p: &NsParams<S>, x: &[S], t: S, opts: EvalOptions) -> Result<FieldSample<S>> {
    let k = Kernel::new(p, x, t, ns_flip(opts, false)?)?;
    Ok(FieldSample {
        u: k.velocity(),
        pressure: k.pressure(),
        original_pressure: None,
        phi: Vec::new(),
        deformation: None,
    })
}

pub fn ns_jet<S: Scalar>(p: &NsParams<S>, x: &[S], t: S) -> Result<DerivativeJet<S>> {
    ns_jet_with(p, x, t, EvalOptions::default())
}

pub fn ns_jet_with<S: Scalar>(p: &NsParams<S>, x: &[S], t: S, opts: EvalOptions) -> Result<DerivativeJet<S>> {
    Ok(Kernel::new(p, x, t, ns_flip(opts, false)?)?.jet())
}

struct Kink<S> {
    width: S,
    wave: S,
    tanh: S,
    sech2: S,
}

impl<S: Scalar> Kink<S> {
    fn new(p: &PhaseFieldParams<S>, k: &Kernel<S>, slow: bool) -> Self {
        let two = S::lit(2.0);
        let d = S::from_usize(k.dim).unwrap();
        let mut wave = two * d;
        if slow {
            wave = wave - S::one();
        }
        let width = p.epsilon * (two * d).sqrt();
        let z = (k.s - wave * k.tau.sqrt() + p.kink_shift()) / width;
        let sech = S::one() / z.cosh();
        Kink {
            width,
            wave,
            tanh: z.tanh(),
            sech2: sech * sech,
        }
    }

    fn pressure(&self, p: &PhaseFieldParams<S>, ns_pressure: S) -> S {
        let eps2 = p.epsilon * p.epsilon;
        ns_pressure - p.lambda / (S::lit(2.0) * eps2) * self.sech2 * self.sech2
    }
}

fn check_phase_dim<S: Scalar>(p: &PhaseFieldParams<S>, x: &[S]) -> Result<()> {
    crate::exact::check_dim(p.dimension, x)
}

/// Velocity, modified pressure and phase of the NS/phase-field solution.
pub fn nsac_eval<S: Scalar>(p: &PhaseFieldParams<S>, x: &[S], t: S) -> Result<FieldSample<S>> {
    nsac_eval_with(p, x, t, EvalOptions::default())
}

pub fn nsac_eval_with<S: Scalar>(p: &PhaseFieldParams<S>, x: &[S], t: S, opts: EvalOptions) -> Result<FieldSample<S>> {
    check_phase_dim(p, x)?;
    let k = Kernel::new(&p.ns(), x, t, ns_flip(opts, true)?)?;
    let kink = Kink::new(p, &k, opts.perturbation == Perturbation::SlowWave);
    Ok(FieldSample {
        u: k.velocity(),
        pressure: kink.pressure(p, k.pressure()),
        original_pressure: None,
        phi: vec![kink.tanh],
        deformation: None,
    })
}

pub fn nsac_jet<S: Scalar>(p: &PhaseFieldParams<S>, x: &[S], t: S) -> Result<DerivativeJet<S>> {
    nsac_jet_with(p, x, t, EvalOptions::default())
}

pub fn nsac_jet_with<S: Scalar>(p: &PhaseFieldParams<S>, x: &[S], t: S, opts: EvalOptions) -> Result<DerivativeJet<S>> {
    check_phase_dim(p, x)?;
    let k = Kernel::new(&p.ns(), x, t, ns_flip(opts, true)?)?;
    let kink = Kink::new(p, &k, opts.perturbation == Perturbation::SlowWave);
    let mut jet = k.jet();

    let two = S::lit(2.0);
    let d = S::from_usize(k.dim).unwrap();
    let (th, s2, delta) = (kink.tanh, kink.sech2, kink.width);
    let eps2 = p.epsilon * p.epsilon;

    let phi_s = s2 / delta;
    let phi_ss = -two * th * s2 / (delta * delta);
    let phi_ssss = S::lit(8.0) * th * s2 * (two - S::lit(3.0) * th * th) / delta.powi(4);
    let lap_phi = d * phi_ss;

    let ns_pressure = jet.pressure;
    jet.pressure = kink.pressure(p, ns_pressure);
    let stress_grad = two * p.lambda * s2 * s2 * th / (eps2 * delta);
    for g in jet.grad_pressure.iter_mut() {
        *g = *g + stress_grad;
    }

    jet.phi = vec![th];
    jet.phi_t = vec![phi_s * kink.wave * k.r / two];
    jet.grad_phi = vec![vec![phi_s; k.dim]];
    jet.hess_phi = vec![vec![vec![phi_ss; k.dim]; k.dim]];
    jet.lap_phi = vec![lap_phi];

    let well = (th * th * th - th) / eps2;
    let fourth_order = if p.variant == PhaseVariant::CahnHilliard {
        let well_1 = (S::lit(3.0) * th * th - S::one()) / eps2;
        let well_2 = S::lit(6.0) * th / eps2;
        let grad_sq = d * phi_s * phi_s;
        (Some(well_2 * grad_sq + well_1 * lap_phi), Some(d * d * phi_ssss))
    } else {
        (None, None)
    };
    jet.chemistry = Some(ChemistryJet {
        well,
        lap_well: fourth_order.0,
        bilap_phi: fourth_order.1,
    });
    Ok(jet)
}
