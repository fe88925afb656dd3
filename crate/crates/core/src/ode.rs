//! Separation-of-variables reduction of the Oldroyd family to ODEs in time.
//!
//! Substituting the ansatz into the momentum equation and separating gives
//! `f' + f² = −α g` and `f' − f² = −β g`, so `g = 2f²/(β−α)` is algebraic and
//! `f' = κ f²` with `κ = (α+β)/(α−β)`. The transport equation gives
//! `g₁' = −f g₁`, `g₂' = f g₂`, `h₁' = f h₁`, `h₂' = −f h₂` with identity
//! initial data `h₁ = h₂ = 1`, `g₁ = g₂ = 0`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{oldroyd_amplitudes, EvalOptions};
use crate::model::{blow_up_time, growth_coefficient, OldroydParams};
use crate::output::write_csv;
use crate::scalar::Scalar;

/// Time amplitudes of the separable ansatz. `g` is algebraic in `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedState<S> {
    pub f: S,
    pub g: S,
    pub g1: S,
    pub g2: S,
    pub h1: S,
    pub h2: S,
}

/// Right-hand side of the reduced system, plus the algebraic `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedRates<S> {
    pub f_t: S,
    pub g: S,
    pub g1_t: S,
    pub g2_t: S,
    pub h1_t: S,
    pub h2_t: S,
}

fn pressure_amplitude<S: Scalar>(p: &OldroydParams<S>, f: S) -> S {
    S::lit(2.0) * f * f / (p.beta - p.alpha)
}

pub fn reduced_rhs<S: Scalar>(state: &ReducedState<S>, p: &OldroydParams<S>) -> Result<ReducedRates<S>> {
    if p.alpha == p.beta {
        return Err(Error::DegenerateSeparation(p.alpha.as_f64()));
    }
    let f = state.f;
    Ok(ReducedRates {
        f_t: growth_coefficient(p) * f * f,
        g: pressure_amplitude(p, f),
        g1_t: -f * state.g1,
        g2_t: f * state.g2,
        h1_t: f * state.h1,
        h2_t: -f * state.h2,
    })
}

/// Closed-form amplitudes at time `t`.
pub fn closed_form_reduced<S: Scalar>(p: &OldroydParams<S>, t: S) -> Result<ReducedState<S>> {
    let a = oldroyd_amplitudes(p, t, EvalOptions::default())?;
    Ok(ReducedState {
        f: a.f,
        g: a.g,
        g1: S::zero(),
        g2: S::zero(),
        h1: a.h1,
        h2: a.h2,
    })
}

/// States sampled at `0, dt, 2dt, …, t_end`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub times: Vec<S>,
    pub states: Vec<ReducedState<S>>,
}

impl<S: Scalar> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Columns `t, f, g, g1, g2, h1, h2`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(
            out,
            &["t", "f", "g", "g1", "g2", "h1", "h2"],
            self.times.iter().zip(&self.states).map(|(t, s)| {
                [*t, s.f, s.g, s.g1, s.g2, s.h1, s.h2]
                    .iter()
                    .map(|v| v.as_f64())
                    .collect()
            }),
        )
    }
}

/// Step times `0, dt, …` ending exactly on `t_end`; a final partial step is
/// used when `t_end` is not a whole number of steps.
fn step_times<S: Scalar>(t_end: S, dt: S) -> Vec<S> {
    let ratio = t_end / dt;
    let nearest = ratio.round();
    let whole = (ratio - nearest).abs() <= S::lit(1e-9) * ratio.max(S::one());
    let full = if whole { nearest } else { ratio.floor() };
    let n = full.to_usize().unwrap_or(0);
    let mut times: Vec<S> = (0..=n).map(|i| S::from_usize(i).unwrap() * dt).collect();
    if whole {
        *times.last_mut().unwrap() = t_end;
    } else {
        times.push(t_end);
    }
    if n == 0 && t_end == S::zero() {
        times.truncate(1);
    }
    times
}

/// Classical fourth-order Runge-Kutta integration of the reduced system
/// from identity initial data with fixed step `dt`.
pub fn integrate_reduced<S: Scalar>(p: &OldroydParams<S>, t_end: S, dt: S) -> Result<Trajectory<S>> {
    if !(dt > S::zero()) || !dt.is_finite() {
        return Err(Error::InvalidStep(dt.as_f64()));
    }
    if p.alpha == p.beta {
        return Err(Error::DegenerateSeparation(p.alpha.as_f64()));
    }
    if let Some(t_star) = blow_up_time(p).finite() {
        if t_end >= t_star {
            return Err(Error::StepTooLarge {
                t_end: t_end.as_f64(),
                t_blow: t_star.as_f64(),
            });
        }
    }
    if !(t_end >= S::zero()) || !t_end.is_finite() {
        return Err(Error::OutOfDomain {
            t: t_end.as_f64(),
            limit: f64::INFINITY,
        });
    }

    let rhs = |y: &[S; 5]| -> [S; 5] {
        let s = ReducedState {
            f: y[0],
            g: S::zero(),
            g1: y[1],
            g2: y[2],
            h1: y[3],
            h2: y[4],
        };
        let r = reduced_rhs(&s, p).expect("separation checked above");
        [r.f_t, r.g1_t, r.g2_t, r.h1_t, r.h2_t]
    };
    let axpy = |y: &[S; 5], c: S, k: &[S; 5]| -> [S; 5] { std::array::from_fn(|i| y[i] + c * k[i]) };
    let to_state = |y: &[S; 5]| ReducedState {
        f: y[0],
        g: pressure_amplitude(p, y[0]),
        g1: y[1],
        g2: y[2],
        h1: y[3],
        h2: y[4],
    };

    let times = step_times(t_end, dt);
    let half = S::lit(0.5);
    let sixth = S::one() / S::lit(6.0);
    let two = S::lit(2.0);
    let mut y = [p.f0, S::zero(), S::zero(), S::one(), S::one()];
    let mut states = Vec::with_capacity(times.len());
    states.push(to_state(&y));
    for w in times.windows(2) {
        let step = w[1] - w[0];
        let k1 = rhs(&y);
        let k2 = rhs(&axpy(&y, half * step, &k1));
        let k3 = rhs(&axpy(&y, half * step, &k2));
        let k4 = rhs(&axpy(&y, step, &k3));
        y = std::array::from_fn(|i| y[i] + step * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]));
        states.push(to_state(&y));
    }
    Ok(Trajectory { times, states })
}

/// Per-component maximum of `|numeric − closed form| / max(|closed form|, 1)`
/// over a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeErrorReport {
    pub f: f64,
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
    pub h1: f64,
    pub h2: f64,
    pub max: f64,
    pub steps: usize,
    pub dt: f64,
    pub t_end: f64,
}

pub fn compare_ode<S: Scalar>(p: &OldroydParams<S>, t_end: S, dt: S) -> Result<OdeErrorReport> {
    let traj = integrate_reduced(p, t_end, dt)?;
    let rel = |num: S, exact: S| ((num - exact).abs() / exact.abs().max(S::one())).as_f64();
    let mut e = [0.0f64; 6];
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let o = closed_form_reduced(p, *t)?;
        let errs = [
            rel(s.f, o.f),
            rel(s.g, o.g),
            rel(s.g1, o.g1),
            rel(s.g2, o.g2),
            rel(s.h1, o.h1),
            rel(s.h2, o.h2),
        ];
        for (acc, v) in e.iter_mut().zip(errs) {
            *acc = acc.max(v);
        }
    }
    Ok(OdeErrorReport {
        f: e[0],
        g: e[1],
        g1: e[2],
        g2: e[3],
        h1: e[4],
        h2: e[5],
        max: e.iter().copied().fold(0.0, f64::max),
        steps: traj.len() - 1,
        dt: dt.as_f64(),
        t_end: t_end.as_f64(),
    })
}
