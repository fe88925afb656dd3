//! Parameter records, validation, blow-up time and space-time grids.
//!
//! Parameter records (de)serialize with exactly their snake-case field names
//! and reject unknown fields. The Navier-Stokes blow-up time `T` is spelled
//! `t` in JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parameters of the separable Oldroyd-B blow-up family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OldroydParams<S> {
    /// Velocity amplitude at t = 0.
    pub f0: S,
    pub alpha: S,
    pub beta: S,
    /// Kinematic viscosity.
    pub nu: S,
    /// Elastic coupling.
    pub lambda: S,
}

/// Parameters of the explicit Navier-Stokes blow-up family.
///
/// In 2-D the constants are used as: `c1` velocity amplitude, `c2` pressure
/// offset, `c3` exponent shift. In 3-D: `c1`, `c2` velocity amplitudes, `c3`
/// pressure offset, `c4` exponent shift. `c5` is the phase shift of the 3-D
/// phase-field solution and is ignored here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NsParams<S> {
    /// Blow-up time `T`.
    #[serde(rename = "t")]
    pub t_blow: S,
    pub nu: S,
    pub c1: S,
    pub c2: S,
    pub c3: S,
    #[serde(default)]
    pub c4: S,
    #[serde(default)]
    pub c5: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseVariant {
    AllenCahn,
    CahnHilliard,
    /// Pure advection of the phase field; only valid with zero mobility.
    TransportOnly,
}

/// Parameters of the coupled Navier-Stokes/phase-field family.
///
/// Carries every [`NsParams`] field inline. The kink shift is `c4` in 2-D
/// and `c5` in 3-D.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseFieldParams<S> {
    #[serde(rename = "t")]
    pub t_blow: S,
    pub nu: S,
    pub c1: S,
    pub c2: S,
    pub c3: S,
    #[serde(default)]
    pub c4: S,
    #[serde(default)]
    pub c5: S,
    /// Mixing energy density.
    pub lambda: S,
    /// Mobility.
    pub gamma: S,
    /// Interface width.
    pub epsilon: S,
    pub dimension: usize,
    pub variant: PhaseVariant,
}

impl<S: Scalar> PhaseFieldParams<S> {
    /// The embedded Navier-Stokes parameters.
    pub fn ns(&self) -> NsParams<S> {
        NsParams {
            t_blow: self.t_blow,
            nu: self.nu,
            c1: self.c1,
            c2: self.c2,
            c3: self.c3,
            c4: self.c4,
            c5: self.c5,
        }
    }

    /// Shift constant inside the kink argument.
    pub fn kink_shift(&self) -> S {
        if self.dimension == 3 {
            self.c5
        } else {
            self.c4
        }
    }
}

/// Common validation entry point for the parameter records.
pub trait SolutionParams: Sized {
    fn validate(&self) -> Result<()>;
}

/// Returns `params` unchanged when every invariant holds.
pub fn validate_params<P: SolutionParams>(params: P) -> Result<P> {
    params.validate()?;
    Ok(params)
}

fn finite<S: Scalar>(name: &'static str, v: S) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite, got {v}"),
        })
    }
}

fn positive<S: Scalar>(name: &'static str, v: S) -> Result<()> {
    if v > S::zero() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            name,
            value: v.as_f64(),
            constraint: "> 0",
        })
    }
}

impl<S: Scalar> SolutionParams for OldroydParams<S> {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("f0", self.f0),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("nu", self.nu),
            ("lambda", self.lambda),
        ] {
            finite(name, v)?;
        }
        if self.alpha == self.beta {
            return Err(Error::DegenerateSeparation(self.alpha.as_f64()));
        }
        positive("nu", self.nu)?;
        positive("lambda", self.lambda)
    }
}

impl<S: Scalar> SolutionParams for NsParams<S> {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("t", self.t_blow),
            ("nu", self.nu),
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
            ("c5", self.c5),
        ] {
            finite(name, v)?;
        }
        positive("t", self.t_blow)?;
        positive("nu", self.nu)
    }
}

impl<S: Scalar> SolutionParams for PhaseFieldParams<S> {
    fn validate(&self) -> Result<()> {
        self.ns().validate()?;
        for (name, v) in [
            ("lambda", self.lambda),
            ("gamma", self.gamma),
            ("epsilon", self.epsilon),
        ] {
            finite(name, v)?;
        }
        positive("epsilon", self.epsilon)?;
        positive("lambda", self.lambda)?;
        if self.gamma < S::zero() {
            return Err(Error::NonPositive {
                name: "gamma",
                value: self.gamma.as_f64(),
                constraint: ">= 0",
            });
        }
        if !(2..=3).contains(&self.dimension) {
            return Err(Error::InvalidParameter {
                name: "dimension",
                reason: format!("must be 2 or 3, got {}", self.dimension),
            });
        }
        if self.variant == PhaseVariant::TransportOnly && self.gamma != S::zero() {
            return Err(Error::BadVariant(self.gamma.as_f64()));
        }
        Ok(())
    }
}

/// Blow-up time of a solution family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BlowUpTime<S> {
    Finite {
        t_star: S,
    },
    #[serde(rename = "none")]
    Never,
}

impl<S: Scalar> BlowUpTime<S> {
    pub fn finite(self) -> Option<S> {
        match self {
            BlowUpTime::Finite { t_star } => Some(t_star),
            BlowUpTime::Never => None,
        }
    }
}

/// `(α+β)/(α−β)`, the growth coefficient in `f' = κ f²`.
#[inline]
pub(crate) fn growth_coefficient<S: Scalar>(p: &OldroydParams<S>) -> S {
    (p.alpha + p.beta) / (p.alpha - p.beta)
}

/// `t* = (α−β)/((α+β) f₀)` when that is strictly positive, otherwise no
/// blow-up. `α+β = 0` and `f₀ = 0` never blow up.
pub fn blow_up_time<S: Scalar>(p: &OldroydParams<S>) -> BlowUpTime<S> {
    let sum = p.alpha + p.beta;
    if sum == S::zero() || p.f0 == S::zero() || p.alpha == p.beta {
        return BlowUpTime::Never;
    }
    let candidate = (p.alpha - p.beta) / (sum * p.f0);
    if candidate > S::zero() && candidate.is_finite() {
        BlowUpTime::Finite { t_star: candidate }
    } else {
        BlowUpTime::Never
    }
}

/// One spatial axis of a [`GridSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec<S> {
    pub lower: S,
    pub upper: S,
    pub count: usize,
}

impl<S: Scalar> AxisSpec<S> {
    pub fn new(lower: S, upper: S, count: usize) -> Self {
        AxisSpec { lower, upper, count }
    }

    /// Uniformly spaced nodes including both ends. A single node sits at
    /// `lower`.
    pub fn nodes(&self) -> Vec<S> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.lower],
            n => {
                let span = self.upper - self.lower;
                let last = S::from_usize(n - 1).unwrap();
                (0..n)
                    .map(|i| {
                        if i == n - 1 {
                            self.upper
                        } else {
                            self.lower + span * (S::from_usize(i).unwrap() / last)
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Rectangular space-time sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec<S> {
    pub axes: Vec<AxisSpec<S>>,
    pub times: Vec<S>,
}

/// A space-time sample location.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimePoint<S> {
    pub x: Vec<S>,
    pub t: S,
}

impl<S: Scalar> GridSpec<S> {
    pub fn new(axes: Vec<AxisSpec<S>>, times: Vec<S>) -> Self {
        GridSpec { axes, times }
    }

    /// `[lo, hi]^dim` with `count` nodes per axis.
    pub fn cube(dim: usize, lo: S, hi: S, count: usize, times: Vec<S>) -> Self {
        GridSpec {
            axes: vec![AxisSpec::new(lo, hi, count); dim],
            times,
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn spatial_count(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn len(&self) -> usize {
        self.spatial_count() * self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::InvalidGrid("no spatial axes".into()));
        }
        if self.axes.iter().any(|a| a.count == 0) || self.times.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for (i, a) in self.axes.iter().enumerate() {
            if !a.lower.is_finite() || !a.upper.is_finite() {
                return Err(Error::InvalidGrid(format!("axis {i} has non-finite bounds")));
            }
            if a.count > 1 && a.lower >= a.upper {
                return Err(Error::InvalidGrid(format!(
                    "axis {i}: lower bound {} must be below upper bound {}",
                    a.lower, a.upper
                )));
            }
        }
        if self.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("non-finite time".into()));
        }
        if self.times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("times must be strictly increasing".into()));
        }
        Ok(())
    }

    /// Spatial nodes in row-major order (last axis fastest).
    pub fn spatial_points(&self) -> Vec<Vec<S>> {
        let nodes: Vec<Vec<S>> = self.axes.iter().map(AxisSpec::nodes).collect();
        let total = self.spatial_count();
        let mut out = Vec::with_capacity(total);
        for mut flat in 0..total {
            let mut x = vec![S::zero(); nodes.len()];
            for axis in (0..nodes.len()).rev() {
                let n = nodes[axis].len();
                x[axis] = nodes[axis][flat % n];
                flat /= n;
            }
            out.push(x);
        }
        out
    }
}

/// Enumerates every space-time point: time is the outer loop, the spatial
/// nodes of each time slice follow in row-major order.
pub fn make_grid<S: Scalar>(spec: &GridSpec<S>) -> Result<Vec<SpaceTimePoint<S>>> {
    spec.validate()?;
    let spatial = spec.spatial_points();
    let mut points = Vec::with_capacity(spec.len());
    for &t in &spec.times {
        points.extend(spatial.iter().map(|x| SpaceTimePoint { x: x.clone(), t }));
    }
    Ok(points)
}

/// Standard sweep times `0.1·j·horizon`, `j = 0..9`.
pub fn standard_times<S: Scalar>(horizon: S) -> Vec<S> {
    (0..10)
        .map(|j| S::lit(0.1) * S::from_usize(j).unwrap() * horizon)
        .collect()
}

/// Standard sweep: `[-1, 1]^dim`, `count` nodes per axis, [`standard_times`].
pub fn standard_grid<S: Scalar>(dim: usize, count: usize, horizon: S) -> GridSpec<S> {
    GridSpec::cube(dim, -S::one(), S::one(), count, standard_times(horizon))
}
