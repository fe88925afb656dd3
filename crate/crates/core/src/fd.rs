//! Centered finite-difference operators over black-box space-time fields,
//! and convergence-order estimation.
//!
//! A field is any `Fn(&[S], S) -> Result<V>` where `V` is a scalar or a
//! vector of scalars. Fields must be pure. Any `OutOfDomain` raised while
//! evaluating a stencil node surfaces as `FootprintOutOfDomain`.
//!
//! Callers keep a margin of `2k` from the ends of the time domain so that
//! both stencil orders fit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stats::least_squares;

/// Differentiation direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Space(usize),
    Time,
}

/// Steps and accuracy order of the centered stencils.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StencilSpec<S> {
    /// Spatial step.
    pub h: S,
    /// Temporal step.
    pub k: S,
    /// 2 or 4.
    pub order: u8,
}

impl<S: Scalar> Default for StencilSpec<S> {
    fn default() -> Self {
        StencilSpec {
            h: S::lit(1e-3),
            k: S::lit(1e-3),
            order: 2,
        }
    }
}

impl<S: Scalar> StencilSpec<S> {
    pub fn new(h: S, k: S, order: u8) -> Result<Self> {
        let spec = StencilSpec { h, k, order };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > S::zero() && self.h.is_finite()) {
            return Err(Error::InvalidStencil(format!("h must be positive, got {}", self.h)));
        }
        if !(self.k > S::zero() && self.k.is_finite()) {
            return Err(Error::InvalidStencil(format!("k must be positive, got {}", self.k)));
        }
        if self.order != 2 && self.order != 4 {
            return Err(Error::InvalidStencil(format!(
                "order must be 2 or 4, got {}",
                self.order
            )));
        }
        Ok(())
    }

    /// Same order and `k/h` ratio, spatial step `h`.
    pub fn rescaled(&self, h: S) -> Self {
        StencilSpec {
            h,
            k: self.k * (h / self.h),
            order: self.order,
        }
    }

    fn step(&self, axis: Axis) -> S {
        match axis {
            Axis::Space(_) => self.h,
            Axis::Time => self.k,
        }
    }
}

/// Values that can be linearly combined: scalars and vectors of scalars.
pub trait Linear<S>: Sized {
    /// `Σ cᵢ vᵢ`, accumulated in iteration order.
    fn combine(terms: Vec<(S, Self)>) -> Self;
}

impl<S: Scalar> Linear<S> for S {
    fn combine(terms: Vec<(S, Self)>) -> Self {
        terms.into_iter().fold(S::zero(), |acc, (c, v)| acc + c * v)
    }
}

impl<S: Scalar> Linear<S> for Vec<S> {
    fn combine(terms: Vec<(S, Self)>) -> Self {
        let mut iter = terms.into_iter();
        let Some((c0, v0)) = iter.next() else {
            return Vec::new();
        };
        let mut acc: Vec<S> = v0.into_iter().map(|v| c0 * v).collect();
        for (c, v) in iter {
            for (a, b) in acc.iter_mut().zip(v) {
                *a = *a + c * b;
            }
        }
        acc
    }
}

/// Integer weights and denominator of a centered stencil.
struct Weights {
    offsets: &'static [i32],
    weights: &'static [i32],
    denom: i32,
}

const FIRST_2: Weights = Weights {
    offsets: &[-1, 1],
    weights: &[-1, 1],
    denom: 2,
};
const FIRST_4: Weights = Weights {
    offsets: &[-2, -1, 1, 2],
    weights: &[1, -8, 8, -1],
    denom: 12,
};
const SECOND_2: Weights = Weights {
    offsets: &[-1, 0, 1],
    weights: &[1, -2, 1],
    denom: 1,
};
const SECOND_4: Weights = Weights {
    offsets: &[-2, -1, 0, 1, 2],
    weights: &[-1, 16, -30, 16, -1],
    denom: 12,
};

fn first_weights(order: u8) -> &'static Weights {
    if order == 4 {
        &FIRST_4
    } else {
        &FIRST_2
    }
}

fn second_weights(order: u8) -> &'static Weights {
    if order == 4 {
        &SECOND_4
    } else {
        &SECOND_2
    }
}

fn shifted<S: Scalar>(x: &[S], t: S, axis: Axis, delta: S) -> Result<(Vec<S>, S)> {
    let mut y = x.to_vec();
    match axis {
        Axis::Space(i) => {
            if i >= y.len() {
                return Err(Error::DimensionMismatch {
                    expected: i + 1,
                    got: y.len(),
                });
            }
            y[i] = y[i] + delta;
            Ok((y, t))
        }
        Axis::Time => Ok((y, t + delta)),
    }
}

fn eval_node<S, V, F>(field: &F, x: &[S], t: S) -> Result<V>
where
    S: Scalar,
    F: Fn(&[S], S) -> Result<V>,
{
    field(x, t).map_err(|e| match e {
        Error::OutOfDomain { .. } => Error::FootprintOutOfDomain { t: t.as_f64() },
        other => other,
    })
}

/// One-axis stencil application, scaled by `1/(denom·stepⁿ)`.
fn apply_1d<S, V, F>(field: &F, x: &[S], t: S, axis: Axis, step: S, w: &Weights, power: i32) -> Result<V>
where
    S: Scalar,
    V: Linear<S>,
    F: Fn(&[S], S) -> Result<V>,
{
    let scale = S::one() / (S::from_i32(w.denom).unwrap() * step.powi(power));
    let mut terms = Vec::with_capacity(w.offsets.len());
    for (&o, &c) in w.offsets.iter().zip(w.weights) {
        let (y, s) = shifted(x, t, axis, S::from_i32(o).unwrap() * step)?;
        terms.push((S::from_i32(c).unwrap() * scale, eval_node(field, &y, s)?));
    }
    Ok(V::combine(terms))
}

/// Centered first derivative along `axis`. Order 2 is
/// `(f(x+h) − f(x−h)) / (2h)`.
pub fn fd_partial<S, V, F>(field: &F, x: &[S], t: S, axis: Axis, spec: &StencilSpec<S>) -> Result<V>
where
    S: Scalar,
    V: Linear<S>,
    F: Fn(&[S], S) -> Result<V>,
{
    spec.validate()?;
    apply_1d(field, x, t, axis, spec.step(axis), first_weights(spec.order), 1)
}

/// Centered second derivative `∂²/∂a∂b`. Equal axes use the three- or
/// five-point second-difference stencil; distinct axes use the tensor
/// product of first-derivative stencils.
pub fn fd_second<S, V, F>(field: &F, x: &[S], t: S, a: Axis, b: Axis, spec: &StencilSpec<S>) -> Result<V>
where
    S: Scalar,
    V: Linear<S>,
    F: Fn(&[S], S) -> Result<V>,
{
    spec.validate()?;
    if a == b {
        return apply_1d(field, x, t, a, spec.step(a), second_weights(spec.order), 2);
    }
    let inner = |y: &[S], s: S| -> Result<V> { apply_1d(field, y, s, b, spec.step(b), first_weights(spec.order), 1) };
    apply_1d(&inner, x, t, a, spec.step(a), first_weights(spec.order), 1)
}

/// Sum of the pure second differences over every spatial axis of `x`.
pub fn fd_laplacian<S, V, F>(field: &F, x: &[S], t: S, spec: &StencilSpec<S>) -> Result<V>
where
    S: Scalar,
    V: Linear<S>,
    F: Fn(&[S], S) -> Result<V>,
{
    spec.validate()?;
    let mut terms = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let axis = Axis::Space(i);
        terms.push((
            S::one(),
            apply_1d(field, x, t, axis, spec.h, second_weights(spec.order), 2)?,
        ));
    }
    Ok(V::combine(terms))
}

/// Laplacian of the discrete Laplacian, sharing one `h`.
pub fn fd_biharmonic<S, V, F>(field: &F, x: &[S], t: S, spec: &StencilSpec<S>) -> Result<V>
where
    S: Scalar,
    V: Linear<S>,
    F: Fn(&[S], S) -> Result<V>,
{
    spec.validate()?;
    let inner = |y: &[S], s: S| -> Result<V> { fd_laplacian(field, y, s, spec) };
    fd_laplacian(&inner, x, t, spec)
}

/// Operator selector for [`convergence_order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdOperator {
    Partial(Axis),
    Second(Axis, Axis),
    Laplacian,
    Biharmonic,
}

impl FdOperator {
    pub fn apply<S, V, F>(&self, field: &F, x: &[S], t: S, spec: &StencilSpec<S>) -> Result<V>
    where
        S: Scalar,
        V: Linear<S>,
        F: Fn(&[S], S) -> Result<V>,
    {
        match *self {
            FdOperator::Partial(axis) => fd_partial(field, x, t, axis, spec),
            FdOperator::Second(a, b) => fd_second(field, x, t, a, b, spec),
            FdOperator::Laplacian => fd_laplacian(field, x, t, spec),
            FdOperator::Biharmonic => fd_biharmonic(field, x, t, spec),
        }
    }
}

/// Least-squares slope of `log|error|` against `log h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub slope: f64,
    pub slope_stderr: f64,
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
}

/// Errors at or below this multiple of machine epsilon (relative to
/// `max(|reference|, 1)`) count as zero: the stencil is exact for the field.
pub const ZERO_ERROR_FACTOR: f64 = 1e3;

/// Estimates the convergence order of `op` at `(x, t)` against an exact
/// `reference`, using `k = h` for every step in `h_list`.
pub fn convergence_order<S, F>(
    field: &F,
    reference: S,
    op: FdOperator,
    x: &[S],
    t: S,
    h_list: &[S],
    order: u8,
) -> Result<OrderEstimate>
where
    S: Scalar,
    F: Fn(&[S], S) -> Result<S>,
{
    if h_list.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: h_list.len(),
        });
    }
    let floor = S::lit(ZERO_ERROR_FACTOR) * S::epsilon() * reference.abs().max(S::one());
    let mut errors = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let spec = StencilSpec::new(h, h, order)?;
        let approx: S = op.apply(field, x, t, &spec)?;
        let err = (approx - reference).abs();
        if err <= floor {
            return Err(Error::ZeroError { h: h.as_f64() });
        }
        errors.push(err.as_f64());
    }
    let steps: Vec<f64> = h_list.iter().map(|h| h.as_f64()).collect();
    let lx: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ly: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let fit = least_squares(&lx, &ly)?;
    Ok(OrderEstimate {
        slope: fit.slope,
        slope_stderr: fit.slope_stderr,
        steps,
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square(x: &[f64], _t: f64) -> Result<f64> {
        Ok(x[0] * x[0])
    }

    fn sine(x: &[f64], _t: f64) -> Result<f64> {
        Ok(x[0].sin())
    }

    fn spec(h: f64, order: u8) -> StencilSpec<f64> {
        StencilSpec::new(h, h, order).unwrap()
    }

    #[test]
    fn first_derivative_of_quadratic_is_exact() {
        for h in [0.25, 2f64.powi(-10)] {
            let d: f64 = fd_partial(&square, &[1.0], 0.0, Axis::Space(0), &spec(h, 2)).unwrap();
            assert_eq!(d, 2.0);
        }
        let d: f64 = fd_partial(&square, &[1.0], 0.0, Axis::Space(0), &spec(0.1, 2)).unwrap();
        assert_relative_eq!(d, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn first_derivative_of_sine() {
        let d: f64 = fd_partial(&sine, &[0.0], 0.0, Axis::Space(0), &spec(1e-3, 2)).unwrap();
        assert!((d - 1.0).abs() <= 2e-7);
    }

    #[test]
    fn invalid_stencils() {
        assert_eq!(StencilSpec::new(0.0, 1e-3, 2).unwrap_err().kind(), "InvalidStencil");
        assert_eq!(StencilSpec::new(1e-3, 1e-3, 3).unwrap_err().kind(), "InvalidStencil");
        let bad = StencilSpec {
            h: 0.0,
            k: 1e-3,
            order: 2,
        };
        assert!(fd_partial::<f64, f64, _>(&square, &[1.0], 0.0, Axis::Space(0), &bad).is_err());
    }

    #[test]
    fn second_derivatives_and_laplacian() {
        let d: f64 = fd_second(&square, &[0.375], 0.0, Axis::Space(0), Axis::Space(0), &spec(0.25, 2)).unwrap();
        assert_eq!(d, 2.0);
        let bowl = |x: &[f64], _t: f64| -> Result<f64> { Ok(x[0] * x[0] + x[1] * x[1]) };
        let lap: f64 = fd_laplacian(&bowl, &[0.5, -0.25], 0.0, &spec(0.125, 2)).unwrap();
        assert_eq!(lap, 4.0);
        let saddle = |x: &[f64], t: f64| -> Result<f64> { Ok(x[0] * x[1] + t * x[0]) };
        let mixed: f64 = fd_second(
            &saddle,
            &[0.5, -0.25],
            0.3,
            Axis::Space(0),
            Axis::Space(1),
            &spec(0.125, 2),
        )
        .unwrap();
        assert_eq!(mixed, 1.0);
        let mixed_t: f64 = fd_second(&saddle, &[0.5, -0.25], 0.3, Axis::Space(0), Axis::Time, &spec(0.125, 4)).unwrap();
        assert_relative_eq!(mixed_t, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn biharmonic_of_sine() {
        let at_zero: f64 = fd_biharmonic(&sine, &[0.0], 0.0, &spec(1e-2, 2)).unwrap();
        assert!(at_zero.abs() <= 1e-5);
        let at_peak: f64 = fd_biharmonic(&sine, &[std::f64::consts::FRAC_PI_2], 0.0, &spec(1e-2, 2)).unwrap();
        assert!((at_peak - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn vector_fields() {
        let f = |x: &[f64], t: f64| -> Result<Vec<f64>> { Ok(vec![x[0] * x[0], 3.0 * t]) };
        let d: Vec<f64> = fd_partial(&f, &[1.0], 0.5, Axis::Time, &spec(0.25, 2)).unwrap();
        assert_eq!(d, vec![0.0, 3.0]);
    }

    #[test]
    fn footprint_errors() {
        let half_line = |x: &[f64], t: f64| -> Result<f64> {
            if t < 0.0 {
                Err(Error::OutOfDomain { t, limit: 1.0 })
            } else {
                Ok(x[0] + t)
            }
        };
        let err = fd_partial::<f64, f64, _>(&half_line, &[0.0], 0.0, Axis::Time, &spec(1e-3, 2)).unwrap_err();
        assert_eq!(err.kind(), "FootprintOutOfDomain");
    }

    #[test]
    fn convergence_orders() {
        let h = [1e-1, 5e-2, 2.5e-2];
        let est = convergence_order(&sine, 1.0, FdOperator::Partial(Axis::Space(0)), &[0.0], 0.0, &h, 2).unwrap();
        assert!((est.slope - 2.0).abs() <= 0.1, "slope {}", est.slope);
        let est = convergence_order(&sine, 1.0, FdOperator::Partial(Axis::Space(0)), &[0.0], 0.0, &h, 4).unwrap();
        assert!((est.slope - 4.0).abs() <= 0.2, "slope {}", est.slope);
        let err = convergence_order(&square, 2.0, FdOperator::Partial(Axis::Space(0)), &[1.0], 0.0, &h, 2).unwrap_err();
        assert_eq!(err.kind(), "ZeroError");
        let err =
            convergence_order(&sine, 1.0, FdOperator::Partial(Axis::Space(0)), &[0.0], 0.0, &h[..2], 2).unwrap_err();
        assert_eq!(err.kind(), "TooFewPoints");
    }
}
