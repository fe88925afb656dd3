//! Blow-up profiles, exponent fits, deformation metrics and the audit of
//! the small-data assumptions under which global existence is known.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{oldroyd_amplitudes, perp_gradient, EvalOptions};
use crate::model::{GridSpec, OldroydParams, SpaceTimePoint};
use crate::output::write_csv;
use crate::problem::{Family, System};
use crate::residual::SCHEMA_VERSION;
use crate::scalar::Scalar;
use crate::stats::least_squares;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssumptionStatus {
    Satisfied,
    Violated,
    /// Decided by the outer-shell decay surrogate, not by a Sobolev norm.
    SurrogateSatisfied,
    SurrogateViolated,
}

/// One witness quantity sampled on every level of the L-ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub values: Vec<f64>,
    /// Strictly increasing along the ladder.
    pub increasing: bool,
}

impl Witness {
    fn new(name: &str, values: Vec<f64>) -> Self {
        Witness {
            name: name.to_string(),
            increasing: values.windows(2).all(|w| w[1] > w[0]),
            values,
        }
    }

    fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionCheck {
    pub status: AssumptionStatus,
    pub witnesses: Vec<Witness>,
}

/// Ladder, sampling density and threshold of an assumption audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    /// Strictly increasing half-widths `L` of the boxes `[−L, L]^d`.
    pub ladder: Vec<f64>,
    /// Nodes per axis on every box.
    pub density: usize,
    /// Witnesses at or below this count as "near".
    pub threshold: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            ladder: vec![1.0, 2.0, 4.0, 8.0],
            density: 17,
            threshold: 1e-6,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ladder.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if self.ladder.iter().any(|l| !(*l > 0.0 && l.is_finite())) || self.ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter {
                name: "ladder",
                reason: "levels must be positive, finite and strictly increasing".into(),
            });
        }
        if self.density < 2 {
            return Err(Error::InvalidParameter {
                name: "density",
                reason: format!("need at least 2 nodes per axis, got {}", self.density),
            });
        }
        if !(self.threshold >= 0.0 && self.threshold.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "threshold",
                reason: format!("must be a non-negative number, got {}", self.threshold),
            });
        }
        Ok(())
    }
}

/// Status of each small-data assumption at `t = 0`, with its witnesses.
///
/// `a1`: `u₀` near zero. `a2`: `φ₀` close to `(−x₂, x₁)` with
/// `det ∇⊥φ₀ = 1`. `a2_prime`: `F₀` near the identity with `∇·F₀ = 0` and
/// `det F₀ = 1`. `a3`/`a3_prime`: decay of `u₀` and `φ₀ − a` (resp.
/// `F₀ − I`), judged by the surrogate "sup over the outer shell
/// `L/2 ≤ |x|∞ ≤ L` decreases as `L` grows". The potential-based entries are
/// absent for families without a deformation potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub schema_version: u32,
    pub system: System,
    pub config: AuditConfig,
    pub a1: AssumptionCheck,
    pub a2: Option<AssumptionCheck>,
    pub a2_prime: Option<AssumptionCheck>,
    pub a3: AssumptionCheck,
    pub a3_prime: Option<AssumptionCheck>,
}

/// Initial-data quantities at one point.
struct InitialSample {
    sup_norm: f64,
    speed: f64,
    /// `|φ₀ − a|`, `|det ∇⊥φ₀ − 1|`, `|F₀ − I|`, `|∇·F₀|`, `|det F₀ − 1|`.
    potential: Option<[f64; 5]>,
}

fn euclid(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn initial_sample<S: Scalar>(family: &Family<S>, x: &[S]) -> Result<InitialSample> {
    let t = S::zero();
    let jet = family.jet(x, t, EvalOptions::default())?;
    let speed = euclid(jet.u.iter().map(|v| v.as_f64()));
    let sup_norm = x.iter().map(|v| v.as_f64().abs()).fold(0.0, f64::max);
    let potential = match (family, &jet.deformation) {
        (Family::Oldroyd(_), Some(def)) => {
            let (x1, x2) = (x[0].as_f64(), x[1].as_f64());
            let phi_dev = euclid([jet.phi[0].as_f64() + x2, jet.phi[1].as_f64() - x1]);
            let perp = perp_gradient(&jet.grad_phi);
            let det = |m: &[[S; 2]; 2]| (m[0][0] * m[1][1] - m[0][1] * m[1][0]).as_f64();
            let f = def.f;
            let f_dev = euclid([
                f[0][0].as_f64() - 1.0,
                f[0][1].as_f64(),
                f[1][0].as_f64(),
                f[1][1].as_f64() - 1.0,
            ]);
            let div = euclid(def.div_f.iter().map(|v| v.as_f64()));
            Some([phi_dev, (det(&perp) - 1.0).abs(), f_dev, div, (det(&f) - 1.0).abs()])
        }
        _ => None,
    };
    Ok(InitialSample {
        sup_norm,
        speed,
        potential,
    })
}

/// Per-level sup over the whole box and over its outer shell.
struct Level {
    speed: f64,
    potential: Option<[f64; 5]>,
    shell_speed: f64,
    shell_potential: Option<[f64; 5]>,
}

fn audit_level<S: Scalar>(family: &Family<S>, l: f64, density: usize) -> Result<Level> {
    let lim = S::lit(l);
    let grid = GridSpec::cube(family.dim(), -lim, lim, density, vec![S::zero()]);
    let points: Vec<SpaceTimePoint<S>> = crate::model::make_grid(&grid)?;
    let samples = crate::residual::map_points(&points, |pt| initial_sample(family, &pt.x))?;
    let mut level = Level {
        speed: 0.0,
        potential: None,
        shell_speed: 0.0,
        shell_potential: None,
    };
    let merge = |acc: &mut Option<[f64; 5]>, v: [f64; 5]| {
        let cur = acc.get_or_insert([0.0; 5]);
        for (c, x) in cur.iter_mut().zip(v) {
            *c = c.max(x);
        }
    };
    for s in samples {
        level.speed = level.speed.max(s.speed);
        let in_shell = s.sup_norm >= 0.5 * l;
        if in_shell {
            level.shell_speed = level.shell_speed.max(s.speed);
        }
        if let Some(p) = s.potential {
            merge(&mut level.potential, p);
            if in_shell {
                merge(&mut level.shell_potential, p);
            }
        }
    }
    Ok(level)
}

fn near_status(witnesses: &[Witness], threshold: f64) -> AssumptionStatus {
    if witnesses.iter().all(|w| w.max() <= threshold) {
        AssumptionStatus::Satisfied
    } else {
        AssumptionStatus::Violated
    }
}

fn decay_status(witnesses: &[Witness], threshold: f64) -> AssumptionStatus {
    let decays =
        |w: &Witness| w.values.last().is_some_and(|v| *v <= threshold) || w.values.windows(2).all(|p| p[1] < p[0]);
    if witnesses.iter().all(decays) {
        AssumptionStatus::SurrogateSatisfied
    } else {
        AssumptionStatus::SurrogateViolated
    }
}

/// Audits the initial data of `family` on every box of the ladder.
pub fn check_assumptions<S: Scalar>(family: &Family<S>, config: &AuditConfig) -> Result<AssumptionReport> {
    config.validate()?;
    let levels: Vec<Level> = config
        .ladder
        .iter()
        .map(|&l| audit_level(family, l, config.density))
        .collect::<Result<_>>()?;
    let column = |f: &dyn Fn(&Level) -> f64| -> Vec<f64> { levels.iter().map(f).collect() };
    let potential = |k: usize, shell: bool| -> Vec<f64> {
        levels
            .iter()
            .map(|l| {
                let p = if shell { l.shell_potential } else { l.potential };
                p.map_or(0.0, |v| v[k])
            })
            .collect()
    };
    let thr = config.threshold;

    let a1_w = vec![Witness::new("sup_u0", column(&|l| l.speed))];
    let shell_u = Witness::new("shell_sup_u0", column(&|l| l.shell_speed));
    let has_potential = matches!(family, Family::Oldroyd(_));

    let (a2, a2_prime, a3_w, a3_prime) = if has_potential {
        let a2_w = vec![
            Witness::new("max_det_perp_grad_phi0_minus_1", potential(1, false)),
            Witness::new("sup_phi0_minus_a", potential(0, false)),
        ];
        let a2p_w = vec![
            Witness::new("max_det_f0_minus_1", potential(4, false)),
            Witness::new("sup_div_f0", potential(3, false)),
            Witness::new("sup_f0_minus_identity", potential(2, false)),
        ];
        let a3_w = vec![
            shell_u.clone(),
            Witness::new("shell_sup_phi0_minus_a", potential(0, true)),
        ];
        let a3p_w = vec![shell_u, Witness::new("shell_sup_f0_minus_identity", potential(2, true))];
        (
            Some(AssumptionCheck {
                status: near_status(&a2_w, thr),
                witnesses: a2_w,
            }),
            Some(AssumptionCheck {
                status: near_status(&a2p_w, thr),
                witnesses: a2p_w,
            }),
            a3_w,
            Some(AssumptionCheck {
                status: decay_status(&a3p_w, thr),
                witnesses: a3p_w,
            }),
        )
    } else {
        (None, None, vec![shell_u], None)
    };

    Ok(AssumptionReport {
        schema_version: SCHEMA_VERSION,
        system: family.system(),
        config: config.clone(),
        a1: AssumptionCheck {
            status: near_status(&a1_w, thr),
            witnesses: a1_w,
        },
        a2,
        a2_prime,
        a3: AssumptionCheck {
            status: decay_status(&a3_w, thr),
            witnesses: a3_w,
        },
        a3_prime,
    })
}

/// Quantity tracked along a blow-up profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Diagnostic {
    /// `|u(x, t)|`.
    #[default]
    VelocityNorm,
    /// Oldroyd only: `max(h₁, h₂) / min(h₁, h₂)`.
    DeformationRatio,
    /// `|P(x, t)|`, the pressure of the momentum equation.
    PressureMagnitude,
}

impl Diagnostic {
    pub fn label(self) -> &'static str {
        match self {
            Diagnostic::VelocityNorm => "velocity-norm",
            Diagnostic::DeformationRatio => "deformation-ratio",
            Diagnostic::PressureMagnitude => "pressure-magnitude",
        }
    }
}

/// Geometric approach `t_j = t_blow·(1 − ratio^j)`, `j = 1..=count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Approach {
    pub count: usize,
    pub ratio: f64,
}

impl Default for Approach {
    fn default() -> Self {
        Approach { count: 12, ratio: 0.5 }
    }
}

/// A diagnostic sampled at times increasing toward the blow-up time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSeries {
    pub schema_version: u32,
    pub system: System,
    pub label: String,
    pub point: Vec<f64>,
    pub t_blow: f64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl ProfileSeries {
    /// Columns `t, value`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(
            out,
            &["t", "value"],
            self.times.iter().zip(&self.values).map(|(t, v)| vec![*t, *v]),
        )
    }
}

/// Samples `diagnostic` at `point` on the geometric approach to blow-up.
pub fn blowup_profile<S: Scalar>(
    family: &Family<S>,
    point: &[S],
    approach: Approach,
    diagnostic: Diagnostic,
) -> Result<ProfileSeries> {
    let t_blow = family.blow_up_time().ok_or(Error::NoBlowUp)?;
    if !(approach.ratio > 0.0 && approach.ratio < 1.0) {
        return Err(Error::InvalidParameter {
            name: "ratio",
            reason: format!("must lie in (0, 1), got {}", approach.ratio),
        });
    }
    if approach.count == 0 {
        return Err(Error::InvalidParameter {
            name: "count",
            reason: "need at least one sample".into(),
        });
    }
    if diagnostic == Diagnostic::DeformationRatio && !matches!(family, Family::Oldroyd(_)) {
        return Err(Error::Unsupported(format!(
            "diagnostic {} needs the oldroyd system",
            diagnostic.label()
        )));
    }
    crate::exact::check_dim(family.dim(), point)?;

    let ratio = S::lit(approach.ratio);
    let mut times = Vec::with_capacity(approach.count);
    let mut values = Vec::with_capacity(approach.count);
    for j in 1..=approach.count {
        let t = t_blow * (S::one() - ratio.powi(j as i32));
        if t >= t_blow || times.last().is_some_and(|prev: &S| t <= *prev) {
            return Err(Error::DegenerateProfile { index: j });
        }
        let value = match (diagnostic, family) {
            (Diagnostic::DeformationRatio, Family::Oldroyd(p)) => deformation_metrics(p, t)?.anisotropy,
            (Diagnostic::PressureMagnitude, _) => {
                family.eval(point, t, EvalOptions::default())?.pressure.abs().as_f64()
            }
            _ => euclid(
                family
                    .eval(point, t, EvalOptions::default())?
                    .u
                    .iter()
                    .map(|v| v.as_f64()),
            ),
        };
        times.push(t);
        values.push(value);
    }
    Ok(ProfileSeries {
        schema_version: SCHEMA_VERSION,
        system: family.system(),
        label: diagnostic.label().to_string(),
        point: point.iter().map(|v| v.as_f64()).collect(),
        t_blow: t_blow.as_f64(),
        times: times.iter().map(|t| t.as_f64()).collect(),
        values,
    })
}

/// Least-squares power law `value ∝ (t_blow − t)^slope`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    pub points: usize,
}

pub fn fit_exponent(series: &ProfileSeries, t_blow: f64) -> Result<ExponentFit> {
    let n = series.times.len().min(series.values.len());
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for (&t, &v) in series.times.iter().zip(&series.values) {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveValue { t, value: v });
        }
        let gap = t_blow - t;
        if !(gap > 0.0) {
            return Err(Error::OutOfDomain { t, limit: t_blow });
        }
        xs.push(gap.ln());
        ys.push(v.ln());
    }
    let fit = least_squares(&xs, &ys)?;
    Ok(ExponentFit {
        slope: fit.slope,
        slope_stderr: fit.slope_stderr,
        intercept: fit.intercept,
        points: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationMetrics {
    /// `det F = h₁h₂`.
    pub det: f64,
    /// `max(h₁, h₂) / min(h₁, h₂)`.
    pub anisotropy: f64,
}

pub fn deformation_metrics<S: Scalar>(p: &OldroydParams<S>, t: S) -> Result<DeformationMetrics> {
    let a = oldroyd_amplitudes(p, t, EvalOptions::default())?;
    Ok(DeformationMetrics {
        det: (a.h1 * a.h2).as_f64(),
        anisotropy: (a.h1.max(a.h2) / a.h1.min(a.h2)).as_f64(),
    })
}

/// Distance between the `φ = −θ` and `φ = θ` level sets of
/// `tanh(z / (2ε))`: `4ε·atanh θ`.
pub fn interface_width<S: Scalar>(epsilon: S, threshold: S) -> Result<S> {
    if !(threshold > S::zero() && threshold < S::one()) {
        return Err(Error::BadThreshold(threshold.as_f64()));
    }
    if !(epsilon > S::zero()) {
        return Err(Error::NonPositive {
            name: "epsilon",
            value: epsilon.as_f64(),
            constraint: "> 0",
        });
    }
    Ok(S::lit(4.0) * epsilon * threshold.atanh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NsParams;
    use approx::assert_relative_eq;

    fn oldroyd(f0: f64, alpha: f64, beta: f64) -> OldroydParams<f64> {
        OldroydParams {
            f0,
            alpha,
            beta,
            nu: 1.0,
            lambda: 1.0,
        }
    }

    fn ns_c1_zero() -> Family<f64> {
        Family::navier_stokes(
            NsParams {
                t_blow: 1.0,
                nu: 1.0,
                c1: 0.0,
                c2: 0.0,
                c3: 0.0,
                c4: 0.0,
                c5: 0.0,
            },
            2,
        )
        .unwrap()
    }

    #[test]
    fn audit_of_blowup_data() {
        let fam = Family::oldroyd(oldroyd(1.0, 3.0, 1.0)).unwrap();
        let r = check_assumptions(&fam, &AuditConfig::default()).unwrap();
        assert_eq!(r.a1.status, AssumptionStatus::Violated);
        let sup = &r.a1.witnesses[0];
        assert!(sup.increasing);
        for (v, l) in sup.values.iter().zip([1.0, 2.0, 4.0, 8.0]) {
            assert_relative_eq!(*v, l * 2f64.sqrt(), max_relative = 1e-12);
        }
        let a2 = r.a2.unwrap();
        assert_eq!(a2.status, AssumptionStatus::Satisfied);
        assert!(a2.witnesses.iter().all(|w| w.values.iter().all(|v| *v == 0.0)));
        let a2p = r.a2_prime.unwrap();
        assert!(a2p.witnesses.iter().all(|w| w.values.iter().all(|v| *v == 0.0)));
        assert_eq!(r.a3.status, AssumptionStatus::SurrogateViolated);
    }

    #[test]
    fn audit_of_zero_data() {
        let fam = Family::oldroyd(oldroyd(0.0, 3.0, 1.0)).unwrap();
        let r = check_assumptions(&fam, &AuditConfig::default()).unwrap();
        assert_eq!(r.a1.status, AssumptionStatus::Satisfied);
        assert_eq!(r.a1.witnesses[0].values, vec![0.0; 4]);
        assert_eq!(r.a2.unwrap().status, AssumptionStatus::Satisfied);
        assert_eq!(r.a3.status, AssumptionStatus::SurrogateSatisfied);
        assert_eq!(r.a3_prime.unwrap().status, AssumptionStatus::SurrogateSatisfied);
    }

    #[test]
    fn audit_config_validation() {
        let fam = Family::oldroyd(oldroyd(0.0, 3.0, 1.0)).unwrap();
        let bad = AuditConfig {
            ladder: vec![2.0, 1.0],
            ..AuditConfig::default()
        };
        assert_eq!(check_assumptions(&fam, &bad).unwrap_err().kind(), "InvalidParameter");
    }

    #[test]
    fn profile_examples() {
        let fam = Family::oldroyd(oldroyd(1.0, 3.0, 1.0)).unwrap();
        let approach = Approach { count: 10, ratio: 0.5 };
        let s = blowup_profile(&fam, &[1.0, 1.0], approach, Diagnostic::VelocityNorm).unwrap();
        assert_eq!(s.times.len(), 10);
        for w in s.values.windows(2) {
            assert_relative_eq!(w[1] / w[0], 2.0, max_relative = 1e-9);
        }
        assert_relative_eq!(s.values[0], 2f64.sqrt() * 2.0, max_relative = 1e-12);

        let s = blowup_profile(&ns_c1_zero(), &[0.0, 0.0], approach, Diagnostic::VelocityNorm).unwrap();
        for w in s.values.windows(2) {
            assert_relative_eq!(w[1] / w[0], 2f64.sqrt(), max_relative = 1e-9);
        }

        let never = Family::oldroyd(oldroyd(1.0, 1.0, -1.0)).unwrap();
        assert_eq!(
            blowup_profile(&never, &[1.0, 1.0], approach, Diagnostic::VelocityNorm)
                .unwrap_err()
                .kind(),
            "NoBlowUp"
        );
        assert_eq!(
            blowup_profile(&ns_c1_zero(), &[0.0, 0.0], approach, Diagnostic::DeformationRatio)
                .unwrap_err()
                .kind(),
            "Unsupported"
        );
        let tight = Approach { count: 80, ratio: 0.5 };
        assert_eq!(
            blowup_profile(&fam, &[1.0, 1.0], tight, Diagnostic::VelocityNorm)
                .unwrap_err()
                .kind(),
            "DegenerateProfile"
        );
    }

    #[test]
    fn exponent_fits() {
        let times: Vec<f64> = (1..=12).map(|j| 0.5 * (1.0 - 0.5f64.powi(j))).collect();
        let series = ProfileSeries {
            schema_version: 1,
            system: System::Oldroyd,
            label: "law".into(),
            point: vec![],
            t_blow: 0.5,
            values: times.iter().map(|t| 1.0 / (0.5 - t)).collect(),
            times,
        };
        let fit = fit_exponent(&series, 0.5).unwrap();
        assert!((fit.slope + 1.0).abs() <= 1e-6);

        let mut bad = series.clone();
        bad.values[3] = 0.0;
        assert_eq!(fit_exponent(&bad, 0.5).unwrap_err().kind(), "NonPositiveValue");

        let fam = Family::oldroyd(oldroyd(1.0, 3.0, 1.0)).unwrap();
        let s = blowup_profile(&fam, &[1.0, 1.0], Approach::default(), Diagnostic::VelocityNorm).unwrap();
        assert!((fit_exponent(&s, s.t_blow).unwrap().slope + 1.0).abs() <= 0.01);
        let s = blowup_profile(&fam, &[1.0, 1.0], Approach::default(), Diagnostic::DeformationRatio).unwrap();
        assert!((fit_exponent(&s, s.t_blow).unwrap().slope + 1.0).abs() <= 0.01);
        let s = blowup_profile(
            &ns_c1_zero(),
            &[0.0, 0.0],
            Approach::default(),
            Diagnostic::VelocityNorm,
        )
        .unwrap();
        assert!((fit_exponent(&s, s.t_blow).unwrap().slope + 0.5).abs() <= 0.01);
    }

    #[test]
    fn deformation_examples() {
        let p = oldroyd(1.0, 3.0, 1.0);
        let m = deformation_metrics(&p, 0.45).unwrap();
        assert!((m.det - 1.0).abs() <= 1e-12);
        assert_relative_eq!(m.anisotropy, 10.0, max_relative = 1e-12);
        assert_eq!(
            deformation_metrics(&p, 0.0).unwrap(),
            DeformationMetrics {
                det: 1.0,
                anisotropy: 1.0
            }
        );
        let mut prev = 1.0;
        for i in 0..1000 {
            let a = deformation_metrics(&p, 0.4999 * i as f64 / 1000.0).unwrap().anisotropy;
            assert!(a >= prev);
            prev = a;
        }
        assert_eq!(deformation_metrics(&p, 0.5).unwrap_err().kind(), "OutOfDomain");
    }

    #[test]
    fn interface_widths() {
        assert!((interface_width(0.1f64, 0.9).unwrap() - 0.588889).abs() < 2e-6);
        assert!((interface_width(0.1f64, 0.9).unwrap() - 0.5888877958332882).abs() < 1e-15);
        assert!(interface_width(0.1f64, 1e-12).unwrap() < 1e-12);
        assert_eq!(interface_width(0.1, 1.0).unwrap_err().kind(), "BadThreshold");
        assert_eq!(interface_width(0.1, 0.0).unwrap_err().kind(), "BadThreshold");
    }

    #[test]
    fn profile_csv() {
        let fam = Family::oldroyd(oldroyd(1.0, 3.0, 1.0)).unwrap();
        let s = blowup_profile(
            &fam,
            &[1.0, 1.0],
            Approach { count: 2, ratio: 0.5 },
            Diagnostic::VelocityNorm,
        )
        .unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,value\n0.25,"));
        assert_eq!(text.lines().count(), 3);
    }
}
