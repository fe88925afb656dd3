//! Pointwise PDE residuals of the solution families.
//!
//! Each equation is assembled term by term from a [`DerivativeJet`], built
//! either from the hand-derived closed forms ([`Mode::Analytic`]) or by
//! centered finite differences of the field evaluators
//! ([`Mode::FiniteDifference`]). No identity satisfied by the exact solution
//! is used to simplify a residual; in particular the Allen-Cahn phase
//! residual evaluates `Δφ` and `f(φ)` separately.
//!
//! Every component carries a scale, the largest magnitude among the terms
//! that enter it, with sums such as `(u·∇)u_i = Σ_j u_j ∂_j u_i` expanded
//! into their individual products. The relative residual is
//! `|r| / max(scale, 1)`.

mod sweep;

pub(crate) use sweep::map_points;
pub use sweep::{
    admissible_times, convergence_study, residual_sweep, standard_sweep_grid, ComponentOrder, ComponentSummary,
    ConvergenceReport, ResidualReport, EXACT_FLOOR, SCHEMA_VERSION,
};

use crate::error::Result;
use crate::exact::{column_divergence, ChemistryJet, DeformationJet, DerivativeJet, EvalOptions, FieldSample, Tensor2};
use crate::fd::{fd_biharmonic, fd_partial, fd_second, Axis, StencilSpec};
use crate::model::{NsParams, OldroydParams, PhaseFieldParams, PhaseVariant};
use crate::problem::{Family, OldroydForm, Problem};
use crate::scalar::Scalar;

/// How derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode<S> {
    Analytic,
    FiniteDifference(StencilSpec<S>),
}

impl<S: Scalar> Mode<S> {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Analytic => "analytic",
            Mode::FiniteDifference(_) => "fd",
        }
    }

    pub fn stencil(&self) -> Option<&StencilSpec<S>> {
        match self {
            Mode::Analytic => None,
            Mode::FiniteDifference(spec) => Some(spec),
        }
    }
}

/// One scalar equation's residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualComponent<S> {
    pub name: &'static str,
    pub value: S,
    /// Largest magnitude among the terms of the equation.
    pub scale: S,
}

impl<S: Scalar> ResidualComponent<S> {
    pub fn relative(&self) -> S {
        self.value.abs() / self.scale.max(S::one())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualVector<S> {
    pub components: Vec<ResidualComponent<S>>,
}

impl<S: Scalar> ResidualVector<S> {
    pub fn get(&self, name: &str) -> Option<&ResidualComponent<S>> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn max_relative(&self) -> S {
        self.components
            .iter()
            .map(ResidualComponent::relative)
            .fold(S::zero(), S::max)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.components.iter().map(|c| c.name).collect()
    }
}

const MOMENTUM: [&str; 3] = ["momentum_1", "momentum_2", "momentum_3"];
const TRANSPORT_PHI: [&str; 2] = ["transport_phi_1", "transport_phi_2"];
const DEFORMATION_TRANSPORT: [[&str; 2]; 2] = [
    ["deformation_transport_11", "deformation_transport_12"],
    ["deformation_transport_21", "deformation_transport_22"],
];
const DIV_F: [&str; 2] = ["div_F_1", "div_F_2"];

/// Running sum of the terms of one equation.
struct Terms<S> {
    sum: S,
    scale: S,
}

impl<S: Scalar> Terms<S> {
    fn new() -> Self {
        Terms {
            sum: S::zero(),
            scale: S::zero(),
        }
    }

    fn add(&mut self, v: S) -> &mut Self {
        self.sum = self.sum + v;
        self.scale = self.scale.max(v.abs());
        self
    }

    /// Adds each product `a_j b_j` as its own term.
    fn add_dot(&mut self, a: &[S], b: &[S]) -> &mut Self {
        self.add_scaled_dot(S::one(), a, b)
    }

    fn add_scaled_dot(&mut self, c: S, a: &[S], b: &[S]) -> &mut Self {
        for (x, y) in a.iter().zip(b) {
            self.add(c * *x * *y);
        }
        self
    }

    fn finish(&self, name: &'static str) -> ResidualComponent<S> {
        ResidualComponent {
            name,
            value: self.sum,
            scale: self.scale,
        }
    }
}

enum Stress<S> {
    None,
    /// `+λ ∇·(∇φ⊗∇φ)` with `(∇φ⊗∇φ)_ij = Σ_a ∂_iφ_a ∂_jφ_a`.
    Potential(S),
    /// `−λ ∇·(FFᵀ)`.
    Deformation(S),
}

/// `u_t + (u·∇)u + ∇p − νΔu + stress`, one component per velocity entry.
fn momentum<S: Scalar>(jet: &DerivativeJet<S>, grad_p: &[S], nu: S, stress: Stress<S>) -> Vec<ResidualComponent<S>> {
    let d = jet.dim();
    (0..d)
        .map(|i| {
            let mut terms = Terms::new();
            terms
                .add(jet.u_t[i])
                .add_dot(&jet.u, &jet.grad_u[i])
                .add(grad_p[i])
                .add(-nu * jet.lap_u[i]);
            match &stress {
                Stress::None => {}
                Stress::Potential(lambda) => {
                    for a in 0..jet.phi.len() {
                        let g = &jet.grad_phi[a];
                        terms.add_scaled_dot(*lambda, &jet.hess_phi[a][i], g);
                        terms.add(*lambda * g[i] * jet.lap_phi[a]);
                    }
                }
                Stress::Deformation(lambda) => {
                    let def = jet.deformation.as_ref().expect("deformation jet present");
                    terms.add(-*lambda * def.div_fft[i]);
                }
            }
            terms.finish(MOMENTUM[i])
        })
        .collect()
}

fn divergence<S: Scalar>(jet: &DerivativeJet<S>) -> ResidualComponent<S> {
    let mut terms = Terms::new();
    for i in 0..jet.dim() {
        terms.add(jet.grad_u[i][i]);
    }
    terms.finish("div_u")
}

/// `φ_t + u·∇φ` for potential entry `a`, without the closing term.
fn advected<S: Scalar>(jet: &DerivativeJet<S>, a: usize) -> Terms<S> {
    let mut terms = Terms::new();
    terms.add(jet.phi_t[a]).add_dot(&jet.u, &jet.grad_phi[a]);
    terms
}

fn oldroyd_transformed<S: Scalar>(p: &OldroydParams<S>, jet: &DerivativeJet<S>) -> ResidualVector<S> {
    let mut components = momentum(jet, &jet.grad_pressure, p.nu, Stress::Potential(p.lambda));
    components.push(divergence(jet));
    for (a, name) in TRANSPORT_PHI.iter().enumerate() {
        components.push(advected(jet, a).finish(name));
    }
    ResidualVector { components }
}

fn oldroyd_original<S: Scalar>(p: &OldroydParams<S>, jet: &DerivativeJet<S>) -> ResidualVector<S> {
    let def = jet.deformation.as_ref().expect("deformation jet present");
    let mut components = momentum(jet, &def.grad_original_pressure, p.nu, Stress::Deformation(p.lambda));
    components.push(divergence(jet));
    for i in 0..2 {
        for j in 0..2 {
            let mut terms = Terms::new();
            terms.add(def.f_t[i][j]);
            for k in 0..2 {
                terms.add(jet.u[k] * def.grad_f[k][i][j]);
            }
            for k in 0..2 {
                terms.add(-jet.grad_u[i][k] * def.f[k][j]);
            }
            components.push(terms.finish(DEFORMATION_TRANSPORT[i][j]));
        }
    }
    for (j, name) in DIV_F.iter().enumerate() {
        let mut terms = Terms::new();
        for i in 0..2 {
            terms.add(def.grad_f[i][i][j]);
        }
        components.push(terms.finish(name));
    }
    ResidualVector { components }
}

fn navier_stokes<S: Scalar>(p: &NsParams<S>, jet: &DerivativeJet<S>) -> ResidualVector<S> {
    let mut components = momentum(jet, &jet.grad_pressure, p.nu, Stress::None);
    components.push(divergence(jet));
    ResidualVector { components }
}

fn phase_field<S: Scalar>(p: &PhaseFieldParams<S>, jet: &DerivativeJet<S>) -> ResidualVector<S> {
    let mut components = momentum(jet, &jet.grad_pressure, p.nu, Stress::Potential(p.lambda));
    components.push(divergence(jet));
    let chem = jet.chemistry.as_ref().expect("chemistry jet present");
    let mut phase = advected(jet, 0);
    match p.variant {
        PhaseVariant::AllenCahn => {
            phase.add(-p.gamma * jet.lap_phi[0]).add(p.gamma * chem.well);
        }
        PhaseVariant::CahnHilliard => {
            let bilap = chem.bilap_phi.expect("Cahn-Hilliard jet carries Δ²φ");
            let lap_well = chem.lap_well.expect("Cahn-Hilliard jet carries Δf(φ)");
            phase.add(p.gamma * bilap).add(-p.gamma * lap_well);
        }
        PhaseVariant::TransportOnly => {}
    }
    components.push(phase.finish("phase"));
    ResidualVector { components }
}

/// Residual of the problem's equations given a jet of its fields.
pub fn assemble<S: Scalar>(problem: &Problem<S>, jet: &DerivativeJet<S>) -> ResidualVector<S> {
    match (&problem.family, problem.form) {
        (Family::Oldroyd(p), OldroydForm::Transformed) => oldroyd_transformed(p, jet),
        (Family::Oldroyd(p), OldroydForm::Original) => oldroyd_original(p, jet),
        (Family::NavierStokes { params, .. }, _) => navier_stokes(params, jet),
        (Family::PhaseField(p), _) => phase_field(p, jet),
    }
}

/// Positions of each field inside the flattened sample vector.
struct Layout {
    dim: usize,
    pressure: usize,
    original_pressure: Option<usize>,
    phi: usize,
    phi_len: usize,
    deformation: Option<usize>,
    well: Option<usize>,
}

impl Layout {
    fn for_family<S: Scalar>(family: &Family<S>) -> Self {
        let dim = family.dim();
        let pressure = dim;
        match family {
            Family::Oldroyd(_) => Layout {
                dim,
                pressure,
                original_pressure: Some(pressure + 1),
                phi: pressure + 2,
                phi_len: 2,
                // F then FFᵀ, row-major
                deformation: Some(pressure + 4),
                well: None,
            },
            Family::NavierStokes { .. } => Layout {
                dim,
                pressure,
                original_pressure: None,
                phi: pressure + 1,
                phi_len: 0,
                deformation: None,
                well: None,
            },
            Family::PhaseField(_) => Layout {
                dim,
                pressure,
                original_pressure: None,
                phi: pressure + 1,
                phi_len: 1,
                deformation: None,
                well: Some(pressure + 2),
            },
        }
    }

    fn flatten<S: Scalar>(&self, family: &Family<S>, s: FieldSample<S>) -> Vec<S> {
        let mut v = s.u;
        v.push(s.pressure);
        if let Some(p) = s.original_pressure {
            v.push(p);
        }
        v.extend_from_slice(&s.phi);
        if let Some(f) = s.deformation {
            v.extend(f.iter().flatten());
            for i in 0..2 {
                for j in 0..2 {
                    v.push(f[i][0] * f[j][0] + f[i][1] * f[j][1]);
                }
            }
        }
        if let Family::PhaseField(p) = family {
            let phi = s.phi[0];
            v.push((phi * phi * phi - phi) / (p.epsilon * p.epsilon));
        }
        v
    }
}

fn tensor_at<S: Scalar>(v: &[S], at: usize) -> Tensor2<S> {
    [[v[at], v[at + 1]], [v[at + 2], v[at + 3]]]
}

/// Builds a jet by centered differences of the family's evaluator.
pub fn fd_jet<S: Scalar>(problem: &Problem<S>, x: &[S], t: S, spec: &StencilSpec<S>) -> Result<DerivativeJet<S>> {
    spec.validate()?;
    let family = &problem.family;
    let opts: EvalOptions = problem.opts;
    let layout = Layout::for_family(family);
    let d = layout.dim;
    let field = |y: &[S], s: S| -> Result<Vec<S>> { Ok(layout.flatten(family, family.eval(y, s, opts)?)) };

    let v = field(x, t)?;
    let vt: Vec<S> = fd_partial(&field, x, t, Axis::Time, spec)?;
    let grad: Vec<Vec<S>> = (0..d)
        .map(|j| fd_partial(&field, x, t, Axis::Space(j), spec))
        .collect::<Result<_>>()?;
    let mut hess: Vec<Vec<Vec<S>>> = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in i..d {
            let h: Vec<S> = fd_second(&field, x, t, Axis::Space(i), Axis::Space(j), spec)?;
            hess[j][i] = h.clone();
            hess[i][j] = h;
        }
    }
    let lap = |c: usize| (0..d).fold(S::zero(), |acc, i| acc + hess[i][i][c]);

    let phis = layout.phi..layout.phi + layout.phi_len;
    let deformation = match (layout.deformation, layout.original_pressure) {
        (Some(at), Some(op)) => {
            let grad_f: [Tensor2<S>; 2] = std::array::from_fn(|k| tensor_at(&grad[k], at));
            let fft = at + 4;
            Some(DeformationJet {
                original_pressure: v[op],
                grad_original_pressure: (0..d).map(|j| grad[j][op]).collect(),
                f: tensor_at(&v, at),
                f_t: tensor_at(&vt, at),
                div_f: column_divergence(&grad_f),
                div_fft: std::array::from_fn(|i| (0..2).fold(S::zero(), |acc, j| acc + grad[j][fft + 2 * i + j])),
                grad_f,
            })
        }
        _ => None,
    };
    let chemistry = match (family, layout.well) {
        (Family::PhaseField(p), Some(w)) => {
            let (lap_well, bilap_phi) = if p.variant == PhaseVariant::CahnHilliard {
                let phase = |y: &[S], s: S| -> Result<S> { Ok(family.eval(y, s, opts)?.phi[0]) };
                (Some(lap(w)), Some(fd_biharmonic(&phase, x, t, spec)?))
            } else {
                (None, None)
            };
            Some(ChemistryJet {
                well: v[w],
                lap_well,
                bilap_phi,
            })
        }
        _ => None,
    };

    Ok(DerivativeJet {
        u: v[..d].to_vec(),
        u_t: vt[..d].to_vec(),
        grad_u: (0..d).map(|i| (0..d).map(|j| grad[j][i]).collect()).collect(),
        lap_u: (0..d).map(lap).collect(),
        pressure: v[layout.pressure],
        grad_pressure: (0..d).map(|j| grad[j][layout.pressure]).collect(),
        phi: v[phis.clone()].to_vec(),
        phi_t: vt[phis.clone()].to_vec(),
        grad_phi: phis.clone().map(|a| (0..d).map(|j| grad[j][a]).collect()).collect(),
        hess_phi: phis
            .clone()
            .map(|a| (0..d).map(|i| (0..d).map(|j| hess[i][j][a]).collect()).collect())
            .collect(),
        lap_phi: phis.map(lap).collect(),
        chemistry,
        deformation,
    })
}

/// Jet of the problem's fields at `(x, t)` in the requested mode.
pub fn jet_at<S: Scalar>(problem: &Problem<S>, x: &[S], t: S, mode: &Mode<S>) -> Result<DerivativeJet<S>> {
    match mode {
        Mode::Analytic => problem.family.jet(x, t, problem.opts),
        Mode::FiniteDifference(spec) => fd_jet(problem, x, t, spec),
    }
}

/// Residual of the problem's equations at `(x, t)`.
pub fn residual_at<S: Scalar>(problem: &Problem<S>, x: &[S], t: S, mode: &Mode<S>) -> Result<ResidualVector<S>> {
    Ok(assemble(problem, &jet_at(problem, x, t, mode)?))
}

/// Momentum, `∇·u` and potential transport of the transformed Oldroyd-B
/// system.
pub fn residual_oldroyd_transformed<S: Scalar>(
    p: &OldroydParams<S>,
    x: &[S],
    t: S,
    mode: &Mode<S>,
) -> Result<ResidualVector<S>> {
    residual_at(&Problem::new(Family::oldroyd(*p)?), x, t, mode)
}

/// Momentum with `p`, `∇·u`, deformation transport and `∇·F` of the
/// original Oldroyd-B system.
pub fn residual_oldroyd_original<S: Scalar>(
    p: &OldroydParams<S>,
    x: &[S],
    t: S,
    mode: &Mode<S>,
) -> Result<ResidualVector<S>> {
    let problem = Problem::new(Family::oldroyd(*p)?).with_form(OldroydForm::Original);
    residual_at(&problem, x, t, mode)
}

pub fn residual_ns<S: Scalar>(p: &NsParams<S>, x: &[S], t: S, mode: &Mode<S>, dim: usize) -> Result<ResidualVector<S>> {
    residual_at(&Problem::new(Family::navier_stokes(*p, dim)?), x, t, mode)
}

pub fn residual_nsac<S: Scalar>(p: &PhaseFieldParams<S>, x: &[S], t: S, mode: &Mode<S>) -> Result<ResidualVector<S>> {
    residual_at(&Problem::new(Family::phase_field(*p)?), x, t, mode)
}
