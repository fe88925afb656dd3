use blowup_core::residual::{
    residual_ns, residual_nsac, residual_oldroyd_original, residual_oldroyd_transformed, residual_sweep,
    standard_sweep_grid, Mode,
};
use blowup_core::{
    convergence_study, EvalOptions, Family, GridSpec, NsParams, OldroydForm, OldroydParams, Perturbation,
    PhaseFieldParams, PhaseVariant, Problem, StencilSpec, System,
};

fn oldroyd() -> OldroydParams<f64> {
    OldroydParams {
        f0: 1.0,
        alpha: 3.0,
        beta: 1.0,
        nu: 1.0,
        lambda: 1.0,
    }
}

fn ns(c1: f64, c2: f64) -> NsParams<f64> {
    NsParams {
        t_blow: 1.0,
        nu: 1.0,
        c1,
        c2,
        c3: 0.0,
        c4: 0.0,
        c5: 0.0,
    }
}

fn phase(variant: PhaseVariant, gamma: f64) -> PhaseFieldParams<f64> {
    PhaseFieldParams {
        t_blow: 1.0,
        nu: 1.0,
        c1: 0.0,
        c2: 0.0,
        c3: 0.0,
        c4: 0.0,
        c5: 0.0,
        lambda: 1.0,
        gamma,
        epsilon: 0.1,
        dimension: 2,
        variant,
    }
}

fn fd(h: f64) -> Mode<f64> {
    Mode::FiniteDifference(StencilSpec::new(h, h, 2).unwrap())
}

#[test]
fn oldroyd_point_examples() {
    let x = [1.0, 1.0];
    let r = residual_oldroyd_transformed(&oldroyd(), &x, 0.25, &Mode::Analytic).unwrap();
    assert_eq!(
        r.names(),
        [
            "momentum_1",
            "momentum_2",
            "div_u",
            "transport_phi_1",
            "transport_phi_2"
        ]
    );
    assert!(r.max_relative() <= 1e-10);

    let o = residual_oldroyd_original(&oldroyd(), &x, 0.25, &Mode::Analytic).unwrap();
    assert!(o.max_relative() <= 1e-10);
    assert_eq!(o.get("div_F_1").unwrap().value, 0.0);
    assert_eq!(o.get("div_F_2").unwrap().value, 0.0);
    for name in ["momentum_1", "momentum_2"] {
        assert!((o.get(name).unwrap().value - r.get(name).unwrap().value).abs() <= 1e-12);
    }

    let r = residual_oldroyd_transformed(&oldroyd(), &x, 0.25, &fd(1e-3)).unwrap();
    assert!(r.max_relative() <= 1e-4);
}

#[test]
fn oldroyd_negative_control() {
    let problem = Problem::new(Family::oldroyd(oldroyd()).unwrap()).with_options(EvalOptions {
        perturbation: Perturbation::FlippedExponent,
        ..Default::default()
    });
    let r = blowup_core::residual_at(&problem, &[1.0, 1.0], 0.25, &Mode::Analytic).unwrap();
    assert!(r.max_relative() >= 1e-2);
}

#[test]
fn ns_examples() {
    let r = residual_ns(&ns(1.0, 0.3), &[0.1, -0.2], 0.5, &Mode::Analytic, 2).unwrap();
    assert_eq!(r.names(), ["momentum_1", "momentum_2", "div_u"]);
    assert!(r.max_relative() <= 1e-10);
    let r = residual_ns(&ns(0.0, 0.0), &[0.4, 0.7], 0.3, &Mode::Analytic, 2).unwrap();
    assert!(r.components.iter().all(|c| c.value.abs() <= 1e-12));
    for x in [[-1.0, 0.5], [0.9, 0.9], [0.0, -0.3]] {
        let r = residual_ns(&ns(1.0, 0.3), &x, 0.7, &Mode::Analytic, 2).unwrap();
        assert!(r.get("div_u").unwrap().value.abs() <= 1e-12);
    }
}

#[test]
fn nsac_examples() {
    let x = [0.3, 0.1];
    let ac = residual_nsac(&phase(PhaseVariant::AllenCahn, 1.0), &x, 0.5, &Mode::Analytic).unwrap();
    assert_eq!(ac.names(), ["momentum_1", "momentum_2", "div_u", "phase"]);
    assert!(ac.max_relative() <= 1e-9);
    let ch = residual_nsac(&phase(PhaseVariant::CahnHilliard, 1.0), &x, 0.5, &Mode::Analytic).unwrap();
    assert!(ch.get("phase").unwrap().relative() <= 1e-8);

    let problem =
        Problem::new(Family::phase_field(phase(PhaseVariant::TransportOnly, 0.0)).unwrap()).with_options(EvalOptions {
            perturbation: Perturbation::SlowWave,
            ..Default::default()
        });
    // kink of the slowed wave: s = 3√0.5
    let c = 1.5 * 0.5f64.sqrt();
    let r = blowup_core::residual_at(&problem, &[c, c], 0.5, &Mode::Analytic).unwrap();
    let phase_r = r.get("phase").unwrap();
    let expected = 5.0 * 0.5 / 0.5f64.sqrt();
    assert!((phase_r.value.abs() - expected).abs() <= 1e-9 * expected);
    assert!(phase_r.relative() >= 1e-1);
}

#[test]
fn sweep_examples() {
    let problem = Problem::new(Family::oldroyd(oldroyd()).unwrap());
    let grid = GridSpec::cube(2, -1.0, 1.0, 21, vec![0.0, 0.1, 0.2, 0.3, 0.4]);
    let report = residual_sweep(&problem, &grid, &Mode::Analytic).unwrap();
    assert!(report.max_rel <= 1e-10);
    assert_eq!(report.points, 21 * 21 * 5);

    let fd_grid = GridSpec::cube(2, -1.0, 1.0, 21, vec![0.1, 0.2, 0.3, 0.4]);
    let report = residual_sweep(&problem, &fd_grid, &fd(1e-3)).unwrap();
    // the leading truncation term is exactly 1e-4 at the corners of the last slice
    assert!(report.max_rel <= 1e-4 * (1.0 + 1e-3), "{}", report.max_rel);
    let study = convergence_study(&problem, &fd_grid, &StencilSpec::default(), &[4e-3, 2e-3, 1e-3]).unwrap();
    assert!(study.slopes_within(2.0, 0.1), "{:?}", study.components);

    let empty = GridSpec::cube(2, -1.0, 1.0, 21, vec![]);
    assert_eq!(
        residual_sweep(&problem, &empty, &Mode::Analytic).unwrap_err().kind(),
        "EmptyGrid"
    );
}

#[test]
fn every_family_vanishes_on_the_standard_sweep() {
    let mut problems: Vec<Problem<f64>> = System::ALL
        .iter()
        .map(|s| Problem::new(Family::reference(*s)))
        .collect();
    problems.push(Problem::new(Family::oldroyd(oldroyd()).unwrap()).with_form(OldroydForm::Original));
    for variant in [PhaseVariant::CahnHilliard, PhaseVariant::TransportOnly] {
        for dim in [2, 3] {
            let gamma = if variant == PhaseVariant::TransportOnly {
                0.0
            } else {
                1.0
            };
            let p = PhaseFieldParams {
                dimension: dim,
                ..phase(variant, gamma)
            };
            problems.push(Problem::new(Family::phase_field(p).unwrap()));
        }
    }
    for problem in problems {
        let grid = standard_sweep_grid(&problem, 7, &Mode::Analytic);
        let report = residual_sweep(&problem, &grid, &Mode::Analytic).unwrap();
        assert!(
            report.max_rel <= 1e-9,
            "{} {}: {}",
            report.system,
            report.equations,
            report.max_rel
        );
    }
}
