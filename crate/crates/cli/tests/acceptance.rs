//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use blowup_core::diagnostics::{blowup_profile, check_assumptions, deformation_metrics, fit_exponent};
use blowup_core::ode::compare_ode;
use blowup_core::residual::{convergence_study, residual_at, residual_sweep, standard_sweep_grid, Mode};
use blowup_core::{
    blow_up_time, make_grid, Approach, AssumptionStatus, AuditConfig, Diagnostic, EvalOptions, Family, GridSpec,
    OldroydForm, OldroydParams, Perturbation, PhaseFieldParams, PhaseVariant, Problem, StencilSpec, System,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const BIN: &str = env!("CARGO_BIN_EXE_blowup-lab");

const AC1_TOL: f64 = 1e-10;
const AC1_SECONDS: f64 = 5.0;
const AC2_MOMENTUM_TOL: f64 = 1e-12;
const AC2_DEFORMATION_TOL: f64 = 1e-10;
const AC3_TOL: f64 = 1e-9;
const AC4_STEPS: [f64; 3] = [4e-3, 2e-3, 1e-3];
const AC4_SLOPE: f64 = 2.0;
const AC4_SLOPE_TOL: f64 = 0.1;
const AC4_CONTROL_MIN: f64 = 1e-2;
const AC5_DT: f64 = 1e-4;
const AC5_TOL: f64 = 1e-8;
const AC5_RATIO: f64 = 16.0;
const AC5_RATIO_TOL: f64 = 3.0;
const AC6_TOL: f64 = 0.01;
const AC7_DET_TOL: f64 = 1e-12;
const AC7_SAMPLES: u32 = 1000;
const AC7_ANISOTROPY_REL: f64 = 1e-3;

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn oldroyd(f0: f64, alpha: f64, beta: f64) -> OldroydParams<f64> {
    OldroydParams {
        f0,
        alpha,
        beta,
        nu: 1.0,
        lambda: 1.0,
    }
}

fn reference_oldroyd() -> Family<f64> {
    Family::oldroyd(oldroyd(1.0, 3.0, 1.0)).unwrap()
}

/// `f₀ ∈ {±1, 2}`, `(α, β) ∈ {(3,1), (1,3), (2,−1)}`, blow-up cases only.
fn parameter_matrix() -> Vec<OldroydParams<f64>> {
    let mut out = Vec::new();
    for f0 in [1.0, -1.0, 2.0] {
        for (a, b) in [(3.0, 1.0), (1.0, 3.0), (2.0, -1.0)] {
            let p = oldroyd(f0, a, b);
            if blow_up_time(&p).finite().is_some() {
                out.push(p);
            }
        }
    }
    out
}

fn phase(variant: PhaseVariant, dimension: usize) -> Family<f64> {
    let Family::PhaseField(base) = Family::<f64>::reference(System::Nsac2d) else {
        unreachable!()
    };
    let gamma = if variant == PhaseVariant::TransportOnly {
        0.0
    } else {
        1.0
    };
    Family::phase_field(PhaseFieldParams {
        variant,
        gamma,
        dimension,
        ..base
    })
    .unwrap()
}

fn label(problem: &Problem<f64>) -> String {
    format!("{}/{}", problem.family.system(), problem.equations())
}

fn ac1_grid() -> GridSpec<f64> {
    GridSpec::cube(2, -1.0, 1.0, 21, (0..10).map(|j| 0.05 * j as f64).collect())
}

fn ac1() -> Outcome {
    let problem = Problem::new(reference_oldroyd());
    let start = Instant::now();
    let report = residual_sweep(&problem, &ac1_grid(), &Mode::Analytic).unwrap();
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        report.max_rel <= AC1_TOL && secs < AC1_SECONDS,
        format!(
            "Oldroyd analytic sweep, {} points: max_rel {:.3e} <= {AC1_TOL:e}, {secs:.3} s < {AC1_SECONDS} s",
            report.points, report.max_rel
        ),
    )
}

fn ac2() -> Outcome {
    let transformed = Problem::new(reference_oldroyd());
    let original = transformed.with_form(OldroydForm::Original);
    let mut momentum_gap = 0.0f64;
    for pt in make_grid(&ac1_grid()).unwrap() {
        let a = residual_at(&transformed, &pt.x, pt.t, &Mode::Analytic).unwrap();
        let b = residual_at(&original, &pt.x, pt.t, &Mode::Analytic).unwrap();
        for name in ["momentum_1", "momentum_2"] {
            let (ca, cb) = (a.get(name).unwrap(), b.get(name).unwrap());
            momentum_gap = momentum_gap.max((ca.value - cb.value).abs() / ca.scale.max(cb.scale).max(1.0));
        }
    }
    let report = residual_sweep(&original, &ac1_grid(), &Mode::Analytic).unwrap();
    let deformation = report
        .components
        .iter()
        .filter(|c| c.name.starts_with("deformation_transport") || c.name.starts_with("div_F"))
        .map(|c| c.sup_rel)
        .fold(0.0, f64::max);
    Outcome::new(
        momentum_gap <= AC2_MOMENTUM_TOL && deformation <= AC2_DEFORMATION_TOL,
        format!(
            "original vs transformed momentum gap {momentum_gap:.3e} <= {AC2_MOMENTUM_TOL:e}; \
             deformation transport and div F {deformation:.3e} <= {AC2_DEFORMATION_TOL:e}"
        ),
    )
}

fn ac3() -> Outcome {
    let mut problems = vec![
        Problem::new(Family::reference(System::Ns2d)),
        Problem::new(Family::reference(System::Ns3d)),
    ];
    for dim in [2, 3] {
        for v in [
            PhaseVariant::AllenCahn,
            PhaseVariant::CahnHilliard,
            PhaseVariant::TransportOnly,
        ] {
            problems.push(Problem::new(phase(v, dim)));
        }
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for problem in &problems {
        let grid = standard_sweep_grid(problem, 21 - 10 * (problem.family.dim() - 2), &Mode::Analytic);
        let report = residual_sweep(problem, &grid, &Mode::Analytic).unwrap();
        if report.max_rel > AC3_TOL {
            pass = false;
            let w = report.worst().unwrap();
            parts.push(format!(
                "{} FAILS: {} = {:.3e} at x = {:?}, t = {}",
                label(problem),
                w.name,
                w.sup_rel,
                w.worst_point,
                w.worst_time
            ));
        } else {
            parts.push(format!("{} {:.1e}", label(problem), report.max_rel));
        }
    }
    Outcome::new(pass, format!("analytic max_rel <= {AC3_TOL:e}: {}", parts.join(", ")))
}

fn convergence_slopes(problem: &Problem<f64>) -> (Option<f64>, Option<f64>, bool) {
    let base = StencilSpec::new(AC4_STEPS[0], AC4_STEPS[0], 2).unwrap();
    let coarse = if problem.family.dim() == 2 { 11 } else { 7 };
    let grid = standard_sweep_grid(problem, coarse, &Mode::FiniteDifference(base));
    let report = convergence_study(problem, &grid, &base, &AC4_STEPS).unwrap();
    (
        report.min_slope,
        report.max_slope,
        report.slopes_within(AC4_SLOPE, AC4_SLOPE_TOL),
    )
}

fn ac4() -> Outcome {
    let mut gated = vec![
        Problem::new(reference_oldroyd()),
        Problem::new(reference_oldroyd()).with_form(OldroydForm::Original),
    ];
    gated.extend(
        [System::Ns2d, System::Ns3d, System::Nsac2d, System::Nsac3d].map(|s| Problem::new(Family::reference(s))),
    );
    gated.push(Problem::new(phase(PhaseVariant::TransportOnly, 2)));
    gated.push(Problem::new(phase(PhaseVariant::TransportOnly, 3)));

    let mut pass = true;
    let mut parts = Vec::new();
    for problem in &gated {
        let (lo, hi, ok) = convergence_slopes(problem);
        pass &= ok;
        parts.push(format!(
            "{} [{:.3}, {:.3}]",
            label(problem),
            lo.unwrap_or(f64::NAN),
            hi.unwrap_or(f64::NAN)
        ));
    }
    // the composed biharmonic is roundoff-limited at the finest step; reported only
    for dim in [2, 3] {
        let problem = Problem::new(phase(PhaseVariant::CahnHilliard, dim));
        let (lo, hi, _) = convergence_slopes(&problem);
        parts.push(format!(
            "(info) {} [{:.3}, {:.3}]",
            label(&problem),
            lo.unwrap_or(f64::NAN),
            hi.unwrap_or(f64::NAN)
        ));
    }

    let controls = [
        (reference_oldroyd(), Perturbation::FlippedExponent),
        (Family::reference(System::Nsac2d), Perturbation::SlowWave),
        (Family::reference(System::Nsac3d), Perturbation::SlowWave),
        (phase(PhaseVariant::TransportOnly, 2), Perturbation::SlowWave),
        (Family::reference(System::Ns2d), Perturbation::FlippedAmplitudeSign),
        (Family::reference(System::Ns3d), Perturbation::FlippedAmplitudeSign),
    ];
    for (family, perturbation) in controls {
        let problem = Problem::new(family).with_options(EvalOptions {
            perturbation,
            ..Default::default()
        });
        let grid = standard_sweep_grid(&problem, 11, &Mode::Analytic);
        let report = residual_sweep(&problem, &grid, &Mode::Analytic).unwrap();
        pass &= report.max_rel >= AC4_CONTROL_MIN;
        parts.push(format!(
            "control {} {}: {:.3e}",
            label(&problem),
            serde_json::to_string(&perturbation).unwrap().trim_matches('"'),
            report.max_rel
        ));
    }
    Outcome::new(
        pass,
        format!(
            "FD slopes within {AC4_SLOPE} ± {AC4_SLOPE_TOL}, controls >= {AC4_CONTROL_MIN:e}: {}",
            parts.join("; ")
        ),
    )
}

fn ac5() -> Outcome {
    let mut pass = true;
    let mut worst = 0.0f64;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let matrix = parameter_matrix();
    for p in &matrix {
        let t_end = 0.9 * blow_up_time(p).finite().unwrap();
        let r = compare_ode(p, t_end, AC5_DT).unwrap();
        worst = worst.max(r.max);
        let coarse = compare_ode(p, t_end, 1e-3).unwrap().max;
        let fine = compare_ode(p, t_end, 5e-4).unwrap().max;
        let ratio = coarse / fine;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        pass &= r.max <= AC5_TOL && (ratio - AC5_RATIO).abs() <= AC5_RATIO_TOL;
    }
    Outcome::new(
        pass,
        format!(
            "{} parameter sets: RK4 dt={AC5_DT:e} max error {worst:.3e} <= {AC5_TOL:e}; halving ratio in [{lo:.2}, {hi:.2}] ⊂ {AC5_RATIO} ± {AC5_RATIO_TOL}",
            matrix.len()
        ),
    )
}

fn ac6() -> Outcome {
    let approach = Approach { count: 12, ratio: 0.5 };
    let mut pass = true;
    let mut parts = Vec::new();
    for p in parameter_matrix() {
        let family = Family::oldroyd(p).unwrap();
        let s = blowup_profile(&family, &[1.0, 1.0], approach, Diagnostic::VelocityNorm).unwrap();
        let slope = fit_exponent(&s, s.t_blow).unwrap().slope;
        pass &= (slope + 1.0).abs() <= AC6_TOL;
        parts.push(format!("oldroyd(f0={},α={},β={}) {slope:.4}", p.f0, p.alpha, p.beta));
    }
    for sys in [System::Ns2d, System::Ns3d, System::Nsac2d, System::Nsac3d] {
        let family = Family::reference(sys);
        let s = blowup_profile(&family, &vec![0.0; sys.dim()], approach, Diagnostic::VelocityNorm).unwrap();
        let slope = fit_exponent(&s, s.t_blow).unwrap().slope;
        pass &= (slope + 0.5).abs() <= AC6_TOL;
        parts.push(format!("{sys} {slope:.4}"));
    }
    Outcome::new(
        pass,
        format!(
            "exponents −1 (Oldroyd) / −0.5 (s = 0) within ±{AC6_TOL}: {}",
            parts.join(", ")
        ),
    )
}

fn ac7() -> Outcome {
    let matrix = parameter_matrix();
    let strategy = (0..matrix.len(), 0.0f64..0.999);
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: AC7_SAMPLES,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let worst = std::cell::Cell::new(0.0f64);
    let det = runner.run(&strategy, |(i, frac)| {
        let p = matrix[i];
        let t = frac * blow_up_time(&p).finite().unwrap();
        let gap = (deformation_metrics(&p, t).unwrap().det - 1.0).abs();
        worst.set(worst.get().max(gap));
        prop_assert!(gap <= AC7_DET_TOL, "det gap {} at t = {}", gap, t);
        Ok(())
    });
    let p = oldroyd(1.0, 3.0, 1.0);
    let t_star = blow_up_time(&p).finite().unwrap();
    let anisotropy = deformation_metrics(&p, t_star * (1.0 - 1e-3)).unwrap().anisotropy;
    let worst = worst.get();
    let aniso_ok = ((anisotropy - 1e3) / 1e3).abs() <= AC7_ANISOTROPY_REL;
    Outcome::new(
        det.is_ok() && aniso_ok,
        format!(
            "det F gap {worst:.3e} <= {AC7_DET_TOL:e} on {AC7_SAMPLES} samples{}; anisotropy at t*(1 − 1e-3) = {anisotropy:.6} (1e3 ± 0.1%)",
            det.err().map(|e| format!(" ({e})")).unwrap_or_default()
        ),
    )
}

fn lab(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn error_kind(out: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap_or_default();
    v["error"]["kind"].as_str().unwrap_or("").to_string()
}

fn ac8() -> Outcome {
    let mut failures = Vec::new();
    let audit = AuditConfig::default();
    let blow = check_assumptions(&reference_oldroyd(), &audit).unwrap();
    let a2 = blow.a2.as_ref().unwrap();
    let zero_a2 = a2.witnesses.iter().all(|w| w.values.iter().all(|v| *v == 0.0));
    if !(a2.status == AssumptionStatus::Satisfied
        && zero_a2
        && blow.a1.status == AssumptionStatus::Violated
        && blow.a3.status == AssumptionStatus::SurrogateViolated)
    {
        failures.push("blow-up data statuses".to_string());
    }
    let calm = check_assumptions(&Family::oldroyd(oldroyd(0.0, 3.0, 1.0)).unwrap(), &audit).unwrap();
    if !(calm.a1.status == AssumptionStatus::Satisfied
        && calm.a2.unwrap().status == AssumptionStatus::Satisfied
        && calm.a2_prime.unwrap().status == AssumptionStatus::Satisfied
        && calm.a3.status == AssumptionStatus::SurrogateSatisfied
        && calm.a3_prime.unwrap().status == AssumptionStatus::SurrogateSatisfied)
    {
        failures.push("zero data statuses".to_string());
    }

    let dir = tempfile::tempdir().unwrap();
    let degenerate = dir.path().join("alpha-equals-beta.json");
    std::fs::write(&degenerate, r#"{"f0":1,"alpha":2,"beta":2,"nu":1,"lambda":1}"#).unwrap();
    let degenerate = degenerate.to_str().unwrap();
    let checks: [(&[&str], i32, Option<&str>); 6] = [
        (&["verify", "--system", "oldroyd", "--mode", "analytic"], 0, None),
        (
            &["verify", "--system", "oldroyd", "--perturb", "flipped-exponent"],
            1,
            None,
        ),
        (
            &["verify", "--system", "oldroyd", "--params", degenerate],
            2,
            Some("DegenerateSeparation"),
        ),
        (&["ode-check", "--system", "oldroyd"], 0, None),
        (&["assumptions", "--system", "oldroyd"], 0, None),
        (&["verify", "--system", "ns5d"], 2, Some("Usage")),
    ];
    for (args, code, kind) in checks {
        let out = lab(args);
        let got = out.status.code().unwrap_or(-1);
        if got != code || kind.is_some_and(|k| error_kind(&out) != k) {
            failures.push(format!("`{}` exit {got} ({})", args.join(" "), error_kind(&out)));
        }
    }

    let reruns: [&[&str]; 4] = [
        &["verify", "--system", "nsac2d", "--mode", "fd"],
        &["eval", "--system", "oldroyd", "--grid", "-1:1:5"],
        &[
            "blowup-profile",
            "--system",
            "ns2d",
            "--point",
            "0,0",
            "--ratio",
            "0.5",
            "--count",
            "12",
        ],
        &["assumptions", "--system", "oldroyd"],
    ];
    for args in reruns {
        let (a, b) = (lab(args), lab(args));
        if a.stdout.is_empty() || a.stdout != b.stdout {
            failures.push(format!("`{}` not byte-identical", args.join(" ")));
        }
    }

    let config = dir.path().join("config.json");
    let dumped = lab(&["verify", "--system", "ns3d", "--mode", "fd", "--dump-config"]);
    std::fs::write(&config, &dumped.stdout).unwrap();
    let replay = lab(&["run", "--config", path_str(&config)]);
    let direct = lab(&["verify", "--system", "ns3d", "--mode", "fd"]);
    if replay.stdout != direct.stdout || replay.status.code() != Some(0) {
        failures.push("dump-config replay differs".to_string());
    }

    Outcome::new(
        failures.is_empty(),
        if failures.is_empty() {
            "A2 satisfied (zero witnesses), A1 violated, A3 surrogate-violated on L = {1,2,4,8}; f0 = 0 all satisfied; \
             exit codes 0/1/2, byte-identical reruns and config replay verified"
                .to_string()
        } else {
            format!("failures: {}", failures.join("; "))
        },
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn main() {
    let criteria: [(&str, &str, Check); 8] = [
        ("AC1", "Oldroyd exactness", ac1),
        ("AC2", "original-form equivalence", ac2),
        ("AC3", "Navier-Stokes and phase-field exactness", ac3),
        ("AC4", "finite-difference cross-check", ac4),
        ("AC5", "ODE reduction", ac5),
        ("AC6", "blow-up rates", ac6),
        ("AC7", "deformation structure", ac7),
        ("AC8", "assumption audit and CLI contract", ac8),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        let outcome = check();
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "{id} {} {title}: {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
