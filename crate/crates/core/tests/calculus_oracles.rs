use blowup_core::fd::{convergence_order, fd_biharmonic, fd_laplacian, fd_partial, fd_second, FdOperator};
use blowup_core::{Axis, Result, StencilSpec};

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
fn first_derivative_examples() {
    for h in [0.5, 0.125, 2f64.powi(-12)] {
        let d: f64 = fd_partial(&square, &[1.0], 0.0, Axis::Space(0), &spec(h, 2)).unwrap();
        assert_eq!(d, 2.0);
    }
    let d: f64 = fd_partial(&sine, &[0.0], 0.0, Axis::Space(0), &spec(1e-3, 2)).unwrap();
    assert!((d - 1.0).abs() <= 2e-7);
    assert_eq!(StencilSpec::new(0.0, 1e-3, 2).unwrap_err().kind(), "InvalidStencil");
    assert_eq!(StencilSpec::new(1e-3, 1e-3, 3).unwrap_err().kind(), "InvalidStencil");
}

#[test]
fn second_order_operator_examples() {
    let d: f64 = fd_second(&square, &[0.375], 0.0, Axis::Space(0), Axis::Space(0), &spec(0.125, 2)).unwrap();
    assert_eq!(d, 2.0);
    let bowl = |x: &[f64], _t: f64| -> Result<f64> { Ok(x[0] * x[0] + x[1] * x[1]) };
    let lap: f64 = fd_laplacian(&bowl, &[0.25, -0.5], 0.0, &spec(0.125, 2)).unwrap();
    assert_eq!(lap, 4.0);
    let at_zero: f64 = fd_biharmonic(&sine, &[0.0], 0.0, &spec(1e-2, 2)).unwrap();
    assert!(at_zero.abs() <= 1e-5);
    let at_peak: f64 = fd_biharmonic(&sine, &[std::f64::consts::FRAC_PI_2], 0.0, &spec(1e-2, 2)).unwrap();
    assert!((at_peak - 1.0).abs() <= 1e-3);
}

#[test]
fn footprint_outside_domain_is_reported() {
    let guarded = |_x: &[f64], t: f64| -> Result<f64> {
        if t >= 0.5 {
            Err(blowup_core::Error::OutOfDomain { t, limit: 0.5 })
        } else {
            Ok(t)
        }
    };
    let err = fd_partial::<f64, f64, _>(&guarded, &[0.0], 0.4995, Axis::Time, &spec(1e-3, 2)).unwrap_err();
    assert_eq!(err.kind(), "FootprintOutOfDomain");
}

#[test]
fn convergence_order_examples() {
    let h = [1e-1, 5e-2, 2.5e-2];
    let est = convergence_order(&sine, 1.0, FdOperator::Partial(Axis::Space(0)), &[0.0], 0.0, &h, 2).unwrap();
    assert!((est.slope - 2.0).abs() <= 0.1, "{}", est.slope);
    let est = convergence_order(&sine, 1.0, FdOperator::Partial(Axis::Space(0)), &[0.0], 0.0, &h, 4).unwrap();
    assert!((est.slope - 4.0).abs() <= 0.2, "{}", est.slope);
    let err = convergence_order(&square, 2.0, FdOperator::Partial(Axis::Space(0)), &[1.0], 0.0, &h, 2).unwrap_err();
    assert_eq!(err.kind(), "ZeroError");
    let err = convergence_order(&sine, 1.0, FdOperator::Partial(Axis::Space(0)), &[0.0], 0.0, &h[..2], 2).unwrap_err();
    assert_eq!(err.kind(), "TooFewPoints");
}
