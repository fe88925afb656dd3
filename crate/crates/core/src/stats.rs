//! Ordinary least squares for log-log slope fits.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; 0 for an exact fit.
    pub slope_stderr: f64,
}

/// Fits `y = intercept + slope·x`. Needs at least three points so the
/// slope's standard error is defined.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let n = xs.len().min(ys.len());
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidParameter {
            name: "abscissae",
            reason: "all sample abscissae coincide".into(),
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr: (ssr / (nf - 2.0) / sxx).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 - 2.0 * x).collect();
        let fit = least_squares(&xs, &ys).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-14);
        assert!((fit.intercept - 1.5).abs() < 1e-14);
        assert!(fit.slope_stderr < 1e-14);
    }

    #[test]
    fn too_few() {
        assert_eq!(
            least_squares(&[0.0, 1.0], &[0.0, 1.0]).unwrap_err().kind(),
            "TooFewPoints"
        );
    }
}
