//! Small numeric helpers: angle wrapping, finite differences, and the
//! extrapolation rules used by the limit experiments.

use num_complex::Complex64 as Cx;
use std::f64::consts::{PI, TAU};

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    PI - (PI - x).rem_euclid(TAU)
}

/// Central difference `(f(x+h) - f(x-h)) / 2h`.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Richardson-extrapolated central difference: combines steps `h` and `h/2`
/// to cancel the leading `h^2` error term. Used when a derivative is
/// compared against zero and the plain stencil would dominate the signal.
pub fn central_diff_richardson(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d_h = central_diff(&f, x, h);
    let d_h2 = central_diff(&f, x, h / 2.0);
    (4.0 * d_h2 - d_h) / 3.0
}

/// Least-squares slope of `ln y` against `ln x`; inputs must be positive.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "slope needs at least two samples");
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Two-stage Richardson extrapolation for sequences of the form
/// `v(eps) = L + C sqrt(eps) + D eps + o(eps)`, evaluated at three
/// decreasing epsilons. The first stage cancels the `sqrt(eps)` term,
/// the second the `eps` term, leaving `L + O(eps^{3/2})`.
pub fn richardson_sqrt(eps: [f64; 3], v: [Cx; 3]) -> Cx {
    let r: [f64; 3] = [eps[0].sqrt(), eps[1].sqrt(), eps[2].sqrt()];
    let s01 = (v[1] * r[0] - v[0] * r[1]) / (r[0] - r[1]);
    let s12 = (v[2] * r[1] - v[1] * r[2]) / (r[1] - r[2]);
    let u01 = r[0] * r[1];
    let u12 = r[1] * r[2];
    (s12 * u01 - s01 * u12) / (u01 - u12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wrap_angle_covers_half_open_interval() {
        assert_relative_eq!(wrap_angle(0.0), 0.0);
        assert_relative_eq!(wrap_angle(3.0 * PI / 2.0), -PI / 2.0);
        assert_relative_eq!(wrap_angle(-3.0 * PI / 2.0), PI / 2.0);
        // both endpoint representatives map to +pi
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert_relative_eq!(wrap_angle(7.0 * TAU + 0.25), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn central_diff_matches_cubic_derivative() {
        let f = |x: f64| x.powi(3) - 2.0 * x;
        let d = central_diff(f, 1.5, 1e-4);
        assert_relative_eq!(d, 3.0 * 1.5f64.powi(2) - 2.0, epsilon = 1e-7);
        let dr = central_diff_richardson(f, 1.5, 1e-4);
        assert_relative_eq!(dr, 3.0 * 1.5f64.powi(2) - 2.0, epsilon = 1e-10);
    }

    #[test]
    fn even_function_derivative_vanishes_to_rounding() {
        let f = |x: f64| (x * x).cos() + 3.0 * x.powi(4);
        let d = central_diff_richardson(f, 0.0, 1e-4);
        assert!(d.abs() < 1e-10, "derivative of even function: {d:.3e}");
    }

    #[test]
    fn log_log_slope_recovers_power_law() {
        let xs: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];
        let ys: Vec<f64> = xs.iter().map(|x| 3.7 * x.powf(0.5)).collect();
        assert_relative_eq!(log_log_slope(&xs, &ys), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn richardson_sqrt_cancels_low_order_terms() {
        let limit = Cx::new(2.0, -1.0);
        let c = Cx::new(0.7, 0.3);
        let d = Cx::new(-1.3, 0.9);
        let eps: [f64; 3] = [1e-4, 1e-5, 1e-6];
        let v = eps.map(|e| limit + c * e.sqrt() + d * e);
        let ex = richardson_sqrt(eps, v);
        assert!((ex - limit).norm() < 1e-12, "residual {:.3e}", (ex - limit).norm());
    }
}
