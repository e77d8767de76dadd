//! Incenter locus of the triangular orbit family.
//!
//! Sweeping the starting parameter `theta0` over the family of 3-periodic
//! orbits traces the incenters along a closed curve. This module extracts
//! incenters, fits a conic through them by the minimum-norm singular
//! direction of the monomial design matrix, classifies the result, extracts
//! ellipse parameters (center, semi-axes, rotation, foci), intersects the
//! fitted curve with the axis through the table's foci, checks that the
//! curve crosses that axis transversally, and sweeps the focal distances of
//! table and locus against each other over a grid of aspect ratios.
//!
//! Symmetry of the locus (centered, axis-aligned) is asserted on the fit
//! output, never imposed on the fit input — imposing it would assume the
//! very statement the sweep is meant to check.

use nalgebra::{DMatrix, Matrix2, Point2, Vector2};
use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;

use crate::billiard::{caustic_for_3_periodic, orbit_family, orbit_from_vertex, Branch, Orbit};
use crate::conic::{ConicCoeffs, Ellipse};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Orbits with a side shorter than this are degenerate for incenter purposes.
const MIN_SIDE: f64 = 1e-9;
/// A conic has six coefficients; fewer points cannot pin one down.
const MIN_FIT_POINTS: usize = 6;
/// Minimum sweep size for a trustworthy locus fit.
const MIN_SWEEP: usize = 12;
/// Axis ratio beyond which the locus degenerates to a point and fitting is
/// refused (the fit is rank-deficient there).
const POINT_LOCUS_RATIO: f64 = 1.0 - 1e-6;
/// Relative half-width of the parabola band in the `B^2 - 4AC` test.
const ELLIPSE_DISC_REL: f64 = 1e-10;
/// Determinant floor (after unit-norm scaling) below which the fitted conic
/// counts as degenerate.
const DEGENERATE_DET: f64 = 1e-12;
/// Relative discriminant floor for two simple real axis crossings.
const AXIS_DISC_REL: f64 = 1e-12;
/// Aspect ratios are kept away from the circle by this margin in the
/// foci-distance sweep.
const RATIO_MARGIN: f64 = 1e-4;

/// Incenter and inradius of the triangle `v`, by the side-length-weighted
/// vertex average and `area / semi-perimeter`.
pub fn triangle_incenter(v: &[Point2<f64>; 3]) -> Result<(Point2<f64>, f64)> {
    let l = [
        (v[1] - v[2]).norm(),
        (v[2] - v[0]).norm(),
        (v[0] - v[1]).norm(),
    ];
    let min_side = l[0].min(l[1]).min(l[2]);
    if min_side.is_nan() || min_side <= MIN_SIDE {
        return Err(Error::DegenerateOrbit { min_side });
    }
    let perimeter = l[0] + l[1] + l[2];
    let center = Point2::new(
        (l[0] * v[0].x + l[1] * v[1].x + l[2] * v[2].x) / perimeter,
        (l[0] * v[0].y + l[1] * v[1].y + l[2] * v[2].y) / perimeter,
    );
    let e1 = v[1] - v[0];
    let e2 = v[2] - v[0];
    let area = 0.5 * (e1.x * e2.y - e1.y * e2.x).abs();
    Ok((center, area / (0.5 * perimeter)))
}

/// Incenter of an orbit's triangle.
pub fn incenter(orbit: &Orbit) -> Result<Point2<f64>> {
    Ok(triangle_incenter(&orbit.vertices)?.0)
}

/// Inradius of an orbit's triangle.
pub fn inradius(orbit: &Orbit) -> Result<f64> {
    Ok(triangle_incenter(&orbit.vertices)?.1)
}

/// Conic classification by the (scale-invariant) discriminant of the
/// quadratic part plus a rank check on the full coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicKind {
    Ellipse,
    Parabola,
    Hyperbola,
    Degenerate,
}

impl ConicKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConicKind::Ellipse => "ellipse",
            ConicKind::Parabola => "parabola",
            ConicKind::Hyperbola => "hyperbola",
            ConicKind::Degenerate => "degenerate",
        }
    }
}

/// Metric data of a fitted ellipse.
#[derive(Debug, Clone, Copy)]
pub struct EllipseParams {
    pub center: Point2<f64>,
    /// `(p, q)` with `p >= q > 0`.
    pub semi_axes: (f64, f64),
    /// Angle of the major axis against the x-axis, in `(-pi/2, pi/2]`.
    pub rotation: f64,
    /// On the major axis at distance `sqrt(p^2 - q^2)` from the center.
    pub foci: [Point2<f64>; 2],
}

impl EllipseParams {
    pub fn focal_distance(&self) -> f64 {
        let (p, q) = self.semi_axes;
        (p * p - q * q).sqrt()
    }
}

/// A conic fitted to scattered points: unit-norm coefficients, the algebraic
/// residual statistics, the classification, and (for ellipses) the metric
/// parameters.
#[derive(Debug, Clone)]
pub struct ConicFit {
    /// Unit-norm, sign-normalized coefficients `(A, B, C, D, E, F)`.
    pub coeffs: ConicCoeffs,
    pub kind: ConicKind,
    /// Max `|A x^2 + B x y + ... + F|` over the input points.
    pub residual_max: f64,
    /// Root-mean-square of the same residuals.
    pub residual_rms: f64,
    /// Present iff `kind` is ellipse and the axes are real.
    pub ellipse: Option<EllipseParams>,
}

/// Fits a conic through `points` by minimizing `|D v|` over unit-norm
/// coefficient vectors `v`, where `D` holds the monomials
/// `(x^2, x y, y^2, x, y, 1)` per point; the minimizer is the right-singular
/// vector of the smallest singular value. Collinear input yields a
/// degenerate kind rather than an error.
pub fn fit_conic(points: &[Point2<f64>]) -> Result<ConicFit> {
    let n = points.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints { n });
    }
    let design = DMatrix::from_fn(n, 6, |i, j| {
        let p = points[i];
        match j {
            0 => p.x * p.x,
            1 => p.x * p.y,
            2 => p.y * p.y,
            3 => p.x,
            4 => p.y,
            _ => 1.0,
        }
    });
    let svd = design.clone().svd(false, true);
    let v_t = svd.v_t.expect("svd was computed with v_t");
    let (min_index, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("a 6-column matrix has singular values");
    let direction = v_t.row(min_index);
    let coeffs = ConicCoeffs::new(
        direction[0],
        direction[1],
        direction[2],
        direction[3],
        direction[4],
        direction[5],
    )
    .normalized();

    let [a, b, c, d, e, f] = coeffs.coeffs();
    let mut residual_max: f64 = 0.0;
    let mut sum_sq = 0.0;
    for p in points {
        let r = (a * p.x * p.x + b * p.x * p.y + c * p.y * p.y + d * p.x + e * p.y + f).abs();
        residual_max = residual_max.max(r);
        sum_sq += r * r;
    }
    let residual_rms = (sum_sq / n as f64).sqrt();

    let disc = b * b - 4.0 * a * c;
    let band = ELLIPSE_DISC_REL * (a + c) * (a + c);
    let kind = if coeffs.det().abs() <= DEGENERATE_DET {
        ConicKind::Degenerate
    } else if disc < -band {
        ConicKind::Ellipse
    } else if disc > band {
        ConicKind::Hyperbola
    } else {
        ConicKind::Parabola
    };

    let ellipse = if kind == ConicKind::Ellipse {
        ellipse_params(&coeffs)
    } else {
        None
    };
    Ok(ConicFit {
        coeffs,
        kind,
        residual_max,
        residual_rms,
        ellipse,
    })
}

/// Center from the vanishing gradient, axes and rotation from the spectral
/// decomposition of the quadratic part. Returns `None` when the axes come
/// out imaginary (an empty "ellipse", impossible for a fit through enough
/// real points but kept as a guard).
fn ellipse_params(coeffs: &ConicCoeffs) -> Option<EllipseParams> {
    let [a, b, c, d, e, _f] = coeffs.coeffs();
    let m2 = Matrix2::new(a, b / 2.0, b / 2.0, c);
    let center = m2.lu().solve(&Vector2::new(-d / 2.0, -e / 2.0))?;
    let value = coeffs.eval(center.x, center.y);
    let eig = m2.symmetric_eigen();
    let axis_sq = [
        -value / eig.eigenvalues[0],
        -value / eig.eigenvalues[1],
    ];
    if !(axis_sq[0] > 0.0 && axis_sq[1] > 0.0) {
        return None;
    }
    let major = if axis_sq[0] >= axis_sq[1] { 0 } else { 1 };
    let p = axis_sq[major].sqrt();
    let q = axis_sq[1 - major].sqrt();
    let dir = eig.eigenvectors.column(major);
    let mut rotation = dir.y.atan2(dir.x);
    if rotation > FRAC_PI_2 {
        rotation -= PI;
    }
    if rotation <= -FRAC_PI_2 {
        rotation += PI;
    }
    let axis = Vector2::new(rotation.cos(), rotation.sin());
    let focal = (p * p - q * q).sqrt();
    let center = Point2::from(center);
    Some(EllipseParams {
        center,
        semi_axes: (p, q),
        rotation,
        foci: [center + axis * focal, center - axis * focal],
    })
}

/// Result of a locus sweep: either a fitted ellipse or the point degeneracy
/// of (near-)circular tables.
#[derive(Debug, Clone)]
pub enum LocusOutcome {
    Fitted {
        incenters: Vec<Point2<f64>>,
        fit: ConicFit,
    },
    /// Near-circular table: every incenter collapses onto the center; the
    /// maximal distance from the origin is reported instead of a fit.
    PointLocus {
        incenters: Vec<Point2<f64>>,
        max_radius: f64,
    },
}

/// Fits the incenter cloud of `table`'s orbit family, asserting the
/// symmetry the construction promises: an ellipse kind, a center on the
/// origin, and no cross term. Near-circular tables (axis ratio above
/// `1 - 1e-6`) refuse the rank-deficient fit and report the point locus.
pub fn fit_incenter_locus(
    table: &Ellipse,
    incenters: Vec<Point2<f64>>,
    tol: &Tolerances,
) -> Result<LocusOutcome> {
    // inclusive comparison: the boundary ratio itself (e.g. b = 0.999999
    // with a = 1) already fits rank-deficiently and belongs to the point
    // report
    if table.axis_ratio() >= POINT_LOCUS_RATIO {
        let max_radius = incenters
            .iter()
            .map(|p| p.coords.norm())
            .fold(0.0, f64::max);
        return Ok(LocusOutcome::PointLocus {
            incenters,
            max_radius,
        });
    }
    let fit = fit_conic(&incenters)?;
    if fit.kind != ConicKind::Ellipse || fit.ellipse.is_none() {
        return Err(Error::LocusNotEllipse {
            kind: fit.kind.as_str(),
        });
    }
    let params = fit.ellipse.as_ref().expect("checked above");
    let center_offset = params.center.coords.norm();
    if center_offset > tol.locus_center {
        return Err(Error::LocusAsymmetry {
            what: "center offset",
            value: center_offset,
            tol: tol.locus_center,
        });
    }
    let cross_term = fit.coeffs.coeffs()[1].abs();
    if cross_term > tol.locus_cross_term {
        return Err(Error::LocusAsymmetry {
            what: "cross term",
            value: cross_term,
            tol: tol.locus_cross_term,
        });
    }
    Ok(LocusOutcome::Fitted { incenters, fit })
}

/// Sweeps the orbit family at `n >= 12` starting parameters, maps the
/// orbits to incenters, and fits the locus.
pub fn locus_of_incenters(table: &Ellipse, n: usize, tol: &Tolerances) -> Result<LocusOutcome> {
    if n < MIN_SWEEP {
        return Err(Error::TooFewSamples { n });
    }
    let family = orbit_family(table, n)?;
    let incenters = family.iter().map(incenter).collect::<Result<Vec<_>>>()?;
    fit_incenter_locus(table, incenters, tol)
}

/// The two points where the fitted curve crosses the axis through the
/// table's foci (`y = 0`), required to be real and simple. Returned in
/// ascending x order.
pub fn axis_intersections(fit: &ConicFit) -> Result<[Point2<f64>; 2]> {
    if fit.kind != ConicKind::Ellipse {
        return Err(Error::LocusNotEllipse {
            kind: fit.kind.as_str(),
        });
    }
    let [a, _b, _c, d, _e, f] = fit.coeffs.coeffs();
    // restriction to y = 0: a x^2 + d x + f = 0
    let disc = d * d - 4.0 * a * f;
    let scale = (d * d).max((4.0 * a * f).abs()).max(f64::MIN_POSITIVE);
    if disc <= AXIS_DISC_REL * scale {
        return Err(Error::FociAxisCrossing { disc: disc / scale });
    }
    // cancellation-free quadratic: the larger-magnitude root first, the
    // other via Vieta
    let sign = if d >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (d + sign * disc.sqrt());
    let (x1, x2) = (q / a, f / q);
    let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    Ok([Point2::new(lo, 0.0), Point2::new(hi, 0.0)])
}

/// Central-difference derivative of the incenter's y-coordinate with
/// respect to the starting parameter at `theta0 = 0`, asserted to clear the
/// transversality floor: the locus crosses the foci axis, not merely
/// touches it.
pub fn transversality_check(table: &Ellipse, h: f64, tol: &Tolerances) -> Result<f64> {
    let solution = caustic_for_3_periodic(table)?;
    let incenter_y = |theta: f64| -> Result<f64> {
        let orbit = orbit_from_vertex(table, &solution, theta, Branch::First)?;
        Ok(incenter(&orbit)?.y)
    };
    let derivative = (incenter_y(h)? - incenter_y(-h)?) / (2.0 * h);
    if derivative.abs() <= tol.transversality_min {
        return Err(Error::NotTransversal {
            value: derivative.abs(),
            min: tol.transversality_min,
        });
    }
    Ok(derivative)
}

/// One sample of the foci-distance sweep at aspect ratio `t`.
#[derive(Debug, Clone, Copy)]
pub struct FociCurveSample {
    /// Semi-axis ratio `b/a` of the table, with `a = 1`.
    pub t: f64,
    /// Focal distance `sqrt(1 - t^2)` of the table.
    pub d_gamma: f64,
    /// Focal distance of the fitted incenter locus.
    pub d_locus: f64,
}

/// Sweeps tables `(1, t)` over the ratio grid and reports both focal
/// distances per sample, in ascending `t` order. Each `t` must lie in
/// `(0, 1 - 1e-4]`; the locus is fitted from an `n`-orbit family.
pub fn foci_curve(t_grid: &[f64], n: usize, tol: &Tolerances) -> Result<Vec<FociCurveSample>> {
    let max = 1.0 - RATIO_MARGIN;
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0 && t <= max) {
            return Err(Error::RatioOutOfRange { t, max });
        }
        let table = Ellipse::new(1.0, t)?;
        let d_gamma = (1.0 - t * t).sqrt();
        let outcome = locus_of_incenters(&table, n, tol)?;
        let LocusOutcome::Fitted { fit, .. } = outcome else {
            // unreachable for t <= 1 - 1e-4, which is below the point cutoff
            return Err(Error::LocusNotEllipse { kind: "point" });
        };
        let params = fit.ellipse.expect("fitted outcome carries parameters");
        samples.push(FociCurveSample {
            t,
            d_gamma,
            d_locus: params.focal_distance(),
        });
    }
    samples.sort_by(|x, y| x.t.total_cmp(&y.t));
    Ok(samples)
}
