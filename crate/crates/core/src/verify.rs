//! Named verification suites: each bundles a set of measured residuals with
//! their thresholds into a pass/fail report.
//!
//! The suites mirror the checkable structure of the construction. The
//! `reflection` suite exercises the direction-coordinate reflection law
//! (involution, fixed mirror, isotropic swap, Euclidean agreement, quadratic
//! decay under near-isotropic mirrors). The `confocal` suite certifies that
//! seeded confocal pairs share their four isotropic tangents and that those
//! tangents meet in the common foci. The `lemma5` suite runs the
//! isotropic-limit experiment on a table and its 3-periodic caustic, and the
//! `mainlemma` suite checks the axis crossings of the fitted incenter locus
//! against the axis orbits, transversality, and the evenness of the
//! inradius. The suite names are the stable tokens of the command-line
//! interface; the report structs carry everything a front end needs to
//! print or serialize the outcome.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::billiard::{caustic_for_3_periodic, orbit_from_vertex, Branch};
use crate::conic::{Cx, Ellipse, HPoint};
use crate::cproj::{
    common_isotropic_tangents, isotropic_limit_behavior, isotropic_limit_experiment,
    reflect_coord, reflect_euclidean_consistency, DirectionCoord,
};
use crate::error::{Error, Result};
use crate::locus::{axis_intersections, incenter, inradius, locus_of_incenters, LocusOutcome};
use crate::numeric::log_log_slope;
use crate::tolerances::Tolerances;

/// Chordal slack on the structural reflection identities (involution, fixed
/// mirror): exact in homogeneous arithmetic up to a few rounding units of
/// the complex products.
const EXACT_CHORDAL: f64 = 1e-15;
/// Bound on the inradius derivative at the axis, where evenness forces a
/// critical point.
const INRADIUS_DERIVATIVE_MAX: f64 = 1e-6;
/// Step for the numerical derivatives taken by the axis-crossing suite.
const DERIVATIVE_STEP: f64 = 1e-4;
/// Offsets probing the evenness of the inradius around the axis.
const EVENNESS_OFFSETS: [f64; 3] = [0.01, 0.1, 0.5];
/// Parameter ladder for the isotropic-limit experiment.
const LIMIT_EPSILONS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
/// Mirror ladder for the quadratic-decay check.
const DECAY_EPSILONS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
/// Reality gate on the axis-crossing discriminant, matching the crossing
/// solver's own threshold.
const AXIS_DISC_REL: f64 = 1e-12;

/// Direction of a check's comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckOp {
    /// Passes when `measured <= threshold`.
    AtMost,
    /// Passes when `measured >= threshold`.
    AtLeast,
}

impl CheckOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            CheckOp::AtMost => "<=",
            CheckOp::AtLeast => ">=",
        }
    }
}

/// One measured quantity compared against its threshold.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub op: CheckOp,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &'static str, measured: f64, threshold: f64) -> Self {
        Self {
            name,
            measured,
            threshold,
            op: CheckOp::AtMost,
            pass: measured <= threshold,
        }
    }

    fn at_least(name: &'static str, measured: f64, threshold: f64) -> Self {
        Self {
            name,
            measured,
            threshold,
            op: CheckOp::AtLeast,
            pass: measured >= threshold,
        }
    }
}

/// Outcome of one verification suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    /// Stable suite token, as accepted by the command-line front end.
    pub suite: &'static str,
    pub checks: Vec<Check>,
    /// True iff every check passed.
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: &'static str, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.pass);
        Self {
            suite,
            checks,
            passed,
        }
    }
}

/// Reflection-coordinate suite: structural identities of `z -> e^2 / z`
/// over seeded random mirrors, agreement with Euclidean matrix reflection,
/// and the quadratic decay of a fixed direction's image as the mirror
/// approaches the isotropic coordinate.
pub fn reflection_suite(trials: usize, seed: u64, tol: &Tolerances) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut involution: f64 = 0.0;
    let mut fixed_point: f64 = 0.0;
    let mut swap_defects = 0usize;
    for _ in 0..trials {
        let mirror = DirectionCoord::from_value(Cx::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        ));
        if mirror.is_zero() {
            continue;
        }
        let z = DirectionCoord::from_value(Cx::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        ));
        let once = reflect_coord(&mirror, &z).expect("non-isotropic mirror");
        let twice = reflect_coord(&mirror, &once).expect("non-isotropic mirror");
        involution = involution.max(twice.chordal_distance(&z));
        let fixed = reflect_coord(&mirror, &mirror).expect("non-isotropic mirror");
        fixed_point = fixed_point.max(fixed.chordal_distance(&mirror));
        let to_inf = reflect_coord(&mirror, &DirectionCoord::zero()).expect("non-isotropic mirror");
        let to_zero =
            reflect_coord(&mirror, &DirectionCoord::infinity()).expect("non-isotropic mirror");
        if !to_inf.is_infinite() || !to_zero.is_zero() {
            swap_defects += 1;
        }
    }

    let euclidean = reflect_euclidean_consistency(trials, seed);

    let z = DirectionCoord::from_value(Cx::new(1.0, 0.5));
    let images = isotropic_limit_behavior(&z, &DECAY_EPSILONS)
        .expect("positive mirror coordinates are not isotropic");
    let moduli: Vec<f64> = images.iter().map(DirectionCoord::modulus).collect();
    let slope = log_log_slope(&DECAY_EPSILONS, &moduli);

    SuiteReport::new(
        "reflection",
        vec![
            Check::at_most("involution-max-chordal", involution, EXACT_CHORDAL),
            Check::at_most("fixed-point-max-chordal", fixed_point, EXACT_CHORDAL),
            Check::at_most("isotropic-swap-defects", swap_defects as f64, 0.0),
            Check::at_most("euclidean-consistency-max", euclidean, tol.euclidean_consistency),
            Check::at_most("quadratic-decay-slope-error", (slope - 2.0).abs(), tol.decay_slope),
        ],
    )
}

/// Confocal-tangent suite: over seeded random confocal pairs the four
/// isotropic tangents agree across the pair and meet in the common foci;
/// additionally, the tangents from a circle's center pass through the
/// circular points.
pub fn confocal_suite(pairs: usize, seed: u64, tol: &Tolerances) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tangent_match: f64 = 0.0;
    let mut foci_error: f64 = 0.0;
    for _ in 0..pairs {
        let a = rng.random_range(1.0..2.0);
        let b = a * rng.random_range(0.35..0.9);
        let outer = Ellipse::new(a, b)?;
        let inner = outer.confocal(b * b * rng.random_range(0.1..0.9))?;
        let report = common_isotropic_tangents(&outer, &inner)?;
        tangent_match = tangent_match.max(report.max_match_distance);
        foci_error = foci_error.max(report.foci_error);
    }

    // a circle's complexification passes through the circular points, so its
    // center-tangents are the isotropic lines x +- i y = 0
    let circle = Ellipse::new(1.0, 1.0)?;
    let (t1, t2) = circle.conic().tangent_lines_from(&HPoint::from_xy(0.0, 0.0))?;
    let mut isotropy: f64 = 0.0;
    for point in [HPoint::circular_i1(), HPoint::circular_i2()] {
        isotropy = isotropy.max(t1.incidence(&point).min(t2.incidence(&point)));
    }

    Ok(SuiteReport::new(
        "confocal",
        vec![
            Check::at_most("tangent-match-max", tangent_match, tol.tangent_match),
            Check::at_most("foci-incidence-max", foci_error, tol.foci_incidence),
            Check::at_most("circle-center-isotropy", isotropy, tol.center_isotropy),
        ],
    ))
}

/// Isotropic-limit suite on a table and its 3-periodic caustic: the
/// reflected coordinate sequence extrapolates to a non-isotropic limit, the
/// tangent angle decays like the square root of the offset, the limit line
/// is tangent to the caustic and matches the direct non-isotropic tangent
/// from the shared tangency point, and convergence is monotone.
pub fn isotropic_limit_suite(table: &Ellipse, tol: &Tolerances) -> Result<SuiteReport> {
    let caustic = caustic_for_3_periodic(table)?.caustic;
    let experiment = isotropic_limit_experiment(table, &caustic, &LIMIT_EPSILONS)?;

    let modulus = experiment.extrapolated.modulus();
    let (t1, t2) = caustic.conic().tangent_lines_from(&experiment.base_point)?;
    let direct = if t1.is_isotropic(tol.limit_tangency) { t2 } else { t1 };
    let line_match = experiment.limit_line.distance_to(&direct);
    let gaps: Vec<f64> = experiment
        .reflected
        .iter()
        .map(|r| r.chordal_distance(&experiment.extrapolated))
        .collect();
    let monotone_defect = gaps
        .windows(2)
        .map(|pair| pair[1] - pair[0])
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(SuiteReport::new(
        "lemma5",
        vec![
            Check::at_least("limit-modulus-lower", modulus, tol.limit_lower),
            Check::at_most("limit-modulus-upper", modulus, tol.limit_upper),
            Check::at_most(
                "tangent-angle-exponent-error",
                (experiment.tangent_angle_exponent - 0.5).abs(),
                tol.exponent_halfwidth,
            ),
            Check::at_most(
                "limit-tangency-residual",
                experiment.limit_tangency_residual,
                tol.limit_tangency,
            ),
            Check::at_most("limit-line-match", line_match, tol.limit_line_match),
            Check::at_most("convergence-monotone-defect", monotone_defect, 0.0),
        ],
    ))
}

/// Axis-crossing suite on the fitted incenter locus: the fit meets the
/// major axis in two real simple points, the axis orbits' incenters land on
/// those points, the incenter height moves transversally through the axis,
/// and the inradius is even in the starting parameter with a flat spot on
/// the axis.
pub fn axis_crossing_suite(table: &Ellipse, samples: usize, tol: &Tolerances) -> Result<SuiteReport> {
    let fit = match locus_of_incenters(table, samples, tol)? {
        LocusOutcome::Fitted { fit, .. } => fit,
        LocusOutcome::PointLocus { .. } => return Err(Error::LocusNotEllipse { kind: "point" }),
    };

    // same normalization as the crossing solver's reality gate
    let c = &fit.coeffs;
    let disc = c.d * c.d - 4.0 * c.a * c.f;
    let scale = (c.d * c.d).max((4.0 * c.a * c.f).abs()).max(f64::MIN_POSITIVE);
    let crossings = axis_intersections(&fit)?;

    let solution = caustic_for_3_periodic(table)?;
    let mut incenter_match: f64 = 0.0;
    for theta in [0.0, PI] {
        let orbit = orbit_from_vertex(table, &solution, theta, Branch::First)?;
        let point = incenter(&orbit)?;
        let nearest = crossings
            .iter()
            .map(|q| (point - q).norm())
            .fold(f64::INFINITY, f64::min);
        incenter_match = incenter_match.max(nearest);
    }

    let incenter_y = |theta: f64| -> Result<f64> {
        let orbit = orbit_from_vertex(table, &solution, theta, Branch::First)?;
        Ok(incenter(&orbit)?.y)
    };
    let transversal =
        (incenter_y(DERIVATIVE_STEP)? - incenter_y(-DERIVATIVE_STEP)?) / (2.0 * DERIVATIVE_STEP);

    let radius = |theta: f64| -> Result<f64> {
        inradius(&orbit_from_vertex(table, &solution, theta, Branch::First)?)
    };
    let mut evenness: f64 = 0.0;
    for delta in EVENNESS_OFFSETS {
        evenness = evenness.max((radius(delta)? - radius(-delta)?).abs());
    }
    let slope_at = |h: f64| -> Result<f64> { Ok((radius(h)? - radius(-h)?) / (2.0 * h)) };
    let radius_derivative =
        (4.0 * slope_at(DERIVATIVE_STEP / 2.0)? - slope_at(DERIVATIVE_STEP)?) / 3.0;

    Ok(SuiteReport::new(
        "mainlemma",
        vec![
            Check::at_least("axis-crossing-disc", disc / scale, AXIS_DISC_REL),
            Check::at_most("axis-incenter-match-max", incenter_match, tol.axis_meeting),
            Check::at_least(
                "transversality-derivative",
                transversal.abs(),
                tol.transversality_min,
            ),
            Check::at_most("inradius-evenness-max", evenness, tol.evenness),
            Check::at_most(
                "inradius-derivative-at-axis",
                radius_derivative.abs(),
                INRADIUS_DERIVATIVE_MAX,
            ),
        ],
    ))
}

/// Runs all four suites with shared parameters, in the stable token order.
pub fn all_suites(
    table: &Ellipse,
    samples: usize,
    trials: usize,
    pairs: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        reflection_suite(trials, seed, tol),
        confocal_suite(pairs, seed, tol)?,
        isotropic_limit_suite(table, tol)?,
        axis_crossing_suite(table, samples, tol)?,
    ])
}
