//! Reflection in direction coordinates on the complexified projective line,
//! and the isotropic-limit experiment on a confocal pair.
//!
//! A direction `(v1, v2)` of the complexified plane gets the coordinate
//! `z = (i v1 - v2) / (i v1 + v2)`, which sends the isotropic direction
//! `(1, i)` to `0`, its conjugate `(1, -i)` to `infinity`, and the real
//! direction at angle `theta` to `e^{2 i theta}`. In this coordinate,
//! reflection across a mirror line with coordinate `e` is the Mobius map
//! `z -> e^2 / z`: an involution fixing the mirror and swapping `0` with
//! `infinity`. Coordinates are kept homogeneous (numerator : denominator)
//! so that `0` and `infinity` are ordinary, exactly representable values.
//!
//! The limit experiment follows a family of tangent lines of an inner
//! confocal ellipse toward a shared isotropic tangent and reflects them in
//! the outer ellipse at the moving intersection point; the reflected
//! directions converge to a finite, non-isotropic coordinate even though
//! both ingredient coordinates degenerate, and the tangent angle decays
//! like the square root of the parameter offset.

use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::conic::{cx, Cx, Ellipse, HLine, HPoint};
use crate::error::{Error, Result};
use crate::numeric::{log_log_slope, richardson_sqrt};

/// Confocality gate: the squared focal distances must agree this tightly.
const CONFOCAL_TOL: f64 = 1e-12;
/// Minimal projective separation of the two tangency points on a shared
/// isotropic tangent (the generic-pair precondition).
const TANGENCY_SEPARATION_MIN: f64 = 1e-6;
/// Epsilon offsets below this are dominated by roundoff in the complex
/// tangent construction.
const EPS_FLOOR: f64 = 1e-8;
/// Axis ratio beyond which a table counts as a circle, whose complexification
/// passes through the circular points.
const CIRCLE_RATIO: f64 = 1.0 - 1e-6;

/// A point of the direction line in homogeneous form `(num : den)`; the
/// affine value is `num / den`, with `den = 0` encoding infinity.
#[derive(Debug, Clone, Copy)]
pub struct DirectionCoord {
    num: Cx,
    den: Cx,
}

impl DirectionCoord {
    /// Coordinate of the isotropic direction `(1, i)`.
    pub fn zero() -> Self {
        Self {
            num: cx(0.0),
            den: cx(1.0),
        }
    }

    /// Coordinate of the conjugate isotropic direction `(1, -i)`.
    pub fn infinity() -> Self {
        Self {
            num: cx(1.0),
            den: cx(0.0),
        }
    }

    pub fn from_value(z: Cx) -> Self {
        Self {
            num: z,
            den: cx(1.0),
        }
    }

    /// `z = (i v1 - v2) / (i v1 + v2)`, the unique Mobius scale with
    /// `(1, i) -> 0`, `(1, -i) -> infinity`, and real angles on the unit
    /// circle.
    pub fn from_direction(v1: Cx, v2: Cx) -> Result<Self> {
        if v1 == cx(0.0) && v2 == cx(0.0) {
            return Err(Error::ZeroDirection);
        }
        let iv1 = Cx::i() * v1;
        Ok(Self {
            num: iv1 - v2,
            den: iv1 + v2,
        })
    }

    /// `e^{2 i theta}` for the real direction at angle `theta`.
    pub fn from_angle(theta: f64) -> Self {
        Self::from_value(Cx::from_polar(1.0, 2.0 * theta))
    }

    /// A direction vector mapping back to this coordinate (inverse of
    /// [`DirectionCoord::from_direction`], up to complex scale).
    pub fn to_direction(&self) -> (Cx, Cx) {
        (-Cx::i() * (self.num + self.den), self.den - self.num)
    }

    /// Affine value; `None` at infinity.
    pub fn value(&self) -> Option<Cx> {
        (self.den != cx(0.0)).then(|| self.num / self.den)
    }

    /// `|z|`, infinite at infinity.
    pub fn modulus(&self) -> f64 {
        if self.den == cx(0.0) {
            f64::INFINITY
        } else {
            self.num.norm() / self.den.norm()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == cx(0.0) && self.den != cx(0.0)
    }

    pub fn is_infinite(&self) -> bool {
        self.den == cx(0.0) && self.num != cx(0.0)
    }

    /// Chordal distance on the projective line: zero iff the coordinates
    /// agree, and well-behaved at infinity (where affine distance is not).
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let cross = self.num * other.den - other.num * self.den;
        let scale = (self.num.norm_sqr() + self.den.norm_sqr()).sqrt()
            * (other.num.norm_sqr() + other.den.norm_sqr()).sqrt();
        cross.norm() / scale
    }
}

/// Reflection `z -> mirror^2 / z` in homogeneous form. The swap of `0` and
/// `infinity` is structurally exact: the products below carry exact zeros
/// through.
pub fn reflect_coord(mirror: &DirectionCoord, z: &DirectionCoord) -> Result<DirectionCoord> {
    if mirror.num == cx(0.0) || mirror.den == cx(0.0) {
        return Err(Error::IsotropicMirror);
    }
    Ok(DirectionCoord {
        num: mirror.num * mirror.num * z.den,
        den: mirror.den * mirror.den * z.num,
    })
}

/// Max discrepancy between coordinate reflection and Euclidean matrix
/// reflection over `trials` random real mirror/direction pairs drawn from a
/// seeded generator.
pub fn reflect_euclidean_consistency(trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let alpha: f64 = rng.random_range(0.0..TAU);
        let theta: f64 = rng.random_range(0.0..TAU);
        let mirror = DirectionCoord::from_angle(alpha);
        let z = DirectionCoord::from_angle(theta);
        let reflected = reflect_coord(&mirror, &z).expect("real mirror is not isotropic");
        // reflection matrix across the line at angle alpha: diag(1, -1)
        // conjugated by the rotation, i.e. [[cos 2a, sin 2a], [sin 2a, -cos 2a]]
        let (s2, c2) = (2.0 * alpha).sin_cos();
        let v = Vector2::new(theta.cos(), theta.sin());
        let rv = Vector2::new(c2 * v.x + s2 * v.y, s2 * v.x - c2 * v.y);
        let direct = DirectionCoord::from_direction(cx(rv.x), cx(rv.y))
            .expect("matrix reflection preserves nonzero vectors");
        worst = worst.max(reflected.chordal_distance(&direct));
    }
    worst
}

/// The images `mirror^2 / z` for a sequence of real near-isotropic mirror
/// coordinates: as the mirror coordinate `e` shrinks toward the isotropic
/// `0`, every fixed non-isotropic `z` is driven to `0` at the quadratic
/// rate `|e|^2 / |z|`.
pub fn isotropic_limit_behavior(z: &DirectionCoord, eps_seq: &[f64]) -> Result<Vec<DirectionCoord>> {
    eps_seq
        .iter()
        .map(|&e| reflect_coord(&DirectionCoord::from_value(cx(e)), z))
        .collect()
}

/// The four isotropic tangents shared by a confocal pair, with the match
/// quality and the tangent intersections (which contain the common foci).
#[derive(Debug, Clone)]
pub struct CommonTangents {
    /// Tangents of the first ellipse through the circular points, ordered
    /// as the two through `I1` then the two through `I2`.
    pub lines: [HLine; 4],
    /// Max over the first ellipse's tangents of the projective distance to
    /// the best-matching tangent of the second.
    pub max_match_distance: f64,
    /// Pairwise meets of the `I1`-tangents with the `I2`-tangents.
    pub meets: [HPoint; 4],
    /// Max over the two real foci of the distance to the nearest meet.
    pub foci_error: f64,
}

fn confocality_gap(first: &Ellipse, second: &Ellipse) -> f64 {
    let c1 = first.a() * first.a() - first.b() * first.b();
    let c2 = second.a() * second.a() - second.b() * second.b();
    (c1 - c2).abs()
}

/// Computes the isotropic tangents of both ellipses and certifies they
/// agree: confocal complexified conics share all four, and the shared
/// tangents intersect in the common foci `(+-c, 0)`.
pub fn common_isotropic_tangents(first: &Ellipse, second: &Ellipse) -> Result<CommonTangents> {
    let delta = confocality_gap(first, second);
    if delta > CONFOCAL_TOL {
        return Err(Error::NotConfocal { delta });
    }
    if first.axis_ratio() >= CIRCLE_RATIO || second.axis_ratio() >= CIRCLE_RATIO {
        return Err(Error::CircleIsotropy);
    }
    let tangent_pair = |e: &Ellipse, p: &HPoint| -> Result<[HLine; 2]> {
        let (t1, t2) = e.conic().tangent_lines_from(p)?;
        Ok([t1, t2])
    };
    let i1 = HPoint::circular_i1();
    let i2 = HPoint::circular_i2();
    let [a1, a2] = tangent_pair(first, &i1)?;
    let [a3, a4] = tangent_pair(first, &i2)?;
    let [b1, b2] = tangent_pair(second, &i1)?;
    let [b3, b4] = tangent_pair(second, &i2)?;

    let mut max_match_distance: f64 = 0.0;
    for line in [&a1, &a2, &a3, &a4] {
        let nearest = [&b1, &b2, &b3, &b4]
            .iter()
            .map(|other| line.distance_to(other))
            .fold(f64::INFINITY, f64::min);
        max_match_distance = max_match_distance.max(nearest);
    }

    let meets = [a1.meet(&a3), a1.meet(&a4), a2.meet(&a3), a2.meet(&a4)];
    let c = first.focal_distance();
    let mut foci_error: f64 = 0.0;
    for focus in [HPoint::from_xy(c, 0.0), HPoint::from_xy(-c, 0.0)] {
        let nearest = meets
            .iter()
            .map(|m| m.distance_to(&focus))
            .fold(f64::INFINITY, f64::min);
        foci_error = foci_error.max(nearest);
    }

    Ok(CommonTangents {
        lines: [a1, a2, a3, a4],
        max_match_distance,
        meets,
        foci_error,
    })
}

/// Record of the isotropic-limit experiment along one shared tangent.
#[derive(Debug, Clone)]
pub struct LimitExperiment {
    /// The parameter offsets, strictly decreasing.
    pub epsilons: Vec<f64>,
    /// Reflected direction coordinate per offset.
    pub reflected: Vec<DirectionCoord>,
    /// `|w|` per offset: the chordal angle between the outer tangent at the
    /// moving intersection and the isotropic limit tangent.
    pub tangent_moduli: Vec<f64>,
    /// Fitted log-log slope of `tangent_moduli` against the offsets.
    pub tangent_angle_exponent: f64,
    /// Square-root Richardson extrapolation of the last three reflected
    /// coordinates.
    pub extrapolated: DirectionCoord,
    /// The real-limit line: through the outer isotropic tangency point with
    /// the extrapolated direction.
    pub limit_line: HLine,
    /// Dual residual of `limit_line` against the inner ellipse: the limit
    /// of reflected tangent lines is again tangent to the inner ellipse.
    pub limit_tangency_residual: f64,
    /// The outer ellipse's tangency point on the shared isotropic tangent.
    pub base_point: HPoint,
}

fn validate_eps(eps_seq: &[f64]) -> Result<()> {
    let decreasing = eps_seq.windows(2).all(|w| w[0] > w[1]);
    let bounded = eps_seq.iter().all(|&e| e >= EPS_FLOOR);
    if eps_seq.len() < 3 || !decreasing || !bounded {
        return Err(Error::BadEpsilonSequence);
    }
    Ok(())
}

/// Follows the tangent family of the inner ellipse into a shared isotropic
/// tangent and reflects each member in the outer ellipse at their moving
/// intersection.
///
/// For each offset `eps` from the inner isotropic tangency parameter, the
/// construction intersects the tangent line `A_eps` with the outer ellipse,
/// continues the branch that tends to the outer tangency point `a0`, and
/// reflects `A_eps`'s direction across the outer tangent there (coordinate
/// map `w^2 / z`). Both `w` and `z` degenerate toward the isotropic `0`,
/// but the reflected coordinate converges to a finite non-isotropic value;
/// the square-root Richardson extrapolation of the tail makes the limit
/// usable at moderate offsets.
pub fn isotropic_limit_experiment(
    table: &Ellipse,
    inner: &Ellipse,
    eps_seq: &[f64],
) -> Result<LimitExperiment> {
    validate_eps(eps_seq)?;
    let delta = confocality_gap(table, inner);
    if delta > CONFOCAL_TOL {
        return Err(Error::NotConfocal { delta });
    }

    // the shared isotropic tangent, taken at the inner ellipse's isotropic
    // tangency parameter
    let phi0 = inner.isotropic_tangency_param()?;
    let tangent0 = inner.tangent_line_complex(phi0);
    let base_point = table.conic().pole_of(&tangent0)?; // a0: tangency on the table
    let inner_contact = inner.conic().pole_of(&tangent0)?;
    let separation = base_point.distance_to(&inner_contact);
    if separation <= TANGENCY_SEPARATION_MIN {
        return Err(Error::TangencyCollision {
            separation,
            min: TANGENCY_SEPARATION_MIN,
        });
    }

    let mut reflected = Vec::with_capacity(eps_seq.len());
    let mut tangent_moduli = Vec::with_capacity(eps_seq.len());
    let mut previous = base_point;
    for &eps in eps_seq {
        let line = inner.tangent_line_complex(phi0 + cx(eps));
        let (p1, p2) = table.conic().line_intersections(&line)?;
        // continuation: the branch tending to a0
        let a_eps = if p1.distance_to(&previous) <= p2.distance_to(&previous) {
            p1
        } else {
            p2
        };
        previous = a_eps;
        let outer_tangent = table.conic().polar_line(&a_eps)?;
        let (w1, w2) = outer_tangent.direction();
        let w = DirectionCoord::from_direction(w1, w2)?;
        let (z1, z2) = line.direction();
        let z = DirectionCoord::from_direction(z1, z2)?;
        reflected.push(reflect_coord(&w, &z)?);
        tangent_moduli.push(w.modulus());
    }

    let tangent_angle_exponent = log_log_slope(eps_seq, &tangent_moduli);

    let tail = reflected.len() - 3;
    let values: Vec<Cx> = reflected[tail..]
        .iter()
        .map(|r| r.value().ok_or(Error::ZeroDirection))
        .collect::<Result<_>>()?;
    let extrapolated_value = richardson_sqrt(
        [eps_seq[tail], eps_seq[tail + 1], eps_seq[tail + 2]],
        [values[0], values[1], values[2]],
    );
    let extrapolated = DirectionCoord::from_value(extrapolated_value);

    let (d1, d2) = extrapolated.to_direction();
    let limit_line = HLine::through(&base_point, d1, d2);
    let limit_tangency_residual = inner.conic().tangency_residual(&limit_line);

    Ok(LimitExperiment {
        epsilons: eps_seq.to_vec(),
        reflected,
        tangent_moduli,
        tangent_angle_exponent,
        extrapolated,
        limit_line,
        limit_tangency_residual,
        base_point,
    })
}
