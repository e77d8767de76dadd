//! Conic primitives over real and complexified coordinates.
//!
//! A conic with coefficients `(A, B, C, D, E, F)` is the zero set of
//!
//! ```text
//! A x^2 + B xy + C y^2 + D x + E y + F
//! ```
//!
//! equivalently `p^T M p = 0` for the symmetric matrix
//! `M = [[A, B/2, D/2], [B/2, C, E/2], [D/2, E/2, F]]` acting on
//! homogeneous points `p = (x : y : w)`. Points and lines carry complex
//! entries throughout, so the circular points `I1 = (1 : i : 0)` and
//! `I2 = (1 : -i : 0)` and lines through them are ordinary values here,
//! not special cases. Projective quantities are compared after a
//! canonical normalization: unit Euclidean norm with the first
//! significant entry made real and positive.

use nalgebra::{Matrix3, Point2, Vector2, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used for homogeneous coordinates.
pub type Cx = Complex64;

/// Promotes a real scalar.
#[inline]
pub fn cx(re: f64) -> Cx {
    Cx::new(re, 0.0)
}

/// `|det M| < DEGENERACY_REL_TOL * ||M||_F^3` flags a conic matrix as degenerate.
const DEGENERACY_REL_TOL: f64 = 1e-12;
/// Relative discriminant size below which a pencil quadratic counts as a double root.
const COINCIDENT_REL_TOL: f64 = 1e-13;
/// Entries of a unit vector below this weight never set the canonical phase.
const PIVOT_REL_TOL: f64 = 1e-8;

// ---------------------------------------------------------------------------
// shared homogeneous-coordinate helpers
// ---------------------------------------------------------------------------

fn norm3(v: &Vector3<Cx>) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

/// Canonical representative of a projective class: unit norm, first entry
/// with significant weight rotated to the positive real axis.
fn canonical3(v: Vector3<Cx>) -> Vector3<Cx> {
    let n = norm3(&v);
    if n == 0.0 {
        return v;
    }
    let u = v.map(|c| c / n);
    let pivot = (0..3)
        .find(|&i| u[i].norm() > PIVOT_REL_TOL)
        .unwrap_or(0);
    let phase = u[pivot] / cx(u[pivot].norm());
    u.map(|c| c / phase)
}

/// Sine of the Hermitian angle between two projective classes; zero iff the
/// classes coincide, independent of scale and pivot choices. Computed from
/// the rejection of `b` off `a` (not via `sqrt(1 - cos^2)`, which cannot
/// resolve distances below ~1e-8).
fn proj_distance3(a: &Vector3<Cx>, b: &Vector3<Cx>) -> f64 {
    let na2 = a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr();
    let nb = norm3(b);
    if na2 == 0.0 || nb == 0.0 {
        return 1.0;
    }
    // Hermitian projection coefficient <b, a> / <a, a>
    let ip = b[0] * a[0].conj() + b[1] * a[1].conj() + b[2] * a[2].conj();
    let coef = ip / na2;
    let r = b - a.map(|c| c * coef);
    (norm3(&r) / nb).min(1.0)
}

/// Basis of the rank-2 solution space orthogonal (bilinearly) to `p`:
/// the two cross products `p x e_i` that skip the largest entry of `p`,
/// which are always independent.
fn pencil_basis(p: &Vector3<Cx>) -> (Vector3<Cx>, Vector3<Cx>) {
    let k = (0..3).max_by(|&i, &j| p[i].norm().total_cmp(&p[j].norm())).unwrap();
    let (i, j) = match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut e_i = Vector3::zeros();
    e_i[i] = cx(1.0);
    let mut e_j = Vector3::zeros();
    e_j[j] = cx(1.0);
    (p.cross(&e_i), p.cross(&e_j))
}

struct PencilRoots {
    first: (Cx, Cx),
    second: (Cx, Cx),
    coincident: bool,
}

/// Roots `(s : t)` of `q00 s^2 + 2 q01 s t + q11 t^2 = 0`, computed with the
/// cancellation-free branch of the quadratic formula. `coincident` is set
/// when the discriminant is negligible against the coefficient scale.
fn solve_pencil_quadratic(q00: Cx, q01: Cx, q11: Cx) -> Result<PencilRoots> {
    if q00.norm().max(q01.norm()).max(q11.norm()) == 0.0 {
        return Err(Error::DegeneratePencil);
    }
    let disc = q01 * q01 - q00 * q11;
    let scale = q00.norm() * q11.norm() + q01.norm_sqr();
    let coincident = disc.norm() <= COINCIDENT_REL_TOL * scale;
    let root = disc.sqrt();
    let plus = q01 + root;
    let minus = q01 - root;
    let q = if plus.norm() >= minus.norm() { -plus } else { -minus };
    if q.norm() == 0.0 {
        // q01 and the discriminant vanish: a pure-square equation with a
        // double root along the zero coefficient
        let double = if q00.norm() >= q11.norm() {
            (cx(0.0), cx(1.0)) // q00 s^2 = 0
        } else {
            (cx(1.0), cx(0.0)) // q11 t^2 = 0
        };
        return Ok(PencilRoots {
            first: double,
            second: double,
            coincident: true,
        });
    }
    Ok(PencilRoots {
        first: (q, q00),
        second: (q11, q),
        coincident,
    })
}

fn bilinear(m: &Matrix3<Cx>, u: &Vector3<Cx>, v: &Vector3<Cx>) -> Cx {
    (m * v).dot(u)
}

fn adjugate(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |i: usize, j: usize| -> f64 {
        let rows: [usize; 2] = match i {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        let cols: [usize; 2] = match j {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        let minor = m[(rows[0], cols[0])] * m[(rows[1], cols[1])]
            - m[(rows[0], cols[1])] * m[(rows[1], cols[0])];
        if (i + j).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    // adj(M) = cofactor(M)^T; transposition is a no-op for symmetric M but
    // kept explicit so the identity M adj(M) = det(M) I holds in general.
    Matrix3::from_fn(|i, j| c(j, i))
}

// ---------------------------------------------------------------------------
// homogeneous points and lines
// ---------------------------------------------------------------------------

/// Homogeneous point `(x : y : w)` of the complexified projective plane.
#[derive(Debug, Clone, Copy)]
pub struct HPoint {
    pub x: Cx,
    pub y: Cx,
    pub w: Cx,
}

/// Homogeneous line `[l : m : n]`, the zero set of `l x + m y + n w`.
#[derive(Debug, Clone, Copy)]
pub struct HLine {
    pub l: Cx,
    pub m: Cx,
    pub n: Cx,
}

impl HPoint {
    pub fn new(x: Cx, y: Cx, w: Cx) -> Self {
        Self { x, y, w }
    }

    /// Affine real point embedded at `w = 1`.
    pub fn from_xy(x: f64, y: f64) -> Self {
        Self::new(cx(x), cx(y), cx(1.0))
    }

    pub fn from_point(p: &Point2<f64>) -> Self {
        Self::from_xy(p.x, p.y)
    }

    /// First circular point `(1 : i : 0)`.
    pub fn circular_i1() -> Self {
        Self::new(cx(1.0), Cx::i(), cx(0.0))
    }

    /// Second circular point `(1 : -i : 0)`.
    pub fn circular_i2() -> Self {
        Self::new(cx(1.0), -Cx::i(), cx(0.0))
    }

    pub fn coords(&self) -> Vector3<Cx> {
        Vector3::new(self.x, self.y, self.w)
    }

    /// Canonical projective representative (unit norm, pivot real-positive).
    pub fn normalized(&self) -> Self {
        let v = canonical3(self.coords());
        Self::new(v[0], v[1], v[2])
    }

    /// Scale-invariant distance between projective classes (sine metric).
    pub fn distance_to(&self, other: &Self) -> f64 {
        proj_distance3(&self.coords(), &other.coords())
    }

    /// The affine real point, provided `w` dominates rounding noise and the
    /// imaginary parts of the canonical representative stay below `tol`.
    pub fn to_real(&self, tol: f64) -> Option<Point2<f64>> {
        let v = canonical3(self.coords());
        let imag = (v[0].im.powi(2) + v[1].im.powi(2) + v[2].im.powi(2)).sqrt();
        if imag > tol || v[2].norm() <= tol {
            return None;
        }
        Some(Point2::new(v[0].re / v[2].re, v[1].re / v[2].re))
    }

    /// Line joining two points (cross product of coordinates).
    pub fn join(&self, other: &Self) -> HLine {
        let v = self.coords().cross(&other.coords());
        HLine::new(v[0], v[1], v[2])
    }

    /// Lexicographic key of the canonical representative; a deterministic
    /// way to order the two roots of a pencil quadratic.
    pub fn lex_key(&self) -> [f64; 6] {
        let v = canonical3(self.coords());
        [v[0].re, v[0].im, v[1].re, v[1].im, v[2].re, v[2].im]
    }
}

impl HLine {
    pub fn new(l: Cx, m: Cx, n: Cx) -> Self {
        Self { l, m, n }
    }

    pub fn from_real(l: f64, m: f64, n: f64) -> Self {
        Self::new(cx(l), cx(m), cx(n))
    }

    /// Line through `p` with direction `(v1, v2)`.
    pub fn through(p: &HPoint, v1: Cx, v2: Cx) -> Self {
        // normal (l, m) = (-v2, v1); n fixed by incidence with p.
        let (l, m) = (-v2, v1);
        let n = -(l * p.x + m * p.y) / p.w;
        Self::new(l, m, n)
    }

    pub fn coords(&self) -> Vector3<Cx> {
        Vector3::new(self.l, self.m, self.n)
    }

    pub fn normalized(&self) -> Self {
        let v = canonical3(self.coords());
        Self::new(v[0], v[1], v[2])
    }

    pub fn distance_to(&self, other: &Self) -> f64 {
        proj_distance3(&self.coords(), &other.coords())
    }

    /// Incidence residual `|l x + m y + n w|`, normalized to both scales.
    pub fn incidence(&self, p: &HPoint) -> f64 {
        let raw = (self.l * p.x + self.m * p.y + self.n * p.w).norm();
        let scale = norm3(&self.coords()) * norm3(&p.coords());
        if scale == 0.0 {
            f64::INFINITY
        } else {
            raw / scale
        }
    }

    /// Direction `(v1, v2) = (-m, l)` of an affine line.
    pub fn direction(&self) -> (Cx, Cx) {
        (-self.m, self.l)
    }

    /// A line is isotropic when it passes through a circular point,
    /// i.e. `l^2 + m^2 = 0`.
    pub fn is_isotropic(&self, tol: f64) -> bool {
        let q = (self.l * self.l + self.m * self.m).norm();
        let scale = self.l.norm_sqr() + self.m.norm_sqr();
        scale != 0.0 && q <= tol * scale
    }

    /// Intersection point of two lines (cross product of coordinates).
    pub fn meet(&self, other: &Self) -> HPoint {
        let v = self.coords().cross(&other.coords());
        HPoint::new(v[0], v[1], v[2])
    }

    /// Real `(l, m, n)` triple of a line that is projectively real.
    pub fn to_real(&self, tol: f64) -> Option<(f64, f64, f64)> {
        let v = canonical3(self.coords());
        let imag = (v[0].im.powi(2) + v[1].im.powi(2) + v[2].im.powi(2)).sqrt();
        if imag > tol {
            return None;
        }
        Some((v[0].re, v[1].re, v[2].re))
    }
}

// ---------------------------------------------------------------------------
// ellipse
// ---------------------------------------------------------------------------

/// Axis-aligned, origin-centered ellipse `x^2/a^2 + y^2/b^2 = 1` with
/// `0 < b <= a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    a: f64,
    b: f64,
}

impl Ellipse {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > 0.0 && a >= b) {
            return Err(Error::InvalidEllipse { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `b/a`, in `(0, 1]`.
    pub fn axis_ratio(&self) -> f64 {
        self.b / self.a
    }

    /// Distance from the center to either focus, `sqrt(a^2 - b^2)`.
    pub fn focal_distance(&self) -> f64 {
        (self.a * self.a - self.b * self.b).sqrt()
    }

    pub fn foci(&self) -> (Point2<f64>, Point2<f64>) {
        let c = self.focal_distance();
        (Point2::new(c, 0.0), Point2::new(-c, 0.0))
    }

    /// Coefficient form `(1/a^2, 0, 1/b^2, 0, 0, -1)`.
    pub fn conic(&self) -> ConicCoeffs {
        ConicCoeffs::new(
            1.0 / (self.a * self.a),
            0.0,
            1.0 / (self.b * self.b),
            0.0,
            0.0,
            -1.0,
        )
    }

    /// Confocal ellipse with semi-axes `(sqrt(a^2 - lambda), sqrt(b^2 - lambda))`,
    /// defined for `0 <= lambda < b^2` (the ellipse branch of the family).
    pub fn confocal(&self, lambda: f64) -> Result<Ellipse> {
        let upper = self.b * self.b;
        if !(lambda >= 0.0 && lambda < upper) {
            return Err(Error::ConfocalParameter { lambda, upper });
        }
        Ellipse::new(
            (self.a * self.a - lambda).sqrt(),
            (self.b * self.b - lambda).sqrt(),
        )
    }

    /// `x^2/a^2 + y^2/b^2 - 1`; zero on the boundary.
    pub fn eval(&self, p: &Point2<f64>) -> f64 {
        (p.x / self.a).powi(2) + (p.y / self.b).powi(2) - 1.0
    }

    /// Boundary point `(a cos t, b sin t)`.
    pub fn boundary_point(&self, theta: f64) -> Point2<f64> {
        Point2::new(self.a * theta.cos(), self.b * theta.sin())
    }

    /// Boundary parameter of a (near-)boundary point, in `[0, 2pi)`.
    pub fn boundary_param(&self, p: &Point2<f64>) -> f64 {
        (p.y / self.b).atan2(p.x / self.a).rem_euclid(std::f64::consts::TAU)
    }

    /// Unit tangent `(-a sin t, b cos t) / |.|` at boundary parameter `t`.
    pub fn tangent_direction(&self, theta: f64) -> Vector2<f64> {
        Vector2::new(-self.a * theta.sin(), self.b * theta.cos()).normalize()
    }

    /// Boundary point of the complexified ellipse at a complex parameter.
    pub fn boundary_point_complex(&self, theta: Cx) -> HPoint {
        HPoint::new(theta.cos() * self.a, theta.sin() * self.b, cx(1.0))
    }

    /// Tangent line `(cos t / a) x + (sin t / b) y = 1` at a complex parameter.
    pub fn tangent_line_complex(&self, theta: Cx) -> HLine {
        HLine::new(theta.cos() / self.a, theta.sin() / self.b, cx(-1.0))
    }

    /// Complex boundary parameter `t0 = atan(i b / a)` whose tangent line
    /// passes through the circular point `I1`. Purely imaginary for a
    /// non-circular ellipse; undefined for a circle.
    pub fn isotropic_tangency_param(&self) -> Result<Cx> {
        if self.b / self.a > 1.0 - 1e-6 {
            return Err(Error::CircleIsotropy);
        }
        Ok((Cx::i() * (self.b / self.a)).atan())
    }
}

// ---------------------------------------------------------------------------
// conic coefficients
// ---------------------------------------------------------------------------

/// Coefficients `(A, B, C, D, E, F)` of a real conic. All the projective
/// operations below complexify the conic implicitly: they act on complex
/// points and lines while the coefficients stay real (every conic handled
/// by this crate is a complexified real one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl ConicCoeffs {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        Self { a, b, c, d, e, f }
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn coeffs(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    /// Symmetric matrix `M` with `p^T M p` the conic form.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.a,
            self.b / 2.0,
            self.d / 2.0,
            self.b / 2.0,
            self.c,
            self.e / 2.0,
            self.d / 2.0,
            self.e / 2.0,
            self.f,
        )
    }

    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Self::new(
            m[(0, 0)],
            2.0 * m[(0, 1)],
            m[(1, 1)],
            2.0 * m[(0, 2)],
            2.0 * m[(1, 2)],
            m[(2, 2)],
        )
    }

    fn cmatrix(&self) -> Matrix3<Cx> {
        self.matrix().map(cx)
    }

    /// Euclidean norm of the six-coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Unit-norm representative with the first significant coefficient positive.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return *self;
        }
        let v: Vec<f64> = self.coeffs().iter().map(|c| c / n).collect();
        let pivot = v.iter().find(|c| c.abs() > PIVOT_REL_TOL).copied().unwrap_or(1.0);
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        Self::from_array([
            sign * v[0],
            sign * v[1],
            sign * v[2],
            sign * v[3],
            sign * v[4],
            sign * v[5],
        ])
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.a * x * x + self.b * x * y + self.c * y * y + self.d * x + self.e * y + self.f
    }

    /// `p^T M p` at a homogeneous complex point.
    pub fn eval_point(&self, p: &HPoint) -> Cx {
        bilinear(&self.cmatrix(), &p.coords(), &p.coords())
    }

    pub fn det(&self) -> f64 {
        self.matrix().determinant()
    }

    /// Degeneracy test `|det M| < 1e-12 ||M||_F^3`, scale-invariant because
    /// the determinant is cubic in the coefficients.
    pub fn is_degenerate(&self) -> bool {
        let m = self.matrix();
        m.determinant().abs() < DEGENERACY_REL_TOL * m.norm().powi(3)
    }

    /// Dual conic (adjugate matrix) in line coordinates: a line `L` is
    /// tangent to the conic iff `L^T adj(M) L = 0`.
    pub fn dual(&self) -> Result<ConicCoeffs> {
        let m = self.matrix();
        let det = m.determinant();
        let tol = DEGENERACY_REL_TOL * m.norm().powi(3);
        if det.abs() < tol {
            return Err(Error::DegenerateConic { det: det.abs(), tol });
        }
        Ok(Self::from_matrix(&adjugate(&m)))
    }

    /// Polar line `M p` of a point; the tangent line when `p` lies on the conic.
    pub fn polar_line(&self, p: &HPoint) -> Result<HLine> {
        let v = self.cmatrix() * p.coords();
        if norm3(&v) <= 1e-14 * self.matrix().norm() * norm3(&p.coords()) {
            return Err(Error::ZeroPolar);
        }
        Ok(HLine::new(v[0], v[1], v[2]))
    }

    /// Pole `adj(M) L` of a line; the tangency point when `L` is tangent.
    pub fn pole_of(&self, line: &HLine) -> Result<HPoint> {
        let adj = adjugate(&self.matrix());
        let v = adj.map(cx) * line.coords();
        // zero relative to the adjugate's own norm, not ||M||^2: the two
        // differ wildly for valid but badly scaled (very flat) conics
        if norm3(&v) <= 1e-14 * adj.norm() * norm3(&line.coords()) {
            return Err(Error::ZeroPolar);
        }
        Ok(HPoint::new(v[0], v[1], v[2]))
    }

    /// The two tangent lines through a point not on the conic. Restricts the
    /// dual quadratic form to the pencil of lines through `p` and solves the
    /// resulting homogeneous quadratic; complex points (the circular points
    /// included) need no special handling.
    ///
    /// Uses the raw adjugate rather than [`ConicCoeffs::dual`]: the dual form
    /// of a very flat ellipse is perfectly usable even when the determinant
    /// ratio trips the rank gate, and a genuinely rank-deficient adjugate
    /// surfaces through the pencil solve instead.
    pub fn tangent_lines_from(&self, p: &HPoint) -> Result<(HLine, HLine)> {
        let q = adjugate(&self.matrix()).map(cx);
        let (l0, l1) = pencil_basis(&p.coords());
        let q00 = bilinear(&q, &l0, &l0);
        let q01 = bilinear(&q, &l0, &l1);
        let q11 = bilinear(&q, &l1, &l1);
        let roots = solve_pencil_quadratic(q00, q01, q11)?;
        if roots.coincident {
            return Err(Error::CoincidentTangents);
        }
        let line = |(s, t): (Cx, Cx)| {
            let v = l0 * s + l1 * t;
            HLine::new(v[0], v[1], v[2])
        };
        Ok((line(roots.first), line(roots.second)))
    }

    /// Both intersection points of a line with the conic; a tangent line
    /// yields a doubled point (two nearly identical representatives).
    pub fn line_intersections(&self, line: &HLine) -> Result<(HPoint, HPoint)> {
        let m = self.cmatrix();
        let (p0, p1) = pencil_basis(&line.coords());
        let q00 = bilinear(&m, &p0, &p0);
        let q01 = bilinear(&m, &p0, &p1);
        let q11 = bilinear(&m, &p1, &p1);
        let roots = solve_pencil_quadratic(q00, q01, q11)?;
        let point = |(s, t): (Cx, Cx)| {
            let v = p0 * s + p1 * t;
            HPoint::new(v[0], v[1], v[2])
        };
        Ok((point(roots.first), point(roots.second)))
    }

    /// `|L^T adj(M) L|` after unit-norm scaling of both the adjugate and the
    /// line; zero exactly when the line is tangent to the conic.
    pub fn tangency_residual(&self, line: &HLine) -> f64 {
        let q = adjugate(&self.matrix());
        let qn = q.norm();
        let ln = norm3(&line.coords());
        if qn == 0.0 || ln == 0.0 {
            return f64::NAN;
        }
        let q = q.map(|x| cx(x / qn));
        let v = line.coords().map(|c| c / ln);
        bilinear(&q, &v, &v).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn ellipse(a: f64, b: f64) -> Ellipse {
        Ellipse::new(a, b).unwrap()
    }

    #[test]
    fn rejects_invalid_semi_axes() {
        assert!(Ellipse::new(1.0, 2.0).is_err());
        assert!(Ellipse::new(1.0, 0.0).is_err());
        assert!(Ellipse::new(f64::NAN, 1.0).is_err());
        assert!(Ellipse::new(1.0, 1.0).is_ok());
    }

    #[test]
    fn unit_circle_coefficients() {
        let c = ellipse(1.0, 1.0).conic();
        assert_eq!(c.coeffs(), [1.0, 0.0, 1.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn two_one_ellipse_coefficients() {
        let c = ellipse(2.0, 1.0).conic();
        assert_eq!(c.coeffs(), [0.25, 0.0, 1.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn boundary_parametrization_satisfies_conic() {
        let e = ellipse(1.0, 0.5);
        let c = e.conic();
        for k in 0..32 {
            let t = 0.3 + k as f64 * 0.19;
            let p = e.boundary_point(t);
            assert!(c.eval(p.x, p.y).abs() < 1e-15, "residual at t = {t}");
            assert_abs_diff_eq!(e.eval(&p), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn boundary_param_round_trips() {
        let e = ellipse(1.3, 0.4);
        for k in 0..16 {
            let t = k as f64 * 0.41;
            let p = e.boundary_point(t);
            let back = e.boundary_param(&p);
            let diff = crate::numeric::wrap_angle(back - t);
            assert!(diff.abs() < 1e-12, "t = {t}, diff = {diff:.3e}");
        }
    }

    #[test]
    fn confocal_preserves_focal_distance_exactly() {
        let e = ellipse(1.0, 0.5);
        let g = e.confocal(0.2).unwrap();
        let c2 = |e: &Ellipse| e.a() * e.a() - e.b() * e.b();
        assert!((c2(&e) - c2(&g)).abs() <= 1e-15);
        // identity at lambda = 0
        let id = e.confocal(0.0).unwrap();
        assert_eq!(id, e);
        // circle: lambda = 3/4 of the squared radius leaves radius 1/2
        let circle = ellipse(1.0, 1.0);
        let inner = circle.confocal(0.75).unwrap();
        assert_relative_eq!(inner.a(), 0.5);
        assert_relative_eq!(inner.b(), 0.5);
        // out-of-branch parameters are rejected
        assert!(e.confocal(0.25).is_err());
        assert!(e.confocal(-0.1).is_err());
    }

    #[test]
    fn polar_lines_of_reference_points() {
        let circle = ellipse(1.0, 1.0).conic();
        // point on the circle: polar is the tangent x = 1
        let l = circle.polar_line(&HPoint::from_xy(1.0, 0.0)).unwrap();
        assert!(l.distance_to(&HLine::from_real(1.0, 0.0, -1.0)) < 1e-15);
        // exterior point (2, 0): polar is the chord of contact x = 1/2
        let l = circle.polar_line(&HPoint::from_xy(2.0, 0.0)).unwrap();
        assert!(l.distance_to(&HLine::from_real(2.0, 0.0, -1.0)) < 1e-15);
        // ellipse (2, 1) at (0, 1): tangent y = 1
        let l = ellipse(2.0, 1.0).conic().polar_line(&HPoint::from_xy(0.0, 1.0)).unwrap();
        assert!(l.distance_to(&HLine::from_real(0.0, 1.0, -1.0)) < 1e-15);
    }

    #[test]
    fn polar_matches_parametric_tangent() {
        let e = ellipse(1.4, 0.6);
        let c = e.conic();
        for k in 0..12 {
            let t = 0.1 + 0.5 * k as f64;
            let p = HPoint::from_point(&e.boundary_point(t));
            let polar = c.polar_line(&p).unwrap();
            let param = e.tangent_line_complex(cx(t));
            assert!(polar.distance_to(&param) < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn unit_circle_is_projectively_self_dual() {
        let c = ellipse(1.0, 1.0).conic();
        let d = c.dual().unwrap().normalized();
        let expect = c.normalized();
        for (x, y) in d.coeffs().iter().zip(expect.coeffs()) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
        }
    }

    #[test]
    fn dual_detects_tangency_of_vertical_lines() {
        let d = ellipse(1.0, 1.0).conic();
        // x = 1 is tangent, x = 2 is not
        assert!(d.tangency_residual(&HLine::from_real(1.0, 0.0, -1.0)) < 1e-15);
        assert!(d.tangency_residual(&HLine::from_real(1.0, 0.0, -2.0)) > 1e-2);
        // general ellipse: l x + m y + n = 0 tangent iff a^2 l^2 + b^2 m^2 = n^2
        let e = ellipse(1.7, 0.9);
        let line = HLine::from_real(0.3, -0.4, -(1.7f64.powi(2) * 0.09 + 0.9f64.powi(2) * 0.16).sqrt());
        assert!(e.conic().tangency_residual(&line) < 1e-15);
    }

    #[test]
    fn degenerate_conic_has_no_dual() {
        // rank-2: pair of lines x^2 - y^2 = 0
        let c = ConicCoeffs::new(1.0, 0.0, -1.0, 0.0, 0.0, 0.0);
        assert!(c.is_degenerate());
        assert!(matches!(c.dual(), Err(Error::DegenerateConic { .. })));
    }

    #[test]
    fn tangents_from_exterior_real_point() {
        let c = ellipse(1.0, 1.0).conic();
        let (t1, t2) = c.tangent_lines_from(&HPoint::from_xy(2.0, 0.0)).unwrap();
        let p = HPoint::from_xy(2.0, 0.0);
        let upper = HPoint::from_xy(0.5, 3f64.sqrt() / 2.0);
        let lower = HPoint::from_xy(0.5, -(3f64.sqrt()) / 2.0);
        for t in [&t1, &t2] {
            assert!(t.incidence(&p) < 1e-14, "tangent must pass through the point");
            assert!(c.tangency_residual(t) < 1e-14);
            assert!(
                t.incidence(&upper) < 1e-14 || t.incidence(&lower) < 1e-14,
                "tangent must touch at (1/2, +-sqrt(3)/2)"
            );
        }
        assert!(t1.distance_to(&t2) > 0.1, "the two tangents are distinct");
    }

    #[test]
    fn tangents_from_circle_center_are_the_isotropic_lines() {
        let c = ellipse(1.0, 1.0).conic();
        let (t1, t2) = c.tangent_lines_from(&HPoint::from_xy(0.0, 0.0)).unwrap();
        let i1 = HPoint::circular_i1();
        let i2 = HPoint::circular_i2();
        let hits_i1 = t1.incidence(&i1).min(t2.incidence(&i1));
        let hits_i2 = t1.incidence(&i2).min(t2.incidence(&i2));
        assert!(hits_i1 < 1e-15, "one tangent passes through I1");
        assert!(hits_i2 < 1e-15, "one tangent passes through I2");
        assert!(t1.is_isotropic(1e-12) && t2.is_isotropic(1e-12));
    }

    #[test]
    fn tangents_from_circular_point_touch_the_ellipse() {
        let e = ellipse(1.0, 0.5);
        let c = e.conic();
        let (t1, t2) = c.tangent_lines_from(&HPoint::circular_i1()).unwrap();
        let focal = e.focal_distance();
        // closed form: the tangents through I1 are (1 : i : -c) and (1 : i : +c)
        let minus = HLine::new(cx(1.0), Cx::i(), cx(-focal));
        let plus = HLine::new(cx(1.0), Cx::i(), cx(focal));
        let d = t1.distance_to(&minus).min(t1.distance_to(&plus));
        assert!(d < 1e-12, "tangent off closed form by {d:.3e}");
        for t in [&t1, &t2] {
            assert!(c.tangency_residual(t) < 1e-10);
            assert!(t.incidence(&HPoint::circular_i1()) < 1e-12);
        }
        assert!(t1.distance_to(&t2) > 1e-3);
    }

    #[test]
    fn tangents_from_interior_point_are_complex_but_tangent() {
        let c = ellipse(1.0, 1.0).conic();
        let (t1, t2) = c.tangent_lines_from(&HPoint::from_xy(0.5, 0.0)).unwrap();
        for t in [&t1, &t2] {
            assert!(c.tangency_residual(t) < 1e-14);
            assert!(t.to_real(1e-9).is_none(), "interior point has no real tangent");
        }
    }

    #[test]
    fn tangents_from_point_on_conic_coincide() {
        let c = ellipse(1.0, 0.5).conic();
        let p = HPoint::from_point(&ellipse(1.0, 0.5).boundary_point(0.7));
        assert!(matches!(
            c.tangent_lines_from(&p),
            Err(Error::CoincidentTangents)
        ));
    }

    #[test]
    fn line_intersections_of_reference_lines() {
        let c = ellipse(1.0, 1.0).conic();
        // x-axis meets the unit circle at (+-1, 0)
        let (p1, p2) = c.line_intersections(&HLine::from_real(0.0, 1.0, 0.0)).unwrap();
        let hits = |p: &HPoint, x: f64| p.distance_to(&HPoint::from_xy(x, 0.0)) < 1e-14;
        assert!(hits(&p1, 1.0) && hits(&p2, -1.0) || hits(&p1, -1.0) && hits(&p2, 1.0));
        // x = 1/2 meets at (1/2, +-sqrt(3)/2)
        let (p1, p2) = c.line_intersections(&HLine::from_real(2.0, 0.0, -1.0)).unwrap();
        let s = 3f64.sqrt() / 2.0;
        assert!(p1.distance_to(&HPoint::from_xy(0.5, s)).min(p1.distance_to(&HPoint::from_xy(0.5, -s))) < 1e-14);
        assert!(p2.distance_to(&HPoint::from_xy(0.5, s)).min(p2.distance_to(&HPoint::from_xy(0.5, -s))) < 1e-14);
        assert!(p1.distance_to(&p2) > 0.1);
        // x-axis meets (1, 0.5) at (+-1, 0)
        let e = ellipse(1.0, 0.5).conic();
        let (p1, p2) = e.line_intersections(&HLine::from_real(0.0, 1.0, 0.0)).unwrap();
        assert!(p1.distance_to(&HPoint::from_xy(1.0, 0.0)).min(p1.distance_to(&HPoint::from_xy(-1.0, 0.0))) < 1e-14);
        assert!(p2.distance_to(&HPoint::from_xy(1.0, 0.0)).min(p2.distance_to(&HPoint::from_xy(-1.0, 0.0))) < 1e-14);
    }

    #[test]
    fn tangent_line_intersects_in_doubled_point() {
        let c = ellipse(1.0, 1.0).conic();
        let (p1, p2) = c.line_intersections(&HLine::from_real(1.0, 0.0, -1.0)).unwrap();
        let contact = HPoint::from_xy(1.0, 0.0);
        assert!(p1.distance_to(&contact) < 1e-6);
        assert!(p2.distance_to(&contact) < 1e-6);
    }

    #[test]
    fn tangency_coherence_of_polar_lines() {
        // for p on the conic, the polar is tangent: doubled intersection and
        // zero dual residual
        let e = ellipse(1.6, 0.7);
        let c = e.conic();
        for k in 0..8 {
            let t = 0.2 + 0.77 * k as f64;
            let p = HPoint::from_point(&e.boundary_point(t));
            let polar = c.polar_line(&p).unwrap();
            assert!(c.tangency_residual(&polar) < 1e-10);
            let (q1, q2) = c.line_intersections(&polar).unwrap();
            assert!(q1.distance_to(&p) < 1e-5, "doubled point near contact");
            assert!(q2.distance_to(&p) < 1e-5);
        }
    }

    #[test]
    fn isotropic_tangency_param_is_purely_imaginary() {
        let e = ellipse(1.0, 0.5);
        let t0 = e.isotropic_tangency_param().unwrap();
        assert_abs_diff_eq!(t0.re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(t0.im, (0.5f64).atanh(), epsilon = 1e-15);
        // the tangent at t0 passes through I1 and is isotropic
        let line = e.tangent_line_complex(t0);
        assert!(line.incidence(&HPoint::circular_i1()) < 1e-15);
        assert!(line.is_isotropic(1e-13));
        assert!(ellipse(1.0, 1.0).isotropic_tangency_param().is_err());
    }

    #[test]
    fn isotropy_test_recognizes_real_lines_as_non_isotropic() {
        assert!(!HLine::from_real(1.0, 2.0, 3.0).is_isotropic(1e-12));
        assert!(HLine::new(cx(1.0), Cx::i(), cx(5.0)).is_isotropic(1e-12));
    }

    #[test]
    fn join_and_meet_are_dual() {
        let p = HPoint::from_xy(1.0, 2.0);
        let q = HPoint::from_xy(-3.0, 0.5);
        let line = p.join(&q);
        assert!(line.incidence(&p) < 1e-15);
        assert!(line.incidence(&q) < 1e-15);
        let other = HLine::from_real(0.0, 1.0, 0.0);
        let meet = line.meet(&other);
        assert!(line.incidence(&meet) < 1e-15);
        assert!(other.incidence(&meet) < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn canonical_representative_is_scale_invariant(
            x in -3.0f64..3.0, y in -3.0f64..3.0, w in 0.1f64..3.0,
            sr in -2.0f64..2.0, si in -2.0f64..2.0,
        ) {
            prop_assume!(sr.abs() + si.abs() > 0.1);
            let p = HPoint::from_xy(x / w, y / w);
            let s = Cx::new(sr, si);
            let scaled = HPoint::new(p.x * s, p.y * s, p.w * s);
            prop_assert!(p.distance_to(&scaled) < 1e-12);
            let c = scaled.normalized();
            let n = norm3(&c.coords());
            prop_assert!((n - 1.0).abs() < 1e-12);
        }

        #[test]
        fn dual_of_dual_returns_the_conic(a in 0.4f64..2.5, ratio in 0.15f64..1.0) {
            let e = ellipse(a, a * ratio);
            let c = e.conic();
            let dd = c.dual().unwrap().dual().unwrap();
            let x = c.normalized().coeffs();
            let y = dd.normalized().coeffs();
            for (u, v) in x.iter().zip(y) {
                prop_assert!((u - v).abs() < 1e-10);
            }
        }

        #[test]
        fn tangents_from_random_exterior_points(
            a in 0.6f64..2.0, ratio in 0.2f64..0.95,
            px in -4.0f64..4.0, py in -4.0f64..4.0,
        ) {
            let e = ellipse(a, a * ratio);
            let p = Point2::new(px, py);
            prop_assume!(e.eval(&p) > 0.1);
            let hp = HPoint::from_point(&p);
            let (t1, t2) = e.conic().tangent_lines_from(&hp).unwrap();
            for t in [&t1, &t2] {
                prop_assert!(t.incidence(&hp) < 1e-12);
                prop_assert!(e.conic().tangency_residual(t) < 1e-10);
            }
            prop_assert!(t1.distance_to(&t2) > 1e-7);
        }
    }
}
