//! Billiard dynamics inside an ellipse, specialized to triangular (3-bounce)
//! closed orbits.
//!
//! Chords are never constructed from the reflection law directly: every
//! chord of a 3-periodic orbit is tangent to a confocal caustic ellipse, so
//! the next vertex is obtained by drawing the tangent lines from the current
//! vertex to the caustic and intersecting the selected one with the table.
//! The reflection law then holds by construction and is *checked*, not
//! enforced, which makes it an honest oracle for the geometry code.
//!
//! The caustic parameter for the 3-periodic family is the root of the
//! closure defect (angular mismatch after three bounces) inside the confocal
//! branch `lambda in (0, b^2)`, located by a scan plus bisection.

use nalgebra::{Point2, Vector2};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::conic::{ConicCoeffs, Ellipse, HLine, HPoint};
use crate::error::{Error, Result};
use crate::numeric::wrap_angle;
use crate::tolerances::Tolerances;

/// Realization tolerance when turning complex tangent lines/points real.
const REALIZE_TOL: f64 = 1e-8;
/// Euclidean tie tolerance for matching tangency points across chords.
const BRANCH_TIE_TOL: f64 = 1e-8;
/// Number of scan points bracketing the closure-defect root.
const SCAN_POINTS: usize = 64;
/// The scan stays this relative margin away from the `lambda` branch ends.
/// Kept tiny because the 3-periodic root crowds the `b^2` end on flat
/// tables (relative gap roughly `0.4 (b/a)^4`).
const LAMBDA_MARGIN_REL: f64 = 1e-9;
/// Bisection stops once the bracket is narrower than this.
const BISECT_WIDTH: f64 = 1e-14;
/// Extra bisection continues until the defect itself is this small.
const BISECT_DEFECT: f64 = 1e-13;
/// Axis ratio beyond which the table counts as a circle and the caustic
/// parameter is `3/4 a^2` by symmetry. The cutoff sits at `1 - 1e-12`
/// because the shortcut's caustic is off by the same order as the
/// asymmetry, and its closure gap (about `4 (1 - b/a) a`) must stay far
/// below the closure tolerance; milder near-circles go through the scan.
const CIRCLE_RATIO: f64 = 1.0 - 1e-12;

/// Which of the two tangent chords leaves a vertex when no incoming chord
/// constrains the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Counterclockwise around the caustic.
    First,
    /// Clockwise around the caustic.
    Second,
}

/// One chord of the orbit: the supporting line, its far endpoint on the
/// table, and its tangency point on the caustic.
#[derive(Debug, Clone, Copy)]
pub struct Chord {
    pub end: Point2<f64>,
    pub side: HLine,
    pub tangency: Point2<f64>,
}

/// A closed 3-periodic orbit. `sides[i]` joins `vertices[i]` to
/// `vertices[(i + 1) % 3]` and touches the caustic at `tangency_points[i]`.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub vertices: [Point2<f64>; 3],
    /// Boundary parameters of the vertices, in `[0, 2pi)`.
    pub thetas: [f64; 3],
    pub sides: [HLine; 3],
    pub tangency_points: [Point2<f64>; 3],
    pub perimeter: f64,
    pub caustic: Ellipse,
    /// Euclidean gap between the end of the third chord and the first vertex.
    pub closure_gap: f64,
}

/// Residual block of [`Orbit::validate`]; every entry is a maximum over the
/// relevant vertices or sides.
#[derive(Debug, Clone, Copy)]
pub struct OrbitResiduals {
    /// Max `|x^2/a^2 + y^2/b^2 - 1|` over the vertices.
    pub on_boundary: f64,
    /// Max angular defect of the equal-angle law at the vertices (radians).
    pub reflection: f64,
    /// Euclidean closure gap.
    pub closure: f64,
    /// Max normalized dual-conic residual of the sides against the caustic.
    pub tangency: f64,
}

/// Solved caustic parameter for the 3-periodic family.
#[derive(Debug, Clone, Copy)]
pub struct CausticSolution {
    pub lambda_star: f64,
    pub caustic: Ellipse,
    /// Closure defect measured at `lambda_star` (diagnostic; see docs on the
    /// circle shortcut for the near-circle caveat).
    pub defect_at_solution: f64,
    /// Final bisection bracket; collapsed to a point on the circle shortcut.
    pub bracket: (f64, f64),
    pub iterations: u32,
}

/// Mirror reflection of a unit direction `d` across a unit tangent `t`:
/// `2 (d . t) t - d`. Both inputs are assumed normalized.
pub fn reflect_direction(d: &Vector2<f64>, t: &Vector2<f64>) -> Vector2<f64> {
    t * (2.0 * d.dot(t)) - d
}

/// Turns a complex tangent line into a real chord of the table: realizes the
/// line, finds its caustic tangency (the pole), orients it from `p` towards
/// the tangency, and intersects with the table by deflating the known root
/// at `p` out of the quadratic (Vieta product step), which keeps the far
/// intersection fully accurate even though `p` itself is a root.
fn realize_chord(
    table: &Ellipse,
    caustic_conic: &ConicCoeffs,
    p: Point2<f64>,
    line: &HLine,
) -> Result<Chord> {
    let (l, m, n) = line.to_real(REALIZE_TOL).ok_or(Error::NoRealTangent)?;
    let side = HLine::from_real(l, m, n).normalized();
    let tangency = caustic_conic
        .pole_of(&side)?
        .to_real(REALIZE_TOL)
        .ok_or(Error::NoRealTangent)?;

    let mut u = Vector2::new(-m, l).normalize();
    if u.dot(&(tangency - p)) < 0.0 {
        u = -u;
    }
    let cc = table.conic();
    let alpha = cc.a * u.x * u.x + cc.b * u.x * u.y + cc.c * u.y * u.y;
    let beta = (2.0 * cc.a * p.x + cc.b * p.y + cc.d) * u.x
        + (cc.b * p.x + 2.0 * cc.c * p.y + cc.e) * u.y;
    let gamma = cc.eval(p.x, p.y);
    let mut s_far = -beta / alpha;
    let s_near = gamma / (alpha * s_far);
    s_far = -beta / alpha - s_near;
    if s_far.is_nan() || s_far <= 0.0 {
        return Err(Error::ChordConstruction { s: s_far });
    }
    Ok(Chord {
        end: p + u * s_far,
        side,
        tangency,
    })
}

/// Both tangent chords leaving `p`, ordered `[counterclockwise, clockwise]`
/// by the sign of `cross(p, tangency)`.
fn tangent_chords(table: &Ellipse, caustic: &Ellipse, p: Point2<f64>) -> Result<[Chord; 2]> {
    let residual = table.eval(&p).abs();
    let tol = Tolerances::DEFAULT.vertex_on_boundary;
    if residual > tol {
        return Err(Error::PointNotOnBoundary { residual, tol });
    }
    if !(caustic.a() < table.a() && caustic.b() < table.b()) {
        return Err(Error::CausticNotNested);
    }
    let conic = caustic.conic();
    let (l1, l2) = conic.tangent_lines_from(&HPoint::from_point(&p))?;
    let c1 = realize_chord(table, &conic, p, &l1)?;
    let c2 = realize_chord(table, &conic, p, &l2)?;
    let orientation = |c: &Chord| p.x * c.tangency.y - p.y * c.tangency.x;
    if orientation(&c1) >= orientation(&c2) {
        Ok([c1, c2])
    } else {
        Ok([c2, c1])
    }
}

/// Next chord of the orbit from boundary point `p`. Without an incoming
/// tangency the counterclockwise branch is taken; with one, the chord whose
/// caustic tangency differs from `incoming_tangency` is selected, so the
/// orbit never immediately retraces itself.
pub fn next_chord(
    table: &Ellipse,
    caustic: &Ellipse,
    p: Point2<f64>,
    incoming_tangency: Option<Point2<f64>>,
) -> Result<Chord> {
    let [ccw, cw] = tangent_chords(table, caustic, p)?;
    let Some(incoming) = incoming_tangency else {
        return Ok(ccw);
    };
    let d_ccw = (ccw.tangency - incoming).norm();
    let d_cw = (cw.tangency - incoming).norm();
    if d_ccw <= BRANCH_TIE_TOL && d_cw <= BRANCH_TIE_TOL {
        return Err(Error::AmbiguousBranch {
            tol: BRANCH_TIE_TOL,
        });
    }
    if d_ccw.min(d_cw) > BRANCH_TIE_TOL {
        return Err(Error::UnmatchedTangency {
            nearest: d_ccw.min(d_cw),
        });
    }
    Ok(if d_ccw > d_cw { ccw } else { cw })
}

/// Signed angular mismatch after three tangent chords: starts at
/// `boundary_point(theta0)`, follows three chords tangent to the confocal
/// ellipse at parameter `lambda`, and wraps the difference between the final
/// and initial boundary parameters into `(-pi, pi]`. Zero exactly on the
/// 3-periodic caustic.
pub fn closure_defect(table: &Ellipse, lambda: f64, theta0: f64) -> Result<f64> {
    let caustic = table.confocal(lambda)?;
    let p0 = table.boundary_point(theta0);
    let c1 = next_chord(table, &caustic, p0, None)?;
    let c2 = next_chord(table, &caustic, c1.end, Some(c1.tangency))?;
    let c3 = next_chord(table, &caustic, c2.end, Some(c2.tangency))?;
    Ok(wrap_angle(table.boundary_param(&c3.end) - theta0.rem_euclid(TAU)))
}

/// Narrows a scan window to a genuine defect bracket: a sign change whose
/// endpoint values differ by less than `pi`. The wrap jump of the angle
/// representation keeps a gap near `2 pi` at every subdivision level and is
/// rejected once `depth` runs out; a window hiding both the wrap and the
/// root splits into a pure-wrap part (rejected) and a root part (accepted).
fn refine_bracket(
    table: &Ellipse,
    theta0: f64,
    la: f64,
    da: f64,
    lb: f64,
    db: f64,
    depth: u32,
) -> Option<(f64, f64, f64, f64)> {
    if da * db <= 0.0 && (db - da).abs() < PI {
        return Some((la, lb, da, db));
    }
    if depth == 0 {
        return None;
    }
    let mid = 0.5 * (la + lb);
    if mid <= la || mid >= lb {
        return None;
    }
    let dm = closure_defect(table, mid, theta0).ok()?;
    if da * dm <= 0.0 || dm < da - FRAC_PI_2 {
        if let Some(hit) = refine_bracket(table, theta0, la, da, mid, dm, depth - 1) {
            return Some(hit);
        }
    }
    if dm * db <= 0.0 || db < dm - FRAC_PI_2 {
        return refine_bracket(table, theta0, mid, dm, lb, db, depth - 1);
    }
    None
}

/// Caustic of the triangular orbit family.
///
/// Scans `SCAN_POINTS` equally spaced `lambda` values strictly inside
/// `(0, b^2)`, then narrows each candidate window to a genuine bracket via
/// [`refine_bracket`] (excluding the fake jump where the wrapped defect
/// passes `+-pi`), and bisects the bracket below `BISECT_WIDTH`, continuing
/// while the defect itself stays above `BISECT_DEFECT` (relevant for flat
/// tables, where the defect is steep in `lambda`).
///
/// Tables with `b/a > 1 - 1e-12` take the circle shortcut
/// `lambda* = 3/4 a^2` (tangent chords of an inscribed equilateral
/// triangle). On the shortcut the stored defect is measured, not solved
/// for, and for *near*-circles it reflects the shortcut's own error rather
/// than the bisection tolerance.
pub fn caustic_for_3_periodic(table: &Ellipse) -> Result<CausticSolution> {
    if table.axis_ratio() > CIRCLE_RATIO {
        let lambda_star = 0.75 * table.a() * table.a();
        let caustic = table.confocal(lambda_star)?;
        let defect = closure_defect(table, lambda_star, 0.0)?;
        return Ok(CausticSolution {
            lambda_star,
            caustic,
            defect_at_solution: defect,
            bracket: (lambda_star, lambda_star),
            iterations: 0,
        });
    }

    let b2 = table.b() * table.b();
    let lo = LAMBDA_MARGIN_REL * b2;
    let hi = b2 * (1.0 - LAMBDA_MARGIN_REL);
    let theta0 = 0.0;

    let mut grid = Vec::with_capacity(SCAN_POINTS);
    for k in 0..SCAN_POINTS {
        let lambda = lo + (hi - lo) * k as f64 / (SCAN_POINTS - 1) as f64;
        let defect = closure_defect(table, lambda, theta0).ok();
        grid.push((lambda, defect));
    }

    // Candidate windows, most promising first: a sign change with a small
    // jump is already a genuine bracket; a sign change with a jump past pi is
    // the wrap artifact; a drop of the wrapped value hides the wrap and
    // possibly the root behind it (flat tables squeeze both into one window).
    let mut candidates: Vec<(f64, f64, f64, f64)> = Vec::new();
    for pair in grid.windows(2) {
        let (la, da) = pair[0];
        let (lb, db) = pair[1];
        let (Some(da), Some(db)) = (da, db) else {
            continue;
        };
        if da * db <= 0.0 || db < da - FRAC_PI_2 {
            candidates.push((la, lb, da, db));
        }
    }
    candidates.sort_by(|x, y| (x.2.abs() + x.3.abs()).total_cmp(&(y.2.abs() + y.3.abs())));
    let bracket = candidates
        .into_iter()
        .find_map(|(la, lb, da, db)| refine_bracket(table, theta0, la, da, lb, db, 64));
    let (mut lam_lo, mut lam_hi, mut d_lo, _d_hi) = bracket.ok_or(Error::NoDefectBracket)?;

    let mut iterations = 0u32;
    let mut mid = 0.5 * (lam_lo + lam_hi);
    let mut d_mid = if lam_lo == lam_hi {
        d_lo
    } else {
        closure_defect(table, mid, theta0)?
    };
    while lam_hi - lam_lo > BISECT_WIDTH || d_mid.abs() > BISECT_DEFECT {
        let next = 0.5 * (lam_lo + lam_hi);
        if next == lam_lo || next == lam_hi {
            break; // bracket at floating-point resolution
        }
        mid = next;
        d_mid = closure_defect(table, mid, theta0)?;
        if d_lo * d_mid <= 0.0 {
            lam_hi = mid;
        } else {
            lam_lo = mid;
            d_lo = d_mid;
        }
        iterations += 1;
        if iterations > 300 {
            break;
        }
    }

    let lambda_star = mid;
    Ok(CausticSolution {
        lambda_star,
        caustic: table.confocal(lambda_star)?,
        defect_at_solution: closure_defect(table, lambda_star, theta0)?,
        bracket: (lam_lo, lam_hi),
        iterations,
    })
}

/// Closed triangular orbit through `boundary_point(theta0)`, leaving along
/// the chosen branch. The two branches traverse the same triangle in
/// opposite directions.
pub fn orbit_from_vertex(
    table: &Ellipse,
    solution: &CausticSolution,
    theta0: f64,
    branch: Branch,
) -> Result<Orbit> {
    let caustic = solution.caustic;
    let p1 = table.boundary_point(theta0);
    let [ccw, cw] = tangent_chords(table, &caustic, p1)?;
    let first = match branch {
        Branch::First => ccw,
        Branch::Second => cw,
    };
    let second = next_chord(table, &caustic, first.end, Some(first.tangency))?;
    let third = next_chord(table, &caustic, second.end, Some(second.tangency))?;

    let gap = (third.end - p1).norm();
    let tol = Tolerances::DEFAULT.closure;
    if gap > tol {
        return Err(Error::ClosureFailure { gap, tol });
    }

    let vertices = [p1, first.end, second.end];
    let perimeter = (first.end - p1).norm()
        + (second.end - first.end).norm()
        + (third.end - second.end).norm();
    Ok(Orbit {
        vertices,
        thetas: [
            theta0.rem_euclid(TAU),
            table.boundary_param(&first.end),
            table.boundary_param(&second.end),
        ],
        sides: [first.side, second.side, third.side],
        tangency_points: [first.tangency, second.tangency, third.tangency],
        perimeter,
        caustic,
        closure_gap: gap,
    })
}

/// The orbit family sampled at `n >= 3` equally spaced starting parameters
/// `theta0 = 2 pi k / n`, all on the counterclockwise branch. The caustic is
/// solved once and shared.
pub fn orbit_family(table: &Ellipse, n: usize) -> Result<Vec<Orbit>> {
    if n < 3 {
        return Err(Error::FamilyTooSmall { n });
    }
    let solution = caustic_for_3_periodic(table)?;
    (0..n)
        .map(|k| orbit_from_vertex(table, &solution, TAU * k as f64 / n as f64, Branch::First))
        .collect()
}

impl Orbit {
    pub fn side_lengths(&self) -> [f64; 3] {
        let v = &self.vertices;
        [
            (v[1] - v[0]).norm(),
            (v[2] - v[1]).norm(),
            (v[0] - v[2]).norm(),
        ]
    }

    /// Angular residual of the equal-angle law at each vertex: the incoming
    /// direction reflected across the boundary tangent is compared with the
    /// outgoing direction via `atan2(|cross|, dot)`, which stays fully
    /// accurate for the tiny angles involved.
    pub fn reflection_residuals(&self, table: &Ellipse) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, residual) in out.iter_mut().enumerate() {
            let v = self.vertices[i];
            let prev = self.vertices[(i + 2) % 3];
            let next = self.vertices[(i + 1) % 3];
            let d_in = (v - prev).normalize();
            let d_out = (next - v).normalize();
            let t = table.tangent_direction(self.thetas[i]);
            let r = reflect_direction(&d_in, &t);
            let cross = r.x * d_out.y - r.y * d_out.x;
            *residual = cross.abs().atan2(r.dot(&d_out));
        }
        out
    }

    /// Max normalized dual-conic residual of the sides against the caustic.
    pub fn tangency_residual(&self) -> f64 {
        let conic = self.caustic.conic();
        self.sides
            .iter()
            .map(|s| conic.tangency_residual(s))
            .fold(0.0, f64::max)
    }

    /// All construction invariants in one block of maxima.
    pub fn validate(&self, table: &Ellipse) -> OrbitResiduals {
        let on_boundary = self
            .vertices
            .iter()
            .map(|v| table.eval(v).abs())
            .fold(0.0, f64::max);
        let reflection = self
            .reflection_residuals(table)
            .into_iter()
            .fold(0.0, f64::max);
        OrbitResiduals {
            on_boundary,
            reflection,
            closure: self.closure_gap,
            tangency: self.tangency_residual(),
        }
    }
}
