//! Error type shared by every module in this crate.
//!
//! Messages name the violated invariant so that callers (the CLI in
//! particular) can surface them verbatim.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ellipse semi-axes (a, b) = ({a}, {b}): require finite a >= b > 0")]
    InvalidEllipse { a: f64, b: f64 },

    #[error("confocal parameter {lambda} outside the ellipse branch [0, {upper})")]
    ConfocalParameter { lambda: f64, upper: f64 },

    #[error("degenerate conic: |det M| = {det:.3e} is below {tol:.3e}")]
    DegenerateConic { det: f64, tol: f64 },

    #[error("polar of the point is the zero vector (point lies in the conic matrix kernel)")]
    ZeroPolar,

    #[error("tangent lines from the point coincide (point lies on the conic)")]
    CoincidentTangents,

    #[error("degenerate pencil: the tangency form vanishes identically")]
    DegeneratePencil,

    #[error("homogeneous coordinates must not all vanish")]
    ZeroVector,

    #[error("direction coordinate of the zero vector is undefined")]
    ZeroDirection,

    #[error("mirror coordinate must be neither 0 nor infinity (non-isotropic mirror)")]
    IsotropicMirror,

    #[error("epsilon sequence must be strictly decreasing, >= 1e-8, with >= 3 entries")]
    BadEpsilonSequence,

    #[error("ellipses are not confocal: focal parameters differ by {delta:.3e}")]
    NotConfocal { delta: f64 },

    #[error("complexified circle passes through the circular points; isotropic tangents are undefined")]
    CircleIsotropy,

    #[error("isotropic tangency points are separated by only {separation:.3e}; need > {min:.3e}")]
    TangencyCollision { separation: f64, min: f64 },

    #[error("point is not on the billiard boundary: residual {residual:.3e} exceeds {tol:.3e}")]
    PointNotOnBoundary { residual: f64, tol: f64 },

    #[error("caustic is not strictly nested inside the table")]
    CausticNotNested,

    #[error("no real tangent line from the point to the caustic")]
    NoRealTangent,

    #[error("chord construction failed: second boundary intersection at parameter {s:.3e} <= 0")]
    ChordConstruction { s: f64 },

    #[error("incoming tangency matches neither tangent line (nearest at distance {nearest:.3e})")]
    UnmatchedTangency { nearest: f64 },

    #[error("tangency points coincide within {tol:.3e}; branch selection is ambiguous")]
    AmbiguousBranch { tol: f64 },

    #[error("closure defect has no sign change on the caustic scan grid")]
    NoDefectBracket,

    #[error("orbit failed to close: gap {gap:.3e} exceeds {tol:.3e}")]
    ClosureFailure { gap: f64, tol: f64 },

    #[error("orbit family needs at least 3 members, got {n}")]
    FamilyTooSmall { n: usize },

    #[error("degenerate orbit: shortest side {min_side:.3e} is below 1e-9")]
    DegenerateOrbit { min_side: f64 },

    #[error("conic fit needs at least 6 points, got {n}")]
    TooFewPoints { n: usize },

    #[error("locus sweep needs at least 12 samples, got {n}")]
    TooFewSamples { n: usize },

    #[error("fitted locus is not an ellipse (kind = {kind})")]
    LocusNotEllipse { kind: &'static str },

    #[error("fitted locus violates symmetry: {what} = {value:.3e} exceeds {tol:.3e}")]
    LocusAsymmetry {
        what: &'static str,
        value: f64,
        tol: f64,
    },

    #[error("locus meets the foci axis in complex or doubled points (relative discriminant {disc:.3e})")]
    FociAxisCrossing { disc: f64 },

    #[error("incenter-height derivative {value:.3e} is below the transversality floor {min:.3e}")]
    NotTransversal { value: f64, min: f64 },

    #[error("axis ratio {t} outside the supported range (0, {max}]")]
    RatioOutOfRange { t: f64, max: f64 },

    #[error("unknown tolerance name `{0}`")]
    UnknownTolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
