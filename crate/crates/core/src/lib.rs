//! Numerical geometry of triangular billiard orbits in an ellipse.
//!
//! The crate builds the closed 3-bounce orbit family of an elliptic
//! billiard table through its confocal caustic, studies the locus of the
//! orbit incenters (an axis-aligned ellipse, fitted and checked here), and
//! verifies the complex-projective reflection structure behind those facts:
//! direction coordinates in which reflection is `z -> e^2 / z`, the four
//! isotropic tangents shared by confocal conics, and the square-root
//! tangency rate at the isotropic contact points.
//!
//! ```
//! use poncelet::{caustic_for_3_periodic, orbit_from_vertex, Branch, Ellipse};
//!
//! let table = Ellipse::new(1.0, 0.5)?;
//! let caustic = caustic_for_3_periodic(&table)?;
//! let orbit = orbit_from_vertex(&table, &caustic, 0.0, Branch::First)?;
//! let residuals = orbit.validate(&table);
//! assert!(residuals.closure < 1e-9);
//! # Ok::<(), poncelet::Error>(())
//! ```

pub mod billiard;
pub mod conic;
pub mod cproj;
pub mod error;
pub mod locus;
pub mod numeric;
pub mod tolerances;
pub mod verify;

pub use billiard::{
    caustic_for_3_periodic, closure_defect, next_chord, orbit_family, orbit_from_vertex,
    reflect_direction, Branch, CausticSolution, Chord, Orbit, OrbitResiduals,
};
pub use conic::{cx, ConicCoeffs, Cx, Ellipse, HLine, HPoint};
pub use cproj::{
    common_isotropic_tangents, isotropic_limit_behavior, isotropic_limit_experiment,
    reflect_coord, reflect_euclidean_consistency, CommonTangents, DirectionCoord, LimitExperiment,
};
pub use error::{Error, Result};
pub use locus::{
    axis_intersections, fit_conic, fit_incenter_locus, foci_curve, incenter, inradius,
    locus_of_incenters, transversality_check, triangle_incenter, ConicFit, ConicKind,
    EllipseParams, FociCurveSample, LocusOutcome,
};
pub use tolerances::Tolerances;
pub use verify::{
    all_suites, axis_crossing_suite, confocal_suite, isotropic_limit_suite, reflection_suite,
    Check, CheckOp, SuiteReport,
};
