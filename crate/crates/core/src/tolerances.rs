//! Central ledger of numeric tolerances.
//!
//! Every check in the crate reads its threshold from here, either through
//! [`Tolerances::DEFAULT`] (construction-time invariants) or through a
//! caller-supplied [`Tolerances`] value (report-time checks, CLI `--tol`
//! overrides). Values are absolute unless the field doc says otherwise.

use crate::error::{Error, Result};

macro_rules! tolerances {
    ($($(#[$doc:meta])* $name:ident = $default:expr;)*) => {
        /// Named numeric thresholds used by orbit construction, locus
        /// fitting, and the verification suites.
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct Tolerances {
            $($(#[$doc])* pub $name: f64,)*
        }

        impl Tolerances {
            /// Compile-time defaults; the values every documented bound
            /// in this crate refers to.
            pub const DEFAULT: Tolerances = Tolerances {
                $($name: $default,)*
            };

            /// Overrides a tolerance by field name (used by `--tol name=value`).
            pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
                match name {
                    $(stringify!($name) => { self.$name = value; Ok(()) })*
                    _ => Err(Error::UnknownTolerance(name.to_string())),
                }
            }

            /// All `(name, value)` pairs, in declaration order.
            pub fn entries(&self) -> Vec<(&'static str, f64)> {
                vec![$((stringify!($name), self.$name),)*]
            }
        }

        impl Default for Tolerances {
            fn default() -> Self {
                Self::DEFAULT
            }
        }
    };
}

tolerances! {
    /// Algebraic residual allowed for a vertex on the table boundary.
    vertex_on_boundary = 1e-10;
    /// Normalized dual-conic residual allowed for a side/caustic tangency.
    side_tangency = 1e-9;
    /// Angular residual (radians) of the equal-angle reflection law.
    reflection_law = 1e-9;
    /// Euclidean gap allowed when the third chord returns to the start.
    closure = 1e-9;
    /// |closure defect| at the solved caustic parameter.
    defect_at_solution = 1e-12;
    /// |closure defect| along the whole family at the solved caustic.
    porism_defect = 1e-9;
    /// Relative perimeter spread across an orbit family.
    perimeter_spread = 1e-8;
    /// Max algebraic residual of the unit-norm locus conic fit.
    fit_residual_max = 1e-8;
    /// Distance of the fitted locus center from the origin.
    locus_center = 1e-8;
    /// |B| (cross term) of the unit-norm fitted locus conic.
    locus_cross_term = 1e-8;
    /// Incenter spread that still counts as a point locus (near-circle tables).
    point_locus_radius = 1e-6;
    /// Max modulus gap between coordinate and Euclidean reflection routes.
    euclidean_consistency = 1e-12;
    /// |slope - 2| of the log-log modulus decay under near-isotropic mirrors.
    decay_slope = 1e-6;
    /// Projective distance matching the four isotropic tangents across a confocal pair.
    tangent_match = 1e-10;
    /// Projective distance of the real foci from the tangent cross-intersections.
    foci_incidence = 1e-10;
    /// Incidence residual of circle-center tangents with the circular points.
    center_isotropy = 1e-12;
    /// Lower bound on the modulus of the extrapolated reflected coordinate.
    limit_lower = 1e-3;
    /// Upper bound on the modulus of the extrapolated reflected coordinate.
    limit_upper = 1e3;
    /// Allowed deviation of the tangent-angle exponent from 1/2.
    exponent_halfwidth = 0.05;
    /// Dual residual allowed for the extrapolated limit line against the caustic.
    limit_tangency = 1e-6;
    /// Projective distance between the extrapolated limit line and the direct tangent.
    limit_line_match = 1e-4;
    /// Minimum |d(incenter_y)/d(theta0)| at the axis crossings.
    transversality_min = 1e-3;
    /// |r(delta) - r(-delta)| allowed for the inradius evenness check.
    evenness = 1e-12;
    /// Distance between fitted axis intersections and the symmetric-orbit incenters.
    axis_meeting = 1e-6;
}
