//! Spherical geometry primitives: angles, chords, caps, cap measure, sampling
//! and smallest enclosing caps and balls.

mod ball;
mod cap;
mod measure;
mod sampling;
mod vector;

pub use ball::{min_enclosing_ball, Ball};
pub use cap::{
    cap_contains, enclosing_cap_or_search, min_enclosing_cap, EnclosingCap, SphericalCap,
    CAP_CONTAIN_TOL, DEGENERATE_CENTER_TOL, FALLBACK_SAMPLES,
};
pub(crate) use cap::cos_threshold;
pub use measure::{cap_measure, integrate, QUADRATURE_RTOL};
pub(crate) use sampling::check_cone_angle;
pub use sampling::{ring_geodesic_radius, sample_ring, sample_uniform, MAX_CONE_ANGLE};
pub use vector::{angle_between, chord_from_angle, direction_angle, Angle, UnitVector};
pub(crate) use vector::{distance, distance_sq, dot, norm};

/// Absolute tolerance for angular comparisons.
pub const ANGLE_TOL: f64 = 1e-9;
