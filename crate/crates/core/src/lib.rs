//! Separated spherical point sets and lower-bound certificates for
//! illumination and ball covering.
//!
//! The crate builds random point sets on `S^{n-1}` whose pairwise angles lie
//! in `[psi, pi - psi]` ([`construct`]), turns them into witness sets of
//! prescribed diameter ([`witness`]), and certifies how many directions or
//! balls are needed to cover them ([`certify`]). [`experiment`] wires these
//! into reproducible seed sweeps with JSON/CSV reports.

pub mod certify;
pub mod construct;
pub mod error;
pub mod experiment;
mod par;
pub mod pointset;
pub mod rng;
pub mod sphere;
pub mod witness;

pub use error::{Error, Result};
pub use par::worker_count;
pub use rng::{RandomStream, StreamSeed};
pub use sphere::{Angle, SphericalCap, UnitVector};
