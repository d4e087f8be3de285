//! Witness sets `W(X)`: apexes together with samples of their rings
//! `R(x, alpha) = {y : |x - y| = 2 cos alpha}`, and the illumination-cone
//! predicate attached to every apex.
//!
//! If the apexes satisfy `4 alpha <= theta(x, y) <= pi - 6 alpha`, every point
//! of `W(X)` lies within distance `2 cos alpha` of every other, and each apex
//! attains that distance to its own ring. A convex body of that diameter
//! containing `W(X)` has every apex `x` on its boundary, and only directions
//! in `C(-x, pi/2 - alpha)` can illuminate it.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::rng::{domain, StreamSeed};
use crate::sphere::{
    cap_contains, check_cone_angle, distance_sq, dot, norm, sample_ring, Angle, SphericalCap,
    UnitVector, ANGLE_TOL,
};

/// Largest cone angle for which the witness condition admits two or more apexes.
pub const MAX_NONVACUOUS_ALPHA: f64 = PI / 10.0;

/// `samples_per_ring` used when none is given: `max(64, 2n)`.
pub fn default_samples_per_ring(dim: usize) -> usize {
    64.max(2 * dim)
}

fn pair_angles(points: &[UnitVector]) -> impl Iterator<Item = f64> + '_ {
    points.iter().enumerate().flat_map(move |(i, x)| {
        points[i + 1..]
            .iter()
            .map(move |y| Angle::from_cos(x.dot(y)).value())
    })
}

/// `true` iff every pair satisfies `theta <= pi - 2 alpha` (within `1e-9`),
/// which bounds the diameter of the points by `2 cos alpha`.
pub fn check_diameter_condition(points: &[UnitVector], alpha: Angle) -> Result<bool> {
    check_cone_angle(alpha)?;
    let bound = PI - 2.0 * alpha.value() + ANGLE_TOL;
    let ok = pair_angles(points).all(|t| t <= bound);
    if ok {
        debug_assert!(diameter(points) <= 2.0 * alpha.cos() + 1e-9);
    }
    Ok(ok)
}

/// `true` iff every pair satisfies `4 alpha <= theta <= pi - 6 alpha` (within
/// `1e-9`). For `alpha > pi/10` only sets of at most one point pass.
pub fn check_witness_condition(points: &[UnitVector], alpha: Angle) -> Result<bool> {
    check_cone_angle(alpha)?;
    let lo = 4.0 * alpha.value() - ANGLE_TOL;
    let hi = PI - 6.0 * alpha.value() + ANGLE_TOL;
    Ok(pair_angles(points).all(|t| t >= lo && t <= hi))
}

/// Whether `alpha` is so wide that the witness condition rejects every pair.
pub fn witness_condition_is_vacuous(alpha: Angle) -> bool {
    alpha.value() > MAX_NONVACUOUS_ALPHA + 1e-15
}

/// Finite sample of `W(X) = U_{x in X} ({x} U R(x, alpha))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSet {
    pub alpha: Angle,
    pub apexes: Vec<UnitVector>,
    /// `ring_samples[i]` lies on the ring of `apexes[i]`.
    pub ring_samples: Vec<Vec<UnitVector>>,
    pub samples_per_ring: usize,
    pub seed: u64,
    /// Whether the apexes passed [`check_witness_condition`] at build time.
    pub condition_holds: bool,
}

impl WitnessSet {
    pub fn dim(&self) -> Option<usize> {
        self.apexes.first().map(UnitVector::dim)
    }

    /// Apexes followed by all ring samples in apex order.
    pub fn all_points(&self) -> Vec<&UnitVector> {
        self.apexes
            .iter()
            .chain(self.ring_samples.iter().flatten())
            .collect()
    }
}

/// Samples `samples_per_ring` ring points per apex, one random stream per apex.
///
/// Fails unless the apexes satisfy [`check_witness_condition`]; pass
/// `allow_violation = true` to build anyway.
pub fn build_witness(
    points: &[UnitVector],
    alpha: Angle,
    samples_per_ring: usize,
    seed: u64,
    allow_violation: bool,
) -> Result<WitnessSet> {
    check_cone_angle(alpha)?;
    let condition_holds = check_witness_condition(points, alpha)?;
    if !condition_holds && !allow_violation {
        return Err(Error::Precondition(format!(
            "apexes violate 4a <= theta <= pi - 6a for a = {}",
            alpha.value()
        )));
    }
    let key = StreamSeed::new(seed).child(domain::RINGS);
    let rings = par::map_range(0..points.len(), |i| {
        let mut rng = key.stream(i as u64);
        (0..samples_per_ring)
            .map(|_| sample_ring(&points[i], alpha, &mut rng))
            .collect::<Result<Vec<_>>>()
    });
    Ok(WitnessSet {
        alpha,
        apexes: points.to_vec(),
        ring_samples: rings.into_iter().collect::<Result<_>>()?,
        samples_per_ring,
        seed,
        condition_holds,
    })
}

/// Largest pairwise Euclidean distance, `0` for a single point.
pub fn diameter<P: AsRef<[f64]> + Sync>(points: &[P]) -> f64 {
    par::map_range(0..points.len(), |i| {
        let a = points[i].as_ref();
        points[i + 1..]
            .iter()
            .map(|b| distance_sq(a, b.as_ref()))
            .fold(0.0, f64::max)
    })
    .into_iter()
    .fold(0.0, f64::max)
    .sqrt()
}

/// Diameter of apexes and ring samples together.
pub fn witness_diameter(w: &WitnessSet) -> f64 {
    diameter(&w.all_points())
}

/// The cap of directions that can illuminate an apex: `C(-x, pi/2 - alpha)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeConstraint {
    pub apex: UnitVector,
    pub cone: SphericalCap,
}

pub fn illumination_cone(x: &UnitVector, alpha: Angle) -> Result<ConeConstraint> {
    check_cone_angle(alpha)?;
    let cone = SphericalCap::new(x.negated(), Angle::new(FRAC_PI_2 - alpha.value())?)?;
    Ok(ConeConstraint {
        apex: x.clone(),
        cone,
    })
}

/// Indices of apexes that `xi` could illuminate on any body containing the
/// witness set: `{i : theta(xi, -x_i) <= pi/2 - alpha}`.
pub fn illuminable_set(xi: &UnitVector, w: &WitnessSet) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, x) in w.apexes.iter().enumerate() {
        if cap_contains(&illumination_cone(x, w.alpha)?.cone, xi)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// `64` logarithmically spaced values in `[1e-6, 4]`.
pub fn default_t_grid() -> Vec<f64> {
    let (lo, hi) = (1e-6f64.ln(), 4f64.ln());
    (0..64)
        .map(|k| (lo + (hi - lo) * k as f64 / 63.0).exp())
        .collect()
}

/// Result of the plane-section check for a direction outside the cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeCheck {
    /// Every tested point `x + t xi` is farther than `2 cos alpha` from the witness.
    pub holds: bool,
    /// The ring point `y_k` in the plane through `0`, `x`, `xi` with
    /// `theta(y_k - x, xi) > pi/2`.
    pub witness: UnitVector,
    /// `|x + t xi - y_k|` for each `t` of the grid.
    pub distances: Vec<f64>,
}

/// Checks that the half-line `{x + t xi : t > 0}` stays farther than
/// `2 cos alpha` from one of the two ring points in the plane spanned by `x`
/// and `xi`, so no body of diameter `2 cos alpha` containing `Q(x, alpha)` has
/// interior points on it.
///
/// Requires `theta(xi, -x) > pi/2 - alpha + 1e-6`.
pub fn verify_cone_necessity(
    x: &UnitVector,
    xi: &UnitVector,
    alpha: Angle,
    t_grid: &[f64],
) -> Result<ConeCheck> {
    check_cone_angle(alpha)?;
    crate::sphere::angle_between(x, xi)?;
    let outside = Angle::from_cos(-x.dot(xi)).value();
    if outside <= FRAC_PI_2 - alpha.value() + 1e-6 {
        return Err(Error::Precondition(format!(
            "direction is inside the illumination cone (angle to -x is {outside})"
        )));
    }
    let xc = x.coords();
    let along = x.dot(xi);
    let mut f: Vec<f64> = xi.coords().iter().zip(xc).map(|(v, a)| v - along * a).collect();
    let len = norm(&f);
    if len < 1e-12 {
        return Err(Error::PlaneUndefined);
    }
    f.iter_mut().for_each(|c| *c /= len);

    let rho = PI - 2.0 * alpha.value();
    let ring_point = |sign: f64| -> Vec<f64> {
        xc.iter()
            .zip(&f)
            .map(|(a, b)| rho.cos() * a + sign * rho.sin() * b)
            .collect()
    };
    let leaning_back = |y: &[f64]| {
        let d: Vec<f64> = y.iter().zip(xc).map(|(a, b)| a - b).collect();
        dot(&d, xi.coords())
    };
    let (y1, y2) = (ring_point(1.0), ring_point(-1.0));
    let y = if leaning_back(&y1) < leaning_back(&y2) { y1 } else { y2 };
    let limit = 2.0 * alpha.cos();
    let distances: Vec<f64> = t_grid
        .iter()
        .map(|&t| {
            let p: Vec<f64> = xc.iter().zip(xi.coords()).map(|(a, b)| a + t * b).collect();
            distance_sq(&p, &y).sqrt()
        })
        .collect();
    let holds = leaning_back(&y) < 0.0 && distances.iter().all(|&d| d > limit);
    Ok(ConeCheck {
        holds,
        witness: UnitVector::new(y)?,
        distances,
    })
}
