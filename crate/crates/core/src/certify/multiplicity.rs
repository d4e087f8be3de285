//! Maximum number of caps of a common radius sharing a point.
//!
//! A direction `xi` lies in `C(c_i, phi)` for all `i` in `S` exactly when the
//! centers `{c_i : i in S}` fit in one cap of radius `phi` about `xi`, so the
//! exact multiplicity is the size of the largest subset of centers whose
//! smallest enclosing cap has radius at most `phi`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::certify::subsets::SubsetSearch;
use crate::error::{Error, Result};
use crate::par;
use crate::rng::{domain, StreamSeed};
use crate::sphere::{
    cos_threshold, dot, enclosing_cap_or_search, min_enclosing_cap, Angle, EnclosingCap,
    SphericalCap, UnitVector, ANGLE_TOL,
};

/// Default family-size limit for [`multiplicity_exact`].
pub const DEFAULT_EXACT_LIMIT: usize = 64;

const MC_CHUNK: usize = 8192;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub family_size: usize,
    pub cap_radius: Angle,
    /// Deepest point found by sampling: a lower bound on the true maximum.
    pub mc_max: usize,
    pub mc_argmax: UnitVector,
    pub mc_samples: usize,
    pub exact_max: Option<usize>,
    pub exact_witness: Option<UnitVector>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactMultiplicity {
    pub max: usize,
    /// Center of the smallest cap enclosing `members`.
    pub witness: UnitVector,
    pub members: Vec<usize>,
}

/// Smallest cap around `points` if its radius is at most `phi` (within `1e-9`).
pub(crate) fn fitting_cap(points: &[UnitVector], phi: Angle, seed: u64) -> Option<EnclosingCap> {
    let cap = match min_enclosing_cap(points) {
        Ok(c) => c,
        // the origin is in the hull: nothing smaller than a hemisphere fits
        Err(Error::DegenerateCenter) if phi.value() + ANGLE_TOL < FRAC_PI_2 => return None,
        Err(Error::DegenerateCenter) => enclosing_cap_or_search(points, seed).ok()?,
        Err(_) => return None,
    };
    (cap.radius.value() <= phi.value() + ANGLE_TOL).then_some(cap)
}

fn common_radius(caps: &[SphericalCap]) -> Result<Angle> {
    let first = caps.first().ok_or(Error::Empty)?;
    let r = first.radius();
    for c in caps {
        if (c.radius().value() - r.value()).abs() > 1e-15 {
            return Err(Error::InvalidParameter("caps must share one radius".into()));
        }
        if c.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                left: first.dim(),
                right: c.dim(),
            });
        }
    }
    Ok(r)
}

/// Number of caps containing `xi`.
pub fn depth(caps: &[SphericalCap], xi: &UnitVector) -> usize {
    caps.iter()
        .filter(|c| c.center().dot(xi) >= cos_threshold(c.radius()))
        .count()
}

fn hits(caps: &[SphericalCap], xi: &UnitVector) -> Vec<usize> {
    caps.iter()
        .enumerate()
        .filter(|(_, c)| c.center().dot(xi) >= cos_threshold(c.radius()))
        .map(|(i, _)| i)
        .collect()
}

/// Monte Carlo lower bound on the multiplicity of a cap family.
///
/// Samples `samples` uniform directions, keeps the deepest one (earliest
/// sample on ties), then recenters it once at the smallest enclosing cap of
/// the centers it hits and keeps the recentered point if it is at least as
/// deep.
pub fn multiplicity_mc(caps: &[SphericalCap], samples: usize, seed: u64) -> Result<MultiplicityReport> {
    let radius = common_radius(caps)?;
    let dim = caps[0].dim();
    let threshold = cos_threshold(radius);
    let centers: Vec<&[f64]> = caps.iter().map(|c| c.center().coords()).collect();
    let key = StreamSeed::new(seed).child(domain::MULTIPLICITY);
    let chunks = samples.div_ceil(MC_CHUNK);
    let best_per_chunk = par::map_range(0..chunks, |k| {
        let mut rng = key.stream(k as u64);
        let count = MC_CHUNK.min(samples - k * MC_CHUNK);
        let mut best: Option<(usize, UnitVector)> = None;
        for _ in 0..count {
            let xi = crate::sphere::sample_uniform(dim, &mut rng)?;
            let d = centers.iter().filter(|c| dot(c, xi.coords()) >= threshold).count();
            if best.as_ref().is_none_or(|(b, _)| d > *b) {
                best = Some((d, xi));
            }
        }
        Ok::<_, Error>(best)
    });
    let mut best: Option<(usize, UnitVector)> = None;
    for chunk in best_per_chunk {
        if let Some((d, xi)) = chunk? {
            if best.as_ref().is_none_or(|(b, _)| d > *b) {
                best = Some((d, xi));
            }
        }
    }
    // with no samples, start from the first center
    let (mut mc_max, mut argmax) = match best {
        Some(b) => b,
        None => {
            let xi = caps[0].center().clone();
            (depth(caps, &xi), xi)
        }
    };
    let hit = hits(caps, &argmax);
    if !hit.is_empty() {
        let hit_centers: Vec<UnitVector> = hit.iter().map(|&i| caps[i].center().clone()).collect();
        if let Ok(cap) = enclosing_cap_or_search(&hit_centers, seed) {
            let d = depth(caps, &cap.center);
            if d >= mc_max {
                mc_max = d;
                argmax = cap.center;
            }
        }
    }
    debug_assert_eq!(depth(caps, &argmax), mc_max);
    Ok(MultiplicityReport {
        family_size: caps.len(),
        cap_radius: radius,
        mc_max,
        mc_argmax: argmax,
        mc_samples: samples,
        exact_max: None,
        exact_witness: None,
    })
}

/// Exact multiplicity of `{C(c_i, phi)}` by branch and bound over subsets of
/// centers. `incumbent` is a depth known to be achievable (e.g. from
/// [`multiplicity_mc`]). Exact for `phi < pi/2`; wider caps fall back to a
/// sampled enclosing-cap search when the centers surround the origin.
pub fn multiplicity_exact(
    centers: &[UnitVector],
    phi: Angle,
    limit: usize,
    incumbent: usize,
    seed: u64,
) -> Result<ExactMultiplicity> {
    if centers.is_empty() {
        return Err(Error::Empty);
    }
    if centers.len() > limit {
        return Err(Error::LimitExceeded(format!(
            "exact multiplicity over {} caps (limit {limit})",
            centers.len()
        )));
    }
    let oracle = |s: &[usize]| {
        let pts: Vec<UnitVector> = s.iter().map(|&i| centers[i].clone()).collect();
        fitting_cap(&pts, phi, seed).is_some()
    };
    let search = SubsetSearch::new(centers.len(), oracle)?;
    let members = search.max_feasible(incumbent.min(centers.len()));
    let pts: Vec<UnitVector> = members.iter().map(|&i| centers[i].clone()).collect();
    let cap = fitting_cap(&pts, phi, seed).ok_or_else(|| {
        Error::Precondition("maximum subset no longer fits on recheck".into())
    })?;
    Ok(ExactMultiplicity {
        max: members.len(),
        witness: cap.center,
        members,
    })
}

/// Monte Carlo estimate followed, when the family is small enough, by the
/// exact value seeded with it.
pub fn multiplicity(
    caps: &[SphericalCap],
    samples: usize,
    seed: u64,
    exact_limit: Option<usize>,
) -> Result<MultiplicityReport> {
    let mut report = multiplicity_mc(caps, samples, seed)?;
    if let Some(limit) = exact_limit {
        let centers: Vec<UnitVector> = caps.iter().map(|c| c.center().clone()).collect();
        let exact = multiplicity_exact(&centers, report.cap_radius, limit, report.mc_max, seed)?;
        report.exact_max = Some(exact.max);
        report.exact_witness = Some(exact.witness);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cap(c: UnitVector, r: f64) -> SphericalCap {
        SphericalCap::new(c, Angle::new(r).unwrap()).unwrap()
    }

    fn eq(lon: f64) -> UnitVector {
        UnitVector::new(vec![lon.cos(), lon.sin(), 0.0]).unwrap()
    }

    #[test]
    fn identical_caps() {
        let caps: Vec<_> = (0..5).map(|_| cap(eq(0.3), 0.4)).collect();
        let r = multiplicity(&caps, 1000, 1, Some(64)).unwrap();
        assert_eq!(r.mc_max, 5);
        assert_eq!(r.exact_max, Some(5));
    }

    #[test]
    fn disjoint_caps() {
        let caps = vec![cap(eq(0.0), 0.3), cap(eq(1.0), 0.3)];
        let r = multiplicity(&caps, 20_000, 2, Some(64)).unwrap();
        assert_eq!(r.mc_max, 1);
        assert_eq!(r.exact_max, Some(1));
    }

    #[test]
    fn pair_threshold_is_half_angle() {
        let theta = 1.2;
        let centers = [eq(0.0), eq(theta)];
        let m = |phi: f64| multiplicity_exact(&centers, Angle::new(phi).unwrap(), 64, 0, 0).unwrap().max;
        assert_eq!(m(theta / 2.0 - 1e-6), 1);
        assert_eq!(m(theta / 2.0), 2);
        assert_eq!(m(theta / 2.0 + 0.1), 2);
    }

    #[test]
    fn equator_triple_needs_a_hemisphere() {
        let tau = 2.0 * PI / 3.0;
        let centers = [eq(0.0), eq(tau), eq(2.0 * tau)];
        for (r, expect) in [(FRAC_PI_2 - 0.01, 2), (FRAC_PI_2 + 0.01, 3)] {
            let caps: Vec<_> = centers.iter().map(|c| cap(c.clone(), r)).collect();
            let rep = multiplicity(&caps, 50_000, 3, Some(64)).unwrap();
            assert_eq!(rep.exact_max, Some(expect), "radius {r}");
            assert_eq!(rep.mc_max, expect, "radius {r}");
            assert_eq!(depth(&caps, &rep.mc_argmax), rep.mc_max);
        }
    }

    #[test]
    fn exact_limit_enforced() {
        let centers: Vec<_> = (0..5).map(|k| eq(k as f64)).collect();
        assert!(matches!(
            multiplicity_exact(&centers, Angle::new(0.5).unwrap(), 4, 0, 0),
            Err(Error::LimitExceeded(_))
        ));
    }

    #[test]
    fn mixed_radii_rejected() {
        let caps = vec![cap(eq(0.0), 0.3), cap(eq(1.0), 0.4)];
        assert!(multiplicity_mc(&caps, 10, 0).is_err());
    }
}
