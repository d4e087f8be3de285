use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::ball::min_enclosing_ball;
use crate::sphere::vector::{check_dims, norm};
use crate::sphere::{Angle, UnitVector};

/// Slack added to the radius in cap membership tests.
pub const CAP_CONTAIN_TOL: f64 = 1e-12;

/// Ambient enclosing-ball centers shorter than this are treated as the origin.
pub const DEGENERATE_CENTER_TOL: f64 = 1e-12;

/// The closed cap `C(center, radius)`: unit vectors within geodesic distance
/// `radius` of `center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalCap {
    center: UnitVector,
    radius: Angle,
}

impl SphericalCap {
    /// Requires `0 < radius < pi`.
    pub fn new(center: UnitVector, radius: Angle) -> Result<Self> {
        let r = radius.value();
        if !(r > 0.0 && r < PI) {
            return Err(Error::InvalidParameter(format!(
                "cap radius {r} must lie in (0, pi)"
            )));
        }
        Ok(SphericalCap { center, radius })
    }

    pub fn center(&self) -> &UnitVector {
        &self.center
    }

    pub fn radius(&self) -> Angle {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }
}

pub(crate) fn cos_threshold(radius: Angle) -> f64 {
    (radius.value() + CAP_CONTAIN_TOL).min(PI).cos()
}

/// `true` iff `angle_between(cap.center, y) <= cap.radius + 1e-12`.
pub fn cap_contains(cap: &SphericalCap, y: &UnitVector) -> Result<bool> {
    check_dims(&cap.center, y)?;
    let theta = Angle::from_cos(cap.center.dot(y));
    Ok(theta.value() <= cap.radius.value() + CAP_CONTAIN_TOL)
}

/// Smallest spherical cap containing a point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnclosingCap {
    pub center: UnitVector,
    /// May be zero for a single point, unlike [`SphericalCap`].
    pub radius: Angle,
    /// Indices of the points that determine the cap.
    pub support: Vec<usize>,
}

impl EnclosingCap {
    pub fn to_cap(&self) -> Result<SphericalCap> {
        SphericalCap::new(self.center.clone(), self.radius)
    }
}

/// Smallest cap containing `points`.
///
/// Solves the minimum enclosing ball in the ambient space and projects its
/// center to the sphere; the radius is the largest angle from that center to
/// any point. The projection is the optimal cap whenever the optimum is
/// smaller than a hemisphere. An enclosing-ball center at the origin fails
/// with [`Error::DegenerateCenter`].
pub fn min_enclosing_cap(points: &[UnitVector]) -> Result<EnclosingCap> {
    let first = points.first().ok_or(Error::Empty)?;
    for p in points {
        check_dims(first, p)?;
    }
    let ball = min_enclosing_ball(points)?;
    let len = norm(&ball.center);
    if len <= DEGENERATE_CENTER_TOL {
        return Err(Error::DegenerateCenter);
    }
    let center = UnitVector::new(ball.center)?;
    let radius = points
        .iter()
        .map(|p| Angle::from_cos(center.dot(p)))
        .fold(Angle::ZERO, |a, b| if b.value() > a.value() { b } else { a });
    Ok(EnclosingCap {
        center,
        radius,
        support: ball.support,
    })
}

/// Number of sampled directions tried by [`enclosing_cap_or_search`] when the
/// enclosing-ball center is degenerate and the points span the whole space.
pub const FALLBACK_SAMPLES: usize = 4096;

/// [`min_enclosing_cap`], falling back to a search when the ambient center is
/// degenerate.
///
/// A degenerate center means the origin lies in the convex hull of the
/// points, so no cap smaller than a hemisphere contains them. If the points
/// span a proper subspace, a unit normal of that subspace is at angle exactly
/// `pi/2` from all of them and is optimal. Otherwise the best of
/// [`FALLBACK_SAMPLES`] seeded directions is returned; that radius is only an
/// upper bound on the optimum.
pub fn enclosing_cap_or_search(points: &[UnitVector], seed: u64) -> Result<EnclosingCap> {
    match min_enclosing_cap(points) {
        Err(Error::DegenerateCenter) => {}
        other => return other,
    }
    let dim = points[0].dim();
    let max_angle = |xi: &UnitVector| {
        points
            .iter()
            .map(|p| Angle::from_cos(xi.dot(p)).value())
            .fold(0.0, f64::max)
    };
    let support = |xi: &UnitVector, r: f64| -> Vec<usize> {
        points
            .iter()
            .enumerate()
            .filter(|(_, p)| Angle::from_cos(xi.dot(p)).value() >= r - 1e-9)
            .map(|(i, _)| i)
            .collect()
    };
    if let Some(normal) = orthogonal_complement_vector(points, dim) {
        let r = max_angle(&normal);
        return Ok(EnclosingCap {
            support: support(&normal, r),
            center: normal,
            radius: Angle::new(r)?,
        });
    }
    let key = crate::rng::StreamSeed::new(seed).child(crate::rng::domain::FALLBACK);
    let mut best: Option<(f64, UnitVector)> = None;
    for i in 0..FALLBACK_SAMPLES {
        let xi = crate::sphere::sample_uniform(dim, &mut key.stream(i as u64))?;
        let r = max_angle(&xi);
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, xi));
        }
    }
    let (r, center) = best.expect("FALLBACK_SAMPLES > 0");
    Ok(EnclosingCap {
        support: support(&center, r),
        center,
        radius: Angle::new(r)?,
    })
}

/// A unit vector orthogonal to every point, if the points do not span `E^dim`.
fn orthogonal_complement_vector(points: &[UnitVector], dim: usize) -> Option<UnitVector> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for p in points {
        let mut v = p.coords().to_vec();
        for b in &basis {
            let d = crate::sphere::vector::dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let n = norm(&v);
        if n > 1e-9 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
        if basis.len() == dim {
            return None;
        }
    }
    for axis in 0..dim {
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        for b in &basis {
            let d = crate::sphere::vector::dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        if norm(&v) > 1e-6 {
            return UnitVector::new(v).ok();
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn e(dim: usize, i: usize) -> UnitVector {
        UnitVector::axis(dim, i).unwrap()
    }

    fn on_equator(lon: f64) -> UnitVector {
        UnitVector::new(vec![lon.cos(), lon.sin(), 0.0]).unwrap()
    }

    #[test]
    fn membership() {
        let x = e(3, 0);
        let cap = SphericalCap::new(x.clone(), Angle::new(0.3).unwrap()).unwrap();
        assert!(cap_contains(&cap, &x).unwrap());
        let cap = SphericalCap::new(x.clone(), Angle::new(FRAC_PI_4).unwrap()).unwrap();
        assert!(!cap_contains(&cap, &x.negated()).unwrap());
        let cap = SphericalCap::new(x, Angle::RIGHT).unwrap();
        assert!(cap_contains(&cap, &e(3, 1)).unwrap());
        assert!(cap_contains(&cap, &e(4, 1)).is_err());
    }

    #[test]
    fn cap_radius_bounds() {
        assert!(SphericalCap::new(e(3, 0), Angle::ZERO).is_err());
        assert!(SphericalCap::new(e(3, 0), Angle::STRAIGHT).is_err());
    }

    #[test]
    fn singleton_cap() {
        let c = min_enclosing_cap(&[e(3, 2)]).unwrap();
        assert_eq!(c.center, e(3, 2));
        assert_eq!(c.radius.value(), 0.0);
    }

    #[test]
    fn pair_cap_is_midpoint() {
        let theta = 1.1;
        let pts = [on_equator(0.0), on_equator(theta)];
        let c = min_enclosing_cap(&pts).unwrap();
        assert_abs_diff_eq!(c.radius.value(), theta / 2.0, epsilon = 1e-12);
        let mid = on_equator(theta / 2.0);
        assert_abs_diff_eq!(c.center.dot(&mid), 1.0, epsilon = 1e-12);
        assert_eq!(c.support, vec![0, 1]);
    }

    #[test]
    fn equator_triple_is_degenerate() {
        let tau = 2.0 * PI / 3.0;
        let pts = [on_equator(0.0), on_equator(tau), on_equator(2.0 * tau)];
        assert_eq!(min_enclosing_cap(&pts), Err(Error::DegenerateCenter));
        let c = enclosing_cap_or_search(&pts, 0).unwrap();
        assert_abs_diff_eq!(c.radius.value(), FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(c.center.coords()[2].abs(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn spanning_degenerate_set_uses_sampled_search() {
        // octahedron vertices: every cap containing them is at least a hemisphere
        let pts: Vec<UnitVector> = (0..3).flat_map(|i| [e(3, i), e(3, i).negated()]).collect();
        assert_eq!(min_enclosing_cap(&pts), Err(Error::DegenerateCenter));
        let c = enclosing_cap_or_search(&pts, 3).unwrap();
        assert!(c.radius.value() > FRAC_PI_2);
        for p in &pts {
            assert!(Angle::from_cos(c.center.dot(p)).value() <= c.radius.value() + 1e-12);
        }
    }

    #[test]
    fn tilted_triple_has_pole_center() {
        // three points at colatitude pi/3 spaced 120 degrees apart
        let pts: Vec<UnitVector> = (0..3)
            .map(|k| {
                let lon = 2.0 * PI * k as f64 / 3.0;
                let s = FRAC_PI_3.sin();
                UnitVector::new(vec![s * lon.cos(), s * lon.sin(), FRAC_PI_3.cos()]).unwrap()
            })
            .collect();
        let c = min_enclosing_cap(&pts).unwrap();
        assert_abs_diff_eq!(c.radius.value(), FRAC_PI_3, epsilon = 1e-12);
        assert_abs_diff_eq!(c.center.coords()[2], 1.0, epsilon = 1e-12);
        assert!(c.radius.value() < FRAC_PI_2);
    }
}
