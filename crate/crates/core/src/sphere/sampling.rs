use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::sphere::vector::{dot, norm};
use crate::sphere::{Angle, UnitVector};

/// Largest cone half-angle for which the ring `R(x, alpha)` is used.
pub const MAX_CONE_ANGLE: f64 = PI / 6.0;

/// Uniform point of `S^{n-1}`: a normalized vector of `n` standard normals.
pub fn sample_uniform(n: usize, rng: &mut RandomStream) -> Result<UnitVector> {
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    let mut g = vec![0.0; n];
    loop {
        rng.fill_normal(&mut g);
        let len = norm(&g);
        if len > 1e-150 {
            g.iter_mut().for_each(|c| *c /= len);
            return Ok(UnitVector::from_normalized_unchecked(g));
        }
    }
}

pub(crate) fn check_cone_angle(alpha: Angle) -> Result<()> {
    let a = alpha.value();
    if !(a > 0.0 && a <= MAX_CONE_ANGLE + 1e-15) {
        return Err(Error::InvalidParameter(format!(
            "cone angle {a} must lie in (0, pi/6]"
        )));
    }
    Ok(())
}

/// Geodesic distance `pi - 2 alpha` from `x` to every point at chord
/// distance `2 cos alpha`.
pub fn ring_geodesic_radius(alpha: Angle) -> Result<Angle> {
    check_cone_angle(alpha)?;
    Angle::new(PI - 2.0 * alpha.value())
}

/// A uniform point of the ring `{y : |x - y| = 2 cos alpha}`.
///
/// `y = cos(pi - 2 alpha) x + sin(pi - 2 alpha) u` with `u` uniform on the unit
/// sphere of the orthogonal complement of `x`. In `E^2` the ring is two points.
pub fn sample_ring(x: &UnitVector, alpha: Angle, rng: &mut RandomStream) -> Result<UnitVector> {
    let rho = ring_geodesic_radius(alpha)?.value();
    let n = x.dim();
    let xc = x.coords();
    let mut g = vec![0.0; n];
    let u = loop {
        rng.fill_normal(&mut g);
        let along = dot(&g, xc);
        g.iter_mut().zip(xc).for_each(|(gi, xi)| *gi -= along * xi);
        // second projection cleans up cancellation error
        let along = dot(&g, xc);
        g.iter_mut().zip(xc).for_each(|(gi, xi)| *gi -= along * xi);
        let len = norm(&g);
        if len > 1e-12 {
            break g.iter().map(|c| c / len).collect::<Vec<_>>();
        }
    };
    let (c, s) = (rho.cos(), rho.sin());
    let y: Vec<f64> = xc.iter().zip(&u).map(|(xi, ui)| c * xi + s * ui).collect();
    UnitVector::new(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{angle_between, chord_from_angle};
    use approx::assert_abs_diff_eq;

    #[test]
    fn ring_radius_values() {
        let r = ring_geodesic_radius(Angle::new(PI / 6.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.value(), 2.0 * PI / 3.0, epsilon = 1e-15);
        let r = ring_geodesic_radius(Angle::new(PI / 14.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.value(), 6.0 * PI / 7.0, epsilon = 1e-15);
        for a in [PI / 14.0, PI / 10.0, PI / 6.0] {
            let a = Angle::new(a).unwrap();
            let chord = chord_from_angle(ring_geodesic_radius(a).unwrap());
            assert_abs_diff_eq!(chord, 2.0 * a.cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn ring_rejects_wide_or_zero_cones() {
        assert!(ring_geodesic_radius(Angle::ZERO).is_err());
        assert!(ring_geodesic_radius(Angle::new(PI / 5.0).unwrap()).is_err());
    }

    #[test]
    fn ring_samples_sit_on_the_ring() {
        let mut rng = RandomStream::new(11);
        for n in [2, 3, 5, 9] {
            let x = sample_uniform(n, &mut rng).unwrap();
            for a in [PI / 14.0, PI / 10.0, PI / 6.0] {
                let a = Angle::new(a).unwrap();
                for _ in 0..50 {
                    let y = sample_ring(&x, a, &mut rng).unwrap();
                    assert_abs_diff_eq!(x.distance(&y), 2.0 * a.cos(), epsilon = 1e-9);
                    let t = angle_between(&x, &y).unwrap().value();
                    assert_abs_diff_eq!(t, PI - 2.0 * a.value(), epsilon = 1e-9);
                    let t = angle_between(&x.negated(), &y).unwrap().value();
                    assert_abs_diff_eq!(t, 2.0 * a.value(), epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn planar_ring_has_two_points() {
        let x = UnitVector::new(vec![0.3, -0.8]).unwrap();
        let a = Angle::new(PI / 6.0).unwrap();
        let rot = |t: f64| {
            let (c, s) = (t.cos(), t.sin());
            UnitVector::new(vec![c * 0.3 + s * 0.8, s * 0.3 - c * 0.8]).unwrap()
        };
        let targets = [rot(2.0 * PI / 3.0), rot(-2.0 * PI / 3.0)];
        let mut rng = RandomStream::new(5);
        let mut seen = [false, false];
        for _ in 0..100 {
            let y = sample_ring(&x, a, &mut rng).unwrap();
            let hit = targets.iter().position(|t| t.distance(&y) < 1e-9);
            let k = hit.expect("sample off the two-point ring");
            seen[k] = true;
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn uniform_samples_are_unit_and_centered() {
        let mut rng = RandomStream::new(1);
        let m = 100_000;
        let mut mean = [0.0; 3];
        let mut in_cap = 0usize;
        let e1 = UnitVector::axis(3, 0).unwrap();
        for _ in 0..m {
            let u = sample_uniform(3, &mut rng).unwrap();
            assert!((norm(u.coords()) - 1.0).abs() <= 1e-12);
            for (acc, c) in mean.iter_mut().zip(u.coords()) {
                *acc += c / m as f64;
            }
            if angle_between(&e1, &u).unwrap().value() <= PI / 3.0 {
                in_cap += 1;
            }
        }
        for c in mean {
            assert!(c.abs() < 0.02, "coordinate mean {c}");
        }
        let frac = in_cap as f64 / m as f64;
        assert!((frac - 0.25).abs() < 0.01, "cap fraction {frac}");
    }

    #[test]
    fn uniform_rejects_line() {
        assert!(sample_uniform(1, &mut RandomStream::new(0)).is_err());
    }
}
