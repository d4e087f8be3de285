use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed when constructing an [`Angle`] from a computed value.
pub const ANGLE_CLAMP_SLACK: f64 = 1e-12;

/// An angle in radians, kept in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const RIGHT: Angle = Angle(PI / 2.0);
    pub const STRAIGHT: Angle = Angle(PI);

    /// Values within `1e-12` of the range are clamped, anything further out is
    /// rejected.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < -ANGLE_CLAMP_SLACK || value > PI + ANGLE_CLAMP_SLACK {
            return Err(Error::AngleOutOfRange(value));
        }
        Ok(Angle(value.clamp(0.0, PI)))
    }

    /// `arccos` of a cosine, clamped to `[-1, 1]` first.
    pub fn from_cos(c: f64) -> Self {
        Angle(c.clamp(-1.0, 1.0).acos())
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `pi - self`.
    pub fn supplement(self) -> Angle {
        Angle(PI - self.0)
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }
}

/// A point of the unit sphere `S^{n-1}` in `E^n`, `n >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    /// Normalizes `coords`. Rejects `n < 2`, non-finite entries and the zero vector.
    pub fn new(mut coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::BadDimension(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidVector("non-finite coordinate"));
        }
        let norm = norm(&coords);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidVector("zero vector"));
        }
        coords.iter_mut().for_each(|c| *c /= norm);
        // one more pass pulls the norm to within an ulp or two of 1
        let norm = self::norm(&coords);
        coords.iter_mut().for_each(|c| *c /= norm);
        Ok(UnitVector { coords })
    }

    /// The standard basis vector `e_{axis+1}` of `E^dim`.
    pub fn axis(dim: usize, axis: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadDimension(dim));
        }
        if axis >= dim {
            return Err(Error::InvalidParameter(format!("axis {axis} >= dim {dim}")));
        }
        let mut coords = vec![0.0; dim];
        coords[axis] = 1.0;
        Ok(UnitVector { coords })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn negated(&self) -> UnitVector {
        UnitVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    #[inline]
    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.coords, &other.coords)
    }

    /// Euclidean distance in the ambient space.
    pub fn distance(&self, other: &UnitVector) -> f64 {
        distance(&self.coords, &other.coords)
    }

    pub(crate) fn from_normalized_unchecked(coords: Vec<f64>) -> Self {
        UnitVector { coords }
    }
}

impl TryFrom<Vec<f64>> for UnitVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        UnitVector::new(v)
    }
}

impl From<UnitVector> for Vec<f64> {
    fn from(u: UnitVector) -> Self {
        u.coords
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn distance_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    distance_sq(a, b).sqrt()
}

pub(crate) fn check_dims(a: &UnitVector, b: &UnitVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// Geodesic distance on the sphere: `arccos` of the clamped inner product.
pub fn angle_between(x: &UnitVector, y: &UnitVector) -> Result<Angle> {
    check_dims(x, y)?;
    Ok(Angle::from_cos(x.dot(y)))
}

/// Chord length `2 sin(theta / 2)` of two unit vectors at geodesic distance `theta`.
pub fn chord_from_angle(theta: Angle) -> f64 {
    2.0 * (theta.value() / 2.0).sin()
}

/// Angle between the directions of two non-zero vectors of `E^n`.
pub fn direction_angle(a: &[f64], b: &[f64]) -> Result<Angle> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::InvalidVector("zero vector"));
    }
    Ok(Angle::from_cos(dot(a, b) / (na * nb)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn e(dim: usize, i: usize) -> UnitVector {
        UnitVector::axis(dim, i).unwrap()
    }

    #[test]
    fn basic_angles() {
        let e1 = e(3, 0);
        assert_eq!(angle_between(&e1, &e1).unwrap().value(), 0.0);
        assert_abs_diff_eq!(angle_between(&e1, &e1.negated()).unwrap().value(), PI);
        assert_abs_diff_eq!(angle_between(&e1, &e(3, 1)).unwrap().value(), PI / 2.0);
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(matches!(
            angle_between(&e(3, 0), &e(4, 0)),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn chords() {
        assert_abs_diff_eq!(chord_from_angle(Angle::STRAIGHT), 2.0, epsilon = 1e-15);
        assert_eq!(chord_from_angle(Angle::ZERO), 0.0);
        let a = Angle::new(2.0 * PI / 3.0).unwrap();
        assert_abs_diff_eq!(chord_from_angle(a), 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(chord_from_angle(a), 2.0 * (PI / 6.0).cos(), epsilon = 1e-15);
    }

    #[test]
    fn angle_range() {
        assert!(Angle::new(-1e-3).is_err());
        assert!(Angle::new(PI + 1e-6).is_err());
        assert_eq!(Angle::new(-1e-13).unwrap().value(), 0.0);
        assert_eq!(Angle::new(PI + 1e-13).unwrap().value(), PI);
        assert!(Angle::new(f64::NAN).is_err());
    }

    #[test]
    fn unit_vector_rejects_bad_input() {
        assert!(matches!(UnitVector::new(vec![1.0]), Err(Error::BadDimension(1))));
        assert!(UnitVector::new(vec![0.0, 0.0]).is_err());
        assert!(UnitVector::new(vec![f64::NAN, 1.0]).is_err());
        let u = UnitVector::new(vec![3.0, 4.0, 12.0]).unwrap();
        assert!((norm(u.coords()) - 1.0).abs() <= 1e-12);
    }
}
