//! Minimum enclosing Euclidean balls by the move-to-front Welzl recursion.

use crate::error::{Error, Result};
use crate::sphere::vector::distance_sq;

/// Slack used when testing whether a point is inside a candidate ball.
const CONTAIN_RTOL: f64 = 1e-12;

/// A closed Euclidean ball together with the input indices that determine it.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
    /// At most `dim + 1` indices of input points on the boundary.
    pub support: Vec<usize>,
}

impl Ball {
    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        distance_sq(&self.center, p).sqrt() <= self.radius + tol
    }
}

struct Work<'a> {
    points: Vec<&'a [f64]>,
    dim: usize,
}

#[derive(Clone)]
struct Candidate {
    center: Vec<f64>,
    r2: f64,
    support: Vec<usize>,
}

impl Candidate {
    fn contains(&self, p: &[f64]) -> bool {
        if self.r2 < 0.0 {
            return false;
        }
        let d2 = distance_sq(&self.center, p);
        let r = self.r2.sqrt();
        let slack = CONTAIN_RTOL * r.max(1.0);
        d2 <= (r + slack) * (r + slack)
    }
}

impl Work<'_> {
    fn mtf(&self, order: &mut [usize], end: usize, boundary: &mut Vec<usize>) -> Candidate {
        let mut ball = self.circumball(boundary);
        if boundary.len() == self.dim + 1 {
            return ball;
        }
        for i in 0..end {
            let idx = order[i];
            if !ball.contains(self.points[idx]) {
                boundary.push(idx);
                ball = self.mtf(order, i, boundary);
                boundary.pop();
                order[..=i].rotate_right(1);
            }
        }
        ball
    }

    /// Smallest ball with every boundary point on its sphere, within the
    /// affine hull of the boundary.
    fn circumball(&self, boundary: &[usize]) -> Candidate {
        match boundary.len() {
            0 => Candidate {
                center: vec![0.0; self.dim],
                r2: -1.0,
                support: Vec::new(),
            },
            1 => Candidate {
                center: self.points[boundary[0]].to_vec(),
                r2: 0.0,
                support: boundary.to_vec(),
            },
            k => {
                let q0 = self.points[boundary[0]];
                let vs: Vec<Vec<f64>> = boundary[1..]
                    .iter()
                    .map(|&j| self.points[j].iter().zip(q0).map(|(a, b)| a - b).collect())
                    .collect();
                let m = k - 1;
                let mut a = vec![vec![0.0; m]; m];
                let mut b = vec![0.0; m];
                for r in 0..m {
                    for c in 0..m {
                        a[r][c] = 2.0 * crate::sphere::vector::dot(&vs[r], &vs[c]);
                    }
                    b[r] = crate::sphere::vector::dot(&vs[r], &vs[r]);
                }
                let mu = solve_min_norm(a, b);
                let mut center = q0.to_vec();
                for (coef, v) in mu.iter().zip(&vs) {
                    for (c, x) in center.iter_mut().zip(v) {
                        *c += coef * x;
                    }
                }
                let r2 = boundary
                    .iter()
                    .map(|&j| distance_sq(&center, self.points[j]))
                    .fold(0.0, f64::max);
                Candidate {
                    center,
                    r2,
                    support: boundary.to_vec(),
                }
            }
        }
    }
}

/// Gaussian elimination with full pivoting. Rank-deficient systems get the
/// free variables set to zero.
fn solve_min_norm(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let m = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let mut perm: Vec<usize> = (0..m).collect();
    let mut rank = 0;
    for col in 0..m {
        let mut best = (col, col, 0.0);
        for r in col..m {
            for c in col..m {
                if a[r][c].abs() > best.2 {
                    best = (r, c, a[r][c].abs());
                }
            }
        }
        if best.2 <= 1e-13 * scale {
            break;
        }
        a.swap(col, best.0);
        b.swap(col, best.0);
        if best.1 != col {
            for row in a.iter_mut() {
                row.swap(col, best.1);
            }
            perm.swap(col, best.1);
        }
        for r in col + 1..m {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..m {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
        rank += 1;
    }
    let mut y = vec![0.0; m];
    for r in (0..rank).rev() {
        let s: f64 = (r + 1..rank).map(|c| a[r][c] * y[c]).sum();
        y[r] = (b[r] - s) / a[r][r];
    }
    let mut x = vec![0.0; m];
    for (i, &p) in perm.iter().enumerate() {
        x[p] = y[i];
    }
    x
}

/// Minimum enclosing ball of a nonempty point set in `E^n`.
///
/// The reported radius is the largest distance from the computed center to
/// any input point, so every point is inside the returned ball. The support is
/// reduced to indices whose removal strictly shrinks the ball.
pub fn min_enclosing_ball<P: AsRef<[f64]>>(points: &[P]) -> Result<Ball> {
    let first = points.first().ok_or(Error::Empty)?;
    let dim = first.as_ref().len();
    if let Some(p) = points.iter().find(|p| p.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: p.as_ref().len(),
        });
    }
    let work = Work {
        points: points.iter().map(|p| p.as_ref()).collect(),
        dim,
    };
    let ball = solve(&work, (0..points.len()).collect());
    let support = reduce_support(&work, ball.support.clone(), ball.r2.max(0.0).sqrt());
    let radius = work
        .points
        .iter()
        .map(|p| distance_sq(&ball.center, p))
        .fold(0.0, f64::max)
        .sqrt();
    Ok(Ball {
        center: ball.center,
        radius,
        support,
    })
}

fn solve(work: &Work<'_>, mut order: Vec<usize>) -> Candidate {
    let end = order.len();
    let mut boundary = Vec::with_capacity(work.dim + 1);
    work.mtf(&mut order, end, &mut boundary)
}

fn reduce_support(work: &Work<'_>, mut support: Vec<usize>, radius: f64) -> Vec<usize> {
    let tol = 1e-10 * radius.max(1.0);
    let mut i = 0;
    while i < support.len() && support.len() > 1 {
        let rest: Vec<usize> = support
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &s)| s)
            .collect();
        let sub = solve(work, rest.clone());
        if sub.r2.max(0.0).sqrt() >= radius - tol {
            support = rest;
        } else {
            i += 1;
        }
    }
    support.sort_unstable();
    support
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_point() {
        let b = min_enclosing_ball(&[vec![1.0, 2.0, 3.0]]).unwrap();
        assert_eq!(b.radius, 0.0);
        assert_eq!(b.center, vec![1.0, 2.0, 3.0]);
        assert_eq!(b.support, vec![0]);
    }

    #[test]
    fn two_points_midpoint() {
        let b = min_enclosing_ball(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_abs_diff_eq!(b.radius, 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.center[0], 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.center[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn equilateral_triangle_circumradius() {
        let h = 3f64.sqrt() / 2.0;
        let pts = [vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]];
        let b = min_enclosing_ball(&pts).unwrap();
        assert_abs_diff_eq!(b.radius, 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert_eq!(b.support, vec![0, 1, 2]);
    }

    #[test]
    fn obtuse_triangle_uses_long_edge() {
        let pts = [vec![0.0, 0.0], vec![4.0, 0.0], vec![2.0, 0.5]];
        let b = min_enclosing_ball(&pts).unwrap();
        assert_abs_diff_eq!(b.radius, 2.0, epsilon = 1e-12);
        assert_eq!(b.support, vec![0, 1]);
    }

    #[test]
    fn collinear_and_duplicate_points() {
        let pts = [
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![2.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
        ];
        let b = min_enclosing_ball(&pts).unwrap();
        assert_abs_diff_eq!(b.radius, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn regular_simplex_in_four_dims() {
        let pts: Vec<Vec<f64>> = (0..4)
            .map(|i| {
                let mut v = vec![0.0; 4];
                v[i] = 1.0;
                v
            })
            .collect();
        let b = min_enclosing_ball(&pts).unwrap();
        // circumradius of the standard 3-simplex: sqrt(3/4)
        assert_abs_diff_eq!(b.radius, 0.75f64.sqrt(), epsilon = 1e-12);
        assert_eq!(b.support.len(), 4);
    }

    #[test]
    fn errors() {
        let empty: [Vec<f64>; 0] = [];
        assert_eq!(min_enclosing_ball(&empty), Err(Error::Empty));
        assert!(matches!(
            min_enclosing_ball(&[vec![0.0, 0.0], vec![0.0, 0.0, 1.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
