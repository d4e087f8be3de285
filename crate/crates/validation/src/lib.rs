//! Brute-force oracles used to check the certifiers.
//!
//! Everything here is written without the main crate's geometry so the
//! acceptance suite compares two independent computations. All routines are
//! exponential and meant for at most a dozen or so items.

use nalgebra::{DMatrix, DVector};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn subsets_up_to(k: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u64..(1 << k) {
        if (mask.count_ones() as usize) <= max {
            out.push((0..k).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Unit directions equidistant (in angle) from every subset of at most
/// `dim` centers and lying in their span: `xi ∝ sum_i l_i c_i` with
/// `G l = 1` for the Gram matrix `G`. The center of any smallest enclosing
/// cap of radius below `pi/2` is one of them.
pub fn equidistant_directions(centers: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = centers.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for t in subsets_up_to(centers.len(), dim) {
        let m = t.len();
        let g = DMatrix::from_fn(m, m, |a, b| dot(&centers[t[a]], &centers[t[b]]));
        let Some(l) = g.lu().solve(&DVector::from_element(m, 1.0)) else {
            continue;
        };
        let mut v = vec![0.0; dim];
        for (a, &i) in t.iter().enumerate() {
            for (vk, ck) in v.iter_mut().zip(&centers[i]) {
                *vk += l[a] * ck;
            }
        }
        let len = dot(&v, &v).sqrt();
        if len > 1e-12 && len.is_finite() {
            out.push(v.iter().map(|x| x / len).collect());
        }
    }
    out
}

/// Bitmask of the caps `C(c_i, phi)` containing each candidate direction.
pub fn candidate_hits(centers: &[Vec<f64>], phi: f64) -> Vec<u64> {
    let cos = (phi + 1e-9).cos();
    equidistant_directions(centers)
        .iter()
        .map(|xi| {
            centers
                .iter()
                .enumerate()
                .filter(|(_, c)| dot(c, xi) >= cos)
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect()
}

/// Largest number of caps `C(c_i, phi)` (`phi < pi/2`) with a common point.
pub fn cap_multiplicity(centers: &[Vec<f64>], phi: f64) -> usize {
    candidate_hits(centers, phi)
        .into_iter()
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Fewest sets from the downward closure of `sets` covering `0..k`, by
/// dynamic programming over all `2^k` masks. `None` if impossible.
pub fn min_cover(k: usize, sets: &[u64]) -> Option<usize> {
    let full = (1usize << k) - 1;
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask.trailing_zeros();
        for &s in sets {
            if s >> low & 1 == 1 {
                let prev = best[mask & !(s as usize)];
                if prev != usize::MAX {
                    best[mask] = best[mask].min(prev + 1);
                }
            }
        }
    }
    (best[full] != usize::MAX).then_some(best[full])
}

/// Fewest directions `xi` covering the apexes when `xi` covers `x_i` iff
/// `theta(xi, -x_i) <= pi/2 - alpha`.
pub fn direction_cover(apexes: &[Vec<f64>], alpha: f64) -> Option<usize> {
    let reflected: Vec<Vec<f64>> = apexes.iter().map(|x| x.iter().map(|c| -c).collect()).collect();
    let hits = candidate_hits(&reflected, std::f64::consts::FRAC_PI_2 - alpha);
    min_cover(apexes.len(), &hits)
}

/// Radius of the smallest circle containing planar points, by trying every
/// circle through two or three of them.
pub fn min_circle_radius(points: &[[f64; 2]]) -> f64 {
    if points.len() <= 1 {
        return 0.0;
    }
    let contains = |c: [f64; 2], r: f64| {
        points
            .iter()
            .all(|p| ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt() <= r + 1e-12)
    };
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (a, b) = (points[i], points[j]);
            let c = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            let r = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() / 2.0;
            if r < best && contains(c, r) {
                best = r;
            }
            for p in &points[j + 1..] {
                let Some((c, r)) = circumcircle(a, b, *p) else {
                    continue;
                };
                if r < best && contains(c, r) {
                    best = r;
                }
            }
        }
    }
    best
}

fn circumcircle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Option<([f64; 2], f64)> {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d.abs() < 1e-14 {
        return None;
    }
    let sq = |p: [f64; 2]| p[0] * p[0] + p[1] * p[1];
    let ux = (sq(a) * (b[1] - c[1]) + sq(b) * (c[1] - a[1]) + sq(c) * (a[1] - b[1])) / d;
    let uy = (sq(a) * (c[0] - b[0]) + sq(b) * (a[0] - c[0]) + sq(c) * (b[0] - a[0])) / d;
    let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
    Some(([ux, uy], r))
}

/// Fewest closed disks of diameter `d` covering the planar points, over
/// every subset's smallest circle.
pub fn planar_ball_cover(points: &[[f64; 2]], d: f64) -> usize {
    let k = points.len();
    let coverable: Vec<u64> = (1u64..(1 << k))
        .filter(|&mask| {
            let sub: Vec<[f64; 2]> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| points[i]).collect();
            min_circle_radius(&sub) <= d / 2.0 + 1e-9
        })
        .collect();
    min_cover(k, &coverable).expect("singletons are coverable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circles() {
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]];
        assert!((min_circle_radius(&tri) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let obtuse = [[0.0, 0.0], [2.0, 0.0], [1.0, 0.1]];
        assert!((min_circle_radius(&obtuse) - 1.0).abs() < 1e-12);
        assert_eq!(planar_ball_cover(&tri, 1.0), 2);
        assert_eq!(planar_ball_cover(&tri, 1.2), 1);
    }

    #[test]
    fn covers() {
        assert_eq!(min_cover(3, &[0b011, 0b110]), Some(2));
        assert_eq!(min_cover(3, &[0b011]), None);
        assert_eq!(min_cover(4, &[0b0111, 0b1110, 0b1000]), Some(2));
    }

    #[test]
    fn cap_pairs() {
        // two centers at angle 1.0: caps of radius 0.49 miss, 0.51 meet
        let c = vec![vec![1.0, 0.0, 0.0], vec![1f64.cos(), 1f64.sin(), 0.0]];
        assert_eq!(cap_multiplicity(&c, 0.49), 1);
        assert_eq!(cap_multiplicity(&c, 0.51), 2);
        let x = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        assert_eq!(direction_cover(&x, std::f64::consts::PI / 14.0), Some(1));
    }
}
