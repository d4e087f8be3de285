//! Normalized surface measure of spherical caps.
//!
//! `cap_measure(n, theta)` is the fraction of `S^{n-1}` covered by a cap of
//! angular radius `theta`:
//!
//! ```text
//!   Omega_n(theta) = int_0^theta sin^{n-2} t dt / int_0^pi sin^{n-2} t dt
//! ```
//!
//! Both integrals are evaluated by adaptive Gauss-Legendre quadrature.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::sphere::Angle;

/// Relative tolerance of the adaptive quadrature.
pub const QUADRATURE_RTOL: f64 = 1e-10;

const GL_ORDER: usize = 20;
const MAX_DEPTH: u32 = 40;

struct GaussLegendre {
    nodes: [f64; GL_ORDER],
    weights: [f64; GL_ORDER],
}

fn legendre_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n {
            // Newton iteration on P_n from the Chebyshev-like initial guess.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    })
}

fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let rule = legendre_rule();
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    let sum: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum();
    sum * half
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
    let mid = (a + b) / 2.0;
    let left = gauss_legendre(f, a, mid);
    let right = gauss_legendre(f, mid, b);
    let halves = left + right;
    if depth >= MAX_DEPTH || (halves - whole).abs() <= QUADRATURE_RTOL * 1e-2 * halves.abs() {
        return halves;
    }
    adaptive(f, a, mid, left, depth + 1) + adaptive(f, mid, b, right, depth + 1)
}

/// Adaptive Gauss-Legendre integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // a few fixed panels first so narrow peaks are never skipped entirely
    const PANELS: usize = 8;
    let h = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let whole = gauss_legendre(&f, lo, hi);
            adaptive(&f, lo, hi, whole, 0)
        })
        .sum()
}

fn sin_power(m: usize) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        let s = t.sin();
        if m <= i32::MAX as usize {
            s.powi(m as i32)
        } else {
            s.powf(m as f64)
        }
    }
}

/// `int_0^theta sin^{n-2} t dt` for `theta <= pi/2`.
fn partial_integral(n: usize, theta: f64) -> f64 {
    if n == 2 {
        return theta;
    }
    integrate(sin_power(n - 2), 0.0, theta)
}

/// `int_0^{pi/2} sin^{n-2} t dt`.
fn half_total(n: usize) -> f64 {
    partial_integral(n, FRAC_PI_2)
}

/// Normalized measure of a cap of angular radius `theta` on `S^{n-1}`.
///
/// Monotone nondecreasing in `theta`, with `Omega(pi/2) = 1/2`,
/// `Omega(pi) = 1` and `Omega(pi - theta) = 1 - Omega(theta)`.
pub fn cap_measure(n: usize, theta: Angle) -> Result<f64> {
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    let t = theta.value();
    if t == 0.0 {
        return Ok(0.0);
    }
    if t == PI {
        return Ok(1.0);
    }
    let total = 2.0 * half_total(n);
    if t <= FRAC_PI_2 {
        Ok((partial_integral(n, t) / total).clamp(0.0, 0.5))
    } else {
        // sin is symmetric about pi/2, so the tail is the mirrored head
        Ok((1.0 - partial_integral(n, PI - t) / total).clamp(0.5, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        // x^38 is the highest degree a 20-point rule integrates exactly.
        let v = gauss_legendre(&|x: f64| x.powi(38), -1.0, 1.0);
        assert_abs_diff_eq!(v, 2.0 / 39.0, epsilon = 1e-14);
        let w: f64 = legendre_rule().weights.iter().sum();
        assert_abs_diff_eq!(w, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn hemisphere_and_full() {
        for n in [2, 3, 7, 40, 300] {
            assert_abs_diff_eq!(cap_measure(n, Angle::RIGHT).unwrap(), 0.5, epsilon = 1e-12);
            assert_eq!(cap_measure(n, Angle::STRAIGHT).unwrap(), 1.0);
            assert_eq!(cap_measure(n, Angle::ZERO).unwrap(), 0.0);
        }
    }

    #[test]
    fn circle_is_linear() {
        for k in 0..=20 {
            let t = PI * k as f64 / 20.0;
            assert_abs_diff_eq!(
                cap_measure(2, Angle::new(t).unwrap()).unwrap(),
                t / PI,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn two_sphere_closed_form() {
        for k in 0..=50 {
            let t = PI * k as f64 / 50.0;
            let expect = (1.0 - t.cos()) / 2.0;
            assert_abs_diff_eq!(
                cap_measure(3, Angle::new(t).unwrap()).unwrap(),
                expect,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn three_sphere_closed_form() {
        // int_0^t sin^2 = (t - sin t cos t)/2, total pi/2
        for k in 1..50 {
            let t = PI * k as f64 / 50.0;
            let expect = (t - t.sin() * t.cos()) / PI;
            assert_abs_diff_eq!(
                cap_measure(4, Angle::new(t).unwrap()).unwrap(),
                expect,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn matches_incomplete_beta() {
        // below pi/2 the cap is half of I_{sin^2 t}((n-1)/2, 1/2)
        use statrs::function::beta::beta_reg;
        for n in [3, 5, 8, 17, 60, 200] {
            for k in 1..=30 {
                let t = PI / 2.0 * k as f64 / 31.0;
                let expect = 0.5 * beta_reg((n as f64 - 1.0) / 2.0, 0.5, t.sin().powi(2));
                let got = cap_measure(n, Angle::new(t).unwrap()).unwrap();
                assert_abs_diff_eq!(got, expect, epsilon = 1e-10);
                let upper = cap_measure(n, Angle::new(PI - t).unwrap()).unwrap();
                assert_abs_diff_eq!(upper, 1.0 - expect, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn rejects_circle_of_one_point() {
        assert_eq!(cap_measure(1, Angle::RIGHT), Err(Error::BadDimension(1)));
    }
}
