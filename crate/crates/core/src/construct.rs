//! Randomized construction of separated point sets by the deletion method.
//!
//! Draw `N` uniform points, collect every pair whose angle falls outside
//! `[psi, pi - psi]`, then delete points until no such pair remains. `N` is
//! `ceil(8 n ln n / Omega_n((1 - 1/(2n)) phi))`, the count for which the random
//! caps `C(x_i, phi)` cover the sphere with logarithmic multiplicity.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::rng::{domain, StreamSeed};
use crate::sphere::{cap_measure, sample_uniform, Angle, UnitVector, ANGLE_TOL};

/// Default ceiling on the candidate count.
pub const DEFAULT_COUNT_LIMIT: usize = 10_000_000;

/// Boundary slack when classifying a pair as bad.
pub const BAD_PAIR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub dim: usize,
    pub psi: Angle,
    pub phi: Angle,
    pub seed: u64,
    /// Candidate count to use instead of [`target_count`].
    pub n_override: Option<usize>,
    #[serde(default = "default_limit")]
    pub count_limit: usize,
}

fn default_limit() -> usize {
    DEFAULT_COUNT_LIMIT
}

impl ConstructionParams {
    /// Checks `dim >= 2` and `0 < psi < phi < pi/2`.
    pub fn new(dim: usize, psi: Angle, phi: Angle, seed: u64) -> Result<Self> {
        let p = ConstructionParams {
            dim,
            psi,
            phi,
            seed,
            n_override: None,
            count_limit: DEFAULT_COUNT_LIMIT,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_override(mut self, n: Option<usize>) -> Self {
        self.n_override = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::BadDimension(self.dim));
        }
        let (psi, phi) = (self.psi.value(), self.phi.value());
        if !(0.0 < psi && psi < phi && phi < FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < psi < phi < pi/2, got psi = {psi}, phi = {phi}"
            )));
        }
        if self.n_override == Some(0) {
            return Err(Error::InvalidParameter("n_override must be positive".into()));
        }
        Ok(())
    }

    /// The candidate count `N` this construction will draw.
    pub fn candidate_count(&self) -> Result<usize> {
        match self.n_override {
            Some(n) => Ok(n),
            None => target_count_with_limit(self.dim, self.phi, self.count_limit),
        }
    }
}

/// `ceil(8 n ln n / Omega_n((1 - 1/(2n)) phi))` with the default limit.
pub fn target_count(n: usize, phi: Angle) -> Result<usize> {
    target_count_with_limit(n, phi, DEFAULT_COUNT_LIMIT)
}

pub fn target_count_with_limit(n: usize, phi: Angle, limit: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    if !(phi.value() > 0.0 && phi.value() < FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "phi = {} must lie in (0, pi/2)",
            phi.value()
        )));
    }
    let nf = n as f64;
    let shrunk = Angle::new((1.0 - 1.0 / (2.0 * nf)) * phi.value())?;
    let omega = cap_measure(n, shrunk)?;
    let value = (8.0 * nf * nf.ln() / omega).ceil();
    if !value.is_finite() || value > limit as f64 {
        return Err(Error::LimitExceeded(format!(
            "N = {value} exceeds {limit}: N too large for desk scale; pass n_override"
        )));
    }
    Ok(value as usize)
}

/// Draws the candidate points, one random stream per point.
pub fn sample_candidates(params: &ConstructionParams) -> Result<Vec<UnitVector>> {
    params.validate()?;
    let count = params.candidate_count()?;
    let key = StreamSeed::new(params.seed).child(domain::CANDIDATES);
    par::map_range(0..count, |i| sample_uniform(params.dim, &mut key.stream(i as u64)))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Violation {
    TooClose,
    TooAntipodal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BadPair {
    pub i: usize,
    pub j: usize,
    pub angle: f64,
    pub kind: Violation,
}

/// Pairs `(i < j)` whose angle is outside `[psi, pi - psi]`, sorted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BadPairSet {
    pub pairs: Vec<BadPair>,
}

impl BadPairSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn scan_pairs(points: &[UnitVector], psi: Angle, tol: f64) -> Vec<BadPair> {
    let lo = psi.value() - tol;
    let hi = PI - psi.value() + tol;
    // theta < lo  <=>  cos > cos(lo);  theta > hi  <=>  cos < cos(hi)
    let cos_lo = if lo <= 0.0 { f64::INFINITY } else { lo.cos() };
    let cos_hi = if hi >= PI { f64::NEG_INFINITY } else { hi.cos() };
    let rows = par::map_range(0..points.len(), |i| {
        let xi = &points[i];
        let mut out = Vec::new();
        for (j, xj) in points.iter().enumerate().skip(i + 1) {
            let c = xi.dot(xj);
            if c > cos_lo || c < cos_hi {
                let angle = Angle::from_cos(c).value();
                let kind = if c > cos_lo {
                    Violation::TooClose
                } else {
                    Violation::TooAntipodal
                };
                // recheck on the angle itself so the listing is exact
                if angle < lo || angle > hi {
                    out.push(BadPair { i, j, angle, kind });
                }
            }
        }
        out
    });
    rows.into_iter().flatten().collect()
}

/// Exhaustive scan for pairs violating `psi <= theta <= pi - psi`; pairs on the
/// boundary (within `1e-12`) count as good.
pub fn find_bad_pairs(points: &[UnitVector], psi: Angle) -> BadPairSet {
    BadPairSet {
        pairs: scan_pairs(points, psi, BAD_PAIR_TOL),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deletion {
    /// Surviving indices, increasing.
    pub kept: Vec<usize>,
    /// Removed indices in removal order.
    pub removed: Vec<usize>,
}

/// Removes points until no bad pair survives.
///
/// Greedy vertex cover: repeatedly delete the point with the most remaining
/// bad pairs, lowest index first on ties. Never removes more than `bad.len()`
/// points.
pub fn delete_bad(count: usize, bad: &BadPairSet) -> Deletion {
    let mut adj = vec![Vec::new(); count];
    for p in &bad.pairs {
        adj[p.i].push(p.j);
        adj[p.j].push(p.i);
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut alive = vec![true; count];
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = degree
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(i, &d)| (d, Reverse(i)))
        .collect();
    let mut removed = Vec::new();
    while let Some((d, Reverse(v))) = heap.pop() {
        if !alive[v] || degree[v] != d {
            continue;
        }
        if d == 0 {
            break;
        }
        alive[v] = false;
        removed.push(v);
        for &w in &adj[v] {
            if alive[w] {
                degree[w] -= 1;
                if degree[w] > 0 {
                    heap.push((degree[w], Reverse(w)));
                }
            }
        }
    }
    let kept = (0..count).filter(|&i| alive[i]).collect();
    Deletion { kept, removed }
}

/// A separated point set and how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub params: ConstructionParams,
    pub points: Vec<UnitVector>,
    /// Number of candidates drawn, `N`.
    pub candidate_count: usize,
    pub deleted_count: usize,
    /// `|B|` for the candidate set.
    pub bad_pair_count: usize,
}

impl Configuration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether at least half of the candidates survived deletion.
    pub fn markov_success(&self) -> bool {
        2 * self.points.len() >= self.candidate_count
    }

    pub fn dim(&self) -> usize {
        self.params.dim
    }
}

/// Sample, find bad pairs, delete. The result always satisfies the
/// separation property.
pub fn construct_separated(params: &ConstructionParams) -> Result<Configuration> {
    let candidates = sample_candidates(params)?;
    let bad = find_bad_pairs(&candidates, params.psi);
    let deletion = delete_bad(candidates.len(), &bad);
    let candidate_count = candidates.len();
    let points: Vec<UnitVector> = deletion
        .kept
        .iter()
        .map(|&i| candidates[i].clone())
        .collect();
    let check = verify_separation(&points, params.psi);
    if !check.ok {
        return Err(Error::Precondition(format!(
            "deletion left {} violating pairs",
            check.violations.len()
        )));
    }
    Ok(Configuration {
        params: params.clone(),
        points,
        candidate_count,
        deleted_count: deletion.removed.len(),
        bad_pair_count: bad.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationCheck {
    pub ok: bool,
    pub violations: Vec<BadPair>,
}

/// Checks `psi <= theta(x_i, x_j) <= pi - psi` for all pairs within `1e-9`.
pub fn verify_separation(points: &[UnitVector], psi: Angle) -> SeparationCheck {
    let violations = scan_pairs(points, psi, ANGLE_TOL);
    SeparationCheck {
        ok: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    fn e(dim: usize, i: usize) -> UnitVector {
        UnitVector::axis(dim, i).unwrap()
    }

    fn a(v: f64) -> Angle {
        Angle::new(v).unwrap()
    }

    fn pair(i: usize, j: usize) -> BadPair {
        BadPair {
            i,
            j,
            angle: 0.0,
            kind: Violation::TooClose,
        }
    }

    #[test]
    fn circle_target_count() {
        // Omega_2(pi/4) = 1/4, so N = ceil(64 ln 2) = 45
        assert_eq!(target_count(2, a(FRAC_PI_3)).unwrap(), 45);
    }

    #[test]
    fn target_count_decreases_with_phi() {
        for n in [2, 3, 5, 8, 12] {
            let counts: Vec<usize> = (5..16)
                .map(|k| target_count(n, a(0.1 * k as f64)).unwrap())
                .collect();
            assert!(counts.windows(2).all(|w| w[0] >= w[1]), "n={n}: {counts:?}");
        }
    }

    #[test]
    fn target_count_limit() {
        let err = target_count(60, a(0.3)).unwrap_err();
        assert!(matches!(err, Error::LimitExceeded(_)));
        assert!(target_count(5, a(FRAC_PI_2)).is_err());
    }

    #[test]
    fn params_require_ordered_angles() {
        assert!(ConstructionParams::new(4, a(FRAC_PI_3), a(FRAC_PI_3), 0).is_err());
        assert!(ConstructionParams::new(4, a(FRAC_PI_3), a(0.5), 0).is_err());
        assert!(ConstructionParams::new(4, a(1.0), a(FRAC_PI_2), 0).is_err());
        assert!(ConstructionParams::new(1, a(0.5), a(1.0), 0).is_err());
        assert!(ConstructionParams::new(4, a(0.5), a(1.0), 0).is_ok());
    }

    #[test]
    fn candidates_are_deterministic() {
        let p = ConstructionParams::new(5, a(1.0), a(1.1), 9).unwrap().with_override(Some(50));
        let x = sample_candidates(&p).unwrap();
        let y = sample_candidates(&p).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.len(), 50);
        let q = ConstructionParams { seed: 10, ..p };
        assert_ne!(x, sample_candidates(&q).unwrap());
        for u in &x {
            let n: f64 = u.coords().iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn bad_pair_classification() {
        let psi = a(FRAC_PI_3);
        assert!(find_bad_pairs(&[e(3, 0), e(3, 1)], psi).is_empty());
        let b = find_bad_pairs(&[e(3, 0), e(3, 0).negated()], psi);
        assert_eq!(b.len(), 1);
        assert_eq!(b.pairs[0].kind, Violation::TooAntipodal);
        let near = UnitVector::new(vec![1.0, 0.1, 0.0]).unwrap();
        let b = find_bad_pairs(&[e(3, 0), near], psi);
        assert_eq!(b.pairs[0].kind, Violation::TooClose);
    }

    #[test]
    fn deletion_rules() {
        let none = delete_bad(4, &BadPairSet::default());
        assert_eq!(none.kept, vec![0, 1, 2, 3]);

        let one = delete_bad(3, &BadPairSet { pairs: vec![pair(0, 2)] });
        assert_eq!(one.removed.len(), 1);
        assert!(one.removed[0] == 0 || one.removed[0] == 2);

        let star = BadPairSet {
            pairs: vec![pair(1, 2), pair(1, 3), pair(1, 4)],
        };
        let d = delete_bad(5, &star);
        assert_eq!(d.removed, vec![1]);
        assert_eq!(d.kept, vec![0, 2, 3, 4]);

        // path 0-1-2-3: degrees 1,2,2,1 -> remove 1 (lowest of the max), then 2 or 3
        let path = BadPairSet {
            pairs: vec![pair(0, 1), pair(1, 2), pair(2, 3)],
        };
        let d = delete_bad(4, &path);
        assert_eq!(d.removed, vec![1, 2]);
    }

    #[test]
    fn separation_checks() {
        let psi = a(FRAC_PI_2);
        let check = verify_separation(&[e(3, 0), e(3, 1), e(3, 2)], psi);
        assert!(check.ok);
        let check = verify_separation(&[e(3, 0), e(3, 0).negated()], a(0.2));
        assert!(!check.ok);
        assert_eq!(check.violations.len(), 1);
        assert!((check.violations[0].angle - PI).abs() < 1e-12);
    }

    #[test]
    fn construction_is_separated_and_deterministic() {
        let psi = a(6.0 * PI / 14.0);
        let phi = a(6.0 * PI / 14.0 + 0.05);
        for seed in 0..10 {
            let p = ConstructionParams::new(4, psi, phi, seed).unwrap();
            let c = construct_separated(&p).unwrap();
            assert!(verify_separation(&c.points, psi).ok);
            assert_eq!(c.points.len() + c.deleted_count, c.candidate_count);
            assert!(c.deleted_count <= c.bad_pair_count);
            assert_eq!(c, construct_separated(&p).unwrap());
        }
    }
}
