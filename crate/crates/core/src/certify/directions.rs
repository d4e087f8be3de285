//! Direction covers of an apex set: lower bounds from cap multiplicity and
//! greedy or exact upper bounds.
//!
//! A direction `xi` can illuminate apex `x_i` only if it lies in the reflected
//! cap `C(-x_i, pi/2 - alpha)`, so `k` directions illuminate at most `k M`
//! apexes, where `M` is the multiplicity of the reflected family.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::certify::multiplicity::{fitting_cap, multiplicity, MultiplicityReport, DEFAULT_EXACT_LIMIT};
use crate::certify::pipeline::PipelineOptions;
use crate::certify::setcover::{exact_set_cover, greedy_cover_lists};
use crate::certify::subsets::{members, SubsetSearch, DEFAULT_ENUMERATION_LIMIT};
use crate::certify::{
    CertificateParams, CoverCertificate, LowerBoundMethod, Mode, UpperBoundMethod,
};
use crate::error::{Error, Result};
use crate::par;
use crate::rng::{domain, StreamSeed};
use crate::sphere::{
    check_cone_angle, cos_threshold, sample_uniform, Angle, SphericalCap, UnitVector,
};
use crate::witness::check_witness_condition;

/// The caps `C(-x_i, pi/2 - alpha)` of directions able to illuminate each apex.
pub fn reflected_family(points: &[UnitVector], alpha: Angle) -> Result<Vec<SphericalCap>> {
    check_cone_angle(alpha)?;
    let radius = Angle::new(FRAC_PI_2 - alpha.value())?;
    points
        .iter()
        .map(|x| SphericalCap::new(x.negated(), radius))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionCover {
    pub directions: Vec<UnitVector>,
    /// Apex indices each chosen direction can illuminate.
    pub covered: Vec<Vec<usize>>,
    /// Number of candidate directions (or feasible subsets) considered.
    pub pool_size: usize,
}

impl DirectionCover {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

struct Reflected {
    centers: Vec<UnitVector>,
    radius: Angle,
    threshold: f64,
}

impl Reflected {
    fn new(points: &[UnitVector], alpha: Angle) -> Result<Self> {
        check_cone_angle(alpha)?;
        let radius = Angle::new(FRAC_PI_2 - alpha.value())?;
        Ok(Reflected {
            centers: points.iter().map(UnitVector::negated).collect(),
            radius,
            threshold: cos_threshold(radius),
        })
    }

    fn hits(&self, xi: &UnitVector) -> Vec<usize> {
        (0..self.centers.len())
            .filter(|&i| self.centers[i].dot(xi) >= self.threshold)
            .collect()
    }

    fn fit(&self, subset: &[usize], seed: u64) -> Option<UnitVector> {
        let pts: Vec<UnitVector> = subset.iter().map(|&i| self.centers[i].clone()).collect();
        fitting_cap(&pts, self.radius, seed).map(|c| c.center)
    }

    /// Grows a jointly illuminable set from apex `i`, nearest reflected centers first.
    fn grow(&self, i: usize, seed: u64) -> UnitVector {
        let c = &self.centers[i];
        let mut order: Vec<usize> = (0..self.centers.len()).filter(|&k| k != i).collect();
        order.sort_by(|&a, &b| {
            c.dot(&self.centers[b])
                .total_cmp(&c.dot(&self.centers[a]))
                .then(a.cmp(&b))
        });
        let mut current = vec![i];
        let mut center = c.clone();
        for k in order {
            current.push(k);
            match self.fit(&current, seed) {
                Some(x) => center = x,
                None => {
                    current.pop();
                }
            }
        }
        center
    }
}

fn dims_agree(points: &[UnitVector]) -> Result<()> {
    if let Some(first) = points.first() {
        if let Some(p) = points.iter().find(|p| p.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                left: first.dim(),
                right: p.dim(),
            });
        }
    }
    Ok(())
}

/// Greedy cover of the apexes by directions, each apex counted as covered
/// when the direction lies in its reflected cap.
///
/// The candidate pool holds every `-x_i`, one direction per apex grown to a
/// maximal jointly illuminable set, and `extra_candidates` uniform samples
/// (each replaced by the enclosing-cap center of its hit set when that is at
/// least as good).
pub fn greedy_direction_cover(
    points: &[UnitVector],
    alpha: Angle,
    extra_candidates: usize,
    seed: u64,
) -> Result<DirectionCover> {
    dims_agree(points)?;
    let refl = Reflected::new(points, alpha)?;
    if points.is_empty() {
        return Ok(DirectionCover {
            directions: Vec::new(),
            covered: Vec::new(),
            pool_size: 0,
        });
    }
    let dim = points[0].dim();
    let mut pool: Vec<UnitVector> = refl.centers.clone();
    pool.extend(par::map_range(0..points.len(), |i| refl.grow(i, seed)));

    let mut rng = StreamSeed::new(seed).child(domain::DIRECTIONS).stream(0);
    let samples = (0..extra_candidates)
        .map(|_| sample_uniform(dim, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    pool.extend(par::map_slice(&samples, |xi| {
        let hit = refl.hits(xi);
        match refl.fit(&hit, seed) {
            Some(c) if !hit.is_empty() && refl.hits(&c).len() >= hit.len() => c,
            _ => xi.clone(),
        }
    }));

    let sets: Vec<Vec<usize>> = par::map_slice(&pool, |xi| refl.hits(xi));
    let chosen = greedy_cover_lists(points.len(), &sets)
        .ok_or_else(|| Error::Precondition("direction pool does not cover the apexes".into()))?;
    Ok(DirectionCover {
        directions: chosen.iter().map(|&k| pool[k].clone()).collect(),
        covered: chosen.iter().map(|&k| sets[k].clone()).collect(),
        pool_size: pool.len(),
    })
}

/// Fewest directions covering the apexes, over all directions of the sphere:
/// exact set cover over the maximal jointly illuminable subsets.
pub fn exact_direction_cover(points: &[UnitVector], alpha: Angle, seed: u64) -> Result<DirectionCover> {
    dims_agree(points)?;
    let refl = Reflected::new(points, alpha)?;
    let search = SubsetSearch::new(points.len(), |s: &[usize]| refl.fit(s, seed).is_some())?;
    let family = search.maximal_feasible(DEFAULT_ENUMERATION_LIMIT)?;
    let chosen = exact_set_cover(points.len(), &family).expect("singletons are illuminable");
    let mut directions = Vec::with_capacity(chosen.len());
    let mut covered = Vec::with_capacity(chosen.len());
    for k in chosen {
        let subset = members(family[k]);
        directions.push(refl.fit(&subset, seed).expect("feasible subset refits"));
        covered.push(subset);
    }
    Ok(DirectionCover {
        directions,
        covered,
        pool_size: family.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlluminationCertificate {
    pub certificate: CoverCertificate,
    pub multiplicity: MultiplicityReport,
    /// The multiplicity `M` divided into `|X|`.
    pub multiplicity_bound: usize,
    pub cover: DirectionCover,
}

/// Bounds on the number of directions needed to illuminate every apex on any
/// body of diameter `2 cos alpha` containing the witness set.
///
/// Exact mode divides by the exact multiplicity of the reflected family and
/// yields a certified lower bound. Mc mode divides by the sampled
/// multiplicity, which can only overstate the bound; its result is flagged as
/// an estimate and clamped to the greedy upper bound.
pub fn illumination_lower_bound(
    points: &[UnitVector],
    alpha: Angle,
    mode: Mode,
    opts: &PipelineOptions,
    seed: u64,
) -> Result<IlluminationCertificate> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    dims_agree(points)?;
    if !check_witness_condition(points, alpha)? {
        return Err(Error::Precondition(format!(
            "apexes violate 4a <= theta <= pi - 6a for a = {}",
            alpha.value()
        )));
    }
    let caps = reflected_family(points, alpha)?;
    let n = points.len();
    let (report, m, estimate) = match mode {
        Mode::Exact => {
            let limit = opts.exact_limit.unwrap_or(DEFAULT_EXACT_LIMIT);
            let r = multiplicity(&caps, opts.mc_samples, seed, Some(limit))?;
            let m = r.exact_max.expect("exact multiplicity requested");
            (r, m, false)
        }
        Mode::Mc => {
            let r = multiplicity(&caps, opts.mc_samples, seed, None)?;
            // each cap holds its own center, so the multiplicity is at least 1
            let m = r.mc_max.max(1);
            (r, m, true)
        }
        Mode::Greedy => {
            return Err(Error::InvalidParameter(
                "illumination bounds support exact and mc modes".into(),
            ))
        }
    };
    let cover = greedy_direction_cover(points, alpha, opts.extra_candidates, seed)?;
    let mut lower = n.div_ceil(m);
    if estimate {
        lower = lower.min(cover.len());
    } else if lower > cover.len() {
        return Err(Error::Precondition(format!(
            "certified bound {lower} exceeds greedy cover {}",
            cover.len()
        )));
    }
    let params = CertificateParams {
        dim: points[0].dim(),
        alpha: Some(alpha.value()),
        seed: Some(seed),
        ..Default::default()
    };
    let certificate = CoverCertificate::new(
        n,
        lower,
        cover.len(),
        LowerBoundMethod::Multiplicity,
        UpperBoundMethod::Greedy,
        params,
        estimate,
    )?;
    Ok(IlluminationCertificate {
        certificate,
        multiplicity: report,
        multiplicity_bound: m,
        cover,
    })
}
