//! End-to-end runs: separated configuration, diameter checks, certificate.
//!
//! Illumination: `psi = 6pi/14`, `phi = psi + eps`, `alpha = pi/14`; the
//! apexes satisfy the witness condition, the witness set has diameter
//! `2 cos(pi/14)`, and the direction count is bounded below by `|X| / M`.
//!
//! Ball covers: `psi = pi/3`, `phi = pi/3 + eps`; the configuration has
//! diameter at most `sqrt 3`, is scaled by `1/sqrt 3` and covered by balls of
//! diameter 1.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

use serde::{Deserialize, Serialize};

use crate::certify::balls::{ball_cover_number, BallCover, DEFAULT_BALL_EXACT_LIMIT};
use crate::certify::directions::{illumination_lower_bound, IlluminationCertificate};
use crate::certify::multiplicity::{multiplicity_exact, DEFAULT_EXACT_LIMIT};
use crate::certify::Mode;
use crate::construct::{construct_separated, Configuration, ConstructionParams, DEFAULT_COUNT_LIMIT};
use crate::error::{Error, Result};
use crate::sphere::{norm, Angle, UnitVector, ANGLE_TOL};
use crate::witness::{
    build_witness, check_diameter_condition, default_samples_per_ring, diameter, witness_diameter,
    WitnessSet,
};

pub const DEFAULT_EPSILON: f64 = 0.05;

/// Constant of the `C n ln n` multiplicity bound, reported for reference.
pub const REFERENCE_CONSTANT: f64 = 400.0;

const WITNESS_ALPHA: f64 = PI / 14.0;
const WITNESS_PSI: f64 = 6.0 * PI / 14.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    /// Ring samples per apex; `max(64, 2n)` when absent.
    pub samples_per_ring: Option<usize>,
    pub mc_samples: usize,
    /// Largest instance for exact mode; each pipeline has its own default.
    pub exact_limit: Option<usize>,
    pub n_override: Option<usize>,
    /// Uniform samples added to the direction pool.
    pub extra_candidates: usize,
    pub count_limit: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            samples_per_ring: None,
            mc_samples: 100_000,
            exact_limit: None,
            n_override: None,
            extra_candidates: 256,
            count_limit: DEFAULT_COUNT_LIMIT,
        }
    }
}

fn check_epsilon(epsilon: f64, max: f64, what: &str) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < max) {
        return Err(Error::InvalidParameter(format!(
            "{what} needs epsilon in (0, {max:.6}); got {epsilon}"
        )));
    }
    Ok(())
}

fn configure(
    dim: usize,
    psi: f64,
    epsilon: f64,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<Configuration> {
    let mut params = ConstructionParams::new(dim, Angle::new(psi)?, Angle::new(psi + epsilon)?, seed)?
        .with_override(opts.n_override);
    params.count_limit = opts.count_limit;
    construct_separated(&params)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlluminationRun {
    pub dim: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub mode: Mode,
    pub configuration: Configuration,
    pub witness: WitnessSet,
    pub witness_diameter: f64,
    /// `2 cos(pi/14)`.
    pub expected_diameter: f64,
    pub diameter_matches: bool,
    pub bound: IlluminationCertificate,
    /// Exact multiplicity of `{C(-x_i, phi)}`, `phi = psi + eps` (exact mode).
    pub multiplicity_at_phi: Option<usize>,
    /// Whether `{C(x_i, phi)}` has the same exact multiplicity (exact mode).
    pub reflection_symmetric: Option<bool>,
    /// `cos(pi/14 - eps)^(-n)`.
    pub reference_rate: f64,
    /// `400 n ln n`.
    pub reference_multiplicity: f64,
}

pub fn illumination_pipeline(
    dim: usize,
    epsilon: f64,
    seed: u64,
    mode: Mode,
    opts: &PipelineOptions,
) -> Result<IlluminationRun> {
    check_epsilon(epsilon, WITNESS_ALPHA, "the illumination pipeline")?;
    let alpha = Angle::new(WITNESS_ALPHA)?;
    let configuration = configure(dim, WITNESS_PSI, epsilon, seed, opts)?;
    let points = &configuration.points;
    if mode == Mode::Exact {
        let limit = opts.exact_limit.unwrap_or(DEFAULT_EXACT_LIMIT);
        if points.len() > limit {
            return Err(Error::LimitExceeded(format!(
                "exact multiplicity over {} caps (limit {limit}); pass n_override or use mc mode",
                points.len()
            )));
        }
    }
    let spr = opts.samples_per_ring.unwrap_or_else(|| default_samples_per_ring(dim));
    let witness = build_witness(points, alpha, spr, seed, false)?;
    let wd = witness_diameter(&witness);
    let expected = 2.0 * alpha.cos();
    // a single apex with a one-point ring still attains 2 cos alpha
    let diameter_matches = (wd - expected).abs() <= 1e-9;
    if !diameter_matches {
        return Err(Error::Precondition(format!(
            "witness diameter {wd} differs from 2 cos(pi/14) = {expected}"
        )));
    }
    let bound = illumination_lower_bound(points, alpha, mode, opts, seed)?;

    let (multiplicity_at_phi, reflection_symmetric) = if mode == Mode::Exact {
        let phi = configuration.params.phi;
        let limit = opts.exact_limit.unwrap_or(DEFAULT_EXACT_LIMIT);
        let reflected: Vec<UnitVector> = points.iter().map(UnitVector::negated).collect();
        let m_neg = multiplicity_exact(&reflected, phi, limit, 1, seed)?.max;
        let m_pos = multiplicity_exact(points, phi, limit, 1, seed)?.max;
        (Some(m_neg), Some(m_neg == m_pos))
    } else {
        (None, None)
    };
    let n = dim as f64;
    Ok(IlluminationRun {
        dim,
        epsilon,
        seed,
        mode,
        witness_diameter: wd,
        expected_diameter: expected,
        diameter_matches,
        bound,
        multiplicity_at_phi,
        reflection_symmetric,
        reference_rate: (WITNESS_ALPHA - epsilon).cos().powf(-n),
        reference_multiplicity: REFERENCE_CONSTANT * n * n.ln(),
        configuration,
        witness,
    })
}

/// Whether `c / |c|` lies in `C(x_i, phi)` for the members of each ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapMembership {
    /// (ball, member) pairs tested; balls centered at the origin are skipped.
    pub checked: usize,
    pub holds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallCoverRun {
    pub dim: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub mode: Mode,
    pub configuration: Configuration,
    /// Whether all pairs satisfy `theta <= 2pi/3`.
    pub diameter_condition: bool,
    pub sphere_diameter: f64,
    /// The configuration scaled by `1/sqrt 3`.
    pub scaled_points: Vec<Vec<f64>>,
    pub scaled_diameter: f64,
    pub cover: BallCover,
    pub cap_membership: CapMembership,
}

pub fn ball_cover_pipeline(
    dim: usize,
    epsilon: f64,
    seed: u64,
    mode: Mode,
    opts: &PipelineOptions,
) -> Result<BallCoverRun> {
    check_epsilon(epsilon, FRAC_PI_6, "the ball-cover pipeline")?;
    let configuration = configure(dim, FRAC_PI_3, epsilon, seed, opts)?;
    let points = &configuration.points;
    let diameter_condition = check_diameter_condition(points, Angle::new(FRAC_PI_6)?)?;
    if !diameter_condition {
        return Err(Error::Precondition("configuration has a pair beyond 2pi/3".into()));
    }
    let sphere_diameter = diameter(points);
    let scale = 1.0 / 3f64.sqrt();
    let scaled_points: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.coords().iter().map(|c| c * scale).collect())
        .collect();
    let scaled_diameter = diameter(&scaled_points);
    let limit = opts.exact_limit.unwrap_or(DEFAULT_BALL_EXACT_LIMIT);
    let cover = ball_cover_number(&scaled_points, 1.0, mode, limit)?;

    let cos_phi = (configuration.params.phi.value() + ANGLE_TOL).cos();
    let mut membership = CapMembership { checked: 0, holds: 0 };
    for ball in &cover.balls {
        let len = norm(&ball.center);
        if len <= 1e-12 {
            continue;
        }
        for &i in &ball.members {
            let along: f64 = ball.center.iter().zip(points[i].coords()).map(|(a, b)| a * b).sum();
            membership.checked += 1;
            if along / len >= cos_phi {
                membership.holds += 1;
            }
        }
    }
    Ok(BallCoverRun {
        dim,
        epsilon,
        seed,
        mode,
        configuration,
        diameter_condition,
        sphere_diameter,
        scaled_points,
        scaled_diameter,
        cover,
        cap_membership: membership,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{exact_direction_cover, LowerBoundMethod};

    fn small(n: usize) -> PipelineOptions {
        PipelineOptions {
            n_override: Some(n),
            mc_samples: 20_000,
            extra_candidates: 64,
            ..Default::default()
        }
    }

    #[test]
    fn illumination_run_is_consistent() {
        let run = illumination_pipeline(4, DEFAULT_EPSILON, 7, Mode::Exact, &small(40)).unwrap();
        assert!(run.diameter_matches);
        let c = &run.bound.certificate;
        assert!(!c.estimate);
        assert_eq!(c.lb_method, LowerBoundMethod::Multiplicity);
        assert_eq!(c.lower_bound, run.configuration.len().div_ceil(run.bound.multiplicity_bound));
        assert!(c.lower_bound <= c.upper_bound);
        assert_eq!(run.reflection_symmetric, Some(true));
        // wider caps can only hold more
        assert!(run.multiplicity_at_phi.unwrap() >= run.bound.multiplicity_bound);
        let caps_radius = run.bound.multiplicity.cap_radius.value();
        assert!((caps_radius - WITNESS_PSI).abs() < 1e-15);
        if run.configuration.len() <= 12 {
            let ex = exact_direction_cover(&run.configuration.points, Angle::new(WITNESS_ALPHA).unwrap(), 7)
                .unwrap();
            assert!(c.lower_bound <= ex.len() && ex.len() <= c.upper_bound);
        }
    }

    #[test]
    fn ball_run_is_consistent() {
        let run = ball_cover_pipeline(4, DEFAULT_EPSILON, 3, Mode::Exact, &small(30)).unwrap();
        assert!(run.scaled_diameter <= 1.0 + 1e-9);
        let c = &run.cover.certificate;
        assert_eq!(c.lower_bound, c.upper_bound);
        assert!(run.cover.packing_bound() <= c.lower_bound);
        let greedy = ball_cover_pipeline(4, DEFAULT_EPSILON, 3, Mode::Greedy, &small(30)).unwrap();
        assert!(greedy.cover.certificate.upper_bound >= c.upper_bound);
        assert!(run.cap_membership.holds <= run.cap_membership.checked);
    }

    #[test]
    fn epsilon_ranges() {
        let o = small(10);
        assert!(illumination_pipeline(3, 0.0, 1, Mode::Exact, &o).is_err());
        assert!(illumination_pipeline(3, WITNESS_ALPHA, 1, Mode::Exact, &o).is_err());
        assert!(ball_cover_pipeline(3, 0.0, 1, Mode::Exact, &o).is_err());
        assert!(ball_cover_pipeline(3, FRAC_PI_6, 1, Mode::Exact, &o).is_err());
    }

    #[test]
    fn exact_limits_are_desk_scale_errors() {
        let o = PipelineOptions {
            exact_limit: Some(2),
            ..small(200)
        };
        assert!(matches!(
            ball_cover_pipeline(5, DEFAULT_EPSILON, 1, Mode::Exact, &o),
            Err(Error::LimitExceeded(_))
        ));
    }
}
