//! Dispatch of a configuration to the pipelines, plus report emission.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use crate::certify::{
    ball_cover_number, ball_cover_pipeline, illumination_lower_bound, illumination_pipeline,
    BallCover, IlluminationCertificate, PipelineOptions, DEFAULT_BALL_EXACT_LIMIT, DEFAULT_EPSILON,
};
use crate::construct::{construct_separated, verify_separation, Configuration, ConstructionParams};
use crate::error::{Error, Result};
use crate::experiment::config::{ExperimentConfig, Task};
use crate::experiment::report::{
    Aggregate, BallResult, CapRow, ConstructResult, IlluminationResult, Report, RunResult, Timing,
    WitnessResult,
};
use crate::pointset::{PointFormat, PointSet};
use crate::sphere::{cap_measure, Angle, UnitVector};
use crate::witness::{build_witness, default_samples_per_ring, diameter, witness_diameter};

/// Process exit code for an error: 2 for invalid input, 3 for desk-scale
/// limits, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::LimitExceeded(_) => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

#[derive(Default)]
struct Clock {
    phases: Vec<(String, f64)>,
}

impl Clock {
    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match self.phases.iter_mut().find(|(p, _)| p == phase) {
            Some((_, t)) => *t += secs,
            None => self.phases.push((phase.to_string(), secs)),
        }
        out
    }
}

fn options(config: &ExperimentConfig) -> PipelineOptions {
    let d = PipelineOptions::default();
    PipelineOptions {
        samples_per_ring: config.samples_per_ring,
        mc_samples: config.mc_samples.unwrap_or(d.mc_samples),
        exact_limit: config.exact_limit,
        n_override: config.n_override,
        extra_candidates: config.extra_candidates.unwrap_or(d.extra_candidates),
        count_limit: d.count_limit,
    }
}

fn artifact_path(config: &ExperimentConfig, tag: &str, seed: u64) -> Result<Option<PathBuf>> {
    if !config.artifacts {
        return Ok(None);
    }
    let out = config.output_path.as_ref().ok_or_else(|| {
        Error::InvalidParameter("artifacts are written next to the report; pass --out".into())
    })?;
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    Ok(Some(out.with_file_name(format!("{stem}.{tag}.seed{seed}.capf"))))
}

fn save_artifact(path: Option<PathBuf>, set: PointSet) -> Result<Option<String>> {
    match path {
        None => Ok(None),
        Some(p) => {
            set.save(&p, PointFormat::Binary)?;
            Ok(p.file_name().and_then(|n| n.to_str()).map(str::to_string))
        }
    }
}

fn load_points(config: &ExperimentConfig) -> Result<Option<PointSet>> {
    let set = match (&config.points, &config.inline_points) {
        (Some(path), _) => PointSet::load(path)?,
        (None, Some(pts)) => {
            let dim = pts.first().map_or(0, Vec::len);
            PointSet::new(dim, pts.clone())?
        }
        (None, None) => return Ok(None),
    };
    if set.is_empty() {
        return Err(Error::Empty);
    }
    Ok(Some(set))
}

fn construct(config: &ExperimentConfig, seed: u64) -> Result<Configuration> {
    let dim = config.dim.ok_or_else(|| Error::InvalidParameter("missing --dim".into()))?;
    let psi = Angle::new(config.psi.unwrap_or_default())?;
    let phi = Angle::new(config.phi.unwrap_or_default())?;
    let params = ConstructionParams::new(dim, psi, phi, seed)?.with_override(config.n_override);
    construct_separated(&params)
}

/// Apex set for seed `seed`: the loaded points, or a fresh construction.
fn apexes(config: &ExperimentConfig, loaded: &Option<PointSet>, seed: u64) -> Result<(Vec<UnitVector>, Option<usize>)> {
    match loaded {
        Some(set) => Ok((set.to_unit_vectors()?, None)),
        None => {
            let c = construct(config, seed)?;
            Ok((c.points, Some(c.candidate_count)))
        }
    }
}

fn pair_angle_range(points: &[UnitVector]) -> (Option<f64>, Option<f64>) {
    let mut lo: Option<f64> = None;
    let mut hi: Option<f64> = None;
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            let t = Angle::from_cos(x.dot(y)).value();
            lo = Some(lo.map_or(t, |v| v.min(t)));
            hi = Some(hi.map_or(t, |v| v.max(t)));
        }
    }
    (lo, hi)
}

fn illumination_result(
    seed: u64,
    dim: usize,
    apexes: usize,
    candidates: Option<usize>,
    b: &IlluminationCertificate,
) -> IlluminationResult {
    let c = &b.certificate;
    IlluminationResult {
        seed,
        dim,
        apexes,
        candidates,
        multiplicity: b.multiplicity_bound,
        mc_max: b.multiplicity.mc_max,
        exact_max: b.multiplicity.exact_max,
        lower_bound: c.lower_bound,
        upper_bound: c.upper_bound,
        lb_method: c.lb_method,
        ub_method: c.ub_method,
        estimate: c.estimate,
        multiplicity_at_phi: None,
        reflection_symmetric: None,
        witness_diameter: None,
        reference_rate: None,
        reference_multiplicity: None,
        directions: b.cover.directions.iter().map(|d| d.coords().to_vec()).collect(),
        artifact: None,
    }
}

fn ball_result(seed: Option<u64>, dim: usize, points: &[Vec<f64>], d: f64, cover: &BallCover) -> BallResult {
    let c = &cover.certificate;
    BallResult {
        seed,
        dim,
        points: points.len(),
        candidates: None,
        point_diameter: diameter(points),
        ball_diameter: d,
        lower_bound: c.lower_bound,
        upper_bound: c.upper_bound,
        lb_method: c.lb_method,
        ub_method: c.ub_method,
        packing_bound: cover.packing_bound(),
        multiplicity_bound: cover.multiplicity_bound,
        max_per_ball: cover.max_per_ball,
        sphere_diameter: None,
        cap_membership_checked: None,
        cap_membership_holds: None,
        balls: cover.balls.clone(),
        artifact: None,
    }
}

fn default_thetas() -> Vec<f64> {
    (0..=16).map(|k| k as f64 * PI / 16.0).collect()
}

/// Runs the configured task for every seed and assembles the report.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let started = Instant::now();
    let mut clock = Clock::default();
    let opts = options(config);
    let mode = config.certify_mode();
    let loaded = load_points(config)?;
    let mut results = Vec::new();

    match config.mode {
        Task::Construct => {
            for seed in config.seed_list() {
                let c = clock.time("construct", || construct(config, seed))?;
                let (min_angle, max_angle) = pair_angle_range(&c.points);
                let meta = json!({"seed": seed, "psi": c.params.psi, "phi": c.params.phi, "candidates": c.candidate_count});
                let set = PointSet::from_unit(c.dim(), &c.points)?.with_metadata(meta);
                let artifact = save_artifact(artifact_path(config, "construct", seed)?, set)?;
                results.push(RunResult::Construct(ConstructResult {
                    seed,
                    dim: c.dim(),
                    candidates: c.candidate_count,
                    kept: c.len(),
                    deleted: c.deleted_count,
                    bad_pairs: c.bad_pair_count,
                    markov_success: c.markov_success(),
                    separation_ok: verify_separation(&c.points, c.params.psi).ok,
                    min_angle,
                    max_angle,
                    diameter: diameter(&c.points),
                    artifact,
                }));
            }
        }
        Task::Witness => {
            let alpha = Angle::new(config.alpha.unwrap_or_default())?;
            for seed in config.seed_list() {
                let (points, _) = clock.time("construct", || apexes(config, &loaded, seed))?;
                let dim = points[0].dim();
                let spr = config.samples_per_ring.unwrap_or_else(|| default_samples_per_ring(dim));
                let w = clock.time("witness", || build_witness(&points, alpha, spr, seed, true))?;
                let wd = witness_diameter(&w);
                let expected = 2.0 * alpha.cos();
                let coords: Vec<Vec<f64>> = w.all_points().iter().map(|p| p.coords().to_vec()).collect();
                let set = PointSet::new(dim, coords)?.with_metadata(json!({"seed": seed, "alpha": alpha, "apexes": points.len()}));
                let artifact = save_artifact(artifact_path(config, "witness", seed)?, set)?;
                results.push(RunResult::Witness(WitnessResult {
                    seed,
                    dim,
                    apexes: points.len(),
                    samples_per_ring: spr,
                    condition_holds: w.condition_holds,
                    witness_diameter: wd,
                    expected_diameter: expected,
                    diameter_ok: wd <= expected + 1e-9 && (!w.condition_holds || wd >= expected - 1e-9),
                    artifact,
                }));
            }
        }
        Task::IllumCertify => {
            let alpha = Angle::new(config.alpha.unwrap_or_default())?;
            for seed in config.seed_list() {
                let (points, candidates) = clock.time("construct", || apexes(config, &loaded, seed))?;
                let dim = points[0].dim();
                let b = clock.time("certify", || illumination_lower_bound(&points, alpha, mode, &opts, seed))?;
                let spr = config.samples_per_ring.unwrap_or_else(|| default_samples_per_ring(dim));
                let w = clock.time("witness", || build_witness(&points, alpha, spr, seed, false))?;
                let mut r = illumination_result(seed, dim, points.len(), candidates, &b);
                r.witness_diameter = Some(witness_diameter(&w));
                if loaded.is_none() {
                    let set = PointSet::from_unit(dim, &points)?.with_metadata(json!({"seed": seed}));
                    r.artifact = save_artifact(artifact_path(config, "apexes", seed)?, set)?;
                }
                results.push(RunResult::Illumination(r));
            }
        }
        Task::BallCover => {
            let set = loaded.as_ref().expect("validated: points present");
            let d = config.diameter.unwrap_or(1.0);
            let limit = config.exact_limit.unwrap_or(DEFAULT_BALL_EXACT_LIMIT);
            let cover = clock.time("certify", || ball_cover_number(&set.points, d, mode, limit))?;
            results.push(RunResult::BallCover(ball_result(None, set.dim, &set.points, d, &cover)));
        }
        Task::CapTable => {
            let dims = config.dims.clone().unwrap_or_else(|| config.dim.into_iter().collect());
            let thetas = config.thetas.clone().unwrap_or_else(default_thetas);
            clock.time("measure", || {
                for &dim in &dims {
                    for &theta in &thetas {
                        let omega = cap_measure(dim, Angle::new(theta)?)?;
                        results.push(RunResult::CapMeasure(CapRow { dim, theta, omega }));
                    }
                }
                Ok(())
            })?;
        }
        Task::Theorem1 => {
            let dim = config.dim.expect("validated");
            let eps = config.epsilon.unwrap_or(DEFAULT_EPSILON);
            for seed in config.seed_list() {
                let run = clock.time("pipeline", || illumination_pipeline(dim, eps, seed, mode, &opts))?;
                let c = &run.configuration;
                let mut r = illumination_result(seed, dim, c.len(), Some(c.candidate_count), &run.bound);
                r.multiplicity_at_phi = run.multiplicity_at_phi;
                r.reflection_symmetric = run.reflection_symmetric;
                r.witness_diameter = Some(run.witness_diameter);
                r.reference_rate = Some(run.reference_rate);
                r.reference_multiplicity = Some(run.reference_multiplicity);
                let set = PointSet::from_unit(dim, &c.points)?.with_metadata(json!({"seed": seed, "epsilon": eps}));
                r.artifact = save_artifact(artifact_path(config, "theorem1", seed)?, set)?;
                results.push(RunResult::Illumination(r));
            }
        }
        Task::Theorem2Balls => {
            let dim = config.dim.expect("validated");
            let eps = config.epsilon.unwrap_or(DEFAULT_EPSILON);
            for seed in config.seed_list() {
                let run = clock.time("pipeline", || ball_cover_pipeline(dim, eps, seed, mode, &opts))?;
                let mut r = ball_result(Some(seed), dim, &run.scaled_points, 1.0, &run.cover);
                r.candidates = Some(run.configuration.candidate_count);
                r.sphere_diameter = Some(run.sphere_diameter);
                r.cap_membership_checked = Some(run.cap_membership.checked);
                r.cap_membership_holds = Some(run.cap_membership.holds);
                let set = PointSet::new(dim, run.scaled_points.clone())?.with_metadata(json!({"seed": seed, "epsilon": eps, "scale": 1.0 / 3f64.sqrt()}));
                r.artifact = save_artifact(artifact_path(config, "theorem2", seed)?, set)?;
                results.push(RunResult::BallCover(r));
            }
        }
    }

    let timing = config.timing.then(|| Timing {
        phases: clock.phases,
        total: started.elapsed().as_secs_f64(),
    });
    Ok(Report {
        config: config.clone(),
        aggregate: Aggregate::of(&results),
        results,
        timing,
    })
}

/// Writes the rendered report to the configured path, or returns it when no
/// path is set.
pub fn emit(report: &Report) -> Result<Option<String>> {
    let text = report.render(report.config.format)?;
    match &report.config.output_path {
        Some(path) => {
            write_file(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
