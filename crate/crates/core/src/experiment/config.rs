//! Experiment configuration: tasks, parameters and their validation.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::certify::Mode;
use crate::error::{Error, Result};
use crate::sphere::Angle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Construct,
    Witness,
    IllumCertify,
    BallCover,
    CapTable,
    Theorem1,
    Theorem2Balls,
}

impl Task {
    pub const ALL: [Task; 7] = [
        Task::Construct,
        Task::Witness,
        Task::IllumCertify,
        Task::BallCover,
        Task::CapTable,
        Task::Theorem1,
        Task::Theorem2Balls,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Construct => "construct",
            Task::Witness => "witness",
            Task::IllumCertify => "illum-certify",
            Task::BallCover => "ball-cover",
            Task::CapTable => "cap-table",
            Task::Theorem1 => "theorem1",
            Task::Theorem2Balls => "theorem2-balls",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Task> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown mode {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<OutputFormat> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::InvalidParameter(format!(
                "unknown format {s:?} (expected json or csv)"
            ))),
        }
    }
}

/// Parses `mode` values `exact`, `mc` and `greedy`.
pub fn parse_mode(s: &str) -> Result<Mode> {
    match s.to_ascii_lowercase().as_str() {
        "exact" => Ok(Mode::Exact),
        "mc" => Ok(Mode::Mc),
        "greedy" => Ok(Mode::Greedy),
        _ => Err(Error::InvalidParameter(format!(
            "unknown certification mode {s:?} (expected exact, mc or greedy)"
        ))),
    }
}

/// Parses an angle in radians: a decimal (`0.2244`), a multiple or fraction
/// of pi (`pi/14`, `6pi/14`, `6*pi/14`, `0.5pi`, `pi`), or a sum of such terms
/// (`6pi/14+0.05`), with `π` accepted for `pi`. The result must lie in
/// `[0, pi]`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = || Error::InvalidParameter(format!("cannot parse angle {text:?}"));
    let s: String = text
        .trim()
        .replace('π', "pi")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        // a '+' after an exponent marker belongs to the number
        if c == '+' && i > 0 && !s[..i].ends_with(['e', 'E']) {
            terms.push(&s[start..i]);
            start = i + 1;
        }
    }
    terms.push(&s[start..]);
    let mut value = 0.0;
    for term in terms {
        value += parse_term(term).ok_or_else(bad)?;
    }
    if !value.is_finite() {
        return Err(bad());
    }
    Angle::new(value)?;
    Ok(value)
}

fn parse_term(s: &str) -> Option<f64> {
    match s.find("pi") {
        None => s.parse::<f64>().ok(),
        Some(at) => {
            let coeff = s[..at].trim_end_matches('*');
            let coeff = if coeff.is_empty() { 1.0 } else { coeff.parse::<f64>().ok()? };
            let rest = &s[at + 2..];
            let denom = match rest.strip_prefix('/') {
                Some(d) => d.parse::<f64>().ok()?,
                None if rest.is_empty() => 1.0,
                None => return None,
            };
            (denom != 0.0).then(|| coeff * PI / denom)
        }
    }
}

fn angle_opt<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Option::<Raw>::deserialize(d)? {
        None => Ok(None),
        Some(Raw::Number(v)) => Angle::new(v)
            .map(|a| Some(a.value()))
            .map_err(serde::de::Error::custom),
        Some(Raw::Text(t)) => parse_angle(&t).map(Some).map_err(serde::de::Error::custom),
    }
}

/// Seeds `start..end` (end exclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub end: u64,
}

impl SeedRange {
    pub fn seeds(self) -> impl Iterator<Item = u64> {
        self.start..self.end
    }
}

impl FromStr for SeedRange {
    type Err = Error;

    /// `A..B` (exclusive) or `A..=B` (inclusive).
    fn from_str(s: &str) -> Result<SeedRange> {
        let bad = || Error::InvalidParameter(format!("cannot parse seed range {s:?} (expected A..B)"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let start: u64 = a.trim().parse().map_err(|_| bad())?;
        let end = match b.strip_prefix('=') {
            Some(b) => b.trim().parse::<u64>().map_err(|_| bad())?.checked_add(1).ok_or_else(bad)?,
            None => b.trim().parse().map_err(|_| bad())?,
        };
        if end <= start {
            return Err(Error::InvalidParameter(format!("seed range {s:?} is empty")));
        }
        Ok(SeedRange { start, end })
    }
}

/// Everything one invocation needs. Angles are radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Task,
    #[serde(default)]
    pub dim: Option<usize>,
    /// Dimensions tabulated by `cap-table`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, deserialize_with = "angle_opt")]
    pub alpha: Option<f64>,
    #[serde(default, deserialize_with = "angle_opt")]
    pub psi: Option<f64>,
    #[serde(default, deserialize_with = "angle_opt")]
    pub phi: Option<f64>,
    #[serde(default, deserialize_with = "angle_opt")]
    pub epsilon: Option<f64>,
    /// Angles tabulated by `cap-table`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thetas: Option<Vec<f64>>,
    /// Ball diameter for `ball-cover`.
    #[serde(default)]
    pub diameter: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub seeds: Option<SeedRange>,
    #[serde(default)]
    pub certify: Option<Mode>,
    #[serde(default)]
    pub samples_per_ring: Option<usize>,
    #[serde(default)]
    pub mc_samples: Option<usize>,
    #[serde(default)]
    pub exact_limit: Option<usize>,
    #[serde(default)]
    pub n_override: Option<usize>,
    #[serde(default)]
    pub extra_candidates: Option<usize>,
    #[serde(default)]
    pub points: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inline_points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Write the point sets used next to the report.
    #[serde(default)]
    pub artifacts: bool,
    /// Include wall-clock timings (which make reports differ between runs).
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(mode: Task) -> Self {
        ExperimentConfig {
            mode,
            dim: None,
            dims: None,
            alpha: None,
            psi: None,
            phi: None,
            epsilon: None,
            thetas: None,
            diameter: None,
            seed: 0,
            seeds: None,
            certify: None,
            samples_per_ring: None,
            mc_samples: None,
            exact_limit: None,
            n_override: None,
            extra_candidates: None,
            points: None,
            inline_points: None,
            output_path: None,
            format: OutputFormat::Json,
            artifacts: false,
            timing: false,
        }
    }

    /// Reads a TOML file, or JSON when the extension is `.json`.
    pub fn from_file(path: &Path) -> Result<Self> {
        ExperimentConfig::from_file_for(path, None)
    }

    /// Like [`from_file`](Self::from_file); a file without `mode` takes
    /// `task`, and a file naming a different mode is rejected.
    pub fn from_file_for(path: &Path, task: Option<Task>) -> Result<Self> {
        let where_ = |e: &dyn fmt::Display| Error::InvalidParameter(format!("{}: {e}", path.display()));
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let is_json = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let mut value: serde_json::Value = if is_json {
            serde_json::from_str(&text).map_err(|e| where_(&e))?
        } else {
            let table: toml::Table = toml::from_str(&text).map_err(|e| where_(&e))?;
            serde_json::to_value(table).map_err(|e| where_(&e))?
        };
        let obj = value
            .as_object_mut()
            .ok_or_else(|| where_(&"expected a table of settings"))?;
        if let Some(task) = task {
            match obj.get("mode").and_then(|m| m.as_str()) {
                None => {
                    obj.insert("mode".into(), task.name().into());
                }
                Some(m) if m == task.name() => {}
                Some(m) => {
                    return Err(where_(&format!("file is for mode {m:?}, not {:?}", task.name())));
                }
            }
        }
        serde_json::from_value(value).map_err(|e| where_(&e))
    }

    /// The seeds to run, in order.
    pub fn seed_list(&self) -> Vec<u64> {
        match self.seeds {
            Some(r) => r.seeds().collect(),
            None => vec![self.seed],
        }
    }

    pub fn certify_mode(&self) -> Mode {
        self.certify.unwrap_or(Mode::Exact)
    }

    fn require_dim(&self) -> Result<usize> {
        let dim = self.dim.ok_or_else(|| {
            Error::InvalidParameter(format!("{} requires --dim (the ambient dimension n)", self.mode))
        })?;
        if dim < 2 {
            return Err(Error::BadDimension(dim));
        }
        Ok(dim)
    }

    fn require_angle(&self, value: Option<f64>, flag: &str) -> Result<f64> {
        value.ok_or_else(|| Error::InvalidParameter(format!("{} requires --{flag}", self.mode)))
    }

    fn forbid(&self, present: bool, flag: &str, why: &str) -> Result<()> {
        if present {
            return Err(Error::InvalidParameter(format!(
                "{} does not take --{flag}: {why}",
                self.mode
            )));
        }
        Ok(())
    }

    fn check_separation_angles(&self) -> Result<()> {
        let psi = self.require_angle(self.psi, "psi")?;
        let phi = self.require_angle(self.phi, "phi")?;
        if !(0.0 < psi && psi < phi && phi < PI / 2.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < psi < phi < pi/2; got psi = {psi}, phi = {phi}"
            )));
        }
        Ok(())
    }

    fn has_point_input(&self) -> bool {
        self.points.is_some() || self.inline_points.is_some()
    }

    /// Checks that the parameters present match what the mode needs.
    pub fn validate(&self) -> Result<()> {
        if self.points.is_some() && self.inline_points.is_some() {
            return Err(Error::InvalidParameter(
                "give either --points or --inline-points, not both".into(),
            ));
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a <= PI / 6.0) {
                return Err(Error::InvalidParameter(format!("alpha must lie in (0, pi/6]; got {a}")));
            }
        }
        match self.mode {
            Task::Construct => {
                self.require_dim()?;
                self.check_separation_angles()?;
            }
            Task::Witness | Task::IllumCertify => {
                self.require_angle(self.alpha, "alpha")?;
                if self.has_point_input() {
                    self.forbid(self.psi.is_some() || self.phi.is_some(), "psi/--phi", "points are given")?;
                } else {
                    self.require_dim()?;
                    self.check_separation_angles()?;
                }
                if self.mode == Task::IllumCertify && self.certify == Some(Mode::Greedy) {
                    return Err(Error::InvalidParameter(
                        "illum-certify supports --certify exact or mc".into(),
                    ));
                }
            }
            Task::BallCover => {
                if !self.has_point_input() {
                    return Err(Error::InvalidParameter(
                        "ball-cover requires --points <file> or --inline-points".into(),
                    ));
                }
                if let Some(d) = self.diameter {
                    if !(d > 0.0 && d.is_finite()) {
                        return Err(Error::InvalidParameter(format!("--diameter must be positive; got {d}")));
                    }
                }
                if self.certify == Some(Mode::Mc) {
                    return Err(Error::InvalidParameter(
                        "ball-cover supports --certify exact or greedy".into(),
                    ));
                }
            }
            Task::CapTable => {
                if self.dims.is_none() {
                    self.require_dim()?;
                }
                if let Some(d) = self.dims.iter().flatten().find(|&&d| d < 2) {
                    return Err(Error::BadDimension(*d));
                }
                for &t in self.thetas.iter().flatten() {
                    Angle::new(t)?;
                }
            }
            Task::Theorem1 | Task::Theorem2Balls => {
                self.require_dim()?;
                let why = "the pipeline fixes it";
                self.forbid(self.psi.is_some(), "psi", why)?;
                self.forbid(self.phi.is_some(), "phi", why)?;
                self.forbid(self.alpha.is_some(), "alpha", why)?;
                self.forbid(self.has_point_input(), "points", "the pipeline constructs its own")?;
                let eps = self.epsilon.unwrap_or(crate::certify::DEFAULT_EPSILON);
                let max = if self.mode == Task::Theorem1 { PI / 14.0 } else { PI / 6.0 };
                if !(eps > 0.0 && eps < max) {
                    return Err(Error::InvalidParameter(format!(
                        "{} needs epsilon in (0, {max:.6}); got {eps}",
                        self.mode
                    )));
                }
                if self.mode == Task::Theorem1 && self.certify == Some(Mode::Greedy) {
                    return Err(Error::InvalidParameter(
                        "theorem1 supports --certify exact or mc".into(),
                    ));
                }
                if self.mode == Task::Theorem2Balls && self.certify == Some(Mode::Mc) {
                    return Err(Error::InvalidParameter(
                        "theorem2-balls supports --certify exact or greedy".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}
