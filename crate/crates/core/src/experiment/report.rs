//! Report records and their JSON/CSV rendering.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::certify::{CoverBall, LowerBoundMethod, UpperBoundMethod};
use crate::error::{Error, Result};
use crate::experiment::config::{ExperimentConfig, OutputFormat};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructResult {
    pub seed: u64,
    pub dim: usize,
    /// `N`, the number of candidates drawn.
    pub candidates: usize,
    pub kept: usize,
    pub deleted: usize,
    pub bad_pairs: usize,
    /// Whether `kept >= N/2`.
    pub markov_success: bool,
    pub separation_ok: bool,
    pub min_angle: Option<f64>,
    pub max_angle: Option<f64>,
    pub diameter: f64,
    pub artifact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub seed: u64,
    pub dim: usize,
    pub apexes: usize,
    pub samples_per_ring: usize,
    pub condition_holds: bool,
    pub witness_diameter: f64,
    pub expected_diameter: f64,
    pub diameter_ok: bool,
    pub artifact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlluminationResult {
    pub seed: u64,
    pub dim: usize,
    pub apexes: usize,
    pub candidates: Option<usize>,
    /// Multiplicity `M` used in the bound `ceil(|X| / M)`.
    pub multiplicity: usize,
    pub mc_max: usize,
    pub exact_max: Option<usize>,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub lb_method: LowerBoundMethod,
    pub ub_method: UpperBoundMethod,
    pub estimate: bool,
    pub multiplicity_at_phi: Option<usize>,
    pub reflection_symmetric: Option<bool>,
    pub witness_diameter: Option<f64>,
    pub reference_rate: Option<f64>,
    pub reference_multiplicity: Option<f64>,
    pub directions: Vec<Vec<f64>>,
    pub artifact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallResult {
    pub seed: Option<u64>,
    pub dim: usize,
    pub points: usize,
    pub candidates: Option<usize>,
    pub point_diameter: f64,
    pub ball_diameter: f64,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub lb_method: LowerBoundMethod,
    pub ub_method: UpperBoundMethod,
    pub packing_bound: usize,
    pub multiplicity_bound: Option<usize>,
    pub max_per_ball: Option<usize>,
    pub sphere_diameter: Option<f64>,
    pub cap_membership_checked: Option<usize>,
    pub cap_membership_holds: Option<usize>,
    pub balls: Vec<CoverBall>,
    pub artifact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapRow {
    pub dim: usize,
    pub theta: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RunResult {
    Construct(ConstructResult),
    Witness(WitnessResult),
    Illumination(IlluminationResult),
    BallCover(BallResult),
    CapMeasure(CapRow),
}

impl RunResult {
    fn point_count(&self) -> Option<f64> {
        match self {
            RunResult::Construct(r) => Some(r.kept as f64),
            RunResult::Witness(r) => Some(r.apexes as f64),
            RunResult::Illumination(r) => Some(r.apexes as f64),
            RunResult::BallCover(r) => Some(r.points as f64),
            RunResult::CapMeasure(_) => None,
        }
    }

    fn bounds(&self) -> Option<(f64, f64)> {
        match self {
            RunResult::Illumination(r) => Some((r.lower_bound as f64, r.upper_bound as f64)),
            RunResult::BallCover(r) => Some((r.lower_bound as f64, r.upper_bound as f64)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let k = v.len();
        let median = if k % 2 == 1 {
            v[k / 2]
        } else {
            (v[k / 2 - 1] + v[k / 2]) / 2.0
        };
        Some(Stats {
            min: v[0],
            median,
            max: v[k - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub runs: usize,
    pub points: Option<Stats>,
    pub lower_bound: Option<Stats>,
    pub upper_bound: Option<Stats>,
    /// Fraction of constructions keeping at least half their candidates.
    pub success_fraction: Option<f64>,
}

impl Aggregate {
    pub fn of(results: &[RunResult]) -> Aggregate {
        let points: Vec<f64> = results.iter().filter_map(RunResult::point_count).collect();
        let (lower, upper): (Vec<f64>, Vec<f64>) = results.iter().filter_map(RunResult::bounds).unzip();
        let constructs: Vec<bool> = results
            .iter()
            .filter_map(|r| match r {
                RunResult::Construct(c) => Some(c.markov_success),
                _ => None,
            })
            .collect();
        let success_fraction = (!constructs.is_empty())
            .then(|| constructs.iter().filter(|&&s| s).count() as f64 / constructs.len() as f64);
        Aggregate {
            runs: results.len(),
            points: Stats::of(&points),
            lower_bound: Stats::of(&lower),
            upper_bound: Stats::of(&upper),
            success_fraction,
        }
    }
}

/// Seconds spent per phase, summed over seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub phases: Vec<(String, f64)>,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub results: Vec<RunResult>,
    pub aggregate: Aggregate,
    /// `null` unless timing was requested.
    pub timing: Option<Timing>,
}

fn csv_cell(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(_) | Value::Object(_) => None,
    }
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    /// One row per result with every scalar field; list-valued fields are omitted.
    pub fn to_csv(&self) -> Result<String> {
        let fmt = |e: csv::Error| Error::Format(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        let rows: Vec<serde_json::Map<String, Value>> = self
            .results
            .iter()
            .map(|r| match serde_json::to_value(r) {
                Ok(Value::Object(m)) => Ok(m),
                Ok(_) => Err(Error::Format("result is not a record".into())),
                Err(e) => Err(Error::Format(e.to_string())),
            })
            .collect::<Result<_>>()?;
        if let Some(first) = rows.first() {
            let header: Vec<&String> = first
                .iter()
                .filter(|(_, v)| csv_cell(v).is_some())
                .map(|(k, _)| k)
                .collect();
            w.write_record(header.iter().map(|k| k.as_str())).map_err(fmt)?;
            for row in &rows {
                let cells: Vec<String> = header
                    .iter()
                    .map(|k| row.get(*k).and_then(csv_cell).unwrap_or_default())
                    .collect();
                w.write_record(&cells).map_err(fmt)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats() {
        let s = Stats::of(&[3.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!((s.min, s.median, s.max), (1.0, 2.5, 10.0));
        assert_eq!(Stats::of(&[4.0]).unwrap().median, 4.0);
        assert!(Stats::of(&[]).is_none());
    }

    #[test]
    fn cap_rows_as_csv() {
        let mut config = ExperimentConfig::new(crate::experiment::Task::CapTable);
        config.dim = Some(3);
        let results = vec![
            RunResult::CapMeasure(CapRow { dim: 3, theta: 0.5, omega: 0.1 }),
            RunResult::CapMeasure(CapRow { dim: 3, theta: 1.0, omega: 0.2298488470659301 }),
        ];
        let report = Report {
            config,
            aggregate: Aggregate::of(&results),
            results,
            timing: None,
        };
        let csv = report.to_csv().unwrap();
        assert_eq!(csv, "kind,dim,theta,omega\ncap-measure,3,0.5,0.1\ncap-measure,3,1.0,0.2298488470659301\n");
        let back = Report::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
    }
}
