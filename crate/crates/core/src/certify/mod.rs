//! Lower-bound certificates: cap multiplicity, illumination direction covers
//! and ball covers.

mod balls;
mod directions;
mod multiplicity;
mod pipeline;
mod setcover;
mod subsets;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use balls::{
    ball_cover_number, packing_bound, BallCover, CoverBall, DEFAULT_BALL_EXACT_LIMIT,
    BALL_CONTAIN_TOL,
};
pub use directions::{
    exact_direction_cover, greedy_direction_cover, illumination_lower_bound, reflected_family,
    DirectionCover, IlluminationCertificate,
};
pub use multiplicity::{
    depth, multiplicity, multiplicity_exact, multiplicity_mc, ExactMultiplicity,
    MultiplicityReport, DEFAULT_EXACT_LIMIT,
};
pub use pipeline::{
    ball_cover_pipeline, illumination_pipeline, BallCoverRun, IlluminationRun, PipelineOptions,
    DEFAULT_EPSILON, REFERENCE_CONSTANT,
};
pub use setcover::{exact_set_cover, greedy_set_cover};
pub use subsets::{DEFAULT_ENUMERATION_LIMIT, MAX_UNIVERSE};

/// How a certificate's lower bound is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Exact multiplicity / exact set cover: the bound is certified.
    Exact,
    /// Sampled multiplicity: the bound is an estimate.
    Mc,
    /// Greedy upper bound with cheap certified lower bounds.
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerBoundMethod {
    Multiplicity,
    Packing,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperBoundMethod {
    Greedy,
    Exact,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificateParams {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A lower/upper bound pair on a covering number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub universe_size: usize,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub lb_method: LowerBoundMethod,
    pub ub_method: UpperBoundMethod,
    pub parameters: CertificateParams,
    /// `true` when the lower bound rests on sampling and is not certified.
    pub estimate: bool,
}

impl CoverCertificate {
    pub fn new(
        universe_size: usize,
        lower_bound: usize,
        upper_bound: usize,
        lb_method: LowerBoundMethod,
        ub_method: UpperBoundMethod,
        parameters: CertificateParams,
        estimate: bool,
    ) -> Result<Self> {
        if lower_bound > upper_bound {
            return Err(Error::Precondition(format!(
                "lower bound {lower_bound} exceeds upper bound {upper_bound}"
            )));
        }
        if lb_method == LowerBoundMethod::Exact && lower_bound != upper_bound {
            return Err(Error::Precondition(
                "exact lower bound must equal the upper bound".into(),
            ));
        }
        Ok(CoverCertificate {
            universe_size,
            lower_bound,
            upper_bound,
            lb_method,
            ub_method,
            parameters,
            estimate,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_invariants() {
        let p = CertificateParams::default();
        use LowerBoundMethod as L;
        use UpperBoundMethod as U;
        assert!(CoverCertificate::new(5, 3, 2, L::Packing, U::Greedy, p.clone(), false).is_err());
        assert!(CoverCertificate::new(5, 2, 3, L::Exact, U::Exact, p.clone(), false).is_err());
        assert!(CoverCertificate::new(5, 3, 3, L::Exact, U::Exact, p, false).is_ok());
    }
}
