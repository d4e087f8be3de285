//! Covering finite point sets of `E^n` by closed balls of a fixed diameter.

use serde::{Deserialize, Serialize};

use crate::certify::setcover::{exact_set_cover, greedy_cover_lists};
use crate::certify::subsets::{members, SubsetSearch, DEFAULT_ENUMERATION_LIMIT, MAX_UNIVERSE};
use crate::certify::{
    CertificateParams, CoverCertificate, LowerBoundMethod, Mode, UpperBoundMethod,
};
use crate::error::{Error, Result};
use crate::par;
use crate::sphere::{distance, min_enclosing_ball};

/// Largest input accepted by exact mode unless overridden.
pub const DEFAULT_BALL_EXACT_LIMIT: usize = 24;

/// Closed-ball boundary slack.
pub const BALL_CONTAIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverBall {
    pub center: Vec<f64>,
    pub radius: f64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallCover {
    pub certificate: CoverCertificate,
    pub balls: Vec<CoverBall>,
    /// Indices of points pairwise farther apart than `d`.
    pub packing_set: Vec<usize>,
    /// Largest number of points one ball can hold, when computed.
    pub max_per_ball: Option<usize>,
    /// `ceil(|P| / max_per_ball)`.
    pub multiplicity_bound: Option<usize>,
}

impl BallCover {
    pub fn packing_bound(&self) -> usize {
        self.packing_set.len()
    }
}

fn coverable<P: AsRef<[f64]>>(points: &[P], subset: &[usize], d: f64) -> bool {
    if subset.len() <= 1 {
        return true;
    }
    let pts: Vec<&[f64]> = subset.iter().map(|&i| points[i].as_ref()).collect();
    min_enclosing_ball(&pts).is_ok_and(|b| b.radius <= d / 2.0 + BALL_CONTAIN_TOL)
}

/// Greedy (index order) subset of points pairwise farther apart than `d`.
/// No ball of diameter `d` holds two of them.
pub fn packing_bound<P: AsRef<[f64]>>(points: &[P], d: f64) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if chosen
            .iter()
            .all(|&j| distance(p.as_ref(), points[j].as_ref()) > d + BALL_CONTAIN_TOL)
        {
            chosen.push(i);
        }
    }
    chosen
}

fn ball_for<P: AsRef<[f64]>>(points: &[P], subset: Vec<usize>) -> Result<CoverBall> {
    let pts: Vec<&[f64]> = subset.iter().map(|&i| points[i].as_ref()).collect();
    let b = min_enclosing_ball(&pts)?;
    Ok(CoverBall {
        center: b.center,
        radius: b.radius,
        members: subset,
    })
}

fn distance_order<P: AsRef<[f64]>>(points: &[P], seed: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).filter(|&k| k != seed).collect();
    let key = |k: &usize| distance(points[seed].as_ref(), points[*k].as_ref());
    order.sort_by(|a, b| key(a).total_cmp(&key(b)).then(a.cmp(b)));
    order
}

/// A coverable subset grown from each point, nearest points first.
fn grown_subsets<P: AsRef<[f64]> + Sync>(points: &[P], d: f64) -> Vec<Vec<usize>> {
    par::map_range(0..points.len(), |seed| {
        let mut current = vec![seed];
        for k in distance_order(points, seed) {
            current.push(k);
            if !coverable(points, &current, d) {
                current.pop();
            }
        }
        current.sort_unstable();
        current
    })
}

/// Minimum number of closed balls of diameter `d` covering `points`.
///
/// `Mode::Exact` enumerates every maximal coverable subset and solves the set
/// cover exactly (at most `exact_limit` points). `Mode::Greedy` runs greedy set
/// cover over one maximal subset grown from each point. Both attach the
/// packing bound and, up to 64 points, the bound `ceil(|P| / max_per_ball)`.
pub fn ball_cover_number<P: AsRef<[f64]> + Sync>(
    points: &[P],
    d: f64,
    mode: Mode,
    exact_limit: usize,
) -> Result<BallCover> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidParameter(format!("ball diameter {d} must be positive")));
    }
    let dim = points[0].as_ref().len();
    if let Some(p) = points.iter().find(|p| p.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: p.as_ref().len(),
        });
    }
    let n = points.len();
    let params = CertificateParams {
        dim,
        d: Some(d),
        ..Default::default()
    };
    let packing_set = packing_bound(points, d);
    let oracle = |s: &[usize]| coverable(points, s, d);

    match mode {
        Mode::Exact => {
            if n > exact_limit.min(MAX_UNIVERSE) {
                return Err(Error::LimitExceeded(format!(
                    "exact ball cover of {n} points (limit {})",
                    exact_limit.min(MAX_UNIVERSE)
                )));
            }
            let search = SubsetSearch::new(n, oracle)?;
            let family = search.maximal_feasible(DEFAULT_ENUMERATION_LIMIT)?;
            let cover = exact_set_cover(n, &family).expect("singletons are coverable");
            let max_per_ball = family.iter().map(|m| m.count_ones() as usize).max().unwrap_or(1);
            let balls = cover
                .iter()
                .map(|&k| ball_for(points, members(family[k])))
                .collect::<Result<Vec<_>>>()?;
            let certificate = CoverCertificate::new(
                n,
                balls.len(),
                balls.len(),
                LowerBoundMethod::Exact,
                UpperBoundMethod::Exact,
                params,
                false,
            )?;
            Ok(BallCover {
                certificate,
                balls,
                packing_set,
                max_per_ball: Some(max_per_ball),
                multiplicity_bound: Some(n.div_ceil(max_per_ball)),
            })
        }
        Mode::Greedy => {
            let grown = grown_subsets(points, d);
            let chosen = greedy_cover_lists(n, &grown).expect("singletons are coverable");
            let balls = chosen
                .iter()
                .map(|&k| ball_for(points, grown[k].clone()))
                .collect::<Result<Vec<_>>>()?;
            let max_per_ball = if n <= MAX_UNIVERSE {
                let incumbent = grown.iter().map(Vec::len).max().unwrap_or(1);
                Some(SubsetSearch::new(n, oracle)?.max_feasible(incumbent).len())
            } else {
                None
            };
            let multiplicity_bound = max_per_ball.map(|m| n.div_ceil(m));
            let mult = multiplicity_bound.unwrap_or(0);
            let (lower, method) = if mult > packing_set.len() {
                (mult, LowerBoundMethod::Multiplicity)
            } else {
                (packing_set.len(), LowerBoundMethod::Packing)
            };
            let certificate = CoverCertificate::new(
                n,
                lower,
                balls.len(),
                method,
                UpperBoundMethod::Greedy,
                params,
                false,
            )?;
            Ok(BallCover {
                certificate,
                balls,
                packing_set,
                max_per_ball,
                multiplicity_bound,
            })
        }
        Mode::Mc => Err(Error::InvalidParameter(
            "ball covers support exact and greedy modes".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]]
    }

    fn tetrahedron() -> Vec<Vec<f64>> {
        let s = 1.0 / 2f64.sqrt();
        // vertices of the cross polytope's alternate corners, scaled to edge 1
        vec![
            vec![s, 0.0, 0.0, 0.0],
            vec![0.0, s, 0.0, 0.0],
            vec![0.0, 0.0, s, 0.0],
            vec![0.0, 0.0, 0.0, s],
        ]
    }

    #[test]
    fn two_points_one_ball() {
        let c = ball_cover_number(&[vec![0.0, 0.0], vec![1.0, 0.0]], 1.0, Mode::Exact, 24).unwrap();
        assert_eq!(c.certificate.lower_bound, 1);
        assert_eq!(c.certificate.upper_bound, 1);
        assert!((c.balls[0].center[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unit_triangle_needs_two() {
        let c = ball_cover_number(&triangle(), 1.0, Mode::Exact, 24).unwrap();
        assert_eq!(c.certificate.lower_bound, 2);
        assert_eq!(c.certificate.lb_method, LowerBoundMethod::Exact);
        assert_eq!(c.max_per_ball, Some(2));
        let g = ball_cover_number(&triangle(), 1.0, Mode::Greedy, 24).unwrap();
        assert_eq!(g.certificate.upper_bound, 2);
        assert_eq!(g.certificate.lower_bound, 2);
    }

    #[test]
    fn unit_tetrahedron_needs_two() {
        let c = ball_cover_number(&tetrahedron(), 1.0, Mode::Exact, 24).unwrap();
        assert_eq!(c.certificate.lower_bound, 2);
    }

    #[test]
    fn chosen_balls_cover_everything() {
        let pts: Vec<Vec<f64>> = (0..9)
            .map(|k| {
                let t = k as f64 * 0.7;
                vec![t.cos() * 0.9, (1.3 * t).sin() * 0.8]
            })
            .collect();
        for mode in [Mode::Exact, Mode::Greedy] {
            let c = ball_cover_number(&pts, 0.6, mode, 24).unwrap();
            for (i, p) in pts.iter().enumerate() {
                assert!(c.balls.iter().any(|b| b.members.contains(&i)
                    && distance(&b.center, p) <= 0.3 + BALL_CONTAIN_TOL));
            }
            assert!(c.packing_bound() <= c.certificate.upper_bound);
        }
    }

    #[test]
    fn packing_counts_far_points() {
        let pts = [vec![0.0], vec![0.5], vec![1.2], vec![2.5]];
        assert_eq!(packing_bound(&pts, 1.0), vec![0, 2, 3]);
    }

    #[test]
    fn argument_errors() {
        let empty: Vec<Vec<f64>> = vec![];
        assert_eq!(ball_cover_number(&empty, 1.0, Mode::Exact, 24), Err(Error::Empty));
        assert!(ball_cover_number(&triangle(), 0.0, Mode::Exact, 24).is_err());
        let many: Vec<Vec<f64>> = (0..30).map(|k| vec![k as f64, 0.0]).collect();
        assert!(matches!(
            ball_cover_number(&many, 1.0, Mode::Exact, 24),
            Err(Error::LimitExceeded(_))
        ));
        assert!(ball_cover_number(&many, 1.0, Mode::Greedy, 24).is_ok());
    }
}
