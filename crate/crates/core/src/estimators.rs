//! Distance- and angle-based bounds on error norms and their effectivity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{summarize, upper_pairs, AngleSummary, GridVector};
use crate::par::Exec;

/// `sqrt(5) / 2`, the value of `(cos p + 2 sin p) / 2` at `p = atan 2`.
pub const ANGLE_CONSTANT_EXACT: f64 = 1.118_033_988_749_895;
pub const ANGLE_CONSTANT_ROUNDED: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleConstant {
    #[default]
    Exact,
    Rounded,
}

impl AngleConstant {
    pub fn value(self) -> f64 {
        match self {
            AngleConstant::Exact => ANGLE_CONSTANT_EXACT,
            AngleConstant::Rounded => ANGLE_CONSTANT_ROUNDED,
        }
    }
}

/// Pairwise `L2` distances (cell-area weighted).
pub fn distance_matrix(vectors: &[GridVector], exec: Exec) -> Result<Vec<Vec<f64>>> {
    let k = vectors.len();
    let pairs = upper_pairs(k);
    let d = exec.map(pairs.len(), |p| {
        let (a, b) = pairs[p];
        vectors[a].sub(&vectors[b]).map(|v| v.norm())
    });
    let mut m = vec![vec![0.0; k]; k];
    for (&(a, b), v) in pairs.iter().zip(d) {
        let v = v?;
        m[a][b] = v;
        m[b][a] = v;
    }
    Ok(m)
}

/// Distance between two solutions used as a bound for both error norms.
pub fn pair_bound(d: f64) -> f64 {
    d
}

/// Midpoint-error estimate for orthogonal errors.
pub fn hypercircle_estimate(d: f64) -> f64 {
    0.5 * d
}

pub fn dk_max(distances: &[Vec<f64>], k: usize) -> f64 {
    distances[k].iter().cloned().fold(0.0, f64::max)
}

pub fn ensemble_width(distances: &[Vec<f64>]) -> f64 {
    (0..distances.len()).map(|k| dk_max(distances, k)).fold(0.0, f64::max)
}

/// `c * d / sin(alpha / 2)` for the angle `alpha` between the two errors.
pub fn angle_bound(d: f64, alpha_deg: f64, constant: AngleConstant) -> Result<f64> {
    if !(alpha_deg > 0.0 && alpha_deg <= 180.0) {
        return Err(Error::DegenerateAngle(alpha_deg));
    }
    Ok(constant.value() * d / (0.5 * alpha_deg).to_radians().sin())
}

/// Conservative estimate of the error angle from the truncation-error angle.
pub fn alpha_from_beta(beta_deg: f64) -> Result<f64> {
    if !(beta_deg > 0.0 && beta_deg <= 180.0) {
        return Err(Error::DegenerateAngle(beta_deg));
    }
    Ok(beta_deg / 3.0)
}

pub fn effectivity(estimate: f64, true_norm: f64) -> Result<f64> {
    if !(true_norm > 0.0) {
        return Err(Error::ZeroTrueError);
    }
    Ok(estimate / true_norm)
}

/// Which bound produced the combined per-solution estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateSource {
    DkMax,
    AngleBeta,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionEstimates {
    pub id: String,
    pub true_norm: f64,
    pub dk_max: f64,
    /// `dk_max / true_norm`.
    pub dk_max_effectivity: Option<f64>,
    pub dk_max_holds: bool,
    pub ensemble_width: f64,
    /// `ensemble_width / true_norm`.
    pub width_effectivity: Option<f64>,
    /// Smallest truncation-angle bound over this solution's pairs.
    pub angle_bound_beta: Option<f64>,
    pub angle_bound_beta_effectivity: Option<f64>,
    pub combined: Option<f64>,
    pub combined_source: Option<EstimateSource>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AngleBounds {
    pub exact: f64,
    pub rounded: f64,
    /// Exact-constant bound over the larger of the two true norms.
    pub effectivity: Option<f64>,
    pub effectivity_k: Option<f64>,
    pub effectivity_m: Option<f64>,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairEstimates {
    pub k: usize,
    pub m: usize,
    pub distance: f64,
    /// Zero distance: solutions coincide and angles are not used.
    pub degenerate: bool,
    pub alpha_deg: Option<f64>,
    pub beta_deg: Option<f64>,
    pub alpha_ge_beta_third: Option<bool>,
    pub pair_bound: f64,
    pub pair_bound_effectivity_k: Option<f64>,
    pub pair_bound_effectivity_m: Option<f64>,
    pub pair_bound_holds: bool,
    /// Bound on the more accurate member only; needs the true norms.
    pub more_precise_bound_holds: Option<bool>,
    pub hypercircle: f64,
    pub midpoint_true_norm: f64,
    pub angle_direct: Option<AngleBounds>,
    pub angle_beta: Option<AngleBounds>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

fn range<I: IntoIterator<Item = f64>>(v: I) -> Option<Range> {
    summarize(v).map(|s| Range { min: s.min, max: s.max })
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimatorSummary {
    pub alpha: Option<AngleSummary>,
    pub beta: Option<AngleSummary>,
    pub alpha_ge_beta_third_fraction: Option<f64>,
    pub dk_max_effectivity: Option<Range>,
    pub width_effectivity: Option<Range>,
    pub pair_bound_effectivity: Option<Range>,
    pub angle_direct_effectivity: Option<Range>,
    pub angle_beta_effectivity: Option<Range>,
    pub dk_max_holds_all: bool,
    pub degenerate_pairs: usize,
}

/// Estimator outputs for an ensemble of solutions with known errors.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleReport {
    pub ids: Vec<String>,
    pub distances: Vec<Vec<f64>>,
    pub true_norms: Vec<f64>,
    pub alpha: Vec<Vec<Option<f64>>>,
    pub beta: Vec<Vec<Option<f64>>>,
    pub solutions: Vec<SolutionEstimates>,
    pub pairs: Vec<PairEstimates>,
    pub summary: EstimatorSummary,
}

fn angle_or_none(a: &GridVector, b: &GridVector) -> Result<Option<f64>> {
    match crate::geometry::angle_between(a, b) {
        Ok(v) => Ok(Some(v)),
        Err(Error::ZeroVector) => Ok(None),
        Err(e) => Err(e),
    }
}

fn bounds(d: f64, angle: f64, rk: f64, rm: f64) -> Option<AngleBounds> {
    let exact = angle_bound(d, angle, AngleConstant::Exact).ok()?;
    let rounded = angle_bound(d, angle, AngleConstant::Rounded).ok()?;
    Some(AngleBounds {
        exact,
        rounded,
        effectivity: effectivity(exact, rk.max(rm)).ok(),
        effectivity_k: effectivity(exact, rk).ok(),
        effectivity_m: effectivity(exact, rm).ok(),
        holds: exact >= rk.max(rm),
    })
}

/// Evaluates every estimator. `solutions`, `errors` and `truncations` are
/// indexed alike; `errors` are approximation errors against the reference.
pub fn evaluate(
    ids: &[String],
    solutions: &[GridVector],
    errors: &[GridVector],
    truncations: &[GridVector],
    exec: Exec,
) -> Result<EnsembleReport> {
    let k = ids.len();
    if k < 2 || solutions.len() != k || errors.len() != k || truncations.len() != k {
        return Err(Error::InvalidParams(format!(
            "need at least two members with matching inputs, got {k} ids, {} solutions, {} errors, {} truncations",
            solutions.len(),
            errors.len(),
            truncations.len()
        )));
    }
    let distances = distance_matrix(solutions, exec)?;
    let true_norms: Vec<f64> = errors.iter().map(|e| e.norm()).collect();
    let width = ensemble_width(&distances);
    let pair_list = upper_pairs(k);
    let computed = exec.map(pair_list.len(), |p| -> Result<PairEstimates> {
        let (a, b) = pair_list[p];
        let d = distances[a][b];
        let (ra, rb) = (true_norms[a], true_norms[b]);
        let degenerate = d == 0.0;
        let (alpha, beta) = if degenerate {
            (None, None)
        } else {
            (angle_or_none(&errors[a], &errors[b])?, angle_or_none(&truncations[a], &truncations[b])?)
        };
        let mid = errors[a].sub(&errors[b].scaled(-1.0))?.scaled(0.5).norm();
        let beta_alpha = beta.and_then(|b| alpha_from_beta(b).ok());
        Ok(PairEstimates {
            k: a,
            m: b,
            distance: d,
            degenerate,
            alpha_deg: alpha,
            beta_deg: beta,
            alpha_ge_beta_third: match (alpha, beta) {
                (Some(x), Some(y)) => Some(x >= y / 3.0),
                _ => None,
            },
            pair_bound: pair_bound(d),
            pair_bound_effectivity_k: effectivity(d, ra).ok(),
            pair_bound_effectivity_m: effectivity(d, rb).ok(),
            pair_bound_holds: d >= ra.max(rb),
            more_precise_bound_holds: Some(d >= ra.min(rb)),
            hypercircle: hypercircle_estimate(d),
            midpoint_true_norm: mid,
            angle_direct: alpha.and_then(|x| bounds(d, x, ra, rb)),
            angle_beta: beta_alpha.and_then(|x| bounds(d, x, ra, rb)),
        })
    });
    let pairs: Vec<PairEstimates> = computed.into_iter().collect::<Result<_>>()?;
    let mut alpha = vec![vec![None; k]; k];
    let mut beta = vec![vec![None; k]; k];
    for i in 0..k {
        alpha[i][i] = Some(0.0);
        beta[i][i] = Some(0.0);
    }
    for p in &pairs {
        alpha[p.k][p.m] = p.alpha_deg;
        alpha[p.m][p.k] = p.alpha_deg;
        beta[p.k][p.m] = p.beta_deg;
        beta[p.m][p.k] = p.beta_deg;
    }
    let solutions_est: Vec<SolutionEstimates> = (0..k)
        .map(|s| {
            let dk = dk_max(&distances, s);
            let r = true_norms[s];
            let ab = pairs
                .iter()
                .filter(|p| p.k == s || p.m == s)
                .filter_map(|p| p.angle_beta.as_ref().map(|b| b.exact))
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));
            let (combined, source) = match ab {
                Some(v) if v < dk => (Some(v), Some(EstimateSource::AngleBeta)),
                _ => (Some(dk), Some(EstimateSource::DkMax)),
            };
            SolutionEstimates {
                id: ids[s].clone(),
                true_norm: r,
                dk_max: dk,
                dk_max_effectivity: effectivity(dk, r).ok(),
                dk_max_holds: dk >= r,
                ensemble_width: width,
                width_effectivity: effectivity(width, r).ok(),
                angle_bound_beta: ab,
                angle_bound_beta_effectivity: ab.and_then(|v| effectivity(v, r).ok()),
                combined,
                combined_source: source,
            }
        })
        .collect();
    let live: Vec<&PairEstimates> = pairs.iter().filter(|p| !p.degenerate).collect();
    let ab_flags: Vec<bool> = live.iter().filter_map(|p| p.alpha_ge_beta_third).collect();
    let summary = EstimatorSummary {
        alpha: summarize(live.iter().filter_map(|p| p.alpha_deg)),
        beta: summarize(live.iter().filter_map(|p| p.beta_deg)),
        alpha_ge_beta_third_fraction: (!ab_flags.is_empty())
            .then(|| ab_flags.iter().filter(|f| **f).count() as f64 / ab_flags.len() as f64),
        dk_max_effectivity: range(solutions_est.iter().filter_map(|s| s.dk_max_effectivity)),
        width_effectivity: range(solutions_est.iter().filter_map(|s| s.width_effectivity)),
        pair_bound_effectivity: range(
            live.iter()
                .flat_map(|p| [p.pair_bound_effectivity_k, p.pair_bound_effectivity_m])
                .flatten(),
        ),
        angle_direct_effectivity: range(live.iter().filter_map(|p| p.angle_direct.as_ref()?.effectivity)),
        angle_beta_effectivity: range(live.iter().filter_map(|p| p.angle_beta.as_ref()?.effectivity)),
        dk_max_holds_all: solutions_est.iter().all(|s| s.dk_max_holds),
        degenerate_pairs: pairs.len() - live.len(),
    };
    Ok(EnsembleReport {
        ids: ids.to_vec(),
        distances,
        true_norms,
        alpha,
        beta,
        solutions: solutions_est,
        pairs,
        summary,
    })
}

impl EnsembleReport {
    /// Summary of the angle matrices over non-degenerate pairs.
    pub fn angle_means(&self) -> (Option<AngleSummary>, Option<AngleSummary>) {
        (self.summary.alpha, self.summary.beta)
    }
}
