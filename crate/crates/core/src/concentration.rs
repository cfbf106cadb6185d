//! Monte Carlo check of near-orthogonality of random directions in high
//! dimension.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampler {
    /// Two full Gaussian vectors per sample.
    Explicit,
    /// One coordinate of a random direction against a fixed axis, with the
    /// remaining squared length drawn from a chi-squared law.
    #[default]
    Projected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub dim: usize,
    pub samples: u64,
    pub delta: f64,
    pub seed: u64,
    #[serde(default)]
    pub sampler: Sampler,
    #[serde(default = "default_batch")]
    pub batch: u64,
}

fn default_batch() -> u64 {
    1 << 16
}

impl McParams {
    pub fn new(dim: usize, samples: u64, delta: f64, seed: u64) -> Self {
        McParams {
            dim,
            samples,
            delta,
            seed,
            sampler: Sampler::Projected,
            batch: default_batch(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidParams(format!("dimension must be >= 2, got {}", self.dim)));
        }
        if self.samples == 0 || self.batch == 0 {
            return Err(Error::InvalidParams("samples and batch size must be positive".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParams(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McResult {
    pub dim: usize,
    pub samples: u64,
    pub delta: f64,
    pub exceedances: u64,
    /// Fraction of pairs with cosine above `delta`.
    pub empirical: f64,
    /// `sqrt(pi / 2) * exp(-delta^2 N / 2)`.
    pub bound: f64,
    /// Binomial standard deviation at the bound (capped at one half).
    pub sigma: f64,
    pub within_three_sigma: bool,
    pub mean_cosine: f64,
}

pub fn concentration_bound(dim: usize, delta: f64) -> f64 {
    (0.5 * std::f64::consts::PI).sqrt() * (-0.5 * delta * delta * dim as f64).exp()
}

fn cosine_explicit<R: Rng>(rng: &mut R, dim: usize, buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    buf.extend((0..dim).map(|_| Distribution::<f64>::sample(&StandardNormal, rng)));
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for &a in buf.iter() {
        let b: f64 = StandardNormal.sample(rng);
        ab += a * b;
        aa += a * a;
        bb += b * b;
    }
    ab / (aa.sqrt() * bb.sqrt())
}

/// Empirical probability that two independent uniform unit vectors in `R^N`
/// have cosine above `delta`, next to the analytic bound.
pub fn mc_orthogonality(params: &McParams, exec: Exec) -> Result<McResult> {
    params.validate()?;
    let McParams { dim, samples, delta, seed, sampler, batch } = *params;
    let nbatch = samples.div_ceil(batch) as usize;
    let chi = ChiSquared::new((dim - 1) as f64).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let counts = exec.map(nbatch, |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let n = batch.min(samples - b as u64 * batch);
        let mut hits = 0u64;
        let mut sum = 0.0;
        let mut buf = Vec::new();
        for _ in 0..n {
            let c = match sampler {
                Sampler::Explicit => cosine_explicit(&mut rng, dim, &mut buf),
                Sampler::Projected => {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    let rest: f64 = chi.sample(&mut rng);
                    g / (g * g + rest).sqrt()
                }
            };
            if c > delta {
                hits += 1;
            }
            sum += c;
        }
        (hits, sum)
    });
    let (mut hits, mut sum) = (0u64, 0.0);
    for (h, s) in counts {
        hits += h;
        sum += s;
    }
    let empirical = hits as f64 / samples as f64;
    let bound = concentration_bound(dim, delta);
    let b = bound.min(0.5);
    let sigma = (b * (1.0 - b) / samples as f64).sqrt();
    Ok(McResult {
        dim,
        samples,
        delta,
        exceedances: hits,
        empirical,
        bound,
        sigma,
        within_three_sigma: empirical <= bound + 3.0 * sigma,
        mean_cosine: sum / samples as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_value() {
        let b = concentration_bound(10_000, 0.05);
        assert!((b - 4.670667e-6).abs() < 1e-11, "{b}");
    }

    #[test]
    fn two_dimensions_half_exceed() {
        let mut p = McParams::new(2, 200_000, 1e-9, 7);
        p.sampler = Sampler::Explicit;
        let r = mc_orthogonality(&p, Exec::Sequential).unwrap();
        assert!((r.empirical - 0.5).abs() < 5.0 / (p.samples as f64).sqrt());
    }

    #[test]
    fn samplers_agree_statistically() {
        for dim in [5usize, 50] {
            let mut a = McParams::new(dim, 100_000, 0.1, 3);
            a.sampler = Sampler::Explicit;
            let b = McParams { sampler: Sampler::Projected, ..a };
            let ra = mc_orthogonality(&a, Exec::Sequential).unwrap();
            let rb = mc_orthogonality(&b, Exec::Sequential).unwrap();
            let p = 0.5 * (ra.empirical + rb.empirical);
            let s = (2.0 * p * (1.0 - p) / a.samples as f64).sqrt();
            assert!((ra.empirical - rb.empirical).abs() < 5.0 * s, "{dim}: {} vs {}", ra.empirical, rb.empirical);
        }
    }

    #[test]
    fn deterministic_and_mode_independent() {
        let p = McParams::new(1000, 300_000, 0.05, 11);
        let a = mc_orthogonality(&p, Exec::Sequential).unwrap();
        let b = mc_orthogonality(&p, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.mean_cosine.abs() < 5.0 / (p.samples as f64).sqrt());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(mc_orthogonality(&McParams::new(1, 10, 0.1, 0), Exec::Sequential).is_err());
        assert!(mc_orthogonality(&McParams::new(10, 10, 1.0, 0), Exec::Sequential).is_err());
        assert!(mc_orthogonality(&McParams::new(10, 0, 0.1, 0), Exec::Sequential).is_err());
    }
}
