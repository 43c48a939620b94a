//! Additive noise processes on a grid.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::erf::erfc;

use crate::functional::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    None,
    /// Brownian motion started at zero at the left end of the grid.
    BrownianScaled,
    /// Stationary noise with exponential (skewed) marginals.
    ExpVariogram,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    /// Brownian: variance per unit time. ExpVariogram: marginal variance.
    pub rate: f64,
    /// Correlation length of the latent Gaussian process (ExpVariogram only).
    pub corr_length: f64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        NoiseSpec {
            kind: NoiseKind::None,
            rate: 0.0,
            corr_length: 0.25,
        }
    }

    pub fn brownian(rate: f64) -> Self {
        NoiseSpec {
            kind: NoiseKind::BrownianScaled,
            rate,
            corr_length: 0.25,
        }
    }

    pub fn exp_variogram(rate: f64, corr_length: f64) -> Self {
        NoiseSpec {
            kind: NoiseKind::ExpVariogram,
            rate,
            corr_length,
        }
    }
}

/// Standard normal CDF.
pub(crate) fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// One noise path sampled at the grid points.
///
/// - `BrownianScaled`: `e(t_1) = 0`, independent increments `N(0, rate * dt)`.
/// - `ExpVariogram`: a unit-variance Gaussian process with correlation
///   `exp(-|s - t| / corr_length)` (simulated exactly as an AR(1) chain on the
///   grid) is mapped to unit-exponential marginals via `-ln Phi(z)`, centred,
///   and scaled by `sqrt(rate)`.
pub fn gen_noise<R: Rng + ?Sized>(spec: &NoiseSpec, grid: &Grid, rng: &mut R) -> Vec<f64> {
    let t = grid.points();
    let m = t.len();
    match spec.kind {
        NoiseKind::None => vec![0.0; m],
        NoiseKind::BrownianScaled => {
            let mut out = Vec::with_capacity(m);
            let mut level = 0.0;
            out.push(level);
            for w in t.windows(2) {
                let z: f64 = StandardNormal.sample(rng);
                level += (spec.rate * (w[1] - w[0])).sqrt() * z;
                out.push(level);
            }
            out
        }
        NoiseKind::ExpVariogram => {
            let scale = spec.rate.sqrt();
            let mut z: f64 = StandardNormal.sample(rng);
            let mut out = Vec::with_capacity(m);
            out.push(scale * (-std_normal_cdf(z).ln() - 1.0));
            for w in t.windows(2) {
                let rho = (-(w[1] - w[0]) / spec.corr_length).exp();
                let eps: f64 = StandardNormal.sample(rng);
                z = rho * z + (1.0 - rho * rho).sqrt() * eps;
                out.push(scale * (-std_normal_cdf(z).ln() - 1.0));
            }
            out
        }
    }
}
