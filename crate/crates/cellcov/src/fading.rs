//! Composite Rayleigh-Lognormal (Suzuki) channel gain.
//!
//! Closed-form pdf/cdf/mgf use a Gauss-Hermite expansion of the lognormal
//! mixing integral; sampling uses the exact product construction instead,
//! so the simulation path never depends on the Hermite approximation and
//! the two paths validate each other.

use crate::error::{Error, Result};
use crate::model::FadingParams;
use crate::quadrature::{gauss_hermite, QuadratureKind, QuadratureRule};
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

/// Hermite order that keeps the expansion error well under the tolerances
/// used anywhere in this crate.
pub const DEFAULT_HERMITE_ORDER: usize = 12;

const FRAC_1_SQRT_PI: f64 = 0.5641895835477563;

/// Draws composite gains as lognormal times unit exponential.
#[derive(Debug, Clone, Copy)]
pub struct SuzukiSampler {
    log_mean: f64,
    log_sd: f64,
}

impl SuzukiSampler {
    pub fn new(fading: FadingParams) -> Self {
        let scale = std::f64::consts::LN_10 / 10.0;
        SuzukiSampler {
            log_mean: fading.mu_z_db * scale,
            log_sd: fading.sigma_z_db * scale,
        }
    }

    /// One power gain, always positive.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        let shadow = (self.log_mean + self.log_sd * z).exp();
        let rayleigh_power = loop {
            let e: f64 = rng.sample(Exp1);
            if e > 0.0 {
                break e;
            }
        };
        shadow * rayleigh_power
    }
}

/// The Suzuki gain distribution with its Hermite expansion precomputed.
#[derive(Debug, Clone)]
pub struct SuzukiDistribution {
    pub fading: FadingParams,
    pub rule: QuadratureRule,
    /// Exponential mixture scales at each Hermite node:
    /// gamma(a_n) = 10^((sqrt(2) sigma_z a_n + mu_z) / 10).
    pub gamma_table: Vec<f64>,
    sampler: SuzukiSampler,
}

impl SuzukiDistribution {
    /// Builds the distribution with a freshly computed Hermite rule.
    pub fn new(fading: FadingParams, order: usize) -> Result<Self> {
        Self::from_rule(fading, gauss_hermite(order)?)
    }

    /// Builds the distribution around an existing Hermite rule.
    pub fn from_rule(fading: FadingParams, rule: QuadratureRule) -> Result<Self> {
        fading.validate()?;
        if rule.kind != QuadratureKind::Hermite {
            return Err(Error::InvalidParameter {
                field: "rule",
                message: "the Suzuki expansion needs a Gauss-Hermite rule".into(),
            });
        }
        let gamma_table: Vec<f64> = rule
            .nodes
            .iter()
            .map(|&a| {
                10f64.powf((std::f64::consts::SQRT_2 * fading.sigma_z_db * a + fading.mu_z_db) / 10.0)
            })
            .collect();
        if gamma_table.iter().any(|&g| !(g > 0.0) || !g.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "sigma_z_db",
                message: "fading spread too extreme: a mixture scale left the \
                          representable range"
                    .into(),
            });
        }
        Ok(SuzukiDistribution {
            sampler: SuzukiSampler::new(fading),
            fading,
            rule,
            gamma_table,
        })
    }

    /// Number of Hermite nodes in the expansion.
    pub fn order(&self) -> usize {
        self.rule.order
    }

    /// Probability density at gain `g >= 0`.
    pub fn pdf(&self, g: f64) -> Result<f64> {
        if !(g >= 0.0) {
            return Err(Error::Domain {
                message: format!("gain must be non-negative, got {g}"),
            });
        }
        let mut acc = 0.0;
        for (&w, &gamma) in self.rule.weights.iter().zip(&self.gamma_table) {
            acc += w / gamma * (-g / gamma).exp();
        }
        Ok(acc * FRAC_1_SQRT_PI)
    }

    /// Cumulative probability at gain `g >= 0`. Raw expansion value: it can
    /// overshoot 1 by the Hermite approximation error and is deliberately
    /// not clamped here.
    pub fn cdf(&self, g: f64) -> Result<f64> {
        if !(g >= 0.0) {
            return Err(Error::Domain {
                message: format!("gain must be non-negative, got {g}"),
            });
        }
        let mut acc = 0.0;
        for (&w, &gamma) in self.rule.weights.iter().zip(&self.gamma_table) {
            acc += w * (1.0 - (-g / gamma).exp());
        }
        Ok(acc * FRAC_1_SQRT_PI)
    }

    /// Laplace-transform value E[e^(-s g)] at `s >= 0`.
    pub fn mgf(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::Domain {
                message: format!("transform argument must be non-negative, got {s}"),
            });
        }
        let mut acc = 0.0;
        for (&w, &gamma) in self.rule.weights.iter().zip(&self.gamma_table) {
            acc += w / (1.0 + s * gamma);
        }
        Ok(acc * FRAC_1_SQRT_PI)
    }

    /// One random gain via the exact product construction.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler.sample(rng)
    }
}
