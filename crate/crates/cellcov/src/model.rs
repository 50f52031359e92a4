//! Shared parameter types, unit conventions, and validation.
//!
//! Convention: dB quantities appear only at public boundaries (`snr_db`,
//! `mu_z_db`, `sigma_z_db`, `threshold_db`); every internal formula works on
//! linear scale. Distances and the density `lambda` share one arbitrary
//! length unit; the model is scale-invariant so only consistency matters.

use crate::error::{Error, Result};

/// Converts a dB value to linear scale: `10^(x/10)`.
pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

/// Converts a linear value to dB: `10 log10(x)`. Requires `x > 0`.
pub fn linear_to_db(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(10.0 * x.log10())
    } else {
        Err(Error::Domain {
            message: format!("linear_to_db needs a positive argument, got {x}"),
        })
    }
}

/// Network-level parameters: deployment density, pathloss, power ratios,
/// noise level, and the resource-block collision probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    /// BS density (BS per unit area).
    pub lambda: f64,
    /// Pathloss exponent; must exceed 2 or the interference integral diverges.
    pub alpha: f64,
    /// Serving-BS power adjustment coefficient (linear).
    pub zeta: f64,
    /// Interfering-BS power ratio (linear).
    pub rho: f64,
    /// Transmit-power-to-noise ratio P/sigma^2 in dB.
    pub snr_db: f64,
    /// User ratio: probability that a given resource block collides.
    pub epsilon: Option<f64>,
    /// Number of users per cell, from which epsilon may be derived.
    pub m_users: Option<u32>,
    /// Number of resource blocks per cell.
    pub n_rbs: Option<u32>,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams {
            lambda: 0.25,
            alpha: 3.5,
            zeta: 1.0,
            rho: 1.0,
            snr_db: 10.0,
            epsilon: Some(0.2),
            m_users: None,
            n_rbs: Some(15),
        }
    }
}

impl NetworkParams {
    /// Resolves the user ratio. A direct `epsilon` and a derived `m_users /
    /// n_rbs` must agree exactly when both are present.
    pub fn user_ratio(&self) -> Result<f64> {
        let derived = match (self.m_users, self.n_rbs) {
            (Some(m), Some(n)) => {
                if n == 0 {
                    return Err(Error::InvalidParameter {
                        field: "n_rbs",
                        message: "number of resource blocks must be at least 1".into(),
                    });
                }
                Some(f64::from(m) / f64::from(n))
            }
            (Some(_), None) => {
                return Err(Error::InvalidParameter {
                    field: "m_users",
                    message: "m_users given without n_rbs; cannot derive the user ratio".into(),
                });
            }
            _ => None,
        };
        let eps = match (self.epsilon, derived) {
            (Some(e), Some(d)) => {
                if (e - d).abs() > 1e-12 {
                    return Err(Error::InvalidParameter {
                        field: "epsilon",
                        message: format!(
                            "epsilon = {e} conflicts with m_users/n_rbs = {d}; \
                             drop one or make them agree"
                        ),
                    });
                }
                e
            }
            (Some(e), None) => e,
            (None, Some(d)) => d,
            (None, None) => {
                return Err(Error::InvalidParameter {
                    field: "epsilon",
                    message: "user ratio missing: set epsilon or m_users with n_rbs".into(),
                });
            }
        };
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidParameter {
                field: "epsilon",
                message: format!("user ratio must lie in [0, 1], got {eps}"),
            });
        }
        Ok(eps)
    }

    /// SNR on linear scale.
    pub fn snr_linear(&self) -> f64 {
        db_to_linear(self.snr_db)
    }

    /// Checks every invariant, naming the offending field on failure.
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidParameter {
                field: "lambda",
                message: format!("BS density must be positive and finite, got {}", self.lambda),
            });
        }
        if !(self.alpha > 2.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter {
                field: "alpha",
                message: format!(
                    "pathloss exponent must exceed 2 (the I1 interference integral \
                     diverges at alpha <= 2), got {}",
                    self.alpha
                ),
            });
        }
        if !(self.zeta > 0.0) || !self.zeta.is_finite() {
            return Err(Error::InvalidParameter {
                field: "zeta",
                message: format!("serving power coefficient must be positive, got {}", self.zeta),
            });
        }
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::InvalidParameter {
                field: "rho",
                message: format!("interfering power ratio must be positive, got {}", self.rho),
            });
        }
        if !self.snr_db.is_finite() {
            return Err(Error::InvalidParameter {
                field: "snr_db",
                message: format!("SNR must be finite, got {}", self.snr_db),
            });
        }
        self.user_ratio()?;
        Ok(())
    }
}

/// Composite Rayleigh-Lognormal (Suzuki) shadow-fading parameters, in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingParams {
    /// Lognormal mean (dB).
    pub mu_z_db: f64,
    /// Lognormal standard deviation (dB); 0 degenerates exactly to Rayleigh.
    pub sigma_z_db: f64,
}

impl Default for FadingParams {
    fn default() -> Self {
        FadingParams {
            mu_z_db: -7.3683,
            sigma_z_db: 8.0,
        }
    }
}

impl FadingParams {
    /// Pure Rayleigh fading: a unit-mean exponential power gain.
    pub fn rayleigh() -> Self {
        FadingParams {
            mu_z_db: 0.0,
            sigma_z_db: 0.0,
        }
    }

    /// Fading with the given spread whose mean power gain is exactly 1:
    /// `mu_z = -sigma_z^2 ln(10) / 20`. The composite gain `g` has
    /// `E[g] = 10^(mu/10) exp((sigma ln10/10)^2 / 2)`, and this choice of
    /// `mu` cancels the lognormal's multiplicative bias.
    pub fn unit_mean(sigma_z_db: f64) -> Self {
        FadingParams {
            mu_z_db: -sigma_z_db * sigma_z_db * std::f64::consts::LN_10 / 20.0,
            sigma_z_db,
        }
    }

    /// Mean of the composite power gain on linear scale.
    pub fn mean_gain(&self) -> f64 {
        let s = self.sigma_z_db * std::f64::consts::LN_10 / 10.0;
        db_to_linear(self.mu_z_db) * (s * s / 2.0).exp()
    }

    /// Checks every invariant, naming the offending field on failure.
    pub fn validate(&self) -> Result<()> {
        if !self.mu_z_db.is_finite() {
            return Err(Error::InvalidParameter {
                field: "mu_z_db",
                message: format!("lognormal mean must be finite, got {}", self.mu_z_db),
            });
        }
        if !(self.sigma_z_db >= 0.0) || !self.sigma_z_db.is_finite() {
            return Err(Error::InvalidParameter {
                field: "sigma_z_db",
                message: format!(
                    "lognormal standard deviation must be non-negative, got {}",
                    self.sigma_z_db
                ),
            });
        }
        Ok(())
    }
}

/// A coverage question: threshold, and optionally a fixed serving distance
/// for conditional (rather than spatially averaged) queries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageQuery {
    /// Coverage threshold T_c in dB.
    pub threshold_db: f64,
    /// Fixed serving distance; `None` averages over the nearest-BS distance.
    pub r: Option<f64>,
}

impl CoverageQuery {
    /// Spatially averaged query at the given threshold.
    pub fn averaged(threshold_db: f64) -> Self {
        CoverageQuery {
            threshold_db,
            r: None,
        }
    }

    /// Conditional query at a fixed serving distance.
    pub fn at_distance(threshold_db: f64, r: f64) -> Self {
        CoverageQuery {
            threshold_db,
            r: Some(r),
        }
    }

    /// Threshold on linear scale.
    pub fn threshold_linear(&self) -> f64 {
        db_to_linear(self.threshold_db)
    }

    /// Checks every invariant, naming the offending field on failure.
    pub fn validate(&self) -> Result<()> {
        if !self.threshold_db.is_finite() {
            return Err(Error::InvalidParameter {
                field: "threshold_db",
                message: format!("threshold must be finite, got {}", self.threshold_db),
            });
        }
        if let Some(r) = self.r {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::InvalidParameter {
                    field: "r",
                    message: format!("serving distance must be positive, got {r}"),
                });
            }
        }
        Ok(())
    }
}

/// Validates a full parameter bundle, returning it unchanged on success.
pub fn validate(
    params: NetworkParams,
    fading: FadingParams,
) -> Result<(NetworkParams, FadingParams)> {
    params.validate()?;
    fading.validate()?;
    Ok((params, fading))
}
