//! Closed-form coverage and rate expressions for a Poisson cellular
//! downlink with Suzuki fading.
//!
//! The chain of results: an interference functional per Hermite node feeds
//! the conditional coverage at fixed serving distance, which is averaged
//! over the nearest-BS distance by Gauss-Legendre quadrature; the ergodic
//! rate integrates the averaged coverage over a transformed threshold axis.
//! An interference-limited shortcut and the Rayleigh special case complete
//! the set.

use crate::error::{Error, Result};
use crate::fading::{SuzukiDistribution, DEFAULT_HERMITE_ORDER};
use crate::model::{db_to_linear, FadingParams, NetworkParams};
use crate::quadrature::{gauss_legendre, QuadratureKind, QuadratureRule};

/// Legendre order used for both the radial average and the rate transform
/// unless overridden.
pub const DEFAULT_LEGENDRE_ORDER: usize = 10;

const FRAC_1_SQRT_PI: f64 = 0.5641895835477563;
// exp of anything beyond this underflows coverage to an exact 0.
const EXP_ARG_LIMIT: f64 = 700.0;

/// Density of the distance to the nearest point of a Poisson process of
/// density `lambda`: 2 pi lambda r exp(-lambda pi r^2).
pub fn nearest_distance_pdf(lambda: f64, r: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain {
            message: format!("density must be positive, got {lambda}"),
        });
    }
    if !(r >= 0.0) {
        return Err(Error::Domain {
            message: format!("distance must be non-negative, got {r}"),
        });
    }
    let pl = std::f64::consts::PI * lambda;
    Ok(2.0 * pl * r * (-pl * r * r).exp())
}

/// How a coverage probability was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverageMethod {
    /// Full expression with noise and interference.
    FullSnr,
    /// Interference-limited limit; independent of SNR and density.
    HighSnr,
    /// Rayleigh special case.
    Rayleigh,
    /// Conditional on a fixed serving distance.
    Conditional,
}

/// A coverage probability. `probability` carries the raw quadrature value,
/// which can leave [0, 1] by the approximation error; `clamped` is for
/// presentation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageValue {
    pub probability: f64,
    pub method: CoverageMethod,
}

impl CoverageValue {
    pub fn clamped(&self) -> f64 {
        self.probability.clamp(0.0, 1.0)
    }
}

/// One inner term of the interference functional, kept for introspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceTerm {
    /// C = T (rho/zeta) gamma(a_n1) / gamma(a_n).
    pub c: f64,
    /// Unbounded-integral part.
    pub i1: f64,
    /// Gauss-Legendre part subtracted from i1.
    pub i2: f64,
}

/// The interference functional f_I at one outer Hermite node, with its
/// per-inner-node decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceFunctional {
    pub value: f64,
    pub terms: Vec<InterferenceTerm>,
}

/// Bundles validated parameters with the quadrature machinery so the
/// closed forms can be evaluated repeatedly.
#[derive(Debug, Clone)]
pub struct CoverageModel {
    params: NetworkParams,
    epsilon: f64,
    suzuki: SuzukiDistribution,
    gl: QuadratureRule,
}

impl CoverageModel {
    /// Model with default quadrature orders.
    pub fn new(params: NetworkParams, fading: FadingParams) -> Result<Self> {
        Self::with_orders(params, fading, DEFAULT_HERMITE_ORDER, DEFAULT_LEGENDRE_ORDER)
    }

    /// Model with explicit Hermite and Legendre orders.
    pub fn with_orders(
        params: NetworkParams,
        fading: FadingParams,
        hermite_order: usize,
        legendre_order: usize,
    ) -> Result<Self> {
        params.validate()?;
        let epsilon = params.user_ratio()?;
        let suzuki = SuzukiDistribution::new(fading, hermite_order)?;
        let gl = gauss_legendre(legendre_order)?;
        Ok(CoverageModel {
            params,
            epsilon,
            suzuki,
            gl,
        })
    }

    pub fn params(&self) -> &NetworkParams {
        &self.params
    }

    pub fn fading(&self) -> FadingParams {
        self.suzuki.fading
    }

    pub fn suzuki(&self) -> &SuzukiDistribution {
        &self.suzuki
    }

    pub fn legendre(&self) -> &QuadratureRule {
        &self.gl
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// I1 and I2 for one constant C >= 0.
    fn interference_components(&self, c: f64) -> (f64, f64) {
        let alpha = self.params.alpha;
        let i1 = (2.0 / alpha) * c.powf(2.0 / alpha) * std::f64::consts::PI
            / (std::f64::consts::PI * (alpha - 2.0) / alpha).sin();
        let mut i2 = 0.0;
        for (&x, &w) in self.gl.nodes.iter().zip(&self.gl.weights) {
            let base = ((x + 1.0) / 2.0).powf(alpha / 2.0);
            i2 += w / 2.0 * c / (c + base);
        }
        (i1, i2)
    }

    /// Interference functional at linear threshold `t` for outer Hermite
    /// node `n`.
    fn interference_functional_linear(&self, t: f64, n: usize) -> Result<InterferenceFunctional> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain {
                message: format!("threshold must be non-negative and finite, got {t}"),
            });
        }
        let order = self.suzuki.order();
        if n >= order {
            return Err(Error::InvalidParameter {
                field: "n",
                message: format!("Hermite node index {n} out of range for order {order}"),
            });
        }
        let ratio = self.params.rho / self.params.zeta;
        let gamma_n = self.suzuki.gamma_table[n];
        let mut value = 0.0;
        let mut terms = Vec::with_capacity(order);
        for (&w, &gamma_n1) in self.suzuki.rule.weights.iter().zip(&self.suzuki.gamma_table) {
            let c = t * ratio * gamma_n1 / gamma_n;
            let (i1, i2) = self.interference_components(c);
            value += w * (i1 - i2);
            terms.push(InterferenceTerm { c, i1, i2 });
        }
        Ok(InterferenceFunctional {
            value: value * FRAC_1_SQRT_PI,
            terms,
        })
    }

    /// Interference functional at threshold `tc_db` for outer Hermite node
    /// `n`.
    pub fn interference_functional(&self, tc_db: f64, n: usize) -> Result<InterferenceFunctional> {
        self.interference_functional_linear(db_to_linear(tc_db), n)
    }

    /// f_I at every outer Hermite node, or None when epsilon = 0 and the
    /// interference factor is exactly 1.
    fn fi_table(&self, t: f64) -> Result<Option<Vec<f64>>> {
        if self.epsilon == 0.0 {
            return Ok(None);
        }
        let mut table = Vec::with_capacity(self.suzuki.order());
        for n in 0..self.suzuki.order() {
            table.push(self.interference_functional_linear(t, n)?.value);
        }
        Ok(Some(table))
    }

    /// Coverage probability at fixed serving distance `r` and linear
    /// threshold `t`, given the precomputed f_I table.
    fn conditional_at(&self, r: f64, t: f64, fi: Option<&[f64]>) -> f64 {
        let snr = self.params.snr_linear();
        let zeta = self.params.zeta;
        let r_alpha = r.powf(self.params.alpha);
        let area = std::f64::consts::PI * self.params.lambda * self.epsilon * r * r;
        let mut acc = 0.0;
        for (n, (&w, &gamma_n)) in self
            .suzuki
            .rule
            .weights
            .iter()
            .zip(&self.suzuki.gamma_table)
            .enumerate()
        {
            let noise_arg = t / gamma_n * r_alpha / (zeta * snr);
            let interf_arg = fi.map_or(0.0, |fi| area * fi[n]);
            acc += w * (-noise_arg - interf_arg).exp();
        }
        acc * FRAC_1_SQRT_PI
    }

    fn conditional_coverage_linear(&self, r: f64, t: f64) -> Result<CoverageValue> {
        if !(r >= 0.0) {
            return Err(Error::Domain {
                message: format!("serving distance must be non-negative, got {r}"),
            });
        }
        // r = 0 is the continuous limit: both exponents vanish.
        if r == 0.0 {
            return Ok(CoverageValue {
                probability: 1.0,
                method: CoverageMethod::Conditional,
            });
        }
        let fi = self.fi_table(t)?;
        Ok(CoverageValue {
            probability: self.conditional_at(r, t, fi.as_deref()),
            method: CoverageMethod::Conditional,
        })
    }

    /// Coverage probability for a user at fixed serving distance `r`.
    pub fn conditional_coverage(&self, r: f64, tc_db: f64) -> Result<CoverageValue> {
        self.conditional_coverage_linear(r, db_to_linear(tc_db))
    }

    /// Coverage averaged over the nearest-BS distance, at a linear
    /// threshold. Backs the rate integral, which needs thresholds far
    /// outside any sensible dB range.
    pub fn average_coverage_linear(&self, t: f64) -> Result<CoverageValue> {
        let fi = self.fi_table(t)?;
        let lambda = self.params.lambda;
        let pl = std::f64::consts::PI * lambda;
        let mut acc = 0.0;
        for (&x, &w) in self.gl.nodes.iter().zip(&self.gl.weights) {
            // r = (x+1)/(1-x) maps [-1,1) onto [0, inf).
            let r = (x + 1.0) / (1.0 - x);
            let jacobian = (x + 1.0) / ((1.0 - x) * (1.0 - x) * (1.0 - x));
            let radial = (-pl * r * r).exp();
            acc += w * jacobian * radial * self.conditional_at(r, t, fi.as_deref());
        }
        Ok(CoverageValue {
            probability: 4.0 * pl * acc,
            method: CoverageMethod::FullSnr,
        })
    }

    /// Spatially averaged coverage probability at threshold `tc_db`.
    pub fn average_coverage(&self, tc_db: f64) -> Result<CoverageValue> {
        self.average_coverage_linear(db_to_linear(tc_db))
    }

    /// Interference-limited coverage; ignores noise and is independent of
    /// the deployment density.
    pub fn coverage_high_snr(&self, tc_db: f64) -> Result<CoverageValue> {
        let t = db_to_linear(tc_db);
        let mut acc = 0.0;
        if self.epsilon == 0.0 {
            acc = self.suzuki.rule.weights.iter().sum();
        } else {
            for (n, &w) in self.suzuki.rule.weights.iter().enumerate() {
                let fi = self.interference_functional_linear(t, n)?.value;
                acc += w / (1.0 + self.epsilon * fi);
            }
        }
        Ok(CoverageValue {
            probability: acc * FRAC_1_SQRT_PI,
            method: CoverageMethod::HighSnr,
        })
    }

    /// Rayleigh-fading conditional coverage; the single-node special case
    /// with C = T rho / zeta.
    pub fn conditional_coverage_rayleigh(&self, r: f64, tc_db: f64) -> Result<CoverageValue> {
        if !(r >= 0.0) {
            return Err(Error::Domain {
                message: format!("serving distance must be non-negative, got {r}"),
            });
        }
        if r == 0.0 {
            return Ok(CoverageValue {
                probability: 1.0,
                method: CoverageMethod::Rayleigh,
            });
        }
        let t = db_to_linear(tc_db);
        let snr = self.params.snr_linear();
        let noise_arg = t * r.powf(self.params.alpha) / (self.params.zeta * snr);
        let interf_arg = if self.epsilon == 0.0 {
            0.0
        } else {
            let c = t * self.params.rho / self.params.zeta;
            let (i1, i2) = self.interference_components(c);
            std::f64::consts::PI * self.params.lambda * self.epsilon * r * r * (i1 - i2)
        };
        Ok(CoverageValue {
            probability: (-noise_arg - interf_arg).exp(),
            method: CoverageMethod::Rayleigh,
        })
    }

    /// Ergodic rate in nats per symbol, using the model's own Legendre
    /// order for the outer threshold transform.
    pub fn average_rate(&self) -> Result<f64> {
        self.average_rate_with_outer(&self.gl)
    }

    /// Ergodic rate with an explicit outer rule, so the two Legendre
    /// orders can be varied independently.
    pub fn average_rate_with_outer(&self, outer: &QuadratureRule) -> Result<f64> {
        if outer.kind != QuadratureKind::Legendre {
            return Err(Error::InvalidParameter {
                field: "outer",
                message: "the rate transform needs a Gauss-Legendre rule".into(),
            });
        }
        let mut rate = 0.0;
        for (&x, &w) in outer.nodes.iter().zip(&outer.weights) {
            let u = (x + 1.0) / (1.0 - x);
            // Coverage at e^u - 1 underflows to exactly 0 long before u
            // reaches the overflow edge of exp.
            if u >= EXP_ARG_LIMIT {
                continue;
            }
            let z = u.exp() - 1.0;
            let jacobian = 2.0 / ((1.0 - x) * (1.0 - x));
            rate += w * jacobian * self.average_coverage_linear(z)?.probability;
        }
        Ok(rate)
    }
}
