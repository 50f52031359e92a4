//! Flat key-value configuration files describing a sweep.
//!
//! Format: one `key = value` pair per line, `#` comments, blank lines
//! ignored. Unspecified keys fall back to the baseline parameter set. The
//! `sweep` key selects one axis with either a `start:step:stop` range or a
//! comma-separated value list; `outputs` selects which columns to compute.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::analytic::DEFAULT_LEGENDRE_ORDER;
use crate::error::{Error, Result};
use crate::fading::DEFAULT_HERMITE_ORDER;
use crate::montecarlo::{SimulationConfig, Window};

const MAX_SWEEP_ROWS: usize = 100_000;

/// Parameter axes a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisName {
    ThresholdDb,
    SnrDb,
    Epsilon,
    Lambda,
    SigmaZDb,
    Rho,
    Alpha,
}

impl AxisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisName::ThresholdDb => "threshold_db",
            AxisName::SnrDb => "snr_db",
            AxisName::Epsilon => "epsilon",
            AxisName::Lambda => "lambda",
            AxisName::SigmaZDb => "sigma_z_db",
            AxisName::Rho => "rho",
            AxisName::Alpha => "alpha",
        }
    }

    fn parse(s: &str) -> Option<AxisName> {
        match s {
            "threshold_db" => Some(AxisName::ThresholdDb),
            "snr_db" => Some(AxisName::SnrDb),
            "epsilon" => Some(AxisName::Epsilon),
            "lambda" => Some(AxisName::Lambda),
            "sigma_z_db" => Some(AxisName::SigmaZDb),
            "rho" => Some(AxisName::Rho),
            "alpha" => Some(AxisName::Alpha),
            _ => None,
        }
    }
}

/// Output columns a sweep can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    AnalyticCoverage,
    HighSnrCoverage,
    McCoverage,
    AnalyticRate,
    McRate,
    /// Run variance of the Monte Carlo coverage estimate.
    McVariance,
}

impl OutputKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputKind::AnalyticCoverage => "analytic_coverage",
            OutputKind::HighSnrCoverage => "high_snr_coverage",
            OutputKind::McCoverage => "mc_coverage",
            OutputKind::AnalyticRate => "analytic_rate",
            OutputKind::McRate => "mc_rate",
            OutputKind::McVariance => "mc_variance",
        }
    }

    fn parse(s: &str) -> Option<OutputKind> {
        match s {
            "analytic_coverage" => Some(OutputKind::AnalyticCoverage),
            "high_snr_coverage" => Some(OutputKind::HighSnrCoverage),
            "mc_coverage" => Some(OutputKind::McCoverage),
            "analytic_rate" => Some(OutputKind::AnalyticRate),
            "mc_rate" => Some(OutputKind::McRate),
            "mc_variance" => Some(OutputKind::McVariance),
            _ => None,
        }
    }

    pub fn needs_analytic(&self) -> bool {
        matches!(
            self,
            OutputKind::AnalyticCoverage | OutputKind::HighSnrCoverage | OutputKind::AnalyticRate
        )
    }

    pub fn needs_monte_carlo(&self) -> bool {
        matches!(
            self,
            OutputKind::McCoverage | OutputKind::McRate | OutputKind::McVariance
        )
    }
}

/// Swept axis with its explicit value list.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub name: AxisName,
    pub values: Vec<f64>,
}

/// Full description of one sweep: base configuration, optional axis, and
/// requested outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub sim: SimulationConfig,
    pub hermite_order: usize,
    pub legendre_order: usize,
    pub axis: Option<SweepAxis>,
    pub outputs: Vec<OutputKind>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            sim: SimulationConfig::default(),
            hermite_order: DEFAULT_HERMITE_ORDER,
            legendre_order: DEFAULT_LEGENDRE_ORDER,
            axis: None,
            outputs: vec![
                OutputKind::AnalyticCoverage,
                OutputKind::McCoverage,
                OutputKind::AnalyticRate,
                OutputKind::McRate,
                OutputKind::McVariance,
            ],
        }
    }
}

/// Loads a sweep description from a file.
pub fn load_config(path: &Path) -> Result<SweepSpec> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| config_err(line, format!("key `{key}`: `{value}` is not a number")))
}

fn parse_int<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| config_err(line, format!("key `{key}`: `{value}` is not a valid integer")))
}

fn parse_sweep(line: usize, value: &str) -> Result<SweepAxis> {
    let (axis_str, rest) = value.split_once(':').ok_or_else(|| {
        config_err(line, "sweep needs the form `axis: start:step:stop` or `axis: v1, v2, ...`")
    })?;
    let name = AxisName::parse(axis_str.trim())
        .ok_or_else(|| config_err(line, format!("unknown sweep axis `{}`", axis_str.trim())))?;
    let rest = rest.trim();
    let values = if rest.contains(',') {
        rest.split(',')
            .map(|v| parse_f64(line, "sweep", v.trim()))
            .collect::<Result<Vec<f64>>>()?
    } else if rest.contains(':') {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(config_err(line, "sweep range must be `start:step:stop`"));
        }
        let start = parse_f64(line, "sweep", parts[0].trim())?;
        let step = parse_f64(line, "sweep", parts[1].trim())?;
        let stop = parse_f64(line, "sweep", parts[2].trim())?;
        if step == 0.0 || !step.is_finite() {
            return Err(config_err(line, "sweep step must be nonzero and finite"));
        }
        if (stop - start) * step < 0.0 {
            return Err(config_err(line, "sweep range never reaches its stop value"));
        }
        let ratio = (stop - start) / step;
        // Tiny slack so a stop that is an exact multiple of step is kept
        // despite rounding, without overshooting non-divisible ranges.
        let count = (ratio + 1e-9 + ratio.abs() * 1e-12).floor() as usize + 1;
        if count > MAX_SWEEP_ROWS {
            return Err(config_err(line, format!("sweep expands to {count} rows; too many")));
        }
        (0..count).map(|k| start + step * k as f64).collect()
    } else {
        vec![parse_f64(line, "sweep", rest)?]
    };
    if values.is_empty() {
        return Err(config_err(line, "sweep value list is empty"));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(config_err(line, format!("sweep value {bad} is not finite")));
    }
    Ok(SweepAxis { name, values })
}

fn parse_outputs(line: usize, value: &str) -> Result<Vec<OutputKind>> {
    let outputs = value
        .split(',')
        .map(|s| {
            let s = s.trim();
            OutputKind::parse(s)
                .ok_or_else(|| config_err(line, format!("unknown output `{s}`")))
        })
        .collect::<Result<Vec<OutputKind>>>()?;
    if outputs.is_empty() {
        return Err(config_err(line, "outputs list is empty"));
    }
    Ok(outputs)
}

/// Parses configuration text. Line numbers in errors are 1-based.
pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let mut spec = SweepSpec::default();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut epsilon_set = false;
    let mut m_users_set = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_err(line, format!("expected `key = value`, got `{content}`")))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(config_err(line, format!("key `{key}` has no value")));
        }
        if let Some(prev) = seen.insert(key.to_string(), line) {
            return Err(config_err(
                line,
                format!("key `{key}` already set on line {prev}"),
            ));
        }
        match key {
            "lambda" => spec.sim.params.lambda = parse_f64(line, key, value)?,
            "alpha" => spec.sim.params.alpha = parse_f64(line, key, value)?,
            "zeta" => spec.sim.params.zeta = parse_f64(line, key, value)?,
            "rho" => spec.sim.params.rho = parse_f64(line, key, value)?,
            "snr_db" => spec.sim.params.snr_db = parse_f64(line, key, value)?,
            "epsilon" => {
                spec.sim.params.epsilon = Some(parse_f64(line, key, value)?);
                epsilon_set = true;
            }
            "m_users" => {
                spec.sim.params.m_users = Some(parse_int(line, key, value)?);
                m_users_set = true;
            }
            "n_rbs" => spec.sim.params.n_rbs = Some(parse_int(line, key, value)?),
            "mu_z_db" => spec.sim.fading.mu_z_db = parse_f64(line, key, value)?,
            "sigma_z_db" => spec.sim.fading.sigma_z_db = parse_f64(line, key, value)?,
            "threshold_db" => spec.sim.threshold_db = parse_f64(line, key, value)?,
            "runs" => spec.sim.runs = parse_int(line, key, value)?,
            "samples_per_run" => spec.sim.samples_per_run = parse_int(line, key, value)?,
            "seed" => spec.sim.seed = parse_int(line, key, value)?,
            "window_radius" => {
                spec.sim.window = Window::Disc {
                    radius: parse_f64(line, key, value)?,
                }
            }
            "hermite_order" => spec.hermite_order = parse_int(line, key, value)?,
            "legendre_order" => spec.legendre_order = parse_int(line, key, value)?,
            "sweep" => spec.axis = Some(parse_sweep(line, value)?),
            "outputs" => spec.outputs = parse_outputs(line, value)?,
            _ => return Err(config_err(line, format!("unknown key `{key}`"))),
        }
    }
    // An explicit user count defines the ratio; drop the baseline epsilon
    // so the two sources cannot falsely conflict.
    if m_users_set && !epsilon_set {
        spec.sim.params.epsilon = None;
    }
    validate_spec(&spec, &seen)?;
    Ok(spec)
}

fn validate_spec(spec: &SweepSpec, seen: &HashMap<String, usize>) -> Result<()> {
    let order_ok = |order: usize| (1..=64).contains(&order);
    if !order_ok(spec.hermite_order) {
        return Err(at_key_line(
            seen,
            "hermite_order",
            format!("hermite_order must lie in 1..=64, got {}", spec.hermite_order),
        ));
    }
    if !order_ok(spec.legendre_order) {
        return Err(at_key_line(
            seen,
            "legendre_order",
            format!("legendre_order must lie in 1..=64, got {}", spec.legendre_order),
        ));
    }
    if let Err(err) = spec.sim.validate() {
        // Attach the config line when the offending field was set here.
        if let Error::InvalidParameter { field, .. } = &err {
            if let Some(&line) = seen.get(*field) {
                return Err(config_err(line, err.to_string()));
            }
        }
        return Err(err);
    }
    Ok(())
}

fn at_key_line(seen: &HashMap<String, usize>, key: &str, message: String) -> Error {
    match seen.get(key) {
        Some(&line) => config_err(line, message),
        None => Error::InvalidParameter {
            field: "config",
            message,
        },
    }
}
