//! Sweep execution, CSV emission, and analytic-vs-Monte-Carlo comparison.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::analytic::CoverageModel;
use crate::config::{AxisName, OutputKind, SweepAxis, SweepSpec};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_both, SimulationConfig};

/// Coverage columns must agree this closely between the two paths.
pub const COVERAGE_AGREEMENT_TOL: f64 = 0.015;
/// Rate columns get a looser bound; the rate is an unbounded mean.
pub const RATE_AGREEMENT_TOL: f64 = 0.05;
/// Run variance of a well-sized simulation stays under this bound.
pub const VARIANCE_BOUND: f64 = 1e-3;

/// Provenance recorded as comment lines in every CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub seed: u64,
    pub hermite_order: usize,
    pub legendre_order: usize,
    pub generated_unix: u64,
    pub version: &'static str,
}

impl Metadata {
    pub fn new(seed: u64, hermite_order: usize, legendre_order: usize) -> Metadata {
        Metadata {
            seed,
            hermite_order,
            legendre_order,
            generated_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    fn now(spec: &SweepSpec) -> Metadata {
        Metadata::new(spec.sim.seed, spec.hermite_order, spec.legendre_order)
    }
}

/// One sweep row: the axis value and the outputs in request order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub values: Vec<f64>,
}

/// Completed sweep with enough context to render and compare.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis_name: AxisName,
    pub outputs: Vec<OutputKind>,
    pub rows: Vec<SweepRow>,
    pub metadata: Metadata,
}

impl SweepResult {
    /// Extracts one output column, in row order.
    pub fn column(&self, kind: OutputKind) -> Option<Vec<f64>> {
        let idx = self.outputs.iter().position(|k| *k == kind)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }
}

fn apply_axis(base: &SimulationConfig, axis: AxisName, value: f64) -> SimulationConfig {
    let mut cfg = base.clone();
    match axis {
        AxisName::ThresholdDb => cfg.threshold_db = value,
        AxisName::SnrDb => cfg.params.snr_db = value,
        AxisName::Epsilon => cfg.params.epsilon = Some(value),
        AxisName::Lambda => cfg.params.lambda = value,
        AxisName::SigmaZDb => cfg.fading.sigma_z_db = value,
        AxisName::Rho => cfg.params.rho = value,
        AxisName::Alpha => cfg.params.alpha = value,
    }
    cfg
}

fn with_row_context(err: Error, row: usize, axis: AxisName, value: f64) -> Error {
    Error::Domain {
        message: format!("row {row} ({} = {value}): {err}", axis.as_str()),
    }
}

/// Runs every row of the sweep. Each row reuses the spec's seed, so rows
/// differ only through the swept parameter.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let fallback_axis;
    let axis = match &spec.axis {
        Some(axis) => axis,
        None => {
            // No axis requested: a single row at the base configuration,
            // labeled by its threshold.
            fallback_axis = SweepAxis {
                name: AxisName::ThresholdDb,
                values: vec![spec.sim.threshold_db],
            };
            &fallback_axis
        }
    };
    let need_analytic = spec.outputs.iter().any(OutputKind::needs_analytic);
    let need_mc = spec.outputs.iter().any(OutputKind::needs_monte_carlo);
    let mut rows = Vec::with_capacity(axis.values.len());
    for (i, &value) in axis.values.iter().enumerate() {
        let cfg = apply_axis(&spec.sim, axis.name, value);
        cfg.validate()
            .map_err(|e| with_row_context(e, i, axis.name, value))?;
        let model = if need_analytic {
            Some(
                CoverageModel::with_orders(
                    cfg.params,
                    cfg.fading,
                    spec.hermite_order,
                    spec.legendre_order,
                )
                .map_err(|e| with_row_context(e, i, axis.name, value))?,
            )
        } else {
            None
        };
        let mc = if need_mc {
            Some(estimate_both(&cfg).map_err(|e| with_row_context(e, i, axis.name, value))?)
        } else {
            None
        };
        let mut values = Vec::with_capacity(spec.outputs.len());
        for out in &spec.outputs {
            let v = match out {
                OutputKind::AnalyticCoverage => {
                    let model = model.as_ref().expect("analytic model built");
                    model.average_coverage(cfg.threshold_db)?.probability
                }
                OutputKind::HighSnrCoverage => {
                    let model = model.as_ref().expect("analytic model built");
                    model.coverage_high_snr(cfg.threshold_db)?.probability
                }
                OutputKind::AnalyticRate => {
                    model.as_ref().expect("analytic model built").average_rate()?
                }
                OutputKind::McCoverage => mc.as_ref().expect("simulation ran").0.mean,
                OutputKind::McRate => mc.as_ref().expect("simulation ran").1.mean,
                OutputKind::McVariance => mc.as_ref().expect("simulation ran").0.variance,
            };
            values.push(v);
        }
        rows.push(SweepRow {
            axis_value: value,
            values,
        });
    }
    Ok(SweepResult {
        axis_name: axis.name,
        outputs: spec.outputs.clone(),
        rows,
        metadata: Metadata::now(spec),
    })
}

/// Renders `x` with `sig` significant digits, plain decimal where it fits
/// and scientific notation otherwise.
pub fn format_sig(x: f64, sig: usize) -> String {
    debug_assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if exp < -4 || exp >= sig as i32 {
        format!("{:.*e}", sig - 1, x)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    }
}

/// CSV rendering of an arbitrary table: '#' metadata lines, a header, one
/// row per axis value, 6 significant digits, LF endings.
pub fn render_table_csv(
    metadata: &Metadata,
    axis_label: &str,
    columns: &[&str],
    rows: &[(f64, Vec<f64>)],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# version = {}", metadata.version);
    let _ = writeln!(out, "# seed = {}", metadata.seed);
    let _ = writeln!(out, "# hermite_order = {}", metadata.hermite_order);
    let _ = writeln!(out, "# legendre_order = {}", metadata.legendre_order);
    let _ = writeln!(out, "# generated_unix = {}", metadata.generated_unix);
    out.push_str(axis_label);
    for name in columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (axis_value, values) in rows {
        out.push_str(&format_sig(*axis_value, 6));
        for v in values {
            out.push(',');
            out.push_str(&format_sig(*v, 6));
        }
        out.push('\n');
    }
    out
}

/// CSV rendering of a sweep result.
pub fn render_csv(result: &SweepResult) -> String {
    let columns: Vec<&str> = result.outputs.iter().map(|k| k.as_str()).collect();
    let rows: Vec<(f64, Vec<f64>)> = result
        .rows
        .iter()
        .map(|r| (r.axis_value, r.values.clone()))
        .collect();
    render_table_csv(&result.metadata, result.axis_name.as_str(), &columns, &rows)
}

/// Writes the CSV rendering to a file.
pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    write_text(path, &render_csv(result))
}

/// Writes text to a file, wrapping I/O failures with the path.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Outcome of comparing analytic and Monte Carlo columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub text: String,
    pub passed: bool,
}

/// Compares each analytic column with its Monte Carlo counterpart and
/// checks the run-variance bound, producing a human-readable summary.
pub fn compare_report(result: &SweepResult) -> Result<CompareReport> {
    let metrics = [
        (
            "coverage",
            OutputKind::AnalyticCoverage,
            OutputKind::McCoverage,
            COVERAGE_AGREEMENT_TOL,
        ),
        (
            "rate",
            OutputKind::AnalyticRate,
            OutputKind::McRate,
            RATE_AGREEMENT_TOL,
        ),
    ];
    let mut text = String::new();
    let mut passed = true;
    let mut compared_any = false;
    for (label, analytic_kind, mc_kind, tol) in metrics {
        let analytic = result.column(analytic_kind);
        let mc = result.column(mc_kind);
        let (analytic, mc) = match (analytic, mc) {
            (Some(a), Some(m)) => (a, m),
            (Some(_), None) => {
                return Err(Error::MissingColumn {
                    name: mc_kind.as_str().to_string(),
                })
            }
            (None, Some(_)) => {
                return Err(Error::MissingColumn {
                    name: analytic_kind.as_str().to_string(),
                })
            }
            (None, None) => continue,
        };
        compared_any = true;
        let _ = writeln!(text, "{label}: analytic vs Monte Carlo, tolerance {tol}");
        let mut max_delta = 0.0f64;
        let mut within = 0usize;
        for (row, (a, m)) in analytic.iter().zip(&mc).enumerate() {
            let delta = (a - m).abs();
            max_delta = max_delta.max(delta);
            if delta <= tol {
                within += 1;
            }
            let _ = writeln!(
                text,
                "  {} = {}: analytic {} mc {} |delta| = {}",
                result.axis_name.as_str(),
                format_sig(result.rows[row].axis_value, 6),
                format_sig(*a, 6),
                format_sig(*m, 6),
                format_sig(delta, 6),
            );
        }
        let ok = within == result.rows.len();
        passed &= ok;
        let _ = writeln!(
            text,
            "{} max|delta|={} ({label}, {}/{} rows within {tol})",
            if ok { "PASS" } else { "FAIL" },
            format_sig(max_delta, 6),
            within,
            result.rows.len(),
        );
    }
    if !compared_any {
        return Err(Error::MissingColumn {
            name: OutputKind::AnalyticCoverage.as_str().to_string(),
        });
    }
    if let Some(variances) = result.column(OutputKind::McVariance) {
        let mut flagged = 0usize;
        for (row, v) in variances.iter().enumerate() {
            if *v >= VARIANCE_BOUND {
                flagged += 1;
                let _ = writeln!(
                    text,
                    "FLAG row {row} ({} = {}): variance {} exceeds {VARIANCE_BOUND}",
                    result.axis_name.as_str(),
                    format_sig(result.rows[row].axis_value, 6),
                    format_sig(*v, 6),
                );
            }
        }
        let ok = flagged == 0;
        passed &= ok;
        let _ = writeln!(
            text,
            "{} run variance below {VARIANCE_BOUND} in {}/{} rows",
            if ok { "PASS" } else { "FAIL" },
            variances.len() - flagged,
            variances.len(),
        );
    }
    Ok(CompareReport { text, passed })
}
