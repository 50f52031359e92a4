//! Bundled reproduction of the published reference results this
//! implementation targets: the power-ratio performance table, the figure
//! trends, and the user-ratio calibration question, each emitted as CSV
//! plus a pass/fail summary.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analytic::{CoverageModel, DEFAULT_LEGENDRE_ORDER};
use crate::config::{AxisName, OutputKind, SweepAxis, SweepSpec};
use crate::error::{Error, Result};
use crate::fading::DEFAULT_HERMITE_ORDER;
use crate::model::{FadingParams, NetworkParams};
use crate::sweep::{emit_csv, render_table_csv, run_sweep, write_text, Metadata};

// Reference values reproduced by this build, with their tolerances.
const POWER_RATIOS: [f64; 3] = [1.0, 5.0, 10.0];
const COVERAGE_REFS: [f64; 3] = [0.4815, 0.3770, 0.3195];
const RATE_REFS: [f64; 3] = [1.426, 1.089, 0.9037];
const ANALYTIC_COVERAGE_TOL: f64 = 0.02;
const ANALYTIC_RATE_TOL: f64 = 0.05;
const MC_TOL: f64 = 0.03;
const VARIANCE_BOUND: f64 = 1e-3;
// Rate endpoints of the shadowing figure, at unit-mean shadowing.
const SHADOWING_RATE_REFS: [(f64, f64); 2] = [(5.0, 1.792), (8.0, 1.426)];
const SHADOWING_RATE_TOL: f64 = 0.05;
// Coverage triple whose user ratio the source never states.
const CALIBRATION_ALPHAS: [f64; 3] = [3.0, 3.5, 4.0];
const CALIBRATION_REFS: [f64; 3] = [0.2362, 0.3228, 0.387];
const CALIBRATION_TOL: f64 = 0.02;

/// Everything `paper-repro` produced: the human-readable summary and the
/// count of failed hard checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproOutcome {
    pub summary: String,
    pub failures: usize,
}

struct Report {
    summary: String,
    failures: usize,
    metadata: Metadata,
}

impl Report {
    fn check(&mut self, label: &str, value: f64, target: f64, tol: f64) {
        let ok = (value - target).abs() <= tol;
        if !ok {
            self.failures += 1;
        }
        let _ = writeln!(
            self.summary,
            "[{}] {label}: {value:.4} (target {target} +/- {tol})",
            if ok { "PASS" } else { "FAIL" },
        );
    }

    fn check_that(&mut self, label: &str, ok: bool) {
        if !ok {
            self.failures += 1;
        }
        let _ = writeln!(self.summary, "[{}] {label}", if ok { "PASS" } else { "FAIL" });
    }

    fn info(&mut self, line: &str) {
        let _ = writeln!(self.summary, "[INFO] {line}");
    }

    fn report(&mut self, line: &str) {
        let _ = writeln!(self.summary, "[REPORT] {line}");
    }

    fn section(&mut self, name: &str) {
        if !self.summary.is_empty() {
            self.summary.push('\n');
        }
        let _ = writeln!(self.summary, "== {name} ==");
    }
}

fn baseline_model(update: impl FnOnce(&mut NetworkParams)) -> Result<CoverageModel> {
    let mut params = NetworkParams::default();
    update(&mut params);
    CoverageModel::new(params, FadingParams::default())
}

fn write_table(
    report: &Report,
    dir: &Path,
    file: &str,
    axis: &str,
    columns: &[&str],
    rows: &[(f64, Vec<f64>)],
) -> Result<()> {
    let csv = render_table_csv(&report.metadata, axis, columns, rows);
    write_text(&dir.join(file), &csv)
}

/// Coverage and rate vs the interferer power ratio, on both paths.
fn power_ratio_table(report: &mut Report, dir: &Path) -> Result<()> {
    report.section("performance vs interferer power ratio");
    let spec = SweepSpec {
        axis: Some(SweepAxis {
            name: AxisName::Rho,
            values: POWER_RATIOS.to_vec(),
        }),
        outputs: vec![
            OutputKind::AnalyticCoverage,
            OutputKind::McCoverage,
            OutputKind::AnalyticRate,
            OutputKind::McRate,
            OutputKind::McVariance,
        ],
        ..SweepSpec::default()
    };
    let result = run_sweep(&spec)?;
    emit_csv(&result, &dir.join("performance_vs_power_ratio.csv"))?;
    let analytic_cov = result.column(OutputKind::AnalyticCoverage).unwrap();
    let mc_cov = result.column(OutputKind::McCoverage).unwrap();
    let analytic_rate = result.column(OutputKind::AnalyticRate).unwrap();
    let mc_rate = result.column(OutputKind::McRate).unwrap();
    let variance = result.column(OutputKind::McVariance).unwrap();
    for (i, rho) in POWER_RATIOS.iter().enumerate() {
        report.check(
            &format!("closed-form coverage at rho={rho}"),
            analytic_cov[i],
            COVERAGE_REFS[i],
            ANALYTIC_COVERAGE_TOL,
        );
        report.check(
            &format!("closed-form rate at rho={rho}"),
            analytic_rate[i],
            RATE_REFS[i],
            ANALYTIC_RATE_TOL,
        );
        report.check(
            &format!("Monte Carlo coverage at rho={rho}"),
            mc_cov[i],
            COVERAGE_REFS[i],
            MC_TOL,
        );
        report.check(
            &format!("Monte Carlo rate at rho={rho}"),
            mc_rate[i],
            RATE_REFS[i],
            MC_TOL,
        );
        report.check_that(
            &format!(
                "run variance at rho={rho} below {VARIANCE_BOUND} (got {:.2e})",
                variance[i]
            ),
            variance[i] < VARIANCE_BOUND,
        );
    }
    Ok(())
}

/// Rate vs shadowing spread at unit-mean shadowing, one column per power
/// ratio. The mean-gain normalization is what makes the published rate
/// endpoints reproducible; a fixed lognormal mean would not move with
/// sigma.
fn shadowing_rate_figure(report: &mut Report, dir: &Path) -> Result<()> {
    report.section("rate vs shadowing spread");
    let sigmas = [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0];
    let mut rows = Vec::new();
    let rate_at = |sigma: f64, rho: f64| -> Result<f64> {
        let params = NetworkParams {
            rho,
            ..NetworkParams::default()
        };
        CoverageModel::new(params, FadingParams::unit_mean(sigma))?.average_rate()
    };
    for &sigma in &sigmas {
        let values = POWER_RATIOS
            .iter()
            .map(|&rho| rate_at(sigma, rho))
            .collect::<Result<Vec<f64>>>()?;
        rows.push((sigma, values));
    }
    write_table(
        report,
        dir,
        "rate_vs_shadowing.csv",
        "sigma_z_db",
        &["rate_rho_1", "rate_rho_5", "rate_rho_10"],
        &rows,
    )?;
    for (sigma, target) in SHADOWING_RATE_REFS {
        let row = rows
            .iter()
            .find(|(s, _)| *s == sigma)
            .expect("endpoint sigma in grid");
        report.check(
            &format!("rate at sigma_z={sigma} dB, rho=1, unit-mean shadowing"),
            row.1[0],
            target,
            SHADOWING_RATE_TOL,
        );
    }
    Ok(())
}

/// Coverage vs threshold, one column per pathloss exponent.
fn threshold_figure(report: &mut Report, dir: &Path) -> Result<()> {
    report.section("coverage vs threshold");
    let models = CALIBRATION_ALPHAS
        .map(|alpha| baseline_model(|p| p.alpha = alpha).expect("valid alpha"));
    let mut rows = Vec::new();
    for k in -10..=20 {
        let tc_db = k as f64;
        let values = models
            .iter()
            .map(|m| m.average_coverage(tc_db).map(|c| c.probability))
            .collect::<Result<Vec<f64>>>()?;
        rows.push((tc_db, values));
    }
    write_table(
        report,
        dir,
        "coverage_vs_threshold.csv",
        "threshold_db",
        &["cov_alpha_3.0", "cov_alpha_3.5", "cov_alpha_4.0"],
        &rows,
    )?;
    let at_zero = &rows[10].1;
    report.check_that(
        &format!(
            "coverage at 0 dB increases with alpha ({:.4} < {:.4} < {:.4})",
            at_zero[0], at_zero[1], at_zero[2]
        ),
        at_zero[0] < at_zero[1] && at_zero[1] < at_zero[2],
    );
    Ok(())
}

/// Coverage vs SNR per power ratio, with the interference-limited bound.
fn snr_figure(report: &mut Report, dir: &Path) -> Result<()> {
    report.section("coverage vs SNR");
    let mut rows = Vec::new();
    let mut models = Vec::new();
    for &rho in &POWER_RATIOS {
        models.push(baseline_model(|p| p.rho = rho)?);
    }
    for k in 0..=25 {
        let snr = -10.0 + 2.0 * k as f64;
        let mut values = Vec::new();
        for &rho in &POWER_RATIOS {
            let model = baseline_model(|p| {
                p.rho = rho;
                p.snr_db = snr;
            })?;
            values.push(model.average_coverage(0.0)?.probability);
        }
        rows.push((snr, values));
    }
    write_table(
        report,
        dir,
        "coverage_vs_snr.csv",
        "snr_db",
        &["cov_rho_1", "cov_rho_5", "cov_rho_10"],
        &rows,
    )?;
    for (i, model) in models.iter().enumerate() {
        let limit = model.coverage_high_snr(0.0)?.probability;
        let last = rows.last().expect("rows not empty").1[i];
        report.info(&format!(
            "rho={}: interference-limited bound {:.4}, coverage at 40 dB {:.4}",
            POWER_RATIOS[i], limit, last
        ));
    }
    Ok(())
}

/// Coverage vs user ratio; more collisions mean more interference.
fn user_ratio_figure(report: &mut Report, dir: &Path) -> Result<()> {
    report.section("coverage vs user ratio");
    let mut rows = Vec::new();
    for k in 0..=20 {
        let eps = k as f64 / 20.0;
        let model = baseline_model(|p| p.epsilon = Some(eps))?;
        rows.push((eps, vec![model.average_coverage(0.0)?.probability]));
    }
    write_table(
        report,
        dir,
        "coverage_vs_user_ratio.csv",
        "epsilon",
        &["analytic_coverage"],
        &rows,
    )?;
    let monotone = rows.windows(2).all(|w| w[1].1[0] <= w[0].1[0]);
    report.check_that("coverage is non-increasing in the user ratio", monotone);
    Ok(())
}

/// Coverage vs BS density: the interference-limited value is flat.
fn density_figure(report: &mut Report, dir: &Path) -> Result<()> {
    report.section("coverage vs BS density");
    let lambdas = [0.05, 0.1, 0.25, 0.5, 1.0, 2.0];
    let mut rows = Vec::new();
    for &lambda in &lambdas {
        let model = baseline_model(|p| p.lambda = lambda)?;
        rows.push((
            lambda,
            vec![
                model.average_coverage(0.0)?.probability,
                model.coverage_high_snr(0.0)?.probability,
            ],
        ));
    }
    write_table(
        report,
        dir,
        "coverage_vs_density.csv",
        "lambda",
        &["analytic_coverage", "high_snr_coverage"],
        &rows,
    )?;
    let first = rows[0].1[1];
    report.check_that(
        "interference-limited coverage is density-invariant (bit-equal)",
        rows.iter().all(|(_, v)| v[1] == first),
    );
    Ok(())
}

/// Rate vs the interferer power ratio.
fn rate_power_ratio_figure(report: &mut Report, dir: &Path) -> Result<()> {
    report.section("rate vs interferer power ratio");
    let mut rows = Vec::new();
    for k in 1..=10 {
        let rho = k as f64;
        let model = baseline_model(|p| p.rho = rho)?;
        rows.push((rho, vec![model.average_rate()?]));
    }
    write_table(
        report,
        dir,
        "rate_vs_power_ratio.csv",
        "rho",
        &["analytic_rate"],
        &rows,
    )?;
    let monotone = rows.windows(2).all(|w| w[1].1[0] <= w[0].1[0]);
    report.check_that("rate is non-increasing in the power ratio", monotone);
    Ok(())
}

/// The published coverage triple {0.2362, 0.3228, 0.387} for alpha in
/// {3, 3.5, 4} comes without a stated user ratio, and the baseline
/// epsilon=0.2 does not reproduce it. Sweep epsilon over [0, 1] and
/// report which value, if any, matches every entry within the tolerance.
fn user_ratio_calibration(report: &mut Report, dir: &Path) -> Result<()> {
    report.section("user-ratio calibration of the coverage triple");
    let mut rows = Vec::new();
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for k in 0..=100 {
        let eps = k as f64 / 100.0;
        let mut values = Vec::new();
        for &alpha in &CALIBRATION_ALPHAS {
            let model = baseline_model(|p| {
                p.alpha = alpha;
                p.epsilon = Some(eps);
            })?;
            values.push(model.average_coverage(0.0)?.probability);
        }
        let max_err = values
            .iter()
            .zip(&CALIBRATION_REFS)
            .map(|(v, t)| (v - t).abs())
            .fold(0.0f64, f64::max);
        if best.as_ref().is_none_or(|(_, e, _)| max_err < *e) {
            best = Some((eps, max_err, values.clone()));
        }
        values.push(max_err);
        rows.push((eps, values));
    }
    write_table(
        report,
        dir,
        "user_ratio_calibration.csv",
        "epsilon",
        &["cov_alpha_3.0", "cov_alpha_3.5", "cov_alpha_4.0", "max_abs_error"],
        &rows,
    )?;
    let (eps, max_err, values) = best.expect("grid not empty");
    report.report(&format!(
        "reference coverage triple {CALIBRATION_REFS:?} for alpha {CALIBRATION_ALPHAS:?} \
         at T=0 dB, SNR=10 dB"
    ));
    report.report(&format!(
        "best match: epsilon = {eps:.2} giving ({:.4}, {:.4}, {:.4}), max error {max_err:.4}",
        values[0], values[1], values[2]
    ));
    report.report(&format!(
        "within +/- {CALIBRATION_TOL}: {}; the baseline epsilon = 0.2 does not reproduce \
         the triple, so its user ratio was left unstated at the source",
        if max_err <= CALIBRATION_TOL { "yes" } else { "no" }
    ));
    Ok(())
}

/// Runs every reproduction, writing CSVs and `summary.txt` into `out_dir`.
pub fn run_paper_repro(out_dir: &Path) -> Result<ReproOutcome> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut report = Report {
        summary: String::new(),
        failures: 0,
        metadata: Metadata::new(
            crate::montecarlo::SimulationConfig::default().seed,
            DEFAULT_HERMITE_ORDER,
            DEFAULT_LEGENDRE_ORDER,
        ),
    };
    power_ratio_table(&mut report, out_dir)?;
    shadowing_rate_figure(&mut report, out_dir)?;
    threshold_figure(&mut report, out_dir)?;
    snr_figure(&mut report, out_dir)?;
    user_ratio_figure(&mut report, out_dir)?;
    density_figure(&mut report, out_dir)?;
    rate_power_ratio_figure(&mut report, out_dir)?;
    user_ratio_calibration(&mut report, out_dir)?;
    let verdict = if report.failures == 0 {
        "\nall hard checks passed\n".to_string()
    } else {
        format!("\n{} hard checks failed\n", report.failures)
    };
    report.summary.push_str(&verdict);
    write_text(&out_dir.join("summary.txt"), &report.summary)?;
    Ok(ReproOutcome {
        summary: report.summary,
        failures: report.failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // The full reproduction runs in the acceptance suite; here only the
    // cheap analytic sections are exercised.
    #[test]
    fn analytic_sections_write_tables() {
        let dir = std::env::temp_dir().join("cellcov-repro-unit");
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        let mut report = Report {
            summary: String::new(),
            failures: 0,
            metadata: Metadata::new(42, 12, 10),
        };
        threshold_figure(&mut report, &dir).unwrap();
        density_figure(&mut report, &dir).unwrap();
        assert!(dir.join("coverage_vs_threshold.csv").exists());
        assert!(dir.join("coverage_vs_density.csv").exists());
        assert_eq!(report.failures, 0, "{}", report.summary);
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn shadowing_endpoints_match_references() {
        let dir = std::env::temp_dir().join("cellcov-repro-shadow");
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        let mut report = Report {
            summary: String::new(),
            failures: 0,
            metadata: Metadata::new(42, 12, 10),
        };
        shadowing_rate_figure(&mut report, &dir).unwrap();
        assert_eq!(report.failures, 0, "{}", report.summary);
        let _ = fs::remove_dir_all(&dir);
    }
}
