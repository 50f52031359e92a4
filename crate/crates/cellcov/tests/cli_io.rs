//! End-to-end tests of the cellcov binary: exit codes, CSV shape and
//! round-tripping, seed handling, and the comparison report.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cellcov::{parse_config, run_sweep};
use tempfile::TempDir;

fn cellcov(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cellcov"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Data portion of a CSV: everything after the '#' metadata prefix.
fn strip_metadata(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

const ANALYTIC_SWEEP: &str = "sweep = rho: 1, 5, 10\noutputs = analytic_coverage, analytic_rate\n";

#[test]
fn sweep_writes_csv_with_header_and_one_row_per_value() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "sweep.conf", ANALYTIC_SWEEP);
    let out_path = dir.path().join("result.csv");
    let out = cellcov(
        &["sweep", &config, "--out", out_path.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let csv = fs::read_to_string(&out_path).unwrap();
    assert!(!csv.contains('\r'), "CSV must use LF endings");
    for key in ["# version", "# seed", "# hermite_order", "# legendre_order"] {
        assert!(csv.contains(key), "missing metadata `{key}`:\n{csv}");
    }
    let lines = strip_metadata(&csv);
    assert_eq!(lines[0], "rho,analytic_coverage,analytic_rate");
    assert_eq!(lines.len(), 4, "header plus three data rows:\n{csv}");
    assert!(lines[1].starts_with("1.00000,"));
    assert!(lines[3].starts_with("10.0000,"));
}

#[test]
fn emitted_csv_round_trips_to_six_significant_digits() {
    let dir = TempDir::new().unwrap();
    let config_text = "sweep = threshold_db: -5, 0, 5\noutputs = analytic_coverage, analytic_rate, high_snr_coverage\n";
    let config = write_config(&dir, "roundtrip.conf", config_text);
    let out = cellcov(&["sweep", &config], dir.path());
    assert!(out.status.success());

    let reference = run_sweep(&parse_config(config_text).unwrap()).unwrap();
    let csv = stdout_str(&out);
    let lines = strip_metadata(&csv);
    for (row, line) in lines[1..].iter().enumerate() {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields.len(), 4);
        let expected = &reference.rows[row];
        assert!((fields[0] - expected.axis_value).abs() <= 1e-5 * expected.axis_value.abs());
        for (got, want) in fields[1..].iter().zip(&expected.values) {
            // 6 significant digits keep the relative error below 5e-6.
            assert!(
                (got - want).abs() <= 5e-6 * want.abs(),
                "row {row}: parsed {got} vs computed {want}"
            );
        }
    }
}

#[test]
fn reruns_are_byte_identical_modulo_timestamp() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "deterministic.conf",
        "runs = 2\nsamples_per_run = 2000\nsweep = rho: 1, 5\n",
    );
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    for path in [&first, &second] {
        let out = cellcov(
            &["sweep", &config, "--out", path.to_str().unwrap()],
            dir.path(),
        );
        assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    }
    let scrub = |path: &Path| {
        fs::read_to_string(path)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# generated_unix"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(scrub(&first), scrub(&second));
}

#[test]
fn seed_flag_overrides_config_and_changes_estimates() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "seeded.conf",
        "runs = 2\nsamples_per_run = 2000\nseed = 7\noutputs = mc_coverage\n",
    );
    let baseline = stdout_str(&cellcov(&["sweep", &config], dir.path()));
    let reseeded = stdout_str(&cellcov(&["sweep", &config, "--seed", "8"], dir.path()));
    let same_seed = stdout_str(&cellcov(&["sweep", &config, "--seed", "7"], dir.path()));
    assert!(baseline.contains("# seed = 7"));
    assert!(reseeded.contains("# seed = 8"));
    assert_ne!(
        strip_metadata(&baseline),
        strip_metadata(&reseeded),
        "different seeds must move the Monte Carlo estimate"
    );
    assert_eq!(strip_metadata(&baseline), strip_metadata(&same_seed));
}

#[test]
fn check_mode_passes_when_paths_agree() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "agree.conf",
        "runs = 2\nsamples_per_run = 20000\n",
    );
    let out = cellcov(&["sweep", &config, "--check"], dir.path());
    let text = stdout_str(&out);
    assert!(out.status.success(), "report:\n{text}");
    assert!(text.contains("PASS"), "report:\n{text}");
    assert!(!text.contains("FAIL"), "report:\n{text}");
}

#[test]
fn check_mode_fails_when_paths_disagree() {
    // A deliberately truncated window starves the simulation of
    // interferers, so the Monte Carlo coverage is biased far above the
    // closed form and the comparison must fail.
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "disagree.conf",
        "runs = 2\nsamples_per_run = 2000\nwindow_radius = 1.2\n",
    );
    let out = cellcov(&["sweep", &config, "--check"], dir.path());
    let text = stdout_str(&out);
    assert!(!out.status.success(), "report:\n{text}");
    assert!(text.contains("FAIL"), "report:\n{text}");
}

#[test]
fn config_errors_exit_nonzero_with_line_numbers() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "broken.conf", "lambda = 0.25\nwarp = 9\n");
    let out = cellcov(&["sweep", &config], dir.path());
    assert!(!out.status.success());
    let err = stderr_str(&out);
    assert!(err.contains("error:"), "stderr: {err}");
    assert!(err.contains("line 2"), "stderr: {err}");
    assert!(err.contains("warp"), "stderr: {err}");
}

#[test]
fn missing_config_exits_nonzero_and_names_the_path() {
    let dir = TempDir::new().unwrap();
    let out = cellcov(&["sweep", "no-such-file.conf"], dir.path());
    assert!(!out.status.success());
    assert!(stderr_str(&out).contains("no-such-file.conf"));
}

#[test]
fn mc_subcommand_emits_only_simulation_columns() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "mc.conf",
        "runs = 2\nsamples_per_run = 2000\nsweep = epsilon: 0.2, 1\n",
    );
    let out = cellcov(&["mc", &config], dir.path());
    assert!(out.status.success());
    let csv = stdout_str(&out);
    let lines = strip_metadata(&csv);
    assert_eq!(lines[0], "epsilon,mc_coverage,mc_rate,mc_variance");
    assert_eq!(lines.len(), 3);
}

#[test]
fn analytic_subcommand_emits_only_closed_form_columns() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "analytic.conf", "sweep = alpha: 3, 3.5, 4\n");
    let out = cellcov(&["analytic", &config], dir.path());
    assert!(out.status.success());
    let csv = stdout_str(&out);
    let lines = strip_metadata(&csv);
    assert_eq!(lines[0], "alpha,analytic_coverage,analytic_rate");
    assert_eq!(lines.len(), 4);
}

#[test]
fn threshold_sweep_coverage_is_monotone_non_increasing() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "monotone.conf",
        "sweep = threshold_db: -10:2:20\noutputs = analytic_coverage\n",
    );
    let out = cellcov(&["sweep", &config], dir.path());
    assert!(out.status.success());
    let csv = stdout_str(&out);
    let coverages: Vec<f64> = strip_metadata(&csv)[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(coverages.len(), 16);
    for pair in coverages.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-12, "not monotone: {coverages:?}");
    }
}

#[test]
fn density_sweep_high_snr_column_is_constant() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "density.conf",
        "sweep = lambda: 0.1, 0.25, 1\noutputs = high_snr_coverage\n",
    );
    let out = cellcov(&["sweep", &config], dir.path());
    assert!(out.status.success());
    let csv = stdout_str(&out);
    let values: Vec<&str> = strip_metadata(&csv)[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    assert!(
        values.iter().all(|v| v == &values[0]),
        "high-SNR coverage must not depend on density: {values:?}"
    );
}
