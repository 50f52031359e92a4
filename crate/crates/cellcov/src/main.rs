use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cellcov::{
    compare_report, emit_csv, load_config, render_csv, run_paper_repro, run_sweep, OutputKind,
    Result,
};

/// Coverage probability and ergodic rate for a Poisson cellular downlink
/// under composite Rayleigh-lognormal fading, by closed forms and by
/// Monte Carlo simulation.
#[derive(Parser)]
#[command(name = "cellcov", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file and emit CSV.
    Sweep {
        /// Flat key-value config file.
        config: PathBuf,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Print an analytic-vs-Monte-Carlo comparison report and exit
        /// nonzero if the two paths disagree.
        #[arg(long)]
        check: bool,
    },
    /// Regenerate the published reference tables and figure curves this
    /// implementation targets, with a pass/fail summary.
    PaperRepro {
        /// Directory receiving the CSV files and summary.txt.
        #[arg(long, default_value = "paper-repro")]
        out_dir: PathBuf,
    },
    /// Monte Carlo estimates only, CSV on stdout.
    Mc {
        /// Flat key-value config file.
        config: PathBuf,
    },
    /// Closed-form results only, CSV on stdout.
    Analytic {
        /// Flat key-value config file.
        config: PathBuf,
    },
}

fn single_path(config: &Path, outputs: &[OutputKind]) -> Result<bool> {
    let mut spec = load_config(config)?;
    spec.outputs = outputs.to_vec();
    let result = run_sweep(&spec)?;
    print!("{}", render_csv(&result));
    Ok(true)
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Sweep {
            config,
            out,
            seed,
            check,
        } => {
            let mut spec = load_config(&config)?;
            if let Some(seed) = seed {
                spec.sim.seed = seed;
            }
            let result = run_sweep(&spec)?;
            match &out {
                Some(path) => emit_csv(&result, path)?,
                None => print!("{}", render_csv(&result)),
            }
            if check {
                let report = compare_report(&result)?;
                print!("{}", report.text);
                return Ok(report.passed);
            }
            Ok(true)
        }
        Command::PaperRepro { out_dir } => {
            let outcome = run_paper_repro(&out_dir)?;
            print!("{}", outcome.summary);
            println!("outputs written to {}", out_dir.display());
            Ok(outcome.failures == 0)
        }
        Command::Mc { config } => single_path(
            &config,
            &[
                OutputKind::McCoverage,
                OutputKind::McRate,
                OutputKind::McVariance,
            ],
        ),
        Command::Analytic { config } => single_path(
            &config,
            &[OutputKind::AnalyticCoverage, OutputKind::AnalyticRate],
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
