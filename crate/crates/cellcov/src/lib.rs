//! Coverage probability and ergodic rate for a downlink cellular network
//! whose base stations form a planar Poisson point process, under
//! composite Rayleigh-lognormal (Suzuki) fading and partial resource-block
//! collisions.
//!
//! The crate computes both metrics two independent ways:
//!
//! * a closed-form path ([`analytic`]) built on Gauss-Hermite and
//!   Gauss-Legendre quadrature, and
//! * a Monte Carlo path ([`montecarlo`]) that drops base stations,
//!   associates with the nearest one, and measures SINR directly.
//!
//! The two paths share no numerical machinery past the parameter structs,
//! so each validates the other. [`sweep`] drives both over a parameter
//! axis and renders CSV; [`repro`] regenerates the published reference
//! tables and figures this implementation targets.

// Validation deliberately writes `!(x > 0.0)` so NaN fails the check too;
// `x <= 0.0` would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod config;
pub mod error;
pub mod fading;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod repro;
pub mod sweep;

pub use analytic::{
    nearest_distance_pdf, CoverageMethod, CoverageModel, CoverageValue, InterferenceFunctional,
    InterferenceTerm, DEFAULT_LEGENDRE_ORDER,
};
pub use config::{load_config, parse_config, AxisName, OutputKind, SweepAxis, SweepSpec};
pub use error::{Error, Result};
pub use fading::{SuzukiDistribution, SuzukiSampler, DEFAULT_HERMITE_ORDER};
pub use model::{
    db_to_linear, linear_to_db, validate, CoverageQuery, FadingParams, NetworkParams,
};
pub use montecarlo::{
    estimate_both, estimate_coverage, estimate_rate, run_variance, sample_ppp, simulate_snapshot,
    Interferer, MonteCarloEstimate, SimulationConfig, Snapshot, Window,
};
pub use quadrature::{gauss_hermite, gauss_legendre, QuadratureKind, QuadratureRule};
pub use repro::{run_paper_repro, ReproOutcome};
pub use sweep::{compare_report, emit_csv, render_csv, run_sweep, CompareReport, SweepResult};
