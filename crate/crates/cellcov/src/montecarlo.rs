//! Snapshot Monte Carlo simulation of the downlink: Poisson deployment,
//! nearest-BS association, per-interferer resource-block collisions, Suzuki
//! gains, SINR counting, and run-level variance.
//!
//! This path shares no numerics with the quadrature closed forms, so the
//! two estimate the same quantities independently and validate each other.

use crate::error::{Error, Result};
use crate::fading::SuzukiSampler;
use crate::model::{db_to_linear, FadingParams, NetworkParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;

const EMPTY_WINDOW_ATTEMPTS: u32 = 100;

/// Simulation window centered on the typical user at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// Disc of radius 15/sqrt(lambda), about thirty mean cell radii.
    Auto,
    /// Disc of explicit radius.
    Disc { radius: f64 },
    /// Axis-aligned square of explicit side, user at the center.
    Square { side: f64 },
}

impl Window {
    /// Disc radius this window resolves to, where applicable.
    pub fn disc_radius(&self, lambda: f64) -> Option<f64> {
        match self {
            Window::Auto => Some(15.0 / lambda.sqrt()),
            Window::Disc { radius } => Some(*radius),
            Window::Square { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (field, extent) = match self {
            Window::Auto => return Ok(()),
            Window::Disc { radius } => ("window_radius", *radius),
            Window::Square { side } => ("window_side", *side),
        };
        if !(extent > 0.0) || !extent.is_finite() {
            return Err(Error::InvalidParameter {
                field,
                message: format!("window extent must be positive and finite, got {extent}"),
            });
        }
        Ok(())
    }

    fn resolve(&self, lambda: f64) -> Resolved {
        match self {
            Window::Auto => Resolved::Disc {
                radius: 15.0 / lambda.sqrt(),
            },
            Window::Disc { radius } => Resolved::Disc { radius: *radius },
            Window::Square { side } => Resolved::Square {
                half_side: side / 2.0,
            },
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Resolved {
    Disc { radius: f64 },
    Square { half_side: f64 },
}

impl Resolved {
    fn area(&self) -> f64 {
        match self {
            Resolved::Disc { radius } => std::f64::consts::PI * radius * radius,
            Resolved::Square { half_side } => 4.0 * half_side * half_side,
        }
    }

    /// Squared distance from the origin of one uniform point. The SINR
    /// depends on BS positions only through distances, so the disc case
    /// can draw the squared radius directly with a single uniform.
    fn sample_d2<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let d2 = match self {
                Resolved::Disc { radius } => radius * radius * rng.gen::<f64>(),
                Resolved::Square { half_side } => {
                    let x = (rng.gen::<f64>() - 0.5) * 2.0 * half_side;
                    let y = (rng.gen::<f64>() - 0.5) * 2.0 * half_side;
                    x * x + y * y
                }
            };
            // A BS exactly on the user would make the SINR infinite.
            if d2 > 0.0 {
                return d2;
            }
        }
    }

    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match self {
            Resolved::Disc { radius } => {
                let r = radius * rng.gen::<f64>().sqrt();
                let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
                (r * theta.cos(), r * theta.sin())
            }
            Resolved::Square { half_side } => (
                (rng.gen::<f64>() - 0.5) * 2.0 * half_side,
                (rng.gen::<f64>() - 0.5) * 2.0 * half_side,
            ),
        }
    }
}

/// `x^e` where `e` is fixed per simulation; quarter-integer exponents
/// (which cover the usual pathloss range) avoid `powf` in the hot loop.
#[derive(Debug, Clone, Copy)]
enum FixedPower {
    Quarter { whole: i32, half: bool, quarter: bool },
    General(f64),
}

impl FixedPower {
    fn new(exponent: f64) -> Self {
        let quarters = exponent * 4.0;
        let rounded = quarters.round();
        if (quarters - rounded).abs() < 1e-12 && rounded.abs() < 512.0 {
            let q = rounded as i32;
            FixedPower::Quarter {
                whole: q.div_euclid(4),
                half: q.rem_euclid(4) & 2 != 0,
                quarter: q.rem_euclid(4) & 1 != 0,
            }
        } else {
            FixedPower::General(exponent)
        }
    }

    fn apply(&self, x: f64) -> f64 {
        match *self {
            FixedPower::Quarter {
                whole,
                half,
                quarter,
            } => {
                let mut v = x.powi(whole);
                if half {
                    v *= x.sqrt();
                }
                if quarter {
                    v *= x.sqrt().sqrt();
                }
                v
            }
            FixedPower::General(e) => x.powf(e),
        }
    }
}

/// Full simulation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub params: NetworkParams,
    pub fading: FadingParams,
    pub threshold_db: f64,
    pub runs: usize,
    pub samples_per_run: usize,
    pub seed: u64,
    pub window: Window,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            params: NetworkParams::default(),
            fading: FadingParams::default(),
            threshold_db: 0.0,
            runs: 5,
            samples_per_run: 100_000,
            seed: 42,
            window: Window::Auto,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.fading.validate()?;
        self.window.validate()?;
        if !self.threshold_db.is_finite() {
            return Err(Error::InvalidParameter {
                field: "threshold_db",
                message: format!("threshold must be finite, got {}", self.threshold_db),
            });
        }
        if self.runs == 0 {
            return Err(Error::InvalidParameter {
                field: "runs",
                message: "at least one run is required".into(),
            });
        }
        if self.samples_per_run == 0 {
            return Err(Error::InvalidParameter {
                field: "samples_per_run",
                message: "at least one snapshot per run is required".into(),
            });
        }
        Ok(())
    }
}

/// One interfering BS in a snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interferer {
    pub distance: f64,
    pub gain: f64,
    /// Whether this BS collides on the observed resource block.
    pub collides: bool,
}

/// One fully materialized network realization seen by the typical user.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub serving_distance: f64,
    pub serving_gain: f64,
    pub interferers: Vec<Interferer>,
    pub sinr: f64,
}

impl Snapshot {
    /// Assembles a snapshot and evaluates its SINR:
    /// zeta g r^(-alpha) / (10^(-SNR/10) + sum tau rho g_u r_u^(-alpha)).
    pub fn evaluate(
        params: &NetworkParams,
        serving_distance: f64,
        serving_gain: f64,
        interferers: Vec<Interferer>,
    ) -> Result<Snapshot> {
        params.validate()?;
        if !(serving_distance > 0.0) {
            return Err(Error::InvalidParameter {
                field: "serving_distance",
                message: format!("serving distance must be positive, got {serving_distance}"),
            });
        }
        if !(serving_gain > 0.0) {
            return Err(Error::InvalidParameter {
                field: "serving_gain",
                message: format!("gains must be positive, got {serving_gain}"),
            });
        }
        let mut interference = 0.0;
        for intf in &interferers {
            if intf.distance < serving_distance {
                return Err(Error::InvalidParameter {
                    field: "interferers",
                    message: format!(
                        "interferer at {} is closer than the serving BS at {}",
                        intf.distance, serving_distance
                    ),
                });
            }
            if !(intf.gain > 0.0) {
                return Err(Error::InvalidParameter {
                    field: "interferers",
                    message: format!("gains must be positive, got {}", intf.gain),
                });
            }
            if intf.collides {
                interference += params.rho * intf.gain * intf.distance.powf(-params.alpha);
            }
        }
        let noise = db_to_linear(-params.snr_db);
        let signal = params.zeta * serving_gain * serving_distance.powf(-params.alpha);
        Ok(Snapshot {
            serving_distance,
            serving_gain,
            interferers,
            sinr: signal / (noise + interference),
        })
    }
}

/// Aggregated estimate across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloEstimate {
    /// Average of the per-run means.
    pub mean: f64,
    pub per_run_values: Vec<f64>,
    /// Population variance of the per-run means.
    pub variance: f64,
    pub runs: usize,
    pub samples_per_run: usize,
}

/// Population variance over run-level means. The bound this is compared
/// against (1e-3) is only meaningful when the squared deviations are
/// averaged over the number of runs.
pub fn run_variance(per_run_values: &[f64]) -> Result<f64> {
    if per_run_values.len() < 2 {
        return Err(Error::InsufficientRuns {
            got: per_run_values.len(),
        });
    }
    Ok(population_variance(per_run_values))
}

fn population_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// One Poisson point pattern in the window, as coordinates.
pub fn sample_ppp<R: Rng + ?Sized>(
    lambda: f64,
    window: Window,
    rng: &mut R,
) -> Result<Vec<(f64, f64)>> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter {
            field: "lambda",
            message: format!("BS density must be positive and finite, got {lambda}"),
        });
    }
    window.validate()?;
    let resolved = window.resolve(lambda);
    let poisson = Poisson::new(lambda * resolved.area()).expect("positive mean");
    let count = rng.sample(poisson) as usize;
    Ok((0..count).map(|_| resolved.sample_point(rng)).collect())
}

/// Fills `out` with the squared distances of one non-empty realization,
/// resampling a bounded number of times if the window comes up empty.
fn sample_squared_distances<R: Rng + ?Sized>(
    mean_count: f64,
    window: Resolved,
    rng: &mut R,
    out: &mut Vec<f64>,
) -> Result<()> {
    let poisson = Poisson::new(mean_count).expect("positive mean");
    for _ in 0..EMPTY_WINDOW_ATTEMPTS {
        let count = rng.sample(poisson) as usize;
        if count == 0 {
            continue;
        }
        out.clear();
        out.extend((0..count).map(|_| window.sample_d2(rng)));
        return Ok(());
    }
    Err(Error::EmptyWindow {
        attempts: EMPTY_WINDOW_ATTEMPTS,
    })
}

/// One random snapshot with every interferer materialized.
pub fn simulate_snapshot<R: Rng + ?Sized>(
    config: &SimulationConfig,
    rng: &mut R,
) -> Result<Snapshot> {
    config.validate()?;
    let epsilon = config.params.user_ratio()?;
    let window = config.window.resolve(config.params.lambda);
    let sampler = SuzukiSampler::new(config.fading);
    let mut d2 = Vec::new();
    sample_squared_distances(config.params.lambda * window.area(), window, rng, &mut d2)?;
    let serving_index = d2
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("at least one BS");
    let serving_distance = d2[serving_index].sqrt();
    let serving_gain = sampler.sample(rng);
    let interferers: Vec<Interferer> = d2
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != serving_index)
        .map(|(_, &dd)| Interferer {
            distance: dd.sqrt(),
            gain: sampler.sample(rng),
            collides: epsilon == 1.0 || (epsilon > 0.0 && rng.gen_bool(epsilon)),
        })
        .collect();
    Snapshot::evaluate(&config.params, serving_distance, serving_gain, interferers)
}

struct RunAccumulator {
    covered: usize,
    log_sum: f64,
}

/// Coverage and rate estimated from one shared snapshot stream.
pub fn estimate_both(
    config: &SimulationConfig,
) -> Result<(MonteCarloEstimate, MonteCarloEstimate)> {
    config.validate()?;
    let epsilon = config.params.user_ratio()?;
    let threshold = db_to_linear(config.threshold_db);
    let noise = db_to_linear(-config.params.snr_db);
    let window = config.window.resolve(config.params.lambda);
    let mean_count = config.params.lambda * window.area();
    let sampler = SuzukiSampler::new(config.fading);
    let power = FixedPower::new(config.params.alpha / 2.0);
    let zeta = config.params.zeta;
    let rho = config.params.rho;

    let mut coverage_runs = Vec::with_capacity(config.runs);
    let mut rate_runs = Vec::with_capacity(config.runs);
    let mut d2 = Vec::new();
    for run in 0..config.runs {
        // Per-run substream: same key, distinct stream index, so runs are
        // independent and the whole estimate is reproducible.
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(run as u64);
        let mut acc = RunAccumulator {
            covered: 0,
            log_sum: 0.0,
        };
        for _ in 0..config.samples_per_run {
            sample_squared_distances(mean_count, window, &mut rng, &mut d2)?;
            let (serving_index, serving_d2) = d2
                .iter()
                .copied()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("at least one BS");
            let signal = zeta * sampler.sample(&mut rng) / power.apply(serving_d2);
            let mut interference = 0.0;
            if epsilon > 0.0 {
                for (i, &dd) in d2.iter().enumerate() {
                    if i == serving_index {
                        continue;
                    }
                    // Gains of non-colliding interferers never enter the
                    // SINR, so they are not drawn.
                    if epsilon == 1.0 || rng.gen_bool(epsilon) {
                        interference += rho * sampler.sample(&mut rng) / power.apply(dd);
                    }
                }
            }
            let sinr = signal / (noise + interference);
            if sinr > threshold {
                acc.covered += 1;
            }
            acc.log_sum += (1.0 + sinr).ln();
        }
        let n = config.samples_per_run as f64;
        coverage_runs.push(acc.covered as f64 / n);
        rate_runs.push(acc.log_sum / n);
    }
    Ok((
        finish_estimate(coverage_runs, config),
        finish_estimate(rate_runs, config),
    ))
}

fn finish_estimate(per_run_values: Vec<f64>, config: &SimulationConfig) -> MonteCarloEstimate {
    let mean = per_run_values.iter().sum::<f64>() / per_run_values.len() as f64;
    let variance = population_variance(&per_run_values);
    MonteCarloEstimate {
        mean,
        per_run_values,
        variance,
        runs: config.runs,
        samples_per_run: config.samples_per_run,
    }
}

/// Coverage probability estimate: share of snapshots with SINR above the
/// threshold, averaged per run.
pub fn estimate_coverage(config: &SimulationConfig) -> Result<MonteCarloEstimate> {
    estimate_both(config).map(|(coverage, _)| coverage)
}

/// Ergodic rate estimate: mean of ln(1 + SINR) in nats per symbol.
pub fn estimate_rate(config: &SimulationConfig) -> Result<MonteCarloEstimate> {
    estimate_both(config).map(|(_, rate)| rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SimulationConfig {
        SimulationConfig {
            runs: 2,
            samples_per_run: 2_000,
            ..SimulationConfig::default()
        }
    }

    #[test]
    fn run_variance_examples() {
        assert_eq!(run_variance(&[0.5; 5]).unwrap(), 0.0);
        assert_eq!(run_variance(&[0.0, 1.0]).unwrap(), 0.25);
        assert!(run_variance(&[0.5]).is_err());
        assert!(run_variance(&[]).is_err());
    }

    #[test]
    fn fixed_power_matches_powf() {
        for alpha in [2.5, 3.0, 3.5, 4.0, 4.5, 5.0] {
            let p = FixedPower::new(alpha / 2.0);
            for x in [0.01, 0.5, 1.0, 7.3, 900.0] {
                let fast = p.apply(x);
                let slow = x.powf(alpha / 2.0);
                assert!(
                    (fast - slow).abs() / slow < 1e-12,
                    "alpha = {alpha}, x = {x}: {fast} vs {slow}"
                );
            }
        }
        // Non-quarter exponents fall back to powf exactly.
        let p = FixedPower::new(1.618);
        assert_eq!(p.apply(3.0), 3f64.powf(1.618));
    }

    #[test]
    fn ppp_count_matches_intensity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let window = Window::Disc { radius: 20.0 };
        let expected = 0.25 * std::f64::consts::PI * 400.0;
        let draws = 10_000;
        let counts: Vec<f64> = (0..draws)
            .map(|_| sample_ppp(0.25, window, &mut rng).unwrap().len() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / draws as f64;
        assert!(
            (mean - expected).abs() / expected < 0.02,
            "mean count = {mean}, expected = {expected}"
        );
        let var = population_variance(&counts);
        assert!(
            (var - mean).abs() / mean < 0.05,
            "count variance {var} far from mean {mean}"
        );
    }

    #[test]
    fn ppp_points_fall_inside_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            for (x, y) in sample_ppp(1.0, Window::Disc { radius: 5.0 }, &mut rng).unwrap() {
                assert!(x * x + y * y <= 25.0 + 1e-9);
            }
            for (x, y) in sample_ppp(1.0, Window::Square { side: 6.0 }, &mut rng).unwrap() {
                assert!(x.abs() <= 3.0 && y.abs() <= 3.0);
            }
        }
    }

    #[test]
    fn snapshot_respects_nearest_association() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let config = small_config();
        for _ in 0..200 {
            let snap = simulate_snapshot(&config, &mut rng).unwrap();
            assert!(snap.serving_gain > 0.0 && snap.serving_distance > 0.0);
            for intf in &snap.interferers {
                assert!(intf.distance >= snap.serving_distance);
                assert!(intf.gain > 0.0);
            }
            assert!(snap.sinr.is_finite() && snap.sinr > 0.0);
        }
    }

    #[test]
    fn snapshot_evaluate_rejects_closer_interferer() {
        let params = NetworkParams::default();
        let bad = vec![Interferer {
            distance: 0.5,
            gain: 1.0,
            collides: true,
        }];
        assert!(Snapshot::evaluate(&params, 1.0, 1.0, bad).is_err());
        assert!(Snapshot::evaluate(&params, 1.0, 0.0, vec![]).is_err());
        assert!(Snapshot::evaluate(&params, 0.0, 1.0, vec![]).is_err());
    }

    #[test]
    fn forced_single_bs_has_exponential_tail() {
        // One BS at r = 1, no interference, Rayleigh gain, zeta = 1:
        // SINR = g SNR, so P(SINR > T) = exp(-T / SNR).
        let params = NetworkParams {
            epsilon: Some(0.0),
            n_rbs: None,
            ..NetworkParams::default()
        };
        let sampler = SuzukiSampler::new(FadingParams::rayleigh());
        let snr = params.snr_linear();
        let t = 2.0;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let draws = 100_000;
        let mut above = 0usize;
        for _ in 0..draws {
            let g = sampler.sample(&mut rng);
            let snap = Snapshot::evaluate(&params, 1.0, g, vec![]).unwrap();
            assert!((snap.sinr - g * snr).abs() / snap.sinr < 1e-12);
            if snap.sinr > t {
                above += 1;
            }
        }
        let empirical = above as f64 / draws as f64;
        let expected = (-t / snr).exp();
        assert!(
            (empirical - expected).abs() < 0.01,
            "P(SINR > {t}) = {empirical}, expected {expected}"
        );
    }

    #[test]
    fn noise_free_interference_free_coverage_is_one() {
        let config = SimulationConfig {
            params: NetworkParams {
                snr_db: 60.0,
                epsilon: Some(0.0),
                n_rbs: None,
                ..NetworkParams::default()
            },
            threshold_db: 0.0,
            runs: 2,
            samples_per_run: 5_000,
            ..SimulationConfig::default()
        };
        let cov = estimate_coverage(&config).unwrap();
        assert!(cov.mean > 0.999, "coverage = {}", cov.mean);
    }

    #[test]
    fn very_low_threshold_covers_everyone() {
        let config = SimulationConfig {
            threshold_db: -100.0,
            runs: 2,
            samples_per_run: 5_000,
            ..SimulationConfig::default()
        };
        let cov = estimate_coverage(&config).unwrap();
        assert!(cov.mean > 0.999, "coverage = {}", cov.mean);
    }

    #[test]
    fn estimates_are_deterministic() {
        let config = small_config();
        let (c1, r1) = estimate_both(&config).unwrap();
        let (c2, r2) = estimate_both(&config).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(r1, r2);
        assert_eq!(estimate_coverage(&config).unwrap(), c1);
        assert_eq!(estimate_rate(&config).unwrap(), r1);
    }

    #[test]
    fn estimate_mean_is_average_of_runs() {
        let (cov, rate) = estimate_both(&small_config()).unwrap();
        for est in [cov, rate] {
            let avg = est.per_run_values.iter().sum::<f64>() / est.runs as f64;
            assert!((est.mean - avg).abs() < 1e-12);
            assert!(est.variance >= 0.0);
            assert_eq!(est.per_run_values.len(), est.runs);
        }
    }

    #[test]
    fn tiny_window_reports_empty_error() {
        let config = SimulationConfig {
            window: Window::Disc { radius: 0.05 },
            runs: 1,
            samples_per_run: 10,
            ..SimulationConfig::default()
        };
        match estimate_coverage(&config) {
            Err(Error::EmptyWindow { attempts }) => assert_eq!(attempts, 100),
            other => panic!("expected empty-window error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_config_is_rejected() {
        let mut config = small_config();
        config.runs = 0;
        assert!(config.validate().is_err());
        let mut config = small_config();
        config.samples_per_run = 0;
        assert!(config.validate().is_err());
        let mut config = small_config();
        config.window = Window::Disc { radius: -3.0 };
        assert!(config.validate().is_err());
        let mut config = small_config();
        config.threshold_db = f64::INFINITY;
        assert!(config.validate().is_err());
    }
}
