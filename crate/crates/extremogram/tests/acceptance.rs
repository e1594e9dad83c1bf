//! Acceptance suite: every release-gating check in one target, one printed
//! pass/fail line per criterion.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use extremogram::estimators::{block_variance, empirical_extremogram, exceedance_measure};
use extremogram::models::{
    arch1_extremogram, band_example_oracle, sample_noise, simulate, solve_garch_tail_index,
    ModelFamily, ModelSpec, NoiseSpec,
};
use extremogram::spectral::{
    fourier_grid, lag_window, periodogram_from_indicators, SpectralCentering,
};
use extremogram::{
    select_threshold, BandMethod, EstimatorConfig, RegionSpec, TimeSeries,
};

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {:>2} [{}]: {} ({})",
        id,
        name,
        if pass { "PASS" } else { "FAIL" },
        detail
    );
    assert!(pass, "criterion {} failed: {}", id, detail);
}

/// Runtime budgets apply to optimized builds; debug runs still print timings.
fn within_budget(elapsed: Duration, limit: Duration) -> bool {
    cfg!(debug_assertions) || elapsed < limit
}

fn ar1_spec(phi: f64) -> ModelSpec {
    ModelSpec::new(ModelFamily::Arma {
        phi: vec![phi],
        theta: vec![],
        noise: NoiseSpec::stable(1.5),
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xm = points.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - xm) * (p.0 - xm)).sum();
    sxy / sxx
}

/// AR(1) closed form: empirical extremogram within 0.07 of phi^(alpha h).
#[test]
fn criterion_01_ar1_closed_form() {
    let start = Instant::now();
    let x = simulate(&ar1_spec(0.6), 200_000, 1).unwrap();
    let cfg = EstimatorConfig {
        quantile_level: 0.98,
        max_lag: 5,
        ..EstimatorConfig::default()
    };
    let a = RegionSpec::parse("(1,inf)").unwrap();
    let r = empirical_extremogram(&x, &a, &a, &cfg).unwrap();
    let mut worst = 0.0f64;
    for h in 1..=5 {
        let target = 0.6f64.powf(1.5 * h as f64);
        worst = worst.max((r.rho[h] - target).abs());
    }
    let elapsed = start.elapsed();
    report(
        1,
        "AR(1) closed form",
        worst <= 0.07 && within_budget(elapsed, Duration::from_secs(60)),
        format!("max deviation {:.4} <= 0.07, {:.2?} < 60s", worst, elapsed),
    );
}

/// Alternating AR(1): odd lags vanish, even lags follow |phi|^(alpha h).
#[test]
fn criterion_02_alternating_ar1() {
    let x = simulate(&ar1_spec(-0.6), 200_000, 1).unwrap();
    let cfg = EstimatorConfig {
        quantile_level: 0.98,
        max_lag: 5,
        ..EstimatorConfig::default()
    };
    let a = RegionSpec::parse("(1,inf)").unwrap();
    let r = empirical_extremogram(&x, &a, &a, &cfg).unwrap();
    let worst_odd = r.rho[1].max(r.rho[3]).max(r.rho[5]);
    let dev2 = (r.rho[2] - 0.6f64.powf(3.0)).abs();
    let dev4 = (r.rho[4] - 0.6f64.powf(6.0)).abs();
    report(
        2,
        "alternating AR(1)",
        worst_odd <= 0.04 && dev2 <= 0.07 && dev4 <= 0.07,
        format!(
            "odd lags max {:.4} <= 0.04; even deviations {:.4}, {:.4} <= 0.07",
            worst_odd, dev2, dev4
        ),
    );
}

/// Stochastic volatility shows no extremal clustering: the estimate stays
/// inside the permutation null envelope once the threshold is deep enough for
/// the volatility-persistence transient to die (the limit statement; the
/// criterion leaves the quantile free and we pin 0.9995).
#[test]
fn criterion_03_sv_no_clustering() {
    let spec = ModelSpec::new(ModelFamily::SvLognormal {
        phi_sigma: 0.9,
        noise: NoiseSpec::pareto(2.0, 0.5),
    });
    let x = simulate(&spec, 200_000, 99).unwrap();
    let cfg = EstimatorConfig {
        quantile_level: 0.9995,
        max_lag: 20,
        band_method: BandMethod::Permutation {
            num_permutations: 99,
            confidence_level: 0.95,
        },
        seed: 5,
        ..EstimatorConfig::default()
    };
    let a = RegionSpec::parse("(-inf,-1)|(1,inf)").unwrap();
    let r = empirical_extremogram(&x, &a, &a, &cfg).unwrap();
    let (lo, hi) = (r.band_lo.as_ref().unwrap(), r.band_hi.as_ref().unwrap());
    let inside = (1..=20)
        .filter(|&h| lo[h] <= r.rho[h] && r.rho[h] <= hi[h])
        .count();
    report(
        3,
        "SV no-clustering",
        inside >= 17,
        format!("{} of 20 lags inside the 95% envelope (need >= 17)", inside),
    );
}

/// GARCH tail index: the moment equation root for alpha1 = 1, beta1 = 0 and
/// Gaussian noise is exactly 2.
#[test]
fn criterion_04_garch_tail_index() {
    let start = Instant::now();
    let s = solve_garch_tail_index(1.0, 0.0, &NoiseSpec::gaussian(), 1_000_000, 7).unwrap();
    let elapsed = start.elapsed();
    report(
        4,
        "GARCH tail index",
        (s.alpha - 2.0).abs() <= 0.05 && within_budget(elapsed, Duration::from_secs(10)),
        format!("alpha {:.4} within 2 +- 0.05, {:.2?} < 10s", s.alpha, elapsed),
    );
}

/// ARCH(1) oracle vs empirical extremogram of the squared process, plus
/// exponential decay of the oracle.
#[test]
fn criterion_05_arch1_oracle_vs_empirical() {
    let spec = ModelSpec::new(ModelFamily::Garch11 {
        alpha0: 1.0,
        alpha1: 1.0,
        beta1: 0.0,
        noise: NoiseSpec::gaussian(),
    });
    let x = simulate(&spec, 500_000, 11).unwrap();
    let squared = TimeSeries::from_scalar(x.values().iter().map(|v| v * v).collect()).unwrap();
    let cfg = EstimatorConfig {
        quantile_level: 0.98,
        max_lag: 8,
        ..EstimatorConfig::default()
    };
    let a = RegionSpec::parse("(1,inf)").unwrap();
    let r = empirical_extremogram(&squared, &a, &a, &cfg).unwrap();
    let oracle = arch1_extremogram(1.0, &NoiseSpec::gaussian(), 1.0, 1.0, 8, 400_000, 511).unwrap();
    let mut worst = 0.0f64;
    for h in 1..=4 {
        worst = worst.max((r.rho[h] - oracle.rho[h]).abs());
    }
    let slope = least_squares_slope(
        &(2..=8)
            .map(|h| (h as f64, oracle.rho[h].ln()))
            .collect::<Vec<_>>(),
    );
    report(
        5,
        "ARCH(1) oracle vs empirical",
        worst <= 0.07 && slope < 0.0,
        format!(
            "max deviation {:.4} <= 0.07 at lags 1..4; oracle log-slope {:.4} < 0",
            worst, slope
        ),
    );
}

/// Block variance calibration on independent data: sigma^2 / P_m(C) near 1.
#[test]
fn criterion_06_block_variance_calibration() {
    let z = sample_noise(&NoiseSpec::pareto(2.0, 0.5), 1_000_000, 6).unwrap();
    let x = TimeSeries::from_scalar(z).unwrap();
    let cfg = EstimatorConfig {
        quantile_level: 0.98,
        block_length: Some(50),
        ..EstimatorConfig::default()
    };
    let c = RegionSpec::parse("(-inf,-1)|(1,inf)").unwrap();
    let v = block_variance(&x, &c, &cfg).unwrap();
    let p = exceedance_measure(&x, &c, &select_threshold(&x, 0.98).unwrap())
        .unwrap()
        .value;
    let ratio = v.sigma2 / p;
    report(
        6,
        "block variance calibration",
        (0.7..=1.3).contains(&ratio),
        format!("sigma2/P = {:.4} in [0.7, 1.3]", ratio),
    );
}

/// Spectral flatness for independent data: the lag-window estimate has no
/// structure across frequencies (centered autocovariances; the mixed form
/// carries a deterministic pre-asymptotic offset of order 2 r m p0^2 that is
/// excluded by this bound).
#[test]
fn criterion_07_spectral_flatness() {
    let z = sample_noise(&NoiseSpec::pareto(2.0, 0.5), 1_000_000, 6).unwrap();
    let x = TimeSeries::from_scalar(z).unwrap();
    let th = select_threshold(&x, 0.98).unwrap();
    let c = RegionSpec::parse("(-inf,-1)|(1,inf)").unwrap();
    let grid = fourier_grid(x.len(), 512);
    let est = lag_window(&x, &c, &th, 20, &grid, SpectralCentering::Centered).unwrap();
    let mean = est.values.iter().sum::<f64>() / est.values.len() as f64;
    let max_dev = est
        .values
        .iter()
        .map(|v| (v - mean).abs())
        .fold(0.0f64, f64::max);
    let flatness = max_dev / mean;
    report(
        7,
        "spectral flatness",
        flatness <= 0.35,
        format!("max relative deviation {:.4} <= 0.35 over {} frequencies", flatness, grid.len()),
    );
}

/// Centered and uncentered periodograms agree at Fourier frequencies.
#[test]
fn criterion_08_periodogram_centering_identity() {
    use rand::{Rng, SeedableRng};
    let mut worst = 0.0f64;
    for stream in 0..100u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(800 + stream);
        let n = 200 + (rng.random::<u64>() % 800) as usize;
        let p = 0.01 + rng.random::<f64>() * 0.2;
        let ind: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < p).collect();
        let freqs = fourier_grid(n, usize::MAX);
        let m = 1.0 / p.max(1e-6);
        let centered = periodogram_from_indicators(&ind, m, &freqs, true).unwrap();
        let uncentered = periodogram_from_indicators(&ind, m, &freqs, false).unwrap();
        for (c, u) in centered.iter().zip(&uncentered) {
            worst = worst.max((c - u).abs() / u.max(1e-12));
        }
    }
    report(
        8,
        "periodogram centering identity",
        worst <= 1e-10,
        format!("max relative difference {:.2e} <= 1e-10", worst),
    );
}

/// CLT plug-in band coverage for rho(1), centered at the pre-asymptotic value
/// estimated from one long simulation at the same quantile level.
#[test]
fn criterion_09_clt_band_coverage() {
    let start = Instant::now();
    let spec = ar1_spec(0.6);
    let a = RegionSpec::parse("(1,inf)").unwrap();

    let big = simulate(&spec, 5_000_000, 777_000).unwrap();
    let cfg_oracle = EstimatorConfig {
        quantile_level: 0.98,
        max_lag: 1,
        ..EstimatorConfig::default()
    };
    let rho_m1 = empirical_extremogram(&big, &a, &a, &cfg_oracle).unwrap().rho[1];

    let replicates = 300u64;
    let covered: usize = (0..replicates)
        .into_par_iter()
        .map(|k| {
            let x = simulate(&spec, 50_000, 1000 + k).unwrap();
            let cfg = EstimatorConfig {
                quantile_level: 0.98,
                max_lag: 1,
                band_method: BandMethod::CltPlugin {
                    confidence_level: 0.95,
                },
                ..EstimatorConfig::default()
            };
            let r = empirical_extremogram(&x, &a, &a, &cfg).unwrap();
            let (lo, hi) = (r.band_lo.unwrap(), r.band_hi.unwrap());
            usize::from(lo[1] <= rho_m1 && rho_m1 <= hi[1])
        })
        .sum();
    let coverage = covered as f64 / replicates as f64;
    let elapsed = start.elapsed();
    report(
        9,
        "CLT band coverage",
        (0.86..=0.99).contains(&coverage) && within_budget(elapsed, Duration::from_secs(600)),
        format!(
            "coverage {:.1}% in [86%, 99%] against rho_m(1) = {:.4}, {:.2?} < 10min",
            100.0 * coverage,
            rho_m1,
            elapsed
        ),
    );
}

/// Band example: exact oracle values and the empirical lag-0 cross-exceedance
/// measure of the difference band on simulated stochastic volatility data.
#[test]
fn criterion_10_band_example() {
    let oracle = band_example_oracle(0.5, 2.0, 1.0).unwrap();
    let exact = oracle.mu_b == 1.5 && oracle.gamma_ab0 == 0.5;

    let spec = ModelSpec::new(ModelFamily::SvLognormal {
        phi_sigma: 0.9,
        noise: NoiseSpec::pareto(1.0, 1.0),
    });
    let x = simulate(&spec, 200_000, 4242).unwrap();
    let threshold = select_threshold(&x, 0.98).unwrap();
    let embedded = x.lagged_embed(1).unwrap();
    let a_and_b =
        RegionSpec::parse("(1,inf)@1 & band(0.5 < x1 - x2 < 2) & [0,inf)@1 & [0,inf)@2").unwrap();
    let measured = exceedance_measure(&embedded, &a_and_b, &threshold)
        .unwrap()
        .value;
    report(
        10,
        "band example",
        exact && (measured - 0.5).abs() <= 0.15,
        format!(
            "mu_B = {} (exact 1.5), gamma_AB(0) = {} (exact 0.5); empirical {:.4} within 0.5 +- 0.15",
            oracle.mu_b, oracle.gamma_ab0, measured
        ),
    );
}
