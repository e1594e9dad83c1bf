//! Spectral analysis of exceedance indicators: extremal autocovariances, the
//! periodogram, and a truncated lag-window density estimator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::indicators;
use crate::region::RegionSpec;
use crate::series::TimeSeries;
use crate::threshold::Threshold;

/// Centered and uncentered scaled autocovariances of an indicator stream.
///
/// With I_t = I{X_t / a_m in C} and p0_hat the empirical exceedance
/// probability,
///
/// ```text
/// gamma_hat(h)   = (m/n) sum_{t=1}^{n-h} (I_t - p0_hat)(I_{t+h} - p0_hat)
/// gamma_tilde(h) = (m/n) sum_{t=1}^{n-h} I_t I_{t+h}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalAcov {
    pub gamma_hat: Vec<f64>,
    pub gamma_tilde: Vec<f64>,
    pub p0_hat: f64,
    pub m: f64,
}

/// Which autocovariances enter the lag-window sum for h >= 1.
///
/// `Mixed` is the printed form: centered at lag 0, uncentered beyond.
/// `Centered` uses the centered sequence throughout; the difference is of
/// order r * m * p0^2 and concentrated at low frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralCentering {
    Mixed,
    Centered,
}

/// Lag-window spectral density estimate on a frequency grid in (0, pi).
///
/// The estimation target is the spectral density of the exceedance process,
/// f(lambda) = mu(C) + 2 sum_{h>=1} cos(lambda h) tau_h(C), where tau_h is
/// the lag-h joint exceedance measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEstimate {
    pub frequencies: Vec<f64>,
    pub values: Vec<f64>,
    pub truncation: usize,
    /// Lag-0 coefficient (always centered).
    pub gamma0: f64,
    /// Coefficients used for h = 1..=truncation.
    pub gamma: Vec<f64>,
    pub centering: SpectralCentering,
    pub warnings: Vec<String>,
}

impl SpectralEstimate {
    /// Evaluate the fitted cosine polynomial at any frequency.
    pub fn density_at(&self, lambda: f64) -> f64 {
        cosine_series(self.gamma0, &self.gamma, lambda)
    }

    /// CSV with columns `lambda,f_hat`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,f_hat\n");
        for (l, v) in self.frequencies.iter().zip(&self.values) {
            out.push_str(&format!("{},{}\n", l, v));
        }
        out
    }

    /// JSON mirror of the CSV columns.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            lambda: &'a [f64],
            f_hat: &'a [f64],
        }
        let mut s = serde_json::to_string_pretty(&Doc {
            lambda: &self.frequencies,
            f_hat: &self.values,
        })
        .expect("serializable");
        s.push('\n');
        s
    }
}

fn cosine_series(gamma0: f64, gamma: &[f64], lambda: f64) -> f64 {
    let mut v = gamma0;
    for (h, g) in gamma.iter().enumerate() {
        v += 2.0 * g * ((h + 1) as f64 * lambda).cos();
    }
    v
}

/// Scaled autocovariances of the exceedance indicators of `region`.
pub fn extremal_acov(
    series: &TimeSeries,
    region: &RegionSpec,
    threshold: &Threshold,
    max_lag: usize,
) -> Result<ExtremalAcov> {
    region.require_bounded_away()?;
    let ind = indicators(series, region, threshold)?;
    extremal_acov_from_indicators(&ind, threshold.m, max_lag)
}

/// As [`extremal_acov`], on a raw indicator stream.
pub fn extremal_acov_from_indicators(
    ind: &[bool],
    m: f64,
    max_lag: usize,
) -> Result<ExtremalAcov> {
    let n = ind.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if max_lag >= n {
        return Err(Error::LagTooLarge {
            lag: max_lag,
            len: n,
        });
    }
    let count = ind.iter().filter(|&&b| b).count();
    let p0_hat = count as f64 / n as f64;
    let scale = m / n as f64;
    let mut gamma_hat = Vec::with_capacity(max_lag + 1);
    let mut gamma_tilde = Vec::with_capacity(max_lag + 1);
    for h in 0..=max_lag {
        let mut centered = 0.0;
        let mut joint = 0u64;
        for t in 0..n - h {
            let a = if ind[t] { 1.0 } else { 0.0 };
            let b = if ind[t + h] { 1.0 } else { 0.0 };
            centered += (a - p0_hat) * (b - p0_hat);
            if ind[t] && ind[t + h] {
                joint += 1;
            }
        }
        gamma_hat.push(scale * centered);
        gamma_tilde.push(scale * joint as f64);
    }
    Ok(ExtremalAcov {
        gamma_hat,
        gamma_tilde,
        p0_hat,
        m,
    })
}

/// Periodogram of the centered exceedance indicators at the given frequencies.
///
/// Exposed for exploration; its pointwise fluctuations do not die out with
/// the sample size, so use [`lag_window`] when a consistent density estimate
/// is needed.
pub fn periodogram(
    series: &TimeSeries,
    region: &RegionSpec,
    threshold: &Threshold,
    frequencies: &[f64],
) -> Result<Vec<f64>> {
    region.require_bounded_away()?;
    validate_frequencies(frequencies)?;
    let ind = indicators(series, region, threshold)?;
    periodogram_from_indicators(&ind, threshold.m, frequencies, true)
}

/// Periodogram of a raw indicator stream.
///
/// `centered` subtracts the empirical exceedance probability from each
/// indicator. At Fourier frequencies 2 pi k / n the two variants agree because
/// the complex exponentials sum to zero over a full period.
pub fn periodogram_from_indicators(
    ind: &[bool],
    m: f64,
    frequencies: &[f64],
    centered: bool,
) -> Result<Vec<f64>> {
    let n = ind.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let p0 = ind.iter().filter(|&&b| b).count() as f64 / n as f64;
    let shift = if centered { p0 } else { 0.0 };
    let scale = m / n as f64;
    Ok(frequencies
        .iter()
        .map(|&lambda| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (t, &b) in ind.iter().enumerate() {
                let v = if b { 1.0 } else { 0.0 } - shift;
                // time index runs 1..=n
                let arg = (t + 1) as f64 * lambda;
                re += v * arg.cos();
                im += v * arg.sin();
            }
            scale * (re * re + im * im)
        })
        .collect())
}

fn validate_frequencies(frequencies: &[f64]) -> Result<()> {
    for &l in frequencies {
        if !(l > 0.0 && l < std::f64::consts::PI) {
            return Err(Error::invalid(
                "frequencies",
                format!("{} outside (0, pi)", l),
            ));
        }
    }
    Ok(())
}

/// Fourier frequencies 2 pi k / n restricted to (0, pi), thinned from the
/// smallest frequency upward to at most `max_points`.
pub fn fourier_grid(n: usize, max_points: usize) -> Vec<f64> {
    let total = (n.saturating_sub(1)) / 2;
    let stride = total.div_ceil(max_points.max(1)).max(1);
    (1..=total)
        .step_by(stride)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / n as f64)
        .collect()
}

/// Truncated lag-window estimate of the spectral density of the exceedance
/// process: f_hat(lambda) = gamma_hat(0) + 2 sum_{h<=r} cos(lambda h) g(h).
///
/// Warns (without failing) when m r^2 noticeably exceeds n, and when the
/// rectangular window produces negative values.
pub fn lag_window(
    series: &TimeSeries,
    region: &RegionSpec,
    threshold: &Threshold,
    truncation: usize,
    frequencies: &[f64],
    centering: SpectralCentering,
) -> Result<SpectralEstimate> {
    region.require_bounded_away()?;
    validate_frequencies(frequencies)?;
    let n = series.len();
    if truncation >= n {
        return Err(Error::TruncationTooLarge {
            truncation,
            len: n,
        });
    }
    let ind = indicators(series, region, threshold)?;
    let acov = extremal_acov_from_indicators(&ind, threshold.m, truncation)?;

    let mut warnings = Vec::new();
    let growth = threshold.m * (truncation as f64).powi(2);
    if growth > n as f64 {
        let msg = format!(
            "m * r^2 = {:.0} exceeds n = {}; the lag-window estimate may not concentrate",
            growth, n
        );
        log::warn!("{}", msg);
        warnings.push(msg);
    }

    let gamma0 = acov.gamma_hat[0];
    let gamma: Vec<f64> = match centering {
        SpectralCentering::Mixed => acov.gamma_tilde[1..].to_vec(),
        SpectralCentering::Centered => acov.gamma_hat[1..].to_vec(),
    };
    let values: Vec<f64> = frequencies
        .iter()
        .map(|&l| cosine_series(gamma0, &gamma, l))
        .collect();
    if values.iter().any(|&v| v < 0.0) {
        let msg = "lag-window estimate is negative at some frequencies".to_string();
        log::warn!("{}", msg);
        warnings.push(msg);
    }
    Ok(SpectralEstimate {
        frequencies: frequencies.to_vec(),
        values,
        truncation,
        gamma0,
        gamma,
        centering,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::exceedance_measure;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn acov_zero_for_empty_indicators() {
        let a = extremal_acov_from_indicators(&[false; 50], 10.0, 5).unwrap();
        assert!(a.gamma_hat.iter().all(|&g| g == 0.0));
        assert!(a.gamma_tilde.iter().all(|&g| g == 0.0));
        assert_eq!(a.p0_hat, 0.0);
    }

    #[test]
    fn gamma_tilde_at_zero_equals_exceedance_measure() {
        let s = TimeSeries::from_scalar(vec![3.0, 0.1, 5.0, 0.2, 4.0, 7.0, 0.3, 0.4]).unwrap();
        let th = Threshold::manual(1.0, 4.0).unwrap();
        let c = RegionSpec::parse("(1,inf)").unwrap();
        let acov = extremal_acov(&s, &c, &th, 3).unwrap();
        let p = exceedance_measure(&s, &c, &th).unwrap();
        assert_eq!(acov.gamma_tilde[0], p.value);
    }

    #[test]
    fn alternating_indicators_hand_count() {
        let n = 11;
        let ind: Vec<bool> = (0..n).map(|t| t % 2 == 0).collect();
        let count = ind.iter().filter(|&&b| b).count() as f64;
        let m = n as f64 / count;
        let a = extremal_acov_from_indicators(&ind, m, 2).unwrap();
        assert_eq!(a.gamma_tilde[1], 0.0);
        let expected = m / n as f64 * ((n - 2 + 1) / 2) as f64; // ceil((n-2)/2)
        assert!((a.gamma_tilde[2] - expected).abs() < 1e-12);
    }

    #[test]
    fn periodogram_centering_matches_at_fourier_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 240;
        let ind: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < 0.07).collect();
        let freqs = fourier_grid(n, usize::MAX);
        let c = periodogram_from_indicators(&ind, 14.0, &freqs, true).unwrap();
        let u = periodogram_from_indicators(&ind, 14.0, &freqs, false).unwrap();
        for (a, b) in c.iter().zip(&u) {
            assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn constant_indicators_vanish_at_fourier_frequencies() {
        let n = 64;
        let ind = vec![true; n];
        let freqs = fourier_grid(n, usize::MAX);
        let p = periodogram_from_indicators(&ind, 2.0, &freqs, true).unwrap();
        for v in p {
            assert!(v.abs() < 1e-18 * n as f64 * n as f64);
        }
    }

    #[test]
    fn single_spike_matches_direct_dft() {
        let n = 50;
        let t0 = 17usize;
        let mut ind = vec![false; n];
        ind[t0] = true;
        let m = 5.0;
        let freqs = [0.3, 1.1, 2.9];
        let p = periodogram_from_indicators(&ind, m, &freqs, true).unwrap();
        let p0 = 1.0 / n as f64;
        for (i, &lambda) in freqs.iter().enumerate() {
            // direct evaluation of (m/n) |e^{i t0 lambda} - p0 sum_t e^{i t lambda}|^2
            let (mut re, mut im) = (0.0, 0.0);
            for t in 1..=n {
                let v = if t == t0 + 1 { 1.0 - p0 } else { -p0 };
                re += v * (t as f64 * lambda).cos();
                im += v * (t as f64 * lambda).sin();
            }
            let direct = m / n as f64 * (re * re + im * im);
            assert!((p[i] - direct).abs() < 1e-12);
            assert!(p[i] >= 0.0);
        }
    }

    #[test]
    fn frequencies_outside_range_rejected() {
        let s = TimeSeries::from_scalar(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let th = Threshold::manual(1.0, 2.0).unwrap();
        let c = RegionSpec::parse("(1,inf)").unwrap();
        assert!(periodogram(&s, &c, &th, &[0.0]).is_err());
        assert!(periodogram(&s, &c, &th, &[std::f64::consts::PI]).is_err());
        assert!(lag_window(&s, &c, &th, 1, &[-0.1], SpectralCentering::Mixed).is_err());
    }

    #[test]
    fn truncation_zero_gives_constant_density() {
        let s = TimeSeries::from_scalar(vec![3.0, 0.1, 5.0, 0.2, 4.0, 7.0, 0.3, 0.4]).unwrap();
        let th = Threshold::manual(1.0, 4.0).unwrap();
        let c = RegionSpec::parse("(1,inf)").unwrap();
        let est = lag_window(&s, &c, &th, 0, &[0.5, 1.0, 2.0], SpectralCentering::Mixed).unwrap();
        for v in &est.values {
            assert_eq!(*v, est.gamma0);
        }
    }

    #[test]
    fn truncation_too_large() {
        let s = TimeSeries::from_scalar(vec![1.0, 2.0, 3.0]).unwrap();
        let th = Threshold::manual(1.0, 2.0).unwrap();
        let c = RegionSpec::parse("(1,inf)").unwrap();
        assert!(matches!(
            lag_window(&s, &c, &th, 3, &[0.5], SpectralCentering::Mixed),
            Err(Error::TruncationTooLarge { .. })
        ));
    }

    #[test]
    fn density_is_even_and_periodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let values: Vec<f64> = (0..500).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let s = TimeSeries::from_scalar(values).unwrap();
        let th = Threshold::manual(1.0, 5.0).unwrap();
        let c = RegionSpec::parse("(1,inf)|(-inf,-1)").unwrap();
        let est = lag_window(&s, &c, &th, 8, &[0.7, 1.9], SpectralCentering::Mixed).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        for &l in &[0.3, 0.7, 1.9, 2.5] {
            let f = est.density_at(l);
            assert!((f - est.density_at(two_pi - l)).abs() < 1e-12);
            assert!((f - est.density_at(l + two_pi)).abs() < 1e-9);
        }
    }

    #[test]
    fn integral_recovers_gamma0() {
        // cos(lambda h) integrates to zero over (0, pi) for h >= 1, so the
        // analytic mean of f_hat over (0, pi) is gamma0. Check by quadrature.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let values: Vec<f64> = (0..800).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let s = TimeSeries::from_scalar(values).unwrap();
        let th = crate::threshold::select_threshold(&s, 0.9).unwrap();
        let c = RegionSpec::parse("(1,inf)|(-inf,-1)").unwrap();
        let est = lag_window(&s, &c, &th, 6, &[1.0], SpectralCentering::Mixed).unwrap();
        let steps = 200_000;
        let dx = std::f64::consts::PI / steps as f64;
        let integral: f64 = (0..steps)
            .map(|i| est.density_at((i as f64 + 0.5) * dx) * dx)
            .sum();
        assert!(
            (integral / std::f64::consts::PI - est.gamma0).abs() < 1e-6,
            "quadrature mean {} vs gamma0 {}",
            integral / std::f64::consts::PI,
            est.gamma0
        );
    }

    #[test]
    fn default_grid_is_inside_open_interval() {
        for n in [16usize, 1001, 1_000_000] {
            let g = fourier_grid(n, 512);
            assert!(g.len() <= 512);
            assert!(!g.is_empty());
            assert!(g.iter().all(|&l| l > 0.0 && l < std::f64::consts::PI));
            // first Fourier frequency is retained
            assert!((g[0] - 2.0 * std::f64::consts::PI / n as f64).abs() < 1e-15);
        }
    }
}
