//! Confidence bands for the empirical extremogram.
//!
//! Two routes: a normal-approximation band with plug-in variance estimates,
//! and a null envelope from random permutations of the series.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::config::{BandMethod, EstimatorConfig};
use crate::error::{Error, Result};
use crate::estimators::{indicators, ExtremogramResult};
use crate::region::RegionSpec;
use crate::series::TimeSeries;
use crate::threshold::{select_threshold, Threshold};

/// Lower/upper band values per lag.
#[derive(Debug, Clone, PartialEq)]
pub struct BandPair {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

fn confidence_level(config: &EstimatorConfig) -> f64 {
    match config.band_method {
        BandMethod::CltPlugin { confidence_level } => confidence_level,
        BandMethod::Permutation {
            confidence_level, ..
        } => confidence_level,
        BandMethod::None => 0.95,
    }
}

fn normal_quantile(level: f64) -> f64 {
    Normal::standard().inverse_cdf(1.0 - (1.0 - level) / 2.0)
}

/// Attach symmetric normal-approximation bands rho +- z * sqrt(var) to an
/// extremogram result, using the threshold implied by the configuration.
pub fn clt_bands(
    result: ExtremogramResult,
    series: &TimeSeries,
    region_a: &RegionSpec,
    region_b: &RegionSpec,
    config: &EstimatorConfig,
) -> Result<ExtremogramResult> {
    let threshold = select_threshold(series, config.quantile_level)?;
    clt_bands_at(result, series, region_a, region_b, &threshold, config)
}

/// As [`clt_bands`], at an explicitly supplied threshold.
///
/// The plug-in variance of rho(i) is (m/n) times the i-th diagonal entry of
/// mu(C)^-4 F Sigma F', where C puts A at the first block of the stacked
/// vector, D_i puts A at lag 0 and B at lag i (D_0 uses A intersect B), F has
/// rows (0 .. mu(C) .. 0, -mu(D_i)), and Sigma collects long-run variances and
/// covariances of the exceedance indicator streams, truncated at the block
/// length. All measures are estimated by scaled exceedance frequencies on the
/// common embedding window of length n - H.
pub fn clt_bands_at(
    mut result: ExtremogramResult,
    series: &TimeSeries,
    region_a: &RegionSpec,
    region_b: &RegionSpec,
    threshold: &Threshold,
    config: &EstimatorConfig,
) -> Result<ExtremogramResult> {
    let n = series.len();
    let h_max = result.lags.len().saturating_sub(1);
    let ia = indicators(series, region_a, threshold)?;
    let ib = indicators(series, region_b, threshold)?;
    let r = config.effective_block_length(n);
    let variances = clt_variances(&ia, &ib, threshold.m, h_max, r)?;

    let z = normal_quantile(confidence_level(config));
    let mut lo = Vec::with_capacity(h_max + 1);
    let mut hi = Vec::with_capacity(h_max + 1);
    let mut zero_width = false;
    for (rho, var) in result.rho.iter().zip(&variances) {
        let half = z * var.sqrt();
        if half == 0.0 {
            zero_width = true;
        }
        lo.push(rho - half);
        hi.push(rho + half);
    }
    if zero_width {
        result
            .warnings
            .push("zero plug-in variance at some lag: band has zero width".into());
        log::warn!("zero plug-in variance: confidence band degenerates to a point");
    }
    result.variance = Some(variances);
    result.band_lo = Some(lo);
    result.band_hi = Some(hi);
    Ok(result)
}

/// Plug-in variance of rho(i) for i = 0..=h_max, truncating long-run sums at
/// lag `r`. Exposed for the band code and its algebra tests.
pub(crate) fn clt_variances(
    ia: &[bool],
    ib: &[bool],
    m: f64,
    h_max: usize,
    r: usize,
) -> Result<Vec<f64>> {
    let n = ia.len();
    if h_max >= n {
        return Err(Error::LagTooLarge { lag: h_max, len: n });
    }
    // Common embedding window: all indicator streams live on t < n - h_max.
    let n_prime = n - h_max;
    let scale = m / n_prime as f64;

    let mu_c = scale * count_ones(&ia[..n_prime]) as f64;
    if mu_c == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let sigma2_c = long_run_sum(&ia[..n_prime], &ia[..n_prime], r, scale);

    let mut out = Vec::with_capacity(h_max + 1);
    let mut di = vec![false; n_prime];
    for i in 0..=h_max {
        for t in 0..n_prime {
            di[t] = ia[t] && ib[t + i];
        }
        let mu_di = scale * count_ones(&di) as f64;
        let sigma2_di = long_run_sum(&di, &di, r, scale);
        // D_i intersect C = D_i, since both constrain lag 0 to A.
        let r_di_c = long_run_sum(&di, &ia[..n_prime], r, scale);
        let quad = mu_c * mu_c * sigma2_di - 2.0 * mu_c * mu_di * r_di_c
            + mu_di * mu_di * sigma2_c;
        let var = (m / n as f64) * quad / mu_c.powi(4);
        out.push(var.max(0.0));
    }
    Ok(out)
}

fn count_ones(s: &[bool]) -> usize {
    s.iter().filter(|&&b| b).count()
}

/// Truncated long-run covariance plug-in:
/// m/n' * [count(a and b at lag 0)
///         + sum_{h=1..r} (count(a at t, b at t+h) + count(b at t, a at t+h))].
///
/// Both lag directions enter, which keeps the estimate symmetric in (a, b);
/// for a == b the two directions coincide and the sum reduces to the usual
/// doubled form. A one-directional doubled sum is not a covariance and can
/// push the plug-in matrix off the positive-semidefinite cone when the
/// streams are nested, collapsing the bands.
fn long_run_sum(a: &[bool], b: &[bool], r: usize, scale: f64) -> f64 {
    let n = a.len();
    let mut total = (0..n).filter(|&t| a[t] && b[t]).count() as f64;
    for h in 1..=r.min(n.saturating_sub(1)) {
        let fwd = (0..n - h).filter(|&t| a[t] && b[t + h]).count() as f64;
        let rev = (0..n - h).filter(|&t| b[t] && a[t + h]).count() as f64;
        total += fwd + rev;
    }
    scale * total
}

/// Null envelope of the extremogram under random permutations of the series,
/// with the threshold implied by the configuration.
pub fn permutation_bands(
    series: &TimeSeries,
    region_a: &RegionSpec,
    region_b: &RegionSpec,
    config: &EstimatorConfig,
) -> Result<BandPair> {
    let threshold = select_threshold(series, config.quantile_level)?;
    permutation_bands_at(series, region_a, region_b, &threshold, config)
}

/// As [`permutation_bands`], at an explicitly supplied threshold.
///
/// Permuting the observations permutes their exceedance indicators, so each
/// replicate shuffles the paired indicator stream and recounts. Replicate k
/// draws from stream k+1 of a counter RNG seeded with `config.seed`, making
/// the envelope deterministic and independent of scheduling.
pub fn permutation_bands_at(
    series: &TimeSeries,
    region_a: &RegionSpec,
    region_b: &RegionSpec,
    threshold: &Threshold,
    config: &EstimatorConfig,
) -> Result<BandPair> {
    let (num_permutations, level) = match config.band_method {
        BandMethod::Permutation {
            num_permutations,
            confidence_level,
        } => (num_permutations, confidence_level),
        _ => (99, 0.95),
    };
    if num_permutations < 20 {
        return Err(Error::invalid(
            "num_permutations",
            format!("{} is below the minimum of 20", num_permutations),
        ));
    }
    let h_max = config.max_lag;
    let ia = indicators(series, region_a, threshold)?;
    let ib = indicators(series, region_b, threshold)?;
    let denominator = count_ones(&ia) as f64;
    if denominator == 0.0 {
        return Err(Error::NoExceedances);
    }
    let pairs: Vec<(bool, bool)> = ia.into_iter().zip(ib).collect();

    let replicates: Vec<Vec<f64>> = (0..num_permutations as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(k + 1);
            let mut shuffled = pairs.clone();
            shuffled.shuffle(&mut rng);
            (0..=h_max)
                .map(|h| {
                    let c = (0..shuffled.len() - h)
                        .filter(|&t| shuffled[t].0 && shuffled[t + h].1)
                        .count();
                    c as f64 / denominator
                })
                .collect()
        })
        .collect();

    let alpha = 1.0 - level;
    let mut lo = Vec::with_capacity(h_max + 1);
    let mut hi = Vec::with_capacity(h_max + 1);
    let mut values = vec![0.0; num_permutations];
    for h in 0..=h_max {
        for (v, rep) in values.iter_mut().zip(&replicates) {
            *v = rep[h];
        }
        values.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
        lo.push(crate::threshold::empirical_quantile(&values, alpha / 2.0));
        hi.push(crate::threshold::empirical_quantile(&values, 1.0 - alpha / 2.0));
    }
    Ok(BandPair { lo, hi })
}
