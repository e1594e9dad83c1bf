//! Theoretical extremograms for the supported model families, either closed
//! form or Monte Carlo with per-lag standard errors.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::noise::NoiseSpec;
use crate::models::tail_index::{solve_garch_tail_index, standardized_garch_noise};
use crate::region::RegionSpec;

/// Fixed number of Monte Carlo substreams, so results do not depend on the
/// number of worker threads.
const MC_CHUNKS: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleMethod {
    ClosedForm {
        /// Diagnostic share of the truncated coefficient mass (0 when exact).
        truncation_tail: f64,
    },
    MonteCarlo {
        replicates: usize,
        std_err: Vec<f64>,
    },
}

/// Model-implied extremogram on lags 0..=H.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoreticalExtremogram {
    pub lags: Vec<usize>,
    pub rho: Vec<f64>,
    pub method: OracleMethod,
}

impl TheoreticalExtremogram {
    fn closed_form(rho: Vec<f64>, truncation_tail: f64) -> Self {
        TheoreticalExtremogram {
            lags: (0..rho.len()).collect(),
            rho,
            method: OracleMethod::ClosedForm { truncation_tail },
        }
    }

    /// Per-lag Monte Carlo standard errors, when available.
    pub fn std_err(&self) -> Option<&[f64]> {
        match &self.method {
            OracleMethod::MonteCarlo { std_err, .. } => Some(std_err),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// One-dimensional tail measure lambda_alpha
// ---------------------------------------------------------------------------

/// Normalized disjoint intervals covered by a one-dimensional region.
/// Open/closed endpoints are ignored: the tail measure has no atoms.
fn one_dim_intervals(region: &RegionSpec) -> Result<Vec<(f64, f64)>> {
    if region.required_dim() > 1 {
        return Err(Error::UnsupportedRegion(
            "oracle needs a one-dimensional region".into(),
        ));
    }
    let mut intervals = Vec::new();
    for set in region.disjuncts() {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for c in &set.constraints {
            let (clo, chi) = match c {
                crate::region::Constraint::CoordInterval { lo, hi, .. } => (*lo, *hi),
                crate::region::Constraint::LinearBand {
                    weights, lo, hi, ..
                } => {
                    let w = weights[0].1;
                    if w > 0.0 {
                        (lo / w, hi / w)
                    } else {
                        (hi / w, lo / w)
                    }
                }
            };
            lo = lo.max(clo);
            hi = hi.min(chi);
        }
        if lo < hi {
            intervals.push((lo, hi));
        }
    }
    if intervals.is_empty() {
        return Ok(intervals);
    }
    intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite ordering"));
    let mut merged: Vec<(f64, f64)> = vec![intervals[0]];
    for (lo, hi) in intervals.into_iter().skip(1) {
        let last = merged.last_mut().expect("nonempty");
        if lo <= last.1 {
            last.1 = last.1.max(hi);
        } else {
            merged.push((lo, hi));
        }
    }
    Ok(merged)
}

fn intersect_interval_unions(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(alo, ahi) in a {
        for &(blo, bhi) in b {
            let lo = alo.max(blo);
            let hi = ahi.min(bhi);
            if lo < hi {
                out.push((lo, hi));
            }
        }
    }
    out
}

fn interval_measure(intervals: &[(f64, f64)], alpha: f64, p: f64) -> f64 {
    let q = 1.0 - p;
    let pow = |x: f64| -> f64 { x.powf(-alpha) }; // 0 -> inf, inf -> 0
    let mut total = 0.0;
    for &(lo, hi) in intervals {
        if hi > 0.0 {
            let l = lo.max(0.0);
            total += p * (pow(l) - pow(hi));
        }
        if lo < 0.0 {
            let u = hi.min(0.0);
            total += q * (pow(-u) - pow(-lo));
        }
    }
    total
}

fn intervals_avoid_origin(intervals: &[(f64, f64)]) -> bool {
    intervals.iter().all(|&(lo, hi)| lo > 0.0 || hi < 0.0)
}

/// Tail measure of a one-dimensional region under the spectral weights
/// (p, 1-p): lambda((x, inf)) = p x^-alpha and lambda((-inf, -x)) = (1-p) x^-alpha.
/// Regions touching the origin have infinite measure.
pub fn lambda_alpha(region: &RegionSpec, alpha: f64, p: f64) -> Result<f64> {
    validate_alpha_p(alpha, p)?;
    let intervals = one_dim_intervals(region)?;
    Ok(interval_measure(&intervals, alpha, p))
}

fn validate_alpha_p(alpha: f64, p: f64) -> Result<()> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha", "tail index must be positive"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("p", "tail balance must lie in [0, 1]"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Stochastic volatility
// ---------------------------------------------------------------------------

/// Extremogram of a stochastic volatility model with regularly varying noise.
///
/// The limit measures sit on the coordinate axes, so for h >= 1 the
/// extremogram is 1 when the target set contains the origin and 0 otherwise;
/// lag 0 is the tail-measure ratio of A intersect B against A.
pub fn sv_extremogram(
    region_a: &RegionSpec,
    region_b: &RegionSpec,
    alpha: f64,
    p: f64,
    max_lag: usize,
) -> Result<TheoreticalExtremogram> {
    validate_alpha_p(alpha, p)?;
    let ia = one_dim_intervals(region_a)?;
    let ib = one_dim_intervals(region_b)?;
    let a_zero = region_a.membership(&[0.0])?;
    let b_zero = region_b.membership(&[0.0])?;
    if a_zero && b_zero {
        return Err(Error::UnsupportedRegion(
            "both sets contain the origin, so the stacked set touches zero".into(),
        ));
    }
    if !a_zero && !intervals_avoid_origin(&ia) {
        return Err(Error::UnsupportedRegion(
            "set A neither contains the origin nor stays away from it".into(),
        ));
    }
    if !b_zero && !intervals_avoid_origin(&ib) {
        return Err(Error::UnsupportedRegion(
            "set B neither contains the origin nor stays away from it".into(),
        ));
    }

    let mu_a = interval_measure(&ia, alpha, p);
    let rho0 = if mu_a.is_infinite() {
        0.0
    } else if mu_a == 0.0 {
        return Err(Error::UnsupportedRegion(
            "set A has zero tail measure at this tail balance".into(),
        ));
    } else {
        interval_measure(&intersect_interval_unions(&ia, &ib), alpha, p) / mu_a
    };
    let tail_value = if b_zero { 1.0 } else { 0.0 };
    let mut rho = vec![rho0];
    rho.extend(std::iter::repeat_n(tail_value, max_lag));
    Ok(TheoreticalExtremogram::closed_form(rho, 0.0))
}

// ---------------------------------------------------------------------------
// ARCH(1) and GARCH(1,1)
// ---------------------------------------------------------------------------

struct McAccumulator {
    sum: Vec<f64>,
    sumsq: Vec<f64>,
}

fn run_chunked_mc<F>(replicates: usize, lags: usize, seed: u64, per_replicate: F) -> McAccumulator
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    let chunks: Vec<(u64, usize)> = (0..MC_CHUNKS)
        .map(|c| {
            let base = replicates / MC_CHUNKS as usize;
            let extra = usize::from((c as usize) < replicates % MC_CHUNKS as usize);
            (c, base + extra)
        })
        .filter(|&(_, n)| n > 0)
        .collect();
    let partials: Vec<McAccumulator> = chunks
        .into_par_iter()
        .map(|(c, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c + 1);
            let mut acc = McAccumulator {
                sum: vec![0.0; lags],
                sumsq: vec![0.0; lags],
            };
            let mut values = vec![0.0; lags];
            for _ in 0..count {
                per_replicate(&mut rng, &mut values);
                for (i, &v) in values.iter().enumerate() {
                    acc.sum[i] += v;
                    acc.sumsq[i] += v * v;
                }
            }
            acc
        })
        .collect();
    let mut total = McAccumulator {
        sum: vec![0.0; lags],
        sumsq: vec![0.0; lags],
    };
    for p in partials {
        for i in 0..lags {
            total.sum[i] += p.sum[i];
            total.sumsq[i] += p.sumsq[i];
        }
    }
    total
}

fn validate_mc_args(a: f64, b: f64, mc_replicates: usize) -> Result<()> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::invalid("a/b", "set thresholds must be positive"));
    }
    if mc_replicates == 0 {
        return Err(Error::invalid("mc_replicates", "must be at least 1"));
    }
    Ok(())
}

/// ARCH(1) extremogram of the squared process on A = (a, inf), B = (b, inf):
/// rho(h) = E min(1, C_0 ... C_{h-1} a/b)^{alpha/2} with C = alpha1 Z^2.
///
/// The tail index alpha is solved internally from the same noise law.
pub fn arch1_extremogram(
    alpha1: f64,
    noise: &NoiseSpec,
    a: f64,
    b: f64,
    max_lag: usize,
    mc_replicates: usize,
    seed: u64,
) -> Result<TheoreticalExtremogram> {
    validate_mc_args(a, b, mc_replicates)?;
    let alpha = solve_garch_tail_index(alpha1, 0.0, noise, mc_replicates, seed)?.alpha;
    let z_noise = standardized_garch_noise(noise)?;
    let log_ratio = (a / b).ln();
    let half_alpha = alpha / 2.0;

    let lags = max_lag + 1;
    let acc = run_chunked_mc(mc_replicates, lags, seed, |rng, values| {
        let mut z = vec![0.0; max_lag];
        z_noise.sample_into(rng, &mut z);
        let mut log_prod = 0.0;
        values[0] = (half_alpha * log_ratio.min(0.0)).exp();
        for (h, &zv) in z.iter().enumerate() {
            log_prod += (alpha1 * zv * zv).ln();
            values[h + 1] = (half_alpha * (log_prod + log_ratio).min(0.0)).exp();
        }
    });
    let n = mc_replicates as f64;
    let rho: Vec<f64> = acc.sum.iter().map(|s| s / n).collect();
    let std_err: Vec<f64> = acc
        .sumsq
        .iter()
        .zip(&rho)
        .map(|(&sq, &mean)| ((sq / n - mean * mean).max(0.0) / n).sqrt())
        .collect();
    Ok(TheoreticalExtremogram {
        lags: (0..lags).collect(),
        rho,
        method: OracleMethod::MonteCarlo {
            replicates: mc_replicates,
            std_err,
        },
    })
}

/// GARCH(1,1) extremogram of the squared process on A = (a, inf), B = (b, inf):
/// the ratio E min(Z_0^2/a, C_0...C_{h-1} Z_h^2/b)^{alpha/2} / E (Z^2/a)^{alpha/2},
/// estimated with common random draws for numerator and denominator.
#[allow(clippy::too_many_arguments)]
pub fn garch11_extremogram(
    alpha0: f64,
    alpha1: f64,
    beta1: f64,
    noise: &NoiseSpec,
    a: f64,
    b: f64,
    max_lag: usize,
    mc_replicates: usize,
    seed: u64,
) -> Result<TheoreticalExtremogram> {
    if !(alpha0 > 0.0) {
        return Err(Error::invalid("alpha0", "must be positive"));
    }
    validate_mc_args(a, b, mc_replicates)?;
    let alpha = solve_garch_tail_index(alpha1, beta1, noise, mc_replicates, seed)?.alpha;
    let z_noise = standardized_garch_noise(noise)?;
    let half_alpha = alpha / 2.0;

    // Per replicate, slot 0 holds the denominator draw (Z_0^2/a)^{alpha/2} and
    // slots 1..=H+1 the numerator draws for lags 0..=H.
    let lags = max_lag + 1;
    let acc = run_chunked_mc(mc_replicates, lags + 1, seed, |rng, values| {
        let mut z = vec![0.0; max_lag + 1];
        z_noise.sample_into(rng, &mut z);
        let z0sq = z[0] * z[0];
        let den = (z0sq / a).powf(half_alpha);
        values[0] = den;
        let mut prod = 1.0;
        for h in 0..=max_lag {
            if h > 0 {
                let zprev = z[h - 1];
                prod *= alpha1 * zprev * zprev + beta1;
            }
            let zh = z[h];
            let num = (z0sq / a).min(prod * zh * zh / b).powf(half_alpha);
            values[h + 1] = num;
        }
    });
    let n = mc_replicates as f64;
    let den_mean = acc.sum[0] / n;
    if den_mean == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let den_var = (acc.sumsq[0] / n - den_mean * den_mean).max(0.0);
    let mut rho = Vec::with_capacity(lags);
    let mut std_err = Vec::with_capacity(lags);
    for h in 0..lags {
        let num_mean = acc.sum[h + 1] / n;
        let num_var = (acc.sumsq[h + 1] / n - num_mean * num_mean).max(0.0);
        let r = num_mean / den_mean;
        // Conservative delta-method error ignoring the (positive) covariance
        // between numerator and denominator from the shared draws.
        let rel = num_var / (num_mean * num_mean).max(f64::MIN_POSITIVE)
            + den_var / (den_mean * den_mean);
        rho.push(r);
        std_err.push(r * (rel / n).sqrt());
    }
    Ok(TheoreticalExtremogram {
        lags: (0..lags).collect(),
        rho,
        method: OracleMethod::MonteCarlo {
            replicates: mc_replicates,
            std_err,
        },
    })
}

/// Geometric decay bound for the squared-process extremogram: returns
/// -ln E C^kappa estimated from `mc_replicates` draws; the log-extremogram
/// eventually decays at least this fast per lag.
pub fn arch_decay_bound(
    alpha1: f64,
    beta1: f64,
    noise: &NoiseSpec,
    kappa: f64,
    mc_replicates: usize,
    seed: u64,
) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::invalid("kappa", "must be positive"));
    }
    let z_noise = standardized_garch_noise(noise)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![0.0; mc_replicates.max(1)];
    z_noise.sample_into(&mut rng, &mut z);
    let mean = z
        .iter()
        .map(|&zv| (alpha1 * zv * zv + beta1).powf(kappa))
        .sum::<f64>()
        / z.len() as f64;
    Ok(-mean.ln())
}

// ---------------------------------------------------------------------------
// Linear processes with regularly varying noise
// ---------------------------------------------------------------------------

/// Extremogram of X_t = sum_j psi_j Z_{t-j} with symmetric regularly varying
/// noise of index alpha, on A = (a, inf), B = (b, inf):
///
/// rho(h) = sum_j [min(psi_j^+, psi_{j+h}^+ a/b)^alpha
///                 + min(psi_j^-, psi_{j+h}^- a/b)^alpha] / sum_j |psi_j|^alpha.
pub fn linear_process_extremogram(
    psi: &[f64],
    alpha: f64,
    a: f64,
    b: f64,
    max_lag: usize,
) -> Result<TheoreticalExtremogram> {
    if psi.is_empty() {
        return Err(Error::invalid("psi", "coefficient sequence is empty"));
    }
    if psi.iter().any(|v| !v.is_finite()) {
        return Err(Error::DivergentCoefficients(
            "coefficients must be finite".into(),
        ));
    }
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha", "tail index must be positive"));
    }
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::invalid("a/b", "set thresholds must be positive"));
    }
    let denominator: f64 = psi.iter().map(|v| v.abs().powf(alpha)).sum();
    if denominator == 0.0 {
        return Err(Error::DivergentCoefficients(
            "all coefficients are zero".into(),
        ));
    }
    let ratio = a / b;
    let plus = |v: f64| v.max(0.0);
    let minus = |v: f64| (-v).max(0.0);
    let rho: Vec<f64> = (0..=max_lag)
        .map(|h| {
            let mut num = 0.0;
            for j in 0..psi.len() {
                let shifted = psi.get(j + h).copied().unwrap_or(0.0);
                num += plus(psi[j]).min(plus(shifted) * ratio).powf(alpha);
                num += minus(psi[j]).min(minus(shifted) * ratio).powf(alpha);
            }
            num / denominator
        })
        .collect();
    let tail = psi.last().map_or(0.0, |v| v.abs().powf(alpha)) / denominator;
    Ok(TheoreticalExtremogram::closed_form(rho, tail))
}

/// AR(1) extremogram on A = (a, inf), B = (b, inf) via its causal coefficients
/// psi_j = phi^j. Matches min(1, phi^{alpha h} (a/b)^alpha) for phi in (0, 1).
pub fn ar1_extremogram(
    phi: f64,
    alpha: f64,
    a: f64,
    b: f64,
    max_lag: usize,
) -> Result<TheoreticalExtremogram> {
    if !(phi.abs() < 1.0) {
        return Err(Error::NonCausal { modulus: 1.0 / phi.abs().max(f64::MIN_POSITIVE) });
    }
    let coefficients = if phi == 0.0 {
        vec![1.0]
    } else {
        let j = ((-42.0) / phi.abs().ln()).ceil().min(200_000.0) as usize;
        let j = j.max(max_lag + 1);
        (0..=j).map(|k| phi.powi(k as i32)).collect()
    };
    linear_process_extremogram(&coefficients, alpha, a, b, max_lag)
}

/// Discrete-time symmetric alpha-stable Ornstein-Uhlenbeck extremogram on
/// A = (a, inf), B = (b, inf): rho(h) = min(1, e^{-lambda alpha h} (a/b)^alpha).
pub fn sas_ou_extremogram(
    lambda_ou: f64,
    alpha: f64,
    a: f64,
    b: f64,
    max_lag: usize,
) -> Result<TheoreticalExtremogram> {
    if !(lambda_ou > 0.0) {
        return Err(Error::invalid("lambda_ou", "decay rate must be positive"));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::invalid("alpha", "stability index must lie in (0, 2)"));
    }
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::invalid("a/b", "set thresholds must be positive"));
    }
    let ratio_alpha = (a / b).powf(alpha);
    let rho = (0..=max_lag)
        .map(|h| (((-lambda_ou) * alpha * h as f64).exp() * ratio_alpha).min(1.0))
        .collect();
    Ok(TheoreticalExtremogram::closed_form(rho, 0.0))
}

/// Exponential filter coefficients psi_j = e^{-lambda j}, truncated once the
/// tail is negligible.
pub fn ou_coefficients(lambda_ou: f64, min_len: usize) -> Result<Vec<f64>> {
    if !(lambda_ou > 0.0) {
        return Err(Error::invalid("lambda_ou", "decay rate must be positive"));
    }
    let j = ((42.0 / lambda_ou).ceil() as usize).clamp(min_len, 2_000_000);
    Ok((0..=j).map(|k| (-lambda_ou * k as f64).exp()).collect())
}

// ---------------------------------------------------------------------------
// Band example
// ---------------------------------------------------------------------------

/// Closed-form values of the lag-1 band example for a stochastic volatility
/// model with positive noise: A = (1, inf) x (0, inf) and
/// B = {L < x1 - x2 < U, x1 >= 0, x2 >= 0} in the (X_t, X_{t+1}) plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandExampleValues {
    pub mu_a: f64,
    pub mu_b: f64,
    pub gamma_ab0: f64,
    pub gamma_bb0: f64,
}

pub fn band_example_oracle(l: f64, u: f64, alpha: f64) -> Result<BandExampleValues> {
    if !(l > 0.0 && l < 1.0) {
        return Err(Error::invalid("l", "need 0 < L < 1"));
    }
    if !(u > 1.0) {
        return Err(Error::invalid("u", "need U > 1"));
    }
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha", "tail index must be positive"));
    }
    let mu_b = l.powf(-alpha) - u.powf(-alpha);
    Ok(BandExampleValues {
        mu_a: 1.0,
        mu_b,
        gamma_ab0: 1.0 - u.powf(-alpha),
        gamma_bb0: mu_b,
    })
}
