//! Empirical exceedance measures, the empirical extremogram, and its
//! confidence bands.

mod bands;
mod result;
mod variance;

pub use bands::{clt_bands, clt_bands_at, permutation_bands, permutation_bands_at, BandPair};
pub use result::ExtremogramResult;
pub use variance::{block_variance, block_variance_at, block_variance_from_indicators, VarianceEstimate};

use crate::config::{BandMethod, EstimatorConfig};
use crate::error::{Error, Result};
use crate::region::RegionSpec;
use crate::series::TimeSeries;
use crate::threshold::{select_threshold, Threshold};

/// Empirical exceedance measure of a region: value = (m/n) * count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceedanceEstimate {
    pub value: f64,
    pub count: u64,
    pub m: f64,
    pub n: usize,
}

/// Exceedance indicators I{X_t / a_m in region} for the whole series.
pub fn indicators(
    series: &TimeSeries,
    region: &RegionSpec,
    threshold: &Threshold,
) -> Result<Vec<bool>> {
    region.check_dim(series.dim())?;
    let inv = 1.0 / threshold.a_m;
    let d = series.dim();
    if d == 1 {
        return Ok(series
            .values()
            .iter()
            .map(|&x| region.contains(&[x * inv]))
            .collect());
    }
    let mut scaled = vec![0.0; d];
    Ok(series
        .rows()
        .map(|row| {
            for (s, &x) in scaled.iter_mut().zip(row) {
                *s = x * inv;
            }
            region.contains(&scaled)
        })
        .collect())
}

/// Estimate the limit measure of `region` by the scaled exceedance frequency.
pub fn exceedance_measure(
    series: &TimeSeries,
    region: &RegionSpec,
    threshold: &Threshold,
) -> Result<ExceedanceEstimate> {
    region.require_bounded_away()?;
    let ind = indicators(series, region, threshold)?;
    let count = ind.iter().filter(|&&b| b).count() as u64;
    let n = series.len();
    Ok(ExceedanceEstimate {
        value: threshold.m / n as f64 * count as f64,
        count,
        m: threshold.m,
        n,
    })
}

/// Ratio of two exceedance measures, estimating mu(D) / mu(C).
pub fn ratio_estimator(
    series: &TimeSeries,
    region_c: &RegionSpec,
    region_d: &RegionSpec,
    threshold: &Threshold,
) -> Result<f64> {
    let c = exceedance_measure(series, region_c, threshold)?;
    let d = exceedance_measure(series, region_d, threshold)?;
    if c.count == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(d.value / c.value)
}

/// Joint exceedance counts sum_{t=1}^{n-h} I{A at t} I{B at t+h} for h = 0..=H.
pub(crate) fn joint_counts(ia: &[bool], ib: &[bool], max_lag: usize) -> Vec<u64> {
    let n = ia.len();
    (0..=max_lag)
        .map(|h| {
            (0..n - h)
                .filter(|&t| ia[t] && ib[t + h])
                .count() as u64
        })
        .collect()
}

/// The empirical extremogram of sets A and B up to `config.max_lag`.
///
/// The threshold is the empirical `config.quantile_level` norm quantile.
/// Bands are attached according to `config.band_method`.
pub fn empirical_extremogram(
    series: &TimeSeries,
    region_a: &RegionSpec,
    region_b: &RegionSpec,
    config: &EstimatorConfig,
) -> Result<ExtremogramResult> {
    let threshold = select_threshold(series, config.quantile_level)?;
    empirical_extremogram_at(series, region_a, region_b, &threshold, config)
}

/// As [`empirical_extremogram`], but at an explicitly supplied threshold.
pub fn empirical_extremogram_at(
    series: &TimeSeries,
    region_a: &RegionSpec,
    region_b: &RegionSpec,
    threshold: &Threshold,
    config: &EstimatorConfig,
) -> Result<ExtremogramResult> {
    config.validate(series.len())?;
    region_a.require_bounded_away()?;
    region_b.require_bounded_away()?;

    let mut result = raw_extremogram(series, region_a, region_b, threshold, config)?;
    match config.band_method {
        BandMethod::None => {}
        BandMethod::CltPlugin { .. } => {
            result = bands::clt_bands_at(result, series, region_a, region_b, threshold, config)?;
        }
        BandMethod::Permutation { .. } => {
            let pair =
                bands::permutation_bands_at(series, region_a, region_b, threshold, config)?;
            result.band_lo = Some(pair.lo);
            result.band_hi = Some(pair.hi);
        }
    }
    Ok(result)
}

/// Extremogram ratios and counts without any band machinery.
fn raw_extremogram(
    series: &TimeSeries,
    region_a: &RegionSpec,
    region_b: &RegionSpec,
    threshold: &Threshold,
    config: &EstimatorConfig,
) -> Result<ExtremogramResult> {
    let n = series.len();
    let ia = indicators(series, region_a, threshold)?;
    let ib = indicators(series, region_b, threshold)?;

    // Denominator sums over all n observations; numerators stop at n - h.
    let denominator_count = ia.iter().filter(|&&b| b).count() as u64;
    if denominator_count == 0 {
        return Err(Error::NoExceedances);
    }
    let count_b = ib.iter().filter(|&&b| b).count() as u64;
    let numerator_counts = joint_counts(&ia, &ib, config.max_lag);
    let rho: Vec<f64> = numerator_counts
        .iter()
        .map(|&c| c as f64 / denominator_count as f64)
        .collect();

    let mut warnings = Vec::new();
    if threshold.degenerate {
        warnings.push("threshold is degenerate: all observation norms are equal".into());
    }
    Ok(ExtremogramResult {
        lags: (0..=config.max_lag).collect(),
        rho,
        numerator_counts,
        denominator_count,
        variance: None,
        band_lo: None,
        band_hi: None,
        baseline: count_b as f64 / n as f64,
        centering_used: config.centering,
        config: config.resolved(n),
        warnings,
    })
}

/// The four extremograms of the pair (A, B).
#[derive(Debug, Clone)]
pub struct CrossExtremogram {
    pub aa: ExtremogramResult,
    pub ab: ExtremogramResult,
    pub ba: ExtremogramResult,
    pub bb: ExtremogramResult,
}

/// All four conditional extremograms AA, AB, BA and BB. Not symmetric in A
/// and B in general.
pub fn cross_extremogram_matrix(
    series: &TimeSeries,
    region_a: &RegionSpec,
    region_b: &RegionSpec,
    config: &EstimatorConfig,
) -> Result<CrossExtremogram> {
    Ok(CrossExtremogram {
        aa: empirical_extremogram(series, region_a, region_a, config)?,
        ab: empirical_extremogram(series, region_a, region_b, config)?,
        ba: empirical_extremogram(series, region_b, region_a, config)?,
        bb: empirical_extremogram(series, region_b, region_b, config)?,
    })
}

/// Serial tail dependence coefficients: the extremogram with A = B = (1, inf)
/// on the threshold scale. Scalar series only.
pub fn tail_dependence(series: &TimeSeries, config: &EstimatorConfig) -> Result<ExtremogramResult> {
    if series.dim() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "tail dependence is defined for scalar series, got dimension {}",
            series.dim()
        )));
    }
    let region = RegionSpec::interval(1.0, f64::INFINITY)?;
    empirical_extremogram(series, &region, &region, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::EstimatorConfig;

    fn config_with_lags(h: usize) -> EstimatorConfig {
        EstimatorConfig {
            max_lag: h,
            // keep thresholds meaningful on the tiny test series
            quantile_level: 0.5,
            ..EstimatorConfig::default()
        }
    }

    #[test]
    fn hand_counted_extremogram() {
        // Exceedances of (1, inf) on x / 5: at t = 0, 2, 4.
        let s = TimeSeries::from_scalar(vec![10.0, 0.0, 12.0, 0.0, 11.0, 0.0]).unwrap();
        let th = Threshold::manual(5.0, 2.0).unwrap();
        let a = RegionSpec::parse("(1,inf)").unwrap();
        let r = empirical_extremogram_at(&s, &a, &a, &th, &config_with_lags(3)).unwrap();
        assert_eq!(r.denominator_count, 3);
        assert_eq!(r.numerator_counts, vec![3, 0, 2, 0]);
        assert_eq!(r.rho[0], 1.0);
        assert_eq!(r.rho[1], 0.0);
        assert!((r.rho[2] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_cross_counts() {
        let s = TimeSeries::from_scalar(vec![2.0, -2.0, 0.0, 0.0]).unwrap();
        let th = Threshold::manual(1.0, 2.0).unwrap();
        let a = RegionSpec::parse("(1,inf)").unwrap();
        let b = RegionSpec::parse("(-inf,-1)").unwrap();
        let cfg = config_with_lags(1);
        let ab = empirical_extremogram_at(&s, &a, &b, &th, &cfg).unwrap();
        let ba = empirical_extremogram_at(&s, &b, &a, &th, &cfg).unwrap();
        assert_eq!(ab.rho[1], 1.0);
        assert_eq!(ba.rho[1], 0.0);
    }

    #[test]
    fn single_exceedance_gives_zero_at_positive_lags() {
        let s = TimeSeries::from_scalar(vec![0.1, 9.0, 0.2, 0.3, 0.1, 0.2]).unwrap();
        let th = Threshold::manual(1.0, 2.0).unwrap();
        let a = RegionSpec::parse("(1,inf)").unwrap();
        let r = empirical_extremogram_at(&s, &a, &a, &th, &config_with_lags(4)).unwrap();
        assert_eq!(r.denominator_count, 1);
        assert_eq!(r.rho[0], 1.0);
        for h in 1..=4 {
            assert_eq!(r.rho[h], 0.0);
        }
    }

    #[test]
    fn subset_target_pins_lag_zero_at_one() {
        // A inside B forces every A-exceedance to be a joint hit at lag 0.
        let s = TimeSeries::from_scalar(vec![0.5, 3.0, 1.5, 7.0, 0.2, 4.0]).unwrap();
        let th = Threshold::manual(1.0, 2.0).unwrap();
        let a = RegionSpec::parse("(2,inf)").unwrap();
        let b = RegionSpec::parse("(1,inf)").unwrap();
        let r = empirical_extremogram_at(&s, &a, &b, &th, &config_with_lags(2)).unwrap();
        assert_eq!(r.rho[0], 1.0);
    }

    #[test]
    fn no_exceedances_is_an_error() {
        let s = TimeSeries::from_scalar(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let th = Threshold::manual(10.0, 2.0).unwrap();
        let a = RegionSpec::parse("(1,inf)").unwrap();
        assert!(matches!(
            empirical_extremogram_at(&s, &a, &a, &th, &config_with_lags(1)),
            Err(Error::NoExceedances)
        ));
    }

    #[test]
    fn unbounded_region_rejected_without_override() {
        let s = TimeSeries::from_scalar(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let a = RegionSpec::parse("(0,inf)").unwrap();
        let cfg = config_with_lags(1);
        assert!(matches!(
            empirical_extremogram(&s, &a, &a, &cfg),
            Err(Error::NotBoundedAway)
        ));
        let a = a.assume_bounded_away();
        assert!(empirical_extremogram(&s, &a, &a, &cfg).is_ok());
    }

    #[test]
    fn zeros_have_zero_exceedance_measure() {
        let s = TimeSeries::from_scalar(vec![0.0, 0.0, 0.0, 0.0]).unwrap();
        let th = Threshold::manual(1.0, 50.0).unwrap();
        let c = RegionSpec::parse("(1,inf)").unwrap();
        let e = exceedance_measure(&s, &c, &th).unwrap();
        assert_eq!(e.count, 0);
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn ratio_estimator_identities() {
        let s = TimeSeries::from_scalar(vec![0.5, 3.0, 1.5, 7.0, 0.2, 4.0]).unwrap();
        let th = Threshold::manual(1.0, 2.0).unwrap();
        let c = RegionSpec::parse("(1,inf)").unwrap();
        assert_eq!(ratio_estimator(&s, &c, &c, &th).unwrap(), 1.0);
        // subset of C has ratio in [0, 1]
        let d = RegionSpec::parse("(5,inf)").unwrap();
        let r = ratio_estimator(&s, &c, &d, &th).unwrap();
        assert!((0.0..=1.0).contains(&r));
        // empty denominator
        let empty = RegionSpec::parse("(100,inf)").unwrap();
        assert!(matches!(
            ratio_estimator(&s, &empty, &c, &th),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn tail_dependence_matches_explicit_region() {
        let s = TimeSeries::from_scalar(vec![5.0, 0.0, 6.0, 0.0, 7.0, 0.0, 8.0, 1.0]).unwrap();
        let cfg = config_with_lags(3);
        let td = tail_dependence(&s, &cfg).unwrap();
        let a = RegionSpec::parse("(1,inf)").unwrap();
        let direct = empirical_extremogram(&s, &a, &a, &cfg).unwrap();
        assert_eq!(td.rho, direct.rho);
        assert_eq!(td.numerator_counts, direct.numerator_counts);
        assert_eq!(td.rho[0], 1.0);
    }

    #[test]
    fn cross_matrix_with_equal_sets_is_uniform() {
        let s = TimeSeries::from_scalar(vec![5.0, 0.0, 6.0, 0.0, 7.0, 0.0, 8.0, 1.0]).unwrap();
        let a = RegionSpec::parse("(1,inf)").unwrap();
        let cfg = config_with_lags(2);
        let cross = cross_extremogram_matrix(&s, &a, &a, &cfg).unwrap();
        assert_eq!(cross.aa.rho, cross.ab.rho);
        assert_eq!(cross.aa.rho, cross.ba.rho);
        assert_eq!(cross.aa.rho, cross.bb.rho);
    }
}
