//! Block variance estimator for exceedance counts.

use crate::config::EstimatorConfig;
use crate::error::{Error, Result};
use crate::estimators::indicators;
use crate::region::RegionSpec;
use crate::series::TimeSeries;
use crate::threshold::{select_threshold, Threshold};

/// Mean squared deviation of per-block exceedance counts around their mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceEstimate {
    pub sigma2: f64,
    /// Number of full blocks used.
    pub k: usize,
    pub block_length: usize,
}

/// Block variance of the exceedance indicators of `region`.
///
/// The series is cut into k = floor(n / b) full blocks of length
/// b = `config.block_length` (default ceil(n^0.4)); the trailing remainder is
/// discarded. sigma2 is the average of (block count - mean block count)^2.
pub fn block_variance(
    series: &TimeSeries,
    region: &RegionSpec,
    config: &EstimatorConfig,
) -> Result<VarianceEstimate> {
    let threshold = select_threshold(series, config.quantile_level)?;
    block_variance_at(series, region, &threshold, config)
}

/// As [`block_variance`], at an explicitly supplied threshold.
pub fn block_variance_at(
    series: &TimeSeries,
    region: &RegionSpec,
    threshold: &Threshold,
    config: &EstimatorConfig,
) -> Result<VarianceEstimate> {
    region.require_bounded_away()?;
    let ind = indicators(series, region, threshold)?;
    block_variance_from_indicators(&ind, config.effective_block_length(series.len()))
}

/// Block variance of a raw indicator stream.
pub fn block_variance_from_indicators(
    indicators: &[bool],
    block_length: usize,
) -> Result<VarianceEstimate> {
    if block_length == 0 {
        return Err(Error::invalid("block_length", "must be at least 1"));
    }
    let k = indicators.len() / block_length;
    if k < 2 {
        return Err(Error::TooFewBlocks { k, block_length });
    }
    let counts: Vec<f64> = (0..k)
        .map(|i| {
            indicators[i * block_length..(i + 1) * block_length]
                .iter()
                .filter(|&&b| b)
                .count() as f64
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / k as f64;
    let sigma2 = counts.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / k as f64;
    Ok(VarianceEstimate {
        sigma2,
        k,
        block_length,
    })
}
