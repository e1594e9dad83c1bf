//! Estimator configuration shared by the extremogram, variance and band code.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which theoretical value a model oracle should produce as a reference line.
///
/// Confidence bands are always centered at the estimate itself; this flag only
/// selects between the extremogram evaluated at the finite threshold
/// (`PreAsymptotic`) and its large-threshold limit (`TrueValue`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Centering {
    PreAsymptotic,
    TrueValue,
}

/// How per-lag confidence bands are produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum BandMethod {
    None,
    /// Normal-approximation bands with plug-in variance estimates.
    CltPlugin { confidence_level: f64 },
    /// Null envelope from random permutations of the series.
    Permutation {
        num_permutations: usize,
        confidence_level: f64,
    },
}

impl BandMethod {
    /// Permutation bands with the default 99 replicates at 95%.
    pub fn default_permutation() -> Self {
        BandMethod::Permutation {
            num_permutations: 99,
            confidence_level: 0.95,
        }
    }
}

/// Tuning knobs of the empirical extremogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Quantile level q of the norm threshold; the scaling is m = 1/(1-q).
    pub quantile_level: f64,
    /// Largest lag H estimated.
    pub max_lag: usize,
    /// Block length for the block variance estimator and truncation lag for
    /// plug-in variance sums. `None` derives ceil(n^0.4) from the data.
    pub block_length: Option<usize>,
    pub centering: Centering,
    pub band_method: BandMethod,
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            quantile_level: 0.98,
            max_lag: 40,
            block_length: None,
            centering: Centering::PreAsymptotic,
            band_method: BandMethod::None,
            seed: 0,
        }
    }
}

impl EstimatorConfig {
    /// Block/truncation length to use on a series of length n. The slack in
    /// the ceiling keeps float noise from bumping exact powers up by one.
    pub fn effective_block_length(&self, n: usize) -> usize {
        self.block_length
            .unwrap_or_else(|| ((n as f64).powf(0.4) - 1e-9).ceil() as usize)
            .max(1)
    }

    /// Validate against a concrete series length; warns (does not fail) when
    /// the block length exceeds ceil(m).
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.quantile_level > 0.0 && self.quantile_level < 1.0) {
            return Err(Error::invalid(
                "quantile_level",
                format!("{} not in (0, 1)", self.quantile_level),
            ));
        }
        if self.max_lag >= n {
            return Err(Error::LagTooLarge {
                lag: self.max_lag,
                len: n,
            });
        }
        if let Some(r) = self.block_length {
            if r == 0 {
                return Err(Error::invalid("block_length", "must be at least 1"));
            }
        }
        let m = 1.0 / (1.0 - self.quantile_level);
        let r = self.effective_block_length(n);
        if r as f64 > m.ceil() {
            log::warn!(
                "block length {} exceeds ceil(m) = {}; variance estimates may be unstable",
                r,
                m.ceil()
            );
        }
        match self.band_method {
            BandMethod::CltPlugin { confidence_level }
            | BandMethod::Permutation {
                confidence_level, ..
            } => {
                if !(confidence_level > 0.0 && confidence_level < 1.0) {
                    return Err(Error::invalid(
                        "confidence_level",
                        format!("{} not in (0, 1)", confidence_level),
                    ));
                }
            }
            BandMethod::None => {}
        }
        if let BandMethod::Permutation {
            num_permutations, ..
        } = self.band_method
        {
            if num_permutations < 20 {
                return Err(Error::invalid(
                    "num_permutations",
                    format!("{} is below the minimum of 20", num_permutations),
                ));
            }
        }
        Ok(())
    }

    /// Copy with `block_length` resolved to its effective value, so results
    /// record the value that was actually used.
    pub fn resolved(&self, n: usize) -> EstimatorConfig {
        let mut c = self.clone();
        c.block_length = Some(self.effective_block_length(n));
        c
    }
}
