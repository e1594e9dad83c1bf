//! Threshold selection: the empirical norm quantile that scales the series.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// An empirical threshold `a_m` at quantile level q, with its scaling m = 1/(1-q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub quantile_level: f64,
    /// Empirical q-quantile of the observation norms.
    pub a_m: f64,
    /// Scaling m = 1/(1 - q).
    pub m: f64,
    /// True when all norms are equal, so nothing can exceed the threshold.
    pub degenerate: bool,
}

impl Threshold {
    /// A threshold fixed by hand rather than estimated from data.
    pub fn manual(a_m: f64, m: f64) -> Result<Self> {
        if !(a_m > 0.0) || !a_m.is_finite() {
            return Err(Error::invalid("a_m", "threshold must be finite and positive"));
        }
        if !(m > 1.0) || !m.is_finite() {
            return Err(Error::invalid("m", "scaling must be finite and exceed 1"));
        }
        Ok(Threshold {
            quantile_level: 1.0 - 1.0 / m,
            a_m,
            m,
            degenerate: false,
        })
    }
}

/// Type-1 empirical quantile: the order statistic at index ceil(q * n), 1-based.
/// The tiny slack keeps products that are integers in real arithmetic (such
/// as 0.9995 * 200000) from rounding up to the next order statistic.
pub(crate) fn empirical_quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let idx = (q * n as f64 - 1e-9).ceil() as usize;
    sorted[idx.clamp(1, n) - 1]
}

/// Select the threshold `a_m` as the empirical q-quantile of the norms |X_t|.
pub fn select_threshold(series: &TimeSeries, q: f64) -> Result<Threshold> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid("q", format!("quantile level {} not in (0, 1)", q)));
    }
    let n = series.len();
    if n < 2 {
        return Err(Error::SeriesTooShort { needed: 2, got: n });
    }
    let mut norms = series.norms();
    norms.sort_unstable_by(|a, b| a.partial_cmp(b).expect("norms are finite"));
    let a_m = empirical_quantile(&norms, q);
    let degenerate = norms.first() == norms.last();
    if degenerate {
        log::warn!(
            "all observation norms equal {}; no exceedance of the threshold is possible",
            a_m
        );
    }
    if a_m <= 0.0 {
        return Err(Error::ZeroThreshold);
    }
    Ok(Threshold {
        quantile_level: q,
        a_m,
        m: 1.0 / (1.0 - q),
        degenerate,
    })
}
