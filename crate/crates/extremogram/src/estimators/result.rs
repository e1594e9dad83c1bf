//! Extremogram result container and its CSV/JSON serializations.

use serde::{Deserialize, Serialize};

use crate::config::{Centering, EstimatorConfig};
use crate::error::{Error, Result};

/// Per-lag empirical extremogram with optional inference artifacts.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremogramResult {
    /// Lags 0..=H.
    pub lags: Vec<usize>,
    /// `rho[h] = numerator_counts[h] / denominator_count`.
    pub rho: Vec<f64>,
    /// Joint exceedance counts per lag.
    pub numerator_counts: Vec<u64>,
    /// Count of conditioning-set exceedances (full-sample sum).
    pub denominator_count: u64,
    /// Plug-in variance of `rho[h]`, when bands were computed via the CLT.
    pub variance: Option<Vec<f64>>,
    pub band_lo: Option<Vec<f64>>,
    pub band_hi: Option<Vec<f64>>,
    /// Level the extremogram would fluctuate around for independent data:
    /// the empirical marginal probability of the target set.
    pub baseline: f64,
    pub centering_used: Centering,
    /// Configuration with the block length resolved to the value used.
    pub config: EstimatorConfig,
    /// Non-fatal diagnostics accumulated during estimation.
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CountsDoc {
    numerator: Vec<u64>,
    denominator: u64,
}

/// JSON document layout; field names and order are part of the interface.
#[derive(Serialize, Deserialize)]
struct ResultDoc {
    lags: Vec<usize>,
    rho: Vec<f64>,
    band_lo: Option<Vec<f64>>,
    band_hi: Option<Vec<f64>>,
    baseline: f64,
    counts: CountsDoc,
    config: EstimatorConfig,
}

impl ExtremogramResult {
    pub fn to_json(&self) -> String {
        let doc = ResultDoc {
            lags: self.lags.clone(),
            rho: self.rho.clone(),
            band_lo: self.band_lo.clone(),
            band_hi: self.band_hi.clone(),
            baseline: self.baseline,
            counts: CountsDoc {
                numerator: self.numerator_counts.clone(),
                denominator: self.denominator_count,
            },
            config: self.config.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("result serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ResultDoc = serde_json::from_str(text)
            .map_err(|e| Error::invalid("json", e.to_string()))?;
        Ok(ExtremogramResult {
            lags: doc.lags,
            rho: doc.rho,
            numerator_counts: doc.counts.numerator,
            denominator_count: doc.counts.denominator,
            variance: None,
            band_lo: doc.band_lo,
            band_hi: doc.band_hi,
            baseline: doc.baseline,
            centering_used: doc.config.centering,
            config: doc.config,
            warnings: Vec::new(),
        })
    }

    /// CSV with columns `lag,rho,lo,hi,baseline`; absent bands are empty fields.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lag,rho,lo,hi,baseline\n");
        for (i, &lag) in self.lags.iter().enumerate() {
            let lo = self
                .band_lo
                .as_ref()
                .map_or(String::new(), |v| format!("{}", v[i]));
            let hi = self
                .band_hi
                .as_ref()
                .map_or(String::new(), |v| format!("{}", v[i]));
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                lag, self.rho[i], lo, hi, self.baseline
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExtremogramResult {
        ExtremogramResult {
            lags: vec![0, 1, 2],
            rho: vec![1.0, 0.5, 0.25],
            numerator_counts: vec![4, 2, 1],
            denominator_count: 4,
            variance: None,
            band_lo: Some(vec![0.0, 0.1, 0.05]),
            band_hi: Some(vec![1.0, 0.9, 0.45]),
            baseline: 0.02,
            centering_used: Centering::PreAsymptotic,
            config: EstimatorConfig::default().resolved(100),
            warnings: Vec::new(),
        }
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let written = sample().to_json();
        let reread = ExtremogramResult::from_json(&written).unwrap();
        assert_eq!(reread.to_json(), written);
    }

    #[test]
    fn csv_shape() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "lag,rho,lo,hi,baseline");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,1,"));
    }
}
