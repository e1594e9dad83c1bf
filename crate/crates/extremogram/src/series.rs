//! Time series container used by every estimator.
//!
//! Observations are d-dimensional real vectors stored row-major. Construction
//! rejects NaN and infinite entries, so downstream code never has to re-check.

use crate::error::{Error, Result};

/// A strictly ordered sequence of d-dimensional observations.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    data: Vec<f64>,
    dim: usize,
}

impl TimeSeries {
    /// Build a scalar (d = 1) series.
    pub fn from_scalar(values: Vec<f64>) -> Result<Self> {
        Self::from_flat(values, 1)
    }

    /// Build a series from a row-major flat buffer of `dim`-sized rows.
    pub fn from_flat(data: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "dimension must be positive"));
        }
        if data.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch(format!(
                "flat buffer of length {} is not a multiple of dim {}",
                data.len(),
                dim
            )));
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: bad / dim });
        }
        Ok(TimeSeries { data, dim })
    }

    /// Build a series from explicit rows, all of the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map(|r| r.len()).ok_or(Error::EmptyInput)?;
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (t, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} components, expected {}",
                    t,
                    row.len(),
                    dim
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(data, dim)
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Dimension d of each observation.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The t-th observation (0-based).
    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    /// Iterate over observations in time order.
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    /// Row-major flat view of the data.
    pub fn values(&self) -> &[f64] {
        &self.data
    }

    /// Euclidean norm of each observation.
    pub fn norms(&self) -> Vec<f64> {
        if self.dim == 1 {
            return self.data.iter().map(|v| v.abs()).collect();
        }
        self.rows()
            .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
            .collect()
    }

    /// Stack h + 1 consecutive observations into one row of dimension d(h+1).
    ///
    /// Output row t is the concatenation of rows t..=t+h; the result has
    /// length n - h.
    pub fn lagged_embed(&self, h: usize) -> Result<TimeSeries> {
        let n = self.len();
        if h >= n {
            return Err(Error::LagTooLarge { lag: h, len: n });
        }
        let d = self.dim;
        let out_dim = d * (h + 1);
        let mut data = Vec::with_capacity((n - h) * out_dim);
        for t in 0..n - h {
            data.extend_from_slice(&self.data[t * d..(t + h + 1) * d]);
        }
        Ok(TimeSeries { data, dim: out_dim })
    }

    /// Elementwise rescaled copy (used mainly by scale-invariance tests).
    pub fn scaled(&self, c: f64) -> Result<TimeSeries> {
        Self::from_flat(self.data.iter().map(|v| v * c).collect(), self.dim)
    }

    /// Time-reversed copy.
    pub fn reversed(&self) -> TimeSeries {
        let mut data = Vec::with_capacity(self.data.len());
        for t in (0..self.len()).rev() {
            data.extend_from_slice(self.row(t));
        }
        TimeSeries { data, dim: self.dim }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nan_and_infinity() {
        assert!(matches!(
            TimeSeries::from_scalar(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { row: 1 })
        ));
        assert!(matches!(
            TimeSeries::from_scalar(vec![f64::INFINITY]),
            Err(Error::NonFinite { row: 0 })
        ));
        assert!(matches!(TimeSeries::from_scalar(vec![]), Err(Error::EmptyInput)));
    }

    #[test]
    fn embed_identity_at_lag_zero() {
        let s = TimeSeries::from_scalar(vec![1.0, 2.0, 3.0]).unwrap();
        let e = s.lagged_embed(0).unwrap();
        assert_eq!(e, s);
    }

    #[test]
    fn embed_lag_one_pairs() {
        let s = TimeSeries::from_scalar(vec![1.0, 2.0, 3.0]).unwrap();
        let e = s.lagged_embed(1).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.dim(), 2);
        assert_eq!(e.row(0), &[1.0, 2.0]);
        assert_eq!(e.row(1), &[2.0, 3.0]);
    }

    #[test]
    fn embed_length_contract() {
        let s = TimeSeries::from_scalar((0..10).map(f64::from).collect()).unwrap();
        assert_eq!(s.lagged_embed(2).unwrap().len(), 8);
        assert!(matches!(
            s.lagged_embed(10),
            Err(Error::LagTooLarge { lag: 10, len: 10 })
        ));
    }

    #[test]
    fn norms_are_euclidean() {
        let s = TimeSeries::from_flat(vec![3.0, 4.0, -1.0, 0.0], 2).unwrap();
        assert_eq!(s.norms(), vec![5.0, 1.0]);
    }
}
