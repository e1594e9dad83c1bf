//! Estimation and inference for serial extremal dependence in stationary
//! heavy-tailed time series.
//!
//! The central object is the extremogram: the limiting conditional probability
//! that an observation lands in an extreme set B at lag h given that the
//! series visited an extreme set A at lag 0. The crate provides
//!
//! - the empirical extremogram and exceedance measures with block variance
//!   estimates, normal-approximation bands and permutation null envelopes
//!   ([`estimators`]),
//! - extremal autocovariances, the periodogram of exceedance indicators and a
//!   lag-window spectral density estimator ([`spectral`]),
//! - simulators and closed-form / Monte Carlo extremogram oracles for model
//!   families with known tail behavior: stochastic volatility, GARCH(1,1) /
//!   ARCH(1), ARMA and symmetric alpha-stable linear processes ([`models`]),
//! - a small DSL for describing extremal regions ([`region`]).

// Parameter validations use `!(x > 0.0)` so that NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod estimators;
pub mod models;
pub mod region;
pub mod series;
pub mod spectral;
pub mod threshold;

pub use config::{BandMethod, Centering, EstimatorConfig};
pub use error::{Error, Result};
pub use region::RegionSpec;
pub use series::TimeSeries;
pub use threshold::{select_threshold, Threshold};
