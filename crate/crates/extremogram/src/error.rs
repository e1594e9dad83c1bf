//! Error type shared by all modules of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("semantic error: {0}")]
    Semantic(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("non-finite value in row {row}")]
    NonFinite { row: usize },

    #[error("lag {lag} too large for series of length {len}")]
    LagTooLarge { lag: usize, len: usize },

    #[error("truncation {truncation} too large for series of length {len}")]
    TruncationTooLarge { truncation: usize, len: usize },

    #[error("threshold is zero; the norm quantile at this level cannot scale the series")]
    ZeroThreshold,

    #[error(
        "region is not verifiably bounded away from zero; \
         use `RegionSpec::assume_bounded_away` to override"
    )]
    NotBoundedAway,

    #[error("no exceedances of the conditioning set; lower the quantile level")]
    NoExceedances,

    #[error("zero denominator: the conditioning set has empirical measure zero")]
    ZeroDenominator,

    #[error("too few blocks: {k} block(s) of length {block_length}, need at least 2")]
    TooFewBlocks { k: usize, block_length: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("autoregressive polynomial has a root of modulus {modulus} on or inside the unit circle")]
    NonCausal { modulus: f64 },

    #[error("model is not stationary: {0}")]
    NonStationary(String),

    #[error("no positive root of the moment equation: {0}")]
    NoRoot(String),

    #[error("solver did not converge: {0}")]
    NotConverged(String),

    #[error("coefficient sequence does not converge: {0}")]
    DivergentCoefficients(String),

    #[error("unsupported region for this oracle: {0}")]
    UnsupportedRegion(String),

    #[error("empty input")]
    EmptyInput,

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error at row {row}: {message}")]
    ParseRow { row: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
