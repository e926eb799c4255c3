use thiserror::Error;

/// Errors raised by map construction, the chaos tests and the sweep engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {x} lies outside the domain [{lo}, {hi})")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot merge an empty interval list")]
    EmptyIntervalList,

    #[error("interval list grew to {len} pieces (cap {cap}); map is probably not expanding")]
    TooManyIntervals { len: usize, cap: usize },

    #[error("sweep grids do not match: {0}")]
    GridMismatch(String),

    #[error("malformed sweep file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
