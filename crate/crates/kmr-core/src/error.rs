use thiserror::Error;

/// Errors produced by the registration pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: hi ({hi}) must exceed lo ({lo})")]
    InvalidDomain { lo: f64, hi: f64 },
    #[error("invalid segment count: {0} (must be >= 1)")]
    InvalidSegments(usize),
    #[error("knots are not equidistant")]
    NonEquidistantKnots,
    #[error("knot values are not strictly increasing (slope floor violated at segment {segment})")]
    NonMonotoneValues { segment: usize },
    #[error("evaluation point {t} outside warp domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },
    #[error("warp domains do not match")]
    DomainMismatch,
    #[error("knot index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dataset vectors have mismatched lengths ({times} times, {values} values)")]
    LengthMismatch { times: usize, values: usize },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("dataset times are not strictly increasing at position {0}")]
    NonIncreasingTimes(usize),
    #[error("non-finite entry at position {0}")]
    NonFiniteEntry(usize),
    #[error("dataset has fewer than 2 points")]
    TooFewPoints,
    #[error("degenerate value range: all pooled values are equal")]
    DegenerateRange,
    #[error("bandwidth must be positive and finite, got {0}")]
    InvalidBandwidth(f64),
    #[error("criterion denominator is zero")]
    ZeroDenominator,
    #[error("invalid fit configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("degenerate sample for density estimation (need >= 2 distinct values)")]
    DegenerateSample,
    #[error("pooled sample is empty")]
    DegeneratePooledSample,
    #[error("all bootstrap replicates failed")]
    AllReplicatesFailed,
    #[error("unknown mean function id: {0}")]
    UnknownMeanId(alloc::string::String),
    #[error("unknown scenario id: {0}")]
    UnknownScenario(u8),
    #[error("time spans of the two datasets do not overlap")]
    NoOverlap,
    #[error("grid size {0} too small (need >= 2)")]
    GridTooSmall(usize),
    #[error("quadrature settings require an odd node count >= 3, got {0}")]
    InvalidQuadrature(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
