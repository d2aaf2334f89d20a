//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// A distance that must be strictly positive was zero, negative, or NaN.
    #[error("distance must be strictly positive, got {0}")]
    DegenerateDistance(f64),

    /// OFDM transform length is not a power of two.
    #[error("subcarrier count must be a nonzero power of two, got {0}")]
    UnsupportedLength(usize),

    /// Anchor constellation is collinear within tolerance, so the range
    /// equations do not pin down a unique planar position.
    #[error("access-point constellation is collinear; trilateration is ambiguous")]
    AmbiguousGeometry,

    /// Fewer than three anchors were supplied.
    #[error("trilateration needs at least 3 access points, got {0}")]
    InsufficientAnchors(usize),

    /// A measured range was nonpositive or not finite.
    #[error("range {index} must be positive and finite, got {value}")]
    InvalidRange { index: usize, value: f64 },

    /// The sweep series is shorter than the detection window demands.
    #[error("series of {len} sweeps is too short for a trailing window of {window}")]
    SeriesTooShort { len: usize, window: usize },

    /// Angle estimation was asked for, but no deviation cell clears the threshold.
    #[error("no deviation cell above threshold {0} dB")]
    NoCellAboveThreshold(f64),

    /// The measured RSS drop was nonpositive, so no range can be inferred.
    #[error("observed RSS drop must be positive, got {0} dB")]
    InvalidDrop(f64),

    /// An operation that needs at least one element received none.
    #[error("input list is empty")]
    EmptyInput,

    /// A configuration invariant was violated.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A configuration file failed to parse.
    #[error("failed to parse config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },

    /// Filesystem failure, annotated with the path involved.
    #[error("failed to {action} {path}: {source}")]
    Io {
        action: &'static str,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
