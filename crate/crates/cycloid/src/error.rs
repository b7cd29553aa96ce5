//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, analysis and simulation.
#[derive(Debug, Error)]
pub enum CycloidError {
    #[error("parameter {name} must be a positive integer, got {value}")]
    NonPositiveParam { name: &'static str, value: i64 },

    #[error("parameter {name}={value} exceeds the maximum {max}")]
    ParamTooLarge {
        name: &'static str,
        value: i64,
        max: i64,
    },

    #[error("area {area} exceeds the configured cap {cap}")]
    AreaCapExceeded { area: i64, cap: i64 },

    #[error("node {0} is not part of the net")]
    UnknownNode(String),

    #[error("transition {0} is not enabled in the given marking")]
    NotEnabled(String),

    #[error("shearing guard violated: {0}")]
    ShearGuard(String),

    #[error("invalid marking: {0}")]
    InvalidMarking(String),

    #[error("invalid net description: {0}")]
    InvalidNet(String),

    #[error("no directed cycle found in the transition graph")]
    NoCycle,

    #[error("minimal-cycle methods disagree: {0}")]
    MethodDisagreement(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("invalid {name}: {value}")]
    InvalidEnv { name: &'static str, value: String },
}

pub type Result<T> = std::result::Result<T, CycloidError>;
