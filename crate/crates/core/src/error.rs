//! Error type shared by waveform construction, AF evaluation, and campaigns.

use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration value violates a documented constraint.
    #[error("configuration error: {0}")]
    Config(String),

    /// An input vector has the wrong length for the requested operation.
    #[error("{what}: expected length {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// The signal has no energy, so a peak-normalized surface is undefined.
    #[error("signal is identically zero; ambiguity surface has no peak")]
    ZeroSignal,

    /// Cut axes disagree, so elementwise combination is undefined.
    #[error("cut axes differ; cannot combine cuts")]
    AxisMismatch,

    /// Retaining a full surface per realization is only allowed for a single one.
    #[error("full-surface retention requires a single realization, got {realizations}")]
    SurfaceRetention { realizations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
