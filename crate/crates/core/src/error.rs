use std::path::PathBuf;

use thiserror::Error;

use crate::pulse::Sign;
use crate::signal_io::WavError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid wave: {0}")]
    InvalidWave(String),

    #[error("degenerate signal: zero everywhere")]
    DegenerateSignal,

    #[error("no pulses found")]
    NoPulses,

    #[error("no pulses of requested sign ({0})")]
    NoPulsesOfSign(Sign),

    #[error("{frontier} frontier unavailable: wave has no {sign} pulses")]
    MissingFrontier { frontier: &'static str, sign: Sign },

    #[error("insufficient points for geometry: need at least {needed}, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("degenerate geometry: all segments horizontal")]
    AllHorizontal,

    #[error("coincident points")]
    CoincidentPoints,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error("{path}: {source}")]
    Wav {
        path: PathBuf,
        #[source]
        source: WavError,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors caused by a signal with no usable content rather than
    /// by bad input or configuration.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSignal
                | Error::NoPulses
                | Error::NoPulsesOfSign(_)
                | Error::MissingFrontier { .. }
                | Error::InsufficientPoints { .. }
        )
    }
}
