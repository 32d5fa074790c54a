//! Parameter-free temporal envelope extraction.
//!
//! The extrema of each pulse of a wave are normalized, an average curvature
//! radius is derived from their successive differences, and a circle of that
//! radius rolled over the points from above selects the envelope anchors.
//! Linear interpolation between anchors gives the envelope. Classical
//! detectors are provided in [`baselines`] for comparison.

pub mod baselines;
pub mod cli;
pub mod cycles;
pub mod error;
pub mod extract;
pub mod geometry;
pub mod metrics;
pub mod pulse;
pub mod signal_io;
pub mod wave;

pub use error::{Error, Result};
pub use extract::{
    extract_envelope, extract_frontiers, interpolate_anchors, recover_carrier, retrieve_envelope,
    Anchor, CarrierResult, EnvelopeResult, FrontierPair,
};
pub use wave::Wave;
