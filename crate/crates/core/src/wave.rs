//! Discrete signal representation and synthetic test signals.
//!
//! Time is carried as a sample index throughout the crate. The frame rate is
//! only needed to convert to seconds and to design the baseline filters.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// A finite, real-valued discrete signal sampled at `fps` frames per second.
///
/// Construction validates that the signal is nonempty, that every sample is
/// finite and that the frame rate is positive. The samples are never mutated
/// afterwards.
#[derive(Clone, Debug, PartialEq)]
pub struct Wave {
    samples: Vec<f64>,
    fps: u32,
}

impl Wave {
    pub fn new(samples: Vec<f64>, fps: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidWave("no samples".into()));
        }
        if fps == 0 {
            return Err(Error::InvalidWave("frame rate must be positive".into()));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidWave(format!(
                "sample {i} is not finite ({})",
                samples[i]
            )));
        }
        Ok(Wave { samples, fps })
    }

    /// Builds a wave by evaluating `f` at every sample index.
    pub fn from_fn(n: usize, fps: u32, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Wave::new((0..n).map(f).collect(), fps)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn fps(&self) -> u32 {
        self.fps
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.fps as f64
    }

    /// Largest absolute sample value.
    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, s| m.max(s.abs()))
    }

    /// Multiplies every sample by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Wave::new(self.samples.iter().map(|s| s * factor).collect(), self.fps)
    }

    pub fn negated(&self) -> Self {
        Wave {
            samples: self.samples.iter().map(|s| -s).collect(),
            fps: self.fps,
        }
    }

    /// Divides the wave by its absolute global maximum so that the result
    /// peaks at exactly 1.
    pub fn normalized(&self) -> Result<Self> {
        normalize_wave(self)
    }
}

/// Divides every sample by the absolute global maximum of the wave.
///
/// The result has a peak magnitude of exactly 1, so normalizing twice is the
/// same as normalizing once.
pub fn normalize_wave(w: &Wave) -> Result<Wave> {
    let peak = w.peak();
    if peak == 0.0 {
        return Err(Error::DegenerateSignal);
    }
    Ok(Wave {
        samples: w.samples.iter().map(|s| s / peak).collect(),
        fps: w.fps,
    })
}

/// Evaluates a polynomial given in ascending coefficient order.
pub fn eval_poly(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Sinusoidal carrier modulated by a polynomial envelope.
///
/// Sample `i` is `E(i/n) * sin(2π * cycles * i/n)` where `E` is the polynomial
/// with ascending `envelope_coeffs`. Since `E` is known, the result doubles as
/// ground truth for envelope recovery.
pub fn synth_am_sinusoid(
    carrier_cycles: f64,
    envelope_coeffs: &[f64],
    n: usize,
    fps: u32,
) -> Result<Wave> {
    if n < 2 {
        return Err(Error::InvalidWave(format!("need at least 2 samples, got {n}")));
    }
    if !(carrier_cycles > 0.0 && carrier_cycles.is_finite()) {
        return Err(Error::InvalidWave(format!(
            "carrier cycles must be positive, got {carrier_cycles}"
        )));
    }
    if envelope_coeffs.is_empty() {
        return Err(Error::InvalidWave("empty envelope polynomial".into()));
    }
    Wave::from_fn(n, fps, |i| {
        let t = i as f64 / n as f64;
        eval_poly(envelope_coeffs, t) * (TAU * carrier_cycles * t).sin()
    })
}

/// Adds white Gaussian noise with standard deviation `sigma_fraction` times
/// the peak magnitude of `w`. Deterministic for a given seed.
pub fn add_gaussian_noise(w: &Wave, sigma_fraction: f64, seed: u64) -> Result<Wave> {
    let sigma = sigma_fraction * w.peak();
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidConfig(format!("noise level {sigma_fraction}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Wave::new(
        w.samples
            .iter()
            .map(|s| s + normal.sample(&mut rng))
            .collect(),
        w.fps,
    )
}
