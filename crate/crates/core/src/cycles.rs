//! Pseudo-cycle location and the average waveform.
//!
//! The superior frontier anchors cut a quasi-periodic wave into pseudo-cycles.
//! Each cycle is the closed stretch between two consecutive anchors, so
//! neighbouring cycles share their boundary sample.

use crate::error::{Error, Result};
use crate::extract::FrontierPair;
use crate::wave::Wave;

#[derive(Clone, Debug, PartialEq)]
pub struct CycleSegmentation {
    pub positive_positions: Vec<usize>,
    pub negative_positions: Vec<usize>,
    /// Mean of the k-th positive and k-th negative position, up to the
    /// shorter of the two lists.
    pub midline: Vec<f64>,
}

impl CycleSegmentation {
    /// `(start, end)` sample bounds of each cycle, both inclusive.
    pub fn cycle_bounds(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.positive_positions.windows(2).map(|w| (w[0], w[1]))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AverageWaveform {
    pub length: usize,
    pub mean_cycle: Vec<f64>,
    pub cycle_count: usize,
}

pub fn segment_cycles(w: &Wave, f: &FrontierPair) -> Result<CycleSegmentation> {
    let positive_positions = f.superior.anchor_indices();
    let negative_positions = f.inferior.anchor_indices();
    for (name, positions) in [("superior", &positive_positions), ("inferior", &negative_positions)] {
        if positions.len() < 2 {
            return Err(Error::InvalidWave(format!(
                "{name} frontier has {} anchors, need at least 2",
                positions.len()
            )));
        }
        if positions.last().is_some_and(|&p| p >= w.len()) {
            return Err(Error::InvalidWave(format!(
                "{name} frontier anchors exceed wave length {}",
                w.len()
            )));
        }
    }
    let midline = positive_positions
        .iter()
        .zip(&negative_positions)
        .map(|(&p, &n)| (p + n) as f64 / 2.0)
        .collect();
    Ok(CycleSegmentation {
        positive_positions,
        negative_positions,
        midline,
    })
}

/// Samples `samples[start..=end]` at `len` evenly spaced positions spanning
/// the closed interval, by linear interpolation.
fn resample(samples: &[f64], start: usize, end: usize, len: usize) -> impl Iterator<Item = f64> + '_ {
    let span = (end - start) as f64;
    let step = span / (len - 1) as f64;
    (0..len).map(move |j| {
        if j == len - 1 {
            return samples[end];
        }
        let pos = j as f64 * step;
        let k = pos.floor() as usize;
        let frac = pos - k as f64;
        let a = samples[start + k];
        if frac == 0.0 {
            a
        } else {
            a + (samples[start + k + 1] - a) * frac
        }
    })
}

/// Resamples every cycle to a common length and averages them pointwise.
///
/// The common length is the rounded mean number of samples per cycle.
pub fn average_waveform(w: &Wave, seg: &CycleSegmentation) -> Result<AverageWaveform> {
    let cycles = seg.positive_positions.len().saturating_sub(1);
    if cycles == 0 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            got: seg.positive_positions.len(),
        });
    }
    if seg.positive_positions.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidWave("cycle boundaries not strictly increasing".into()));
    }
    if seg.positive_positions[cycles] >= w.len() {
        return Err(Error::InvalidWave("cycle boundary beyond end of wave".into()));
    }

    let total_samples: usize = seg.cycle_bounds().map(|(s, e)| e - s + 1).sum();
    let length = ((total_samples as f64 / cycles as f64).round() as usize).max(2);

    let mut mean_cycle = vec![0.0; length];
    for (start, end) in seg.cycle_bounds() {
        for (acc, v) in mean_cycle.iter_mut().zip(resample(w.samples(), start, end, length)) {
            *acc += v;
        }
    }
    for v in &mut mean_cycle {
        *v /= cycles as f64;
    }
    Ok(AverageWaveform {
        length,
        mean_cycle,
        cycle_count: cycles,
    })
}
