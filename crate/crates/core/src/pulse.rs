//! Pulse segmentation at zero crossings.
//!
//! A pulse is a maximal run of samples sharing the same nonzero sign. Exact
//! zeros belong to no pulse and do not split a run: only a change of sign
//! starts a new pulse, so consecutive pulses always alternate in sign. Each
//! pulse is reduced to its extremum, which is the only sample of the pulse
//! that can touch the envelope.

use std::fmt;

use crate::error::{Error, Result};
use crate::wave::Wave;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(x: f64) -> Option<Sign> {
        if x > 0.0 {
            Some(Sign::Positive)
        } else if x < 0.0 {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        })
    }
}

/// The extremum of one pulse: where it sits, how large it is and which way
/// it points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremaPoint {
    pub index: usize,
    pub magnitude: f64,
    pub sign: Sign,
}

impl ExtremaPoint {
    /// The signed sample value this point was taken from.
    pub fn value(&self) -> f64 {
        self.sign.as_f64() * self.magnitude
    }
}

/// Extrema of a wave's pulses in increasing index order.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseSet {
    points: Vec<ExtremaPoint>,
    source_length: usize,
}

impl PulseSet {
    /// Wraps already-segmented points, checking ordering, bounds and
    /// magnitudes.
    pub fn new(points: Vec<ExtremaPoint>, source_length: usize) -> Result<Self> {
        for p in &points {
            if p.index >= source_length {
                return Err(Error::InvalidWave(format!(
                    "point index {} outside wave of length {source_length}",
                    p.index
                )));
            }
            if !(p.magnitude > 0.0 && p.magnitude.is_finite()) {
                return Err(Error::InvalidWave(format!(
                    "point at {} has magnitude {}",
                    p.index, p.magnitude
                )));
            }
        }
        if points.windows(2).any(|w| w[0].index >= w[1].index) {
            return Err(Error::InvalidWave("points not strictly increasing in index".into()));
        }
        Ok(PulseSet {
            points,
            source_length,
        })
    }

    pub fn points(&self) -> &[ExtremaPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }
}

/// Splits `w` into pulses and keeps the extremum of each one.
///
/// Ties inside a pulse resolve to the first sample reaching the maximum
/// magnitude. Partial pulses at either end of the wave are kept.
pub fn segment_pulses(w: &Wave) -> Result<PulseSet> {
    let mut points: Vec<ExtremaPoint> = Vec::new();
    for (index, &s) in w.samples().iter().enumerate() {
        let Some(sign) = Sign::of(s) else { continue };
        let magnitude = s.abs();
        match points.last_mut() {
            Some(last) if last.sign == sign => {
                if magnitude > last.magnitude {
                    last.index = index;
                    last.magnitude = magnitude;
                }
            }
            _ => points.push(ExtremaPoint {
                index,
                magnitude,
                sign,
            }),
        }
    }
    if points.is_empty() {
        return Err(Error::NoPulses);
    }
    Ok(PulseSet {
        points,
        source_length: w.len(),
    })
}

/// Keeps only the pulses of one sign, preserving order.
pub fn filter_by_sign(ps: &PulseSet, sign: Sign) -> Result<PulseSet> {
    let points: Vec<ExtremaPoint> = ps.points.iter().copied().filter(|p| p.sign == sign).collect();
    if points.is_empty() {
        return Err(Error::NoPulsesOfSign(sign));
    }
    Ok(PulseSet {
        points,
        source_length: ps.source_length,
    })
}
