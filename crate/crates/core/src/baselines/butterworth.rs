//! Second-order Butterworth low-pass, applied forward and backward.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Normalized biquad coefficients (`a0 = 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Biquad {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Biquad {
    /// Order-2 Butterworth low-pass via the bilinear transform with
    /// frequency prewarping.
    pub fn butterworth_lowpass(cutoff_hz: f64, fps: f64) -> Result<Self> {
        if !(cutoff_hz > 0.0 && cutoff_hz < fps / 2.0) {
            return Err(Error::InvalidConfig(format!(
                "cutoff {cutoff_hz} Hz must lie in (0, {}) for {fps} fps",
                fps / 2.0
            )));
        }
        let k = (PI * cutoff_hz / fps).tan();
        let k2 = k * k;
        let norm = 1.0 / (1.0 + SQRT_2 * k + k2);
        let a1 = 2.0 * (k2 - 1.0) * norm;
        let a2 = (1.0 - SQRT_2 * k + k2) * norm;
        // Analytically b0 = k² * norm; taking it from the rounded feedback
        // coefficients keeps the DC gain at one for very low cutoffs.
        let b0 = (1.0 + a1 + a2) / 4.0;
        Ok(Biquad {
            b0,
            b1: 2.0 * b0,
            b2: b0,
            a1,
            a2,
        })
    }

    pub fn dc_gain(&self) -> f64 {
        (self.b0 + self.b1 + self.b2) / (1.0 + self.a1 + self.a2)
    }

    /// Runs the filter in transposed direct form II, starting from the
    /// steady state for a constant input equal to `x[0]`.
    fn run(&self, x: &mut [f64]) {
        let Some(&x0) = x.first() else { return };
        let y0 = x0 * self.dc_gain();
        let mut z2 = self.b2 * x0 - self.a2 * y0;
        let mut z1 = self.b1 * x0 - self.a1 * y0 + z2;
        for v in x.iter_mut() {
            let input = *v;
            let y = self.b0 * input + z1;
            z1 = self.b1 * input - self.a1 * y + z2;
            z2 = self.b2 * input - self.a2 * y;
            *v = y;
        }
    }
}

/// Zero-phase filtering: odd extension at both ends, then a forward and a
/// backward pass.
pub fn filtfilt(filter: &Biquad, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let pad = 9.min(n - 1);
    let (first, last) = (x[0], x[n - 1]);
    let mut buf = Vec::with_capacity(n + 2 * pad);
    buf.extend((1..=pad).rev().map(|k| 2.0 * first - x[k]));
    buf.extend_from_slice(x);
    buf.extend((1..=pad).map(|k| 2.0 * last - x[n - 1 - k]));

    filter.run(&mut buf);
    buf.reverse();
    filter.run(&mut buf);
    buf.reverse();
    buf.drain(..pad);
    buf.truncate(n);
    buf
}
