//! Classical envelope detectors used for comparison: polynomial smoothing,
//! low-pass filtering and the analytic-signal modulus. All of them work on
//! the rectified wave and need hand-picked parameters.

mod butterworth;
mod hilbert;
mod savgol;

use std::fmt;
use std::str::FromStr;

pub use butterworth::{filtfilt, Biquad};
pub use hilbert::analytic_signal;
pub use savgol::{savgol_filter, smoothing_coefficients};

use crate::error::{Error, Result};
use crate::wave::Wave;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaselineMethod {
    Smoothing,
    Lowpass,
    Hilbert,
}

impl BaselineMethod {
    pub const ALL: [BaselineMethod; 3] = [
        BaselineMethod::Smoothing,
        BaselineMethod::Lowpass,
        BaselineMethod::Hilbert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaselineMethod::Smoothing => "smoothing",
            BaselineMethod::Lowpass => "lowpass",
            BaselineMethod::Hilbert => "hilbert",
        }
    }
}

impl fmt::Display for BaselineMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaselineMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BaselineMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown baseline method {s:?}")))
    }
}

/// Where rectification happens in the analytic-signal detector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HilbertOrder {
    /// Low-pass, rectify, then take the modulus of the analytic signal of
    /// the rectified wave.
    #[default]
    RectifyThenTransform,
    /// Low-pass, then take the modulus of the analytic signal of the
    /// filtered wave.
    TransformThenModulus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaselineConfig {
    pub method: BaselineMethod,
    pub sg_window: usize,
    pub sg_degree: usize,
    pub butter_order: usize,
    pub butter_cutoff_hz: f64,
    pub hilbert_order: HilbertOrder,
}

impl BaselineConfig {
    /// Reference configuration of each method: a 3001-sample cubic
    /// smoother, a 10 Hz low-pass and a 100 Hz pre-filter for the
    /// analytic-signal detector.
    pub fn for_method(method: BaselineMethod) -> Self {
        BaselineConfig {
            method,
            sg_window: 3001,
            sg_degree: 3,
            butter_order: 2,
            butter_cutoff_hz: match method {
                BaselineMethod::Hilbert => 100.0,
                _ => 10.0,
            },
            hilbert_order: HilbertOrder::default(),
        }
    }

    pub fn smoothing() -> Self {
        Self::for_method(BaselineMethod::Smoothing)
    }

    pub fn lowpass() -> Self {
        Self::for_method(BaselineMethod::Lowpass)
    }

    pub fn hilbert() -> Self {
        Self::for_method(BaselineMethod::Hilbert)
    }

    pub fn validate(&self, fps: u32) -> Result<()> {
        match self.method {
            BaselineMethod::Smoothing => {
                if self.sg_window.is_multiple_of(2) || self.sg_window <= self.sg_degree {
                    return Err(Error::InvalidConfig(format!(
                        "sg_window must be odd and greater than sg_degree (got {} and {})",
                        self.sg_window, self.sg_degree
                    )));
                }
            }
            BaselineMethod::Lowpass | BaselineMethod::Hilbert => {
                if self.butter_order != 2 {
                    return Err(Error::InvalidConfig(format!(
                        "only order-2 Butterworth filters are supported (got {})",
                        self.butter_order
                    )));
                }
                let nyquist = fps as f64 / 2.0;
                if !(self.butter_cutoff_hz > 0.0 && self.butter_cutoff_hz < nyquist) {
                    return Err(Error::InvalidConfig(format!(
                        "cutoff {} Hz must lie in (0, {nyquist}) Hz",
                        self.butter_cutoff_hz
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn envelope(&self, w: &Wave) -> Result<Vec<f64>> {
        match self.method {
            BaselineMethod::Smoothing => envelope_smoothing(w, self),
            BaselineMethod::Lowpass => envelope_lowpass(w, self),
            BaselineMethod::Hilbert => envelope_hilbert(w, self),
        }
    }
}

fn rectified(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.abs()).collect()
}

/// Savitzky-Golay smoothing of the rectified wave.
pub fn envelope_smoothing(w: &Wave, cfg: &BaselineConfig) -> Result<Vec<f64>> {
    BaselineConfig {
        method: BaselineMethod::Smoothing,
        ..cfg.clone()
    }
    .validate(w.fps())?;
    savgol_filter(&rectified(w.samples()), cfg.sg_window, cfg.sg_degree)
}

/// Zero-phase Butterworth low-pass of the rectified wave.
pub fn envelope_lowpass(w: &Wave, cfg: &BaselineConfig) -> Result<Vec<f64>> {
    BaselineConfig {
        method: BaselineMethod::Lowpass,
        ..cfg.clone()
    }
    .validate(w.fps())?;
    let filter = Biquad::butterworth_lowpass(cfg.butter_cutoff_hz, w.fps() as f64)?;
    Ok(filtfilt(&filter, &rectified(w.samples())))
}

/// Modulus of the analytic signal after a zero-phase Butterworth
/// pre-filter of the wave.
pub fn envelope_hilbert(w: &Wave, cfg: &BaselineConfig) -> Result<Vec<f64>> {
    if w.len() < 2 {
        return Err(Error::InvalidWave("analytic signal needs at least 2 samples".into()));
    }
    BaselineConfig {
        method: BaselineMethod::Hilbert,
        ..cfg.clone()
    }
    .validate(w.fps())?;
    let filter = Biquad::butterworth_lowpass(cfg.butter_cutoff_hz, w.fps() as f64)?;
    let mut filtered = filtfilt(&filter, w.samples());
    if cfg.hilbert_order == HilbertOrder::RectifyThenTransform {
        for v in &mut filtered {
            *v = v.abs();
        }
    }
    Ok(analytic_signal(&filtered).iter().map(|c| c.norm()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::{add_gaussian_noise, synth_am_sinusoid};
    use std::f64::consts::{PI, TAU};

    fn sine(freq: f64, amp: f64, fps: u32, n: usize) -> Wave {
        Wave::from_fn(n, fps, |i| amp * (TAU * freq * i as f64 / fps as f64).sin()).unwrap()
    }

    #[test]
    fn defaults() {
        let s = BaselineConfig::smoothing();
        assert_eq!((s.sg_window, s.sg_degree), (3001, 3));
        assert_eq!(BaselineConfig::lowpass().butter_cutoff_hz, 10.0);
        assert_eq!(BaselineConfig::hilbert().butter_cutoff_hz, 100.0);
        assert_eq!(BaselineConfig::hilbert().butter_order, 2);
        assert_eq!("lowpass".parse::<BaselineMethod>().unwrap(), BaselineMethod::Lowpass);
        assert!("present".parse::<BaselineMethod>().is_err());
    }

    #[test]
    fn validation() {
        let mut c = BaselineConfig::smoothing();
        c.sg_window = 3000;
        assert!(c.validate(44_100).is_err());
        c.sg_window = 3;
        c.sg_degree = 3;
        assert!(c.validate(44_100).is_err());
        let mut c = BaselineConfig::lowpass();
        c.butter_cutoff_hz = 30_000.0;
        assert!(c.validate(44_100).is_err());
        c.butter_cutoff_hz = 10.0;
        c.butter_order = 4;
        assert!(c.validate(44_100).is_err());
        assert!(BaselineConfig::hilbert().validate(150).is_err());
    }

    #[test]
    fn smoothing_constant_and_ramp() {
        let w = Wave::new(vec![-0.4; 4000], 44_100).unwrap();
        for v in envelope_smoothing(&w, &BaselineConfig::smoothing()).unwrap() {
            assert!((v - 0.4).abs() < 1e-9);
        }
        let w = Wave::from_fn(8000, 44_100, |i| 0.1 + i as f64 * 1e-4).unwrap();
        let e = envelope_smoothing(&w, &BaselineConfig::smoothing()).unwrap();
        for i in 1500..6500 {
            assert!((e[i] - w.samples()[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn smoothing_of_sinusoid_tends_to_rectified_mean() {
        let w = sine(440.0, 1.0, 44_100, 44_100);
        let e = envelope_smoothing(&w, &BaselineConfig::smoothing()).unwrap();
        for v in &e[1500..42_600] {
            assert!((v - 2.0 / PI).abs() < 0.01, "{v}");
        }
    }

    #[test]
    fn lowpass_dc_and_sinusoid() {
        let w = Wave::new(vec![0.25; 10_000], 44_100).unwrap();
        for v in envelope_lowpass(&w, &BaselineConfig::lowpass()).unwrap() {
            assert!((v - 0.25).abs() < 1e-12);
        }
        let w = sine(440.0, 1.0, 44_100, 44_100);
        let e = envelope_lowpass(&w, &BaselineConfig::lowpass()).unwrap();
        for v in &e[8_000..36_000] {
            assert!((v - 2.0 / PI).abs() < 0.02);
        }
    }

    #[test]
    fn hilbert_textbook_modulus() {
        // The analytic-signal modulus of a low-frequency sinusoid is its
        // amplitude; this holds for the filtered wave itself.
        let amp = 0.6;
        let w = sine(10.0, amp, 44_100, 44_100);
        let cfg = BaselineConfig {
            hilbert_order: HilbertOrder::TransformThenModulus,
            ..BaselineConfig::hilbert()
        };
        let e = envelope_hilbert(&w, &cfg).unwrap();
        for v in &e[4_410..39_690] {
            assert!((v - amp).abs() < 0.01 * amp, "{v}");
        }
    }

    #[test]
    fn hilbert_rectified_variant_follows_rectified_wave() {
        let w = sine(10.0, 1.0, 44_100, 44_100);
        let e = envelope_hilbert(&w, &BaselineConfig::hilbert()).unwrap();
        assert_eq!(e.len(), w.len());
        // Rectifying before the transform leaves a strong 20 Hz ripple.
        let interior = &e[4_410..39_690];
        let (lo, hi) = interior
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
        assert!(hi - lo > 0.5);
    }

    #[test]
    fn hilbert_envelope_reflects_noise() {
        let fps = 8_000;
        let clean = synth_am_sinusoid(20.0, &[0.3, 1.2, -1.5, 0.8], 8_000, fps).unwrap();
        let noisy = add_gaussian_noise(&clean, 0.1, 11).unwrap();
        let cfg = BaselineConfig::hilbert();
        let a = envelope_hilbert(&clean, &cfg).unwrap();
        let b = envelope_hilbert(&noisy, &cfg).unwrap();
        let rms = (a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt();
        // Noise within the pre-filter band survives into the envelope.
        assert!(rms > 5e-3 * clean.peak(), "{rms}");
    }

    #[test]
    fn baselines_are_scale_linear_and_length_preserving() {
        let w = synth_am_sinusoid(30.0, &[0.5, 0.5], 9000, 8000).unwrap();
        let ws = w.scaled(4.0).unwrap();
        for m in BaselineMethod::ALL {
            let mut cfg = BaselineConfig::for_method(m);
            cfg.sg_window = 301;
            let a = cfg.envelope(&w).unwrap();
            let b = cfg.envelope(&ws).unwrap();
            assert_eq!(a.len(), w.len());
            let peak = a.iter().fold(0.0_f64, |p, v| p.max(v.abs()));
            for (x, y) in a.iter().zip(&b) {
                assert!((4.0 * x - y).abs() <= 1e-12 * 4.0 * peak, "{m}");
            }
        }
    }
}
