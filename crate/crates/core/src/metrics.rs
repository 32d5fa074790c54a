//! Envelope quality and cost measurements.
//!
//! - [`error_per_frame`]: mean squared distance between half the envelope and
//!   the rectified wave.
//! - [`plausibility_suite`]: four necessary conditions for a physically
//!   plausible envelope.
//! - [`time_method`] / [`compare`]: wall-clock cost and error of each method.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::baselines::{BaselineConfig, BaselineMethod};
use crate::error::{Error, Result};
use crate::extract::extract_envelope;
use crate::pulse::segment_pulses;
use crate::wave::Wave;

/// An envelope detector: the rolling-circle method or a configured baseline.
#[derive(Clone, Debug, PartialEq)]
pub enum Method {
    Present,
    Baseline(BaselineConfig),
}

/// Envelope plus, for the rolling-circle method, the selected anchors.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodOutput {
    pub envelope: Vec<f64>,
    pub anchor_indices: Option<Vec<usize>>,
}

impl Method {
    /// The rolling-circle method followed by every baseline at its
    /// reference configuration.
    pub fn all() -> Vec<Method> {
        std::iter::once(Method::Present)
            .chain(BaselineMethod::ALL.into_iter().map(|m| Method::Baseline(BaselineConfig::for_method(m))))
            .collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Present => "present",
            Method::Baseline(cfg) => cfg.method.name(),
        }
    }

    pub fn run(&self, w: &Wave) -> Result<MethodOutput> {
        match self {
            Method::Present => {
                let r = extract_envelope(w)?;
                Ok(MethodOutput {
                    anchor_indices: Some(r.anchor_indices()),
                    envelope: r.envelope,
                })
            }
            Method::Baseline(cfg) => Ok(MethodOutput {
                envelope: cfg.envelope(w)?,
                anchor_indices: None,
            }),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "present" {
            return Ok(Method::Present);
        }
        s.parse::<BaselineMethod>()
            .map(|m| Method::Baseline(BaselineConfig::for_method(m)))
            .map_err(|_| Error::InvalidConfig(format!("unknown method {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRecord {
    pub signal_name: String,
    pub method: String,
    pub error_per_frame: f64,
    pub elapsed_seconds: f64,
}

/// Mean over samples of `(e_i / 2 - |w_i|)^2`. Expects `w` normalized to
/// `[-1, 1]`.
pub fn error_per_frame(w: &Wave, e: &[f64]) -> Result<f64> {
    if e.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            got: e.len(),
        });
    }
    let sum: f64 = w
        .samples()
        .iter()
        .zip(e)
        .map(|(s, env)| {
            let d = 0.5 * env - s.abs();
            d * d
        })
        .sum();
    Ok(sum / w.len() as f64)
}

/// Scale factor used by the equivariance check.
pub const EQUIVARIANCE_SCALE: f64 = 3.0;

#[derive(Clone, Debug, PartialEq)]
pub struct PlausibilityReport {
    /// The envelope never exceeds the wave's peak magnitude.
    pub bounded: bool,
    /// The envelope has no more turning points than the wave has pulses.
    pub frequency_range: bool,
    /// Envelope spread `max - min` is at most `1e-6` of the peak. Only
    /// meaningful for exactly periodic input.
    pub periodic_flatness: bool,
    /// Scaling the wave scales the envelope by the same factor.
    pub scale_equivariance: bool,
    pub flatness_spread: f64,
}

impl PlausibilityReport {
    pub fn all_pass(&self) -> bool {
        self.bounded && self.frequency_range && self.periodic_flatness && self.scale_equivariance
    }

    pub fn checks(&self) -> [(&'static str, bool); 4] {
        [
            ("bounded", self.bounded),
            ("frequency_range", self.frequency_range),
            ("periodic_flatness", self.periodic_flatness),
            ("scale_equivariance", self.scale_equivariance),
        ]
    }
}

fn turning_points(e: &[f64]) -> usize {
    let mut count = 0;
    let mut last_dir = 0.0_f64;
    for pair in e.windows(2) {
        let dir = (pair[1] - pair[0]).signum();
        if pair[1] != pair[0] {
            if last_dir != 0.0 && dir != last_dir {
                count += 1;
            }
            last_dir = dir;
        }
    }
    count
}

fn spread(e: &[f64]) -> f64 {
    let (lo, hi) = e
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    hi - lo
}

/// Runs the four plausibility checks for `method` on `w`.
///
/// For the rolling-circle method the frequency condition compares the anchor
/// count with the pulse count; for the baselines it compares the envelope's
/// turning points with the pulse count.
pub fn plausibility_suite(w: &Wave, method: &Method) -> Result<PlausibilityReport> {
    let peak = w.peak();
    let out = method.run(w)?;
    let pulses = segment_pulses(w)?.len();

    let max_env = out.envelope.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let bounded = max_env <= peak;

    let frequency_range = match &out.anchor_indices {
        Some(a) => a.len() <= pulses,
        None => turning_points(&out.envelope) <= pulses,
    };

    let flatness_spread = spread(&out.envelope);
    let periodic_flatness = flatness_spread <= 1e-6 * peak;

    let scaled = method.run(&w.scaled(EQUIVARIANCE_SCALE)?)?;
    let env_peak = out.envelope.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let values_match = out.envelope.iter().zip(&scaled.envelope).all(|(a, b)| {
        let want = EQUIVARIANCE_SCALE * a;
        (b - want).abs() <= 1e-12 * (EQUIVARIANCE_SCALE * env_peak)
    });
    let scale_equivariance = values_match && out.anchor_indices == scaled.anchor_indices;

    Ok(PlausibilityReport {
        bounded,
        frequency_range,
        periodic_flatness,
        scale_equivariance,
        flatness_spread,
    })
}

const TIMING_RUNS: usize = 5;

/// Median wall-clock time of a single envelope extraction over five runs.
pub fn time_method(w: &Wave, method: &Method) -> Result<f64> {
    let mut times = Vec::with_capacity(TIMING_RUNS);
    for _ in 0..TIMING_RUNS {
        let start = Instant::now();
        let out = method.run(w)?;
        times.push(start.elapsed().as_secs_f64());
        std::hint::black_box(out);
    }
    times.sort_by(f64::total_cmp);
    Ok(times[TIMING_RUNS / 2])
}

/// Error and timing of each method on the normalized wave.
///
/// Methods run one after another so that timings do not interfere.
pub fn compare(w: &Wave, signal_name: &str, methods: &[Method]) -> Result<Vec<ComparisonRecord>> {
    let w = w.normalized()?;
    methods
        .iter()
        .map(|method| {
            let out = method.run(&w)?;
            Ok(ComparisonRecord {
                signal_name: signal_name.to_string(),
                method: method.name().to_string(),
                error_per_frame: error_per_frame(&w, &out.envelope)?,
                elapsed_seconds: time_method(&w, method)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn unit_sine(n: usize, cycles: f64) -> Wave {
        Wave::from_fn(n, 44_100, |i| (TAU * cycles * i as f64 / n as f64).sin()).unwrap()
    }

    #[test]
    fn ideal_envelope_on_sinusoid() {
        let w = unit_sine(44_100, 440.0);
        let err = error_per_frame(&w, &vec![1.0; w.len()]).unwrap();
        let closed_form = 0.75 - 2.0 / PI;
        assert!((err - closed_form).abs() < 1e-3);
        assert!((err - 0.113).abs() < 1e-3);
    }

    #[test]
    fn zero_points_of_metric() {
        let w = Wave::new(vec![0.2, -0.7, 0.4], 10).unwrap();
        let twice: Vec<f64> = w.samples().iter().map(|s| 2.0 * s.abs()).collect();
        assert_eq!(error_per_frame(&w, &twice).unwrap(), 0.0);
        let squares = (0.04 + 0.49 + 0.16) / 3.0;
        assert!((error_per_frame(&w, &[0.0; 3]).unwrap() - squares).abs() < 1e-15);
        assert!(error_per_frame(&w, &[0.0; 2]).is_err());
    }

    #[test]
    fn metric_ignores_sign() {
        let w = crate::wave::synth_am_sinusoid(7.0, &[0.2, 0.8], 3000, 3000).unwrap();
        let e = extract_envelope(&w).unwrap().envelope;
        assert_eq!(error_per_frame(&w, &e).unwrap(), error_per_frame(&w.negated(), &e).unwrap());
    }

    #[test]
    fn present_method_passes_on_sinusoid() {
        let r = plausibility_suite(&unit_sine(44_100, 441.0), &Method::Present).unwrap();
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn lowpass_fails_flatness_on_sinusoid() {
        let r = plausibility_suite(&unit_sine(44_100, 441.0), &"lowpass".parse().unwrap()).unwrap();
        assert!(!r.periodic_flatness);
        assert!(r.flatness_spread > 1e-3);
    }

    #[test]
    fn turning_point_count() {
        assert_eq!(turning_points(&[0.0, 1.0, 1.0, 2.0, 1.0, 0.0, 3.0]), 2);
        assert_eq!(turning_points(&[1.0; 5]), 0);
    }

    #[test]
    fn timing_is_finite_and_records_are_deterministic() {
        let w = crate::wave::synth_am_sinusoid(25.0, &[0.5, 0.3], 6000, 6000).unwrap();
        let t = time_method(&w, &Method::Present).unwrap();
        assert!(t.is_finite() && t >= 0.0);

        let mut methods = Method::all();
        if let Method::Baseline(cfg) = &mut methods[1] {
            cfg.sg_window = 301;
        }
        let a = compare(&w, "am", &methods).unwrap();
        let b = compare(&w, "am", &methods).unwrap();
        assert_eq!(a.len(), 4);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.method, y.method);
            assert_eq!(x.error_per_frame, y.error_per_frame);
            assert!(x.error_per_frame >= 0.0 && x.elapsed_seconds >= 0.0);
        }
        let names: Vec<&str> = a.iter().map(|r| r.method.as_str()).collect();
        assert_eq!(names, ["present", "smoothing", "lowpass", "hilbert"]);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("present".parse::<Method>().unwrap(), Method::Present);
        assert_eq!("hilbert".parse::<Method>().unwrap().name(), "hilbert");
        assert!("all".parse::<Method>().is_err());
    }
}
