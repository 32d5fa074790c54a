//! Envelope extraction with a rolling circle.
//!
//! A circle of the average equivalent radius is lowered onto the extrema
//! from above and pivoted from one contact point to the next. Extrema it
//! touches become anchors; the envelope is the piecewise-linear curve
//! through them.

use crate::error::{Error, Result};
use crate::geometry::{
    average_radius, circle_center, difference_vectors, normalize_points, point_in_circle,
    CurvatureEstimate, NormalizedGeometry,
};
use crate::pulse::{filter_by_sign, segment_pulses, PulseSet, Sign};
use crate::wave::Wave;

/// An extremum selected into the envelope, in original amplitude units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Anchor {
    pub index: usize,
    pub amplitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeResult {
    pub anchors: Vec<Anchor>,
    pub envelope: Vec<f64>,
    /// `None` when selection needed no circle: fewer than three extrema, or
    /// perfectly flat geometry.
    pub radius_used: Option<CurvatureEstimate>,
}

impl EnvelopeResult {
    pub fn anchor_indices(&self) -> Vec<usize> {
        self.anchors.iter().map(|a| a.index).collect()
    }

    fn negated(mut self) -> Self {
        for a in &mut self.anchors {
            a.amplitude = -a.amplitude;
        }
        for e in &mut self.envelope {
            *e = -*e;
        }
        self
    }
}

/// Envelopes of the positive and negative pulses taken separately.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontierPair {
    pub superior: EnvelopeResult,
    pub inferior: EnvelopeResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CarrierResult {
    pub carrier: Vec<f64>,
}

/// Pivot scan selecting the points reachable by a circle of radius `r`
/// descending from above. Returns positions into `g.points`, always starting
/// with the first point and ending with the last.
///
/// From the current pivot, candidates are tried in order. A candidate is
/// accepted when the upper circle through pivot and candidate contains none
/// of the points after the candidate, or when the two are farther apart than
/// the circle's diameter. The accepted candidate becomes the next pivot.
pub fn retrieve_envelope(g: &NormalizedGeometry, r: f64) -> Result<Vec<usize>> {
    let pts = &g.points;
    let m = pts.len();
    if m < 2 {
        return Err(Error::InsufficientPoints { needed: 2, got: m });
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidConfig(format!("radius must be positive, got {r}")));
    }

    let mut selected = vec![0];
    let mut pivot = 0;
    let mut candidate = 1;
    while candidate < m {
        let empty = match circle_center(r, pts[pivot], pts[candidate])? {
            None => true,
            Some(center) => {
                // Abscissas increase, so nothing past center.x + r can be inside.
                let reach = center.x + r;
                !pts[candidate + 1..]
                    .iter()
                    .take_while(|p| p.x < reach)
                    .any(|p| point_in_circle(center, r, *p))
            }
        };
        if empty {
            selected.push(candidate);
            pivot = candidate;
        }
        candidate += 1;
    }
    Ok(selected)
}

/// Anchors of a pulse set, in original units with unsigned amplitudes.
fn select_anchors(ps: &PulseSet) -> Result<(Vec<Anchor>, Option<CurvatureEstimate>)> {
    let pts = ps.points();
    let anchor = |k: usize| Anchor {
        index: pts[k].index,
        amplitude: pts[k].magnitude,
    };
    match pts.len() {
        0 => return Err(Error::NoPulses),
        1 | 2 => return Ok(((0..pts.len()).map(anchor).collect(), None)),
        _ => {}
    }

    let geometry = normalize_points(ps)?;
    let vectors = difference_vectors(&geometry)?;
    match average_radius(&vectors) {
        Ok(estimate) => {
            let selected = retrieve_envelope(&geometry, estimate.radius)?;
            Ok((selected.into_iter().map(anchor).collect(), Some(estimate)))
        }
        // Flat geometry: every extremum already lies on the envelope.
        Err(Error::AllHorizontal) => Ok(((0..pts.len()).map(anchor).collect(), None)),
        Err(e) => Err(e),
    }
}

/// Linear interpolation through `anchors`, held constant before the first
/// and after the last one.
pub fn interpolate_anchors(anchors: &[Anchor], n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let Some(first) = anchors.first() else {
        out.resize(n, 0.0);
        return out;
    };
    out.resize(first.index.min(n), first.amplitude);
    for pair in anchors.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let span = (b.index - a.index) as f64;
        let slope = b.amplitude - a.amplitude;
        out.extend((0..b.index - a.index).map(|k| a.amplitude + slope * (k as f64 / span)));
    }
    let last = anchors[anchors.len() - 1];
    out.resize(n, last.amplitude);
    out
}

fn envelope_from_pulses(ps: &PulseSet) -> Result<EnvelopeResult> {
    let (anchors, radius_used) = select_anchors(ps)?;
    let envelope = interpolate_anchors(&anchors, ps.source_length());
    Ok(EnvelopeResult {
        anchors,
        envelope,
        radius_used,
    })
}

/// Full pipeline on the magnitudes of all pulses of `w`.
pub fn extract_envelope(w: &Wave) -> Result<EnvelopeResult> {
    envelope_from_pulses(&segment_pulses(w)?)
}

/// Superior and inferior frontiers, each extracted from the pulses of one
/// sign with its own normalization.
pub fn extract_frontiers(w: &Wave) -> Result<FrontierPair> {
    let ps = segment_pulses(w)?;
    let subset = |sign: Sign, frontier: &'static str| {
        filter_by_sign(&ps, sign).map_err(|_| Error::MissingFrontier { frontier, sign })
    };
    let positive = subset(Sign::Positive, "superior")?;
    let negative = subset(Sign::Negative, "inferior")?;

    let (superior, inferior) = std::thread::scope(|s| {
        let handle = s.spawn(|| envelope_from_pulses(&negative));
        let superior = envelope_from_pulses(&positive);
        let inferior = handle.join().expect("inferior frontier thread panicked");
        (superior, inferior)
    });
    Ok(FrontierPair {
        superior: superior?,
        inferior: inferior?.negated(),
    })
}

/// Divides the wave by its envelope sample by sample. Where the envelope is
/// negligible relative to the wave's peak the carrier is set to zero.
pub fn recover_carrier(w: &Wave, e: &EnvelopeResult) -> Result<CarrierResult> {
    if e.envelope.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            got: e.envelope.len(),
        });
    }
    let floor = 1e-12 * w.peak();
    let carrier = w
        .samples()
        .iter()
        .zip(&e.envelope)
        .map(|(s, env)| if *env >= floor && *env > 0.0 { s / env } else { 0.0 })
        .collect();
    Ok(CarrierResult { carrier })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use crate::wave::synth_am_sinusoid;
    use std::f64::consts::TAU;

    fn geom(pts: &[(f64, f64)]) -> NormalizedGeometry {
        NormalizedGeometry::from_points(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn collinear_points_all_selected() {
        let g = geom(&[(0.0, 0.0), (10.0, 5.0), (20.0, 10.0)]);
        for r in [0.1, 6.0, 50.0, 1e6] {
            assert_eq!(retrieve_envelope(&g, r).unwrap(), vec![0, 1, 2]);
        }
    }

    #[test]
    fn large_circle_skips_dip() {
        let g = geom(&[(0.0, 10.0), (10.0, 1.0), (20.0, 10.0)]);
        // Upper circle of radius 1000 through the first two points has its
        // center near (674, 749) and swallows (20, 10).
        assert_eq!(retrieve_envelope(&g, 1000.0).unwrap(), vec![0, 2]);
    }

    #[test]
    fn small_circle_falls_into_dip() {
        let g = geom(&[(0.0, 10.0), (10.0, 1.0), (20.0, 10.0)]);
        // Chords are √181 ≈ 13.45 > 12 = 2r, so every candidate is reachable.
        assert_eq!(retrieve_envelope(&g, 6.0).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn two_points() {
        let g = geom(&[(0.0, 1.0), (5.0, 3.0)]);
        assert_eq!(retrieve_envelope(&g, 1.0).unwrap(), vec![0, 1]);
        assert!(retrieve_envelope(&g, 0.0).is_err());
        assert!(retrieve_envelope(&g, f64::NAN).is_err());
    }

    #[test]
    fn interpolation_contract() {
        let anchors = [
            Anchor { index: 2, amplitude: 1.0 },
            Anchor { index: 6, amplitude: 3.0 },
            Anchor { index: 7, amplitude: 2.0 },
        ];
        let e = interpolate_anchors(&anchors, 10);
        assert_eq!(e, vec![1.0, 1.0, 1.0, 1.5, 2.0, 2.5, 3.0, 2.0, 2.0, 2.0]);
        assert_eq!(interpolate_anchors(&anchors[..1], 4), vec![1.0; 4]);
    }

    #[test]
    fn single_pulse_gives_constant_envelope() {
        let w = Wave::new(vec![0.0, 0.2, 0.7, 0.1], 10).unwrap();
        let r = extract_envelope(&w).unwrap();
        assert_eq!(r.anchors, vec![Anchor { index: 2, amplitude: 0.7 }]);
        assert_eq!(r.envelope, vec![0.7; 4]);
        assert!(r.radius_used.is_none());
    }

    #[test]
    fn two_pulses_give_a_line() {
        let w = Wave::new(vec![0.5, 0.0, 0.0, -1.0], 10).unwrap();
        let r = extract_envelope(&w).unwrap();
        assert_eq!(r.anchor_indices(), vec![0, 3]);
        for (got, want) in r.envelope.iter().zip([0.5, 2.0 / 3.0, 5.0 / 6.0, 1.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn silence_is_an_error() {
        let w = Wave::new(vec![0.0; 8], 10).unwrap();
        assert!(matches!(extract_envelope(&w), Err(Error::NoPulses)));
    }

    #[test]
    fn sinusoid_envelope_is_flat() {
        let amp = 0.8;
        let w = Wave::from_fn(4000, 4000, |i| amp * (TAU * 20.0 * i as f64 / 4000.0).sin()).unwrap();
        let r = extract_envelope(&w).unwrap();
        assert_eq!(r.anchors.len(), 40);
        for e in &r.envelope {
            assert!((e - amp).abs() < 1e-6 * amp);
        }
    }

    #[test]
    fn am_tone_anchor_amplitudes_track_envelope() {
        let coeffs = [0.3, 0.5, 0.4, -0.2];
        let n = 4000;
        let w = synth_am_sinusoid(20.0, &coeffs, n, 4000).unwrap();
        let r = extract_envelope(&w).unwrap();
        let period = n / 20;
        for a in r.anchors.iter().filter(|a| a.index > period && a.index < n - period) {
            let truth = crate::wave::eval_poly(&coeffs, a.index as f64 / n as f64);
            assert!((a.amplitude - truth).abs() <= 0.02 * truth, "{a:?} vs {truth}");
        }
    }

    #[test]
    fn frontiers_of_symmetric_sinusoid() {
        let w = Wave::from_fn(4000, 4000, |i| 0.5 * (TAU * 20.0 * i as f64 / 4000.0).sin()).unwrap();
        let f = extract_frontiers(&w).unwrap();
        assert_eq!(f.superior.anchors.len(), 20);
        assert_eq!(f.inferior.anchors.len(), 20);
        for (s, i) in f.superior.envelope.iter().zip(&f.inferior.envelope) {
            assert!((s - 0.5).abs() < 1e-9);
            assert!((i + 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn frontiers_of_asymmetric_wave() {
        // Offset sinusoid: positive peaks reach 0.8, negative ones 0.2. The
        // wave stops right after a negative peak so no pulse is truncated.
        let w = Wave::from_fn(3951, 4000, |i| 0.5 * (TAU * 20.0 * i as f64 / 4000.0).sin() + 0.3).unwrap();
        let f = extract_frontiers(&w).unwrap();
        for (s, i) in f.superior.envelope.iter().zip(&f.inferior.envelope) {
            assert!((s - 0.8).abs() < 1e-9);
            assert!((i + 0.2).abs() < 1e-9);
        }
        assert_ne!(f.superior.envelope, f.inferior.negated().envelope);
    }

    #[test]
    fn missing_frontier_is_named() {
        let w = Wave::new(vec![0.1, 0.5, 0.0, 0.3], 10).unwrap();
        let err = extract_frontiers(&w).unwrap_err();
        assert!(err.to_string().contains("inferior"), "{err}");
        let err = extract_frontiers(&w.negated()).unwrap_err();
        assert!(err.to_string().contains("superior"), "{err}");
    }

    #[test]
    fn carrier_is_unit_at_anchors() {
        let w = synth_am_sinusoid(20.0, &[0.2, 1.0, -0.6], 4000, 4000).unwrap();
        let e = extract_envelope(&w).unwrap();
        let c = recover_carrier(&w, &e).unwrap();
        for a in &e.anchors {
            assert_eq!(c.carrier[a.index].abs(), 1.0);
        }
        assert!(c.carrier.iter().all(|x| x.abs() <= 1.05));
    }

    #[test]
    fn carrier_of_sinusoid_is_normalized_sinusoid() {
        let w = Wave::from_fn(4000, 4000, |i| 3.0 * (TAU * 20.0 * i as f64 / 4000.0).sin()).unwrap();
        let e = extract_envelope(&w).unwrap();
        let c = recover_carrier(&w, &e).unwrap();
        for (i, x) in c.carrier.iter().enumerate() {
            assert!((x - (TAU * 20.0 * i as f64 / 4000.0).sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn carrier_guard_and_length_check() {
        let w = Wave::new(vec![1.0, 2.0, 3.0], 10).unwrap();
        let e = EnvelopeResult {
            anchors: vec![],
            envelope: vec![0.0, 2.0, 1e-300],
            radius_used: None,
        };
        assert_eq!(recover_carrier(&w, &e).unwrap().carrier, vec![0.0, 1.0, 0.0]);
        let short = EnvelopeResult {
            envelope: vec![1.0],
            ..e
        };
        assert!(matches!(recover_carrier(&w, &short), Err(Error::LengthMismatch { .. })));
    }
}
