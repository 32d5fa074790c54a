//! Planar geometry of the extrema set.
//!
//! Extrema live in a frame whose axes carry different units (sample index
//! horizontally, amplitude vertically). [`normalize_points`] rescales the
//! vertical axis so that an average pulse spans a square, after which both
//! axes are measured in samples and distances become meaningful.
//!
//! The discrete curvature of the resulting polyline is summarized by the
//! radius of an *equivalent circle*: for a segment `v` leaving the horizontal
//! at angle `θ`, the circle whose tangent turns by `θ` over the horizontal
//! run `v.x` has radius `v.x / sin|θ| = v.x·|v| / |v.y|`. Flat segments yield
//! large radii, steep ones radii close to `v.x`.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::pulse::PulseSet;

/// Relative tolerance of the strict inside test.
pub const INSIDE_TOLERANCE: f64 = 1e-9;

/// Segments whose vertical extent is below this fraction of the mean
/// horizontal spacing are treated as horizontal.
pub const HORIZONTAL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn norm_squared(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Extrema mapped into the square frame.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedGeometry {
    pub points: Vec<Point2>,
    /// Samples per amplitude unit applied to the ordinates.
    pub y_scale: f64,
}

impl NormalizedGeometry {
    /// Wraps raw points, for callers that already work in a common frame.
    /// Abscissas must be strictly increasing.
    pub fn from_points(points: Vec<Point2>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InsufficientPoints {
                needed: 2,
                got: points.len(),
            });
        }
        if points.windows(2).any(|w| w[0].x.partial_cmp(&w[1].x) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::InvalidWave("abscissas not strictly increasing".into()));
        }
        Ok(NormalizedGeometry {
            points,
            y_scale: 1.0,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean_spacing(&self) -> f64 {
        mean_spacing(&self.points)
    }
}

fn mean_spacing(points: &[Point2]) -> f64 {
    let (first, last) = (points[0], points[points.len() - 1]);
    (last.x - first.x) / (points.len() - 1) as f64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureEstimate {
    pub radius: f64,
    pub terms_used: usize,
    pub terms_skipped: usize,
}

/// Maps extrema into the square frame: abscissas stay as sample indices,
/// ordinates are magnitudes times `mean spacing / mean magnitude`.
pub fn normalize_points(ps: &PulseSet) -> Result<NormalizedGeometry> {
    let pts = ps.points();
    let m = pts.len();
    if m < 2 {
        return Err(Error::InsufficientPoints { needed: 2, got: m });
    }
    let spacing = (pts[m - 1].index - pts[0].index) as f64 / (m - 1) as f64;
    let mean_magnitude = pts.iter().map(|p| p.magnitude).sum::<f64>() / m as f64;
    let y_scale = spacing / mean_magnitude;
    let points = pts
        .iter()
        .map(|p| Point2::new(p.index as f64, p.magnitude * y_scale))
        .collect();
    Ok(NormalizedGeometry { points, y_scale })
}

/// Vectors between consecutive points.
pub fn difference_vectors(g: &NormalizedGeometry) -> Result<Vec<Point2>> {
    if g.points.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            got: g.points.len(),
        });
    }
    Ok(g.points.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Radius of the equivalent circle of a single segment, or `None` for a
/// horizontal one.
pub fn equivalent_radius(v: Point2) -> Option<f64> {
    let rise = v.y.abs();
    if rise == 0.0 {
        return None;
    }
    Some(v.x * v.norm() / rise)
}

/// Mean equivalent-circle radius over `vs`, skipping near-horizontal
/// segments.
pub fn average_radius(vs: &[Point2]) -> Result<CurvatureEstimate> {
    if vs.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    let mean_run = vs.iter().map(|v| v.x).sum::<f64>() / vs.len() as f64;
    let flat = HORIZONTAL_TOLERANCE * mean_run.abs();

    let mut sum = 0.0;
    let mut used = 0;
    for v in vs {
        if v.y.abs() < flat {
            continue;
        }
        if let Some(r) = equivalent_radius(*v) {
            sum += r;
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::AllHorizontal);
    }
    Ok(CurvatureEstimate {
        radius: sum / used as f64,
        terms_used: used,
        terms_skipped: vs.len() - used,
    })
}

/// Center of the circle of radius `r` through `a` and `b` that lies above
/// the chord, i.e. the one a circle descending from `y = +∞` would occupy.
///
/// Returns `Ok(None)` when the chord is longer than the diameter and no such
/// circle exists.
pub fn circle_center(r: f64, a: Point2, b: Point2) -> Result<Option<Point2>> {
    let chord = b - a;
    let d2 = chord.norm_squared();
    if d2 == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let r2 = r * r;
    if d2 > 4.0 * r2 {
        return Ok(None);
    }
    let mid = (a + b) * 0.5;
    let h = (r2 - 0.25 * d2).max(0.0).sqrt();
    let d = d2.sqrt();
    // Unit normal to the chord, oriented upwards (ties go right).
    let mut normal = Point2::new(-chord.y / d, chord.x / d);
    if normal.y < 0.0 || (normal.y == 0.0 && normal.x < 0.0) {
        normal = normal * -1.0;
    }
    Ok(Some(mid + normal * h))
}

/// Strict containment with a relative tolerance: points on the circle count
/// as outside.
pub fn point_in_circle(center: Point2, r: f64, p: Point2) -> bool {
    (p - center).norm_squared() < r * r * (1.0 - INSIDE_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::{ExtremaPoint, Sign};
    use proptest::prelude::*;

    fn pulses(idx: &[usize], mags: &[f64]) -> PulseSet {
        let pts = idx
            .iter()
            .zip(mags)
            .enumerate()
            .map(|(k, (&index, &magnitude))| ExtremaPoint {
                index,
                magnitude,
                sign: if k % 2 == 0 { Sign::Positive } else { Sign::Negative },
            })
            .collect();
        PulseSet::new(pts, idx.last().unwrap() + 1).unwrap()
    }

    fn ys(g: &NormalizedGeometry) -> Vec<f64> {
        g.points.iter().map(|p| p.y).collect()
    }

    #[test]
    fn uniform_points_map_to_spacing() {
        let g = normalize_points(&pulses(&[0, 10, 20], &[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(g.y_scale, 10.0);
        assert_eq!(ys(&g), vec![10.0, 10.0, 10.0]);
    }

    #[test]
    fn ramp_points_map_by_mean_magnitude() {
        let g = normalize_points(&pulses(&[0, 10, 20], &[0.5, 1.0, 1.5])).unwrap();
        assert_eq!(g.y_scale, 10.0);
        assert_eq!(ys(&g), vec![5.0, 10.0, 15.0]);
        let xs: Vec<f64> = g.points.iter().map(|p| p.x).collect();
        assert_eq!(xs, vec![0.0, 10.0, 20.0]);
    }

    #[test]
    fn single_point_is_insufficient() {
        let err = normalize_points(&pulses(&[3], &[1.0])).unwrap_err();
        assert!(matches!(err, Error::InsufficientPoints { needed: 2, got: 1 }));
    }

    #[test]
    fn differences() {
        let g = NormalizedGeometry::from_points(vec![Point2::new(0.0, 10.0), Point2::new(10.0, 5.0)]).unwrap();
        assert_eq!(difference_vectors(&g).unwrap(), vec![Point2::new(10.0, -5.0)]);
        let g = NormalizedGeometry::from_points(vec![Point2::new(0.0, 10.0), Point2::new(10.0, 10.0)]).unwrap();
        assert_eq!(difference_vectors(&g).unwrap(), vec![Point2::new(10.0, 0.0)]);
    }

    #[test]
    fn radius_of_345_segment() {
        let est = average_radius(&[Point2::new(3.0, 4.0)]).unwrap();
        assert_eq!(est.radius, 3.75);
        assert_eq!(est.terms_used, 1);
        assert_eq!(est.terms_skipped, 0);
    }

    #[test]
    fn radius_ignores_direction_of_rise() {
        let est = average_radius(&[Point2::new(3.0, 4.0), Point2::new(3.0, -4.0)]).unwrap();
        assert_eq!(est.radius, 3.75);
        assert_eq!(est.terms_used, 2);
    }

    #[test]
    fn steep_segments_approach_run() {
        for y in [1e3, 1e6, 1e9] {
            let r = equivalent_radius(Point2::new(1.0, y)).unwrap();
            assert!((r - 1.0).abs() < 1.0 / y);
        }
    }

    #[test]
    fn flat_segments_are_skipped() {
        let vs = [Point2::new(10.0, 0.0), Point2::new(10.0, 1e-12), Point2::new(3.0, 4.0)];
        let est = average_radius(&vs).unwrap();
        assert_eq!(est.radius, 3.75);
        assert_eq!(est.terms_used, 1);
        assert_eq!(est.terms_skipped, 2);

        let err = average_radius(&[Point2::new(10.0, 0.0)]).unwrap_err();
        assert_eq!(err.to_string(), "degenerate geometry: all segments horizontal");
    }

    #[test]
    fn circle_centers() {
        let o = Point2::new(0.0, 0.0);
        assert_eq!(circle_center(5.0, o, Point2::new(6.0, 0.0)).unwrap(), Some(Point2::new(3.0, 4.0)));
        assert_eq!(circle_center(5.0, o, Point2::new(10.0, 0.0)).unwrap(), Some(Point2::new(5.0, 0.0)));
        assert_eq!(circle_center(1.0, o, Point2::new(10.0, 0.0)).unwrap(), None);
        assert!(matches!(circle_center(1.0, o, o), Err(Error::CoincidentPoints)));
    }

    #[test]
    fn upper_center_for_sloped_chords() {
        // Chord from (0,0) to (8,6) has length 10, so r=5 puts the center on
        // the midpoint and r=5√2 puts it at distance 5 along the normal.
        let a = Point2::new(0.0, 0.0);
        for b in [Point2::new(8.0, 6.0), Point2::new(8.0, -6.0)] {
            let c = circle_center(50.0_f64.sqrt(), a, b).unwrap().unwrap();
            let mid = (a + b) * 0.5;
            assert!(c.y > mid.y);
            assert!(((c - a).norm() - 50.0_f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn inside_test() {
        let o = Point2::new(0.0, 0.0);
        assert!(point_in_circle(o, 5.0, Point2::new(3.0, 3.0)));
        assert!(!point_in_circle(o, 5.0, Point2::new(3.0, 4.0)));
        assert!(!point_in_circle(o, 5.0, Point2::new(10.0, 0.0)));
    }

    fn vector() -> impl Strategy<Value = Point2> {
        (1e-2..1e3f64, prop_oneof![-1e3..-1e-2f64, 1e-2..1e3f64]).prop_map(|(x, y)| Point2::new(x, y))
    }

    proptest! {
        #[test]
        fn normalized_mean_equals_spacing(
            gaps in prop::collection::vec(1usize..50, 1..40),
            mags in prop::collection::vec(1e-3..10.0f64, 41),
        ) {
            let mut idx = vec![0usize];
            for g in &gaps {
                idx.push(idx.last().unwrap() + g);
            }
            let g = normalize_points(&pulses(&idx, &mags[..idx.len()])).unwrap();
            let mean_y = ys(&g).iter().sum::<f64>() / g.len() as f64;
            let spacing = g.mean_spacing();
            prop_assert!(((mean_y - spacing) / spacing).abs() < 1e-9);
        }

        #[test]
        fn radius_translation_and_scaling(
            vs in prop::collection::vec(vector(), 1..30),
            scale in 1e-2..1e2f64,
        ) {
            // Difference vectors are translation invariant by construction,
            // so only scaling needs checking here.
            let base = average_radius(&vs).unwrap();
            let scaled: Vec<Point2> = vs.iter().map(|v| *v * scale).collect();
            let est = average_radius(&scaled).unwrap();
            prop_assert!((est.radius - scale * base.radius).abs() <= 1e-12 * scale * base.radius);
        }

        #[test]
        fn center_equidistant(
            ax in -1e3..1e3f64, ay in 0.0..1e3f64,
            dx in 1e-2..1e2f64, dy in -1e2..1e2f64,
            slack in 1.0..100.0f64,
        ) {
            let a = Point2::new(ax, ay);
            let b = Point2::new(ax + dx, ay + dy);
            let r = 0.5 * (b - a).norm() * slack;
            let c = circle_center(r, a, b).unwrap().unwrap();
            let (da, db) = ((c - a).norm(), (c - b).norm());
            prop_assert!(((da - r) / r).abs() < 1e-9);
            prop_assert!(((db - r) / r).abs() < 1e-9);
        }
    }
}
