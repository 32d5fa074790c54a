//! Discrete analytic signal via the one-sided spectrum.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Analytic signal of a real sequence: the spectrum's positive frequencies
/// are doubled, negative ones zeroed, DC (and Nyquist, for even lengths)
/// kept, and the result transformed back. The real part reproduces `x`; the
/// imaginary part is its discrete Hilbert transform.
pub fn analytic_signal(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    if n < 2 {
        return buf;
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);

    let positive_end = n.div_ceil(2);
    for c in &mut buf[1..positive_end] {
        *c *= 2.0;
    }
    let negative_start = n / 2 + 1;
    for c in &mut buf[negative_start..] {
        *c = Complex64::new(0.0, 0.0);
    }

    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn even_impulse() {
        let a = analytic_signal(&[1.0, 0.0, 0.0, 0.0]);
        let expected = [(1.0, 0.0), (0.0, 0.5), (0.0, 0.0), (0.0, -0.5)];
        for (got, (re, im)) in a.iter().zip(expected) {
            assert!((got.re - re).abs() < 1e-12 && (got.im - im).abs() < 1e-12);
        }
    }

    #[test]
    fn real_part_is_input() {
        for n in [5, 8, 31, 100] {
            let x: Vec<f64> = (0..n).map(|i| ((i * 7) % 5) as f64 - 1.3).collect();
            for (a, v) in analytic_signal(&x).iter().zip(&x) {
                assert!((a.re - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn imaginary_part_has_zero_mean() {
        for n in [7, 64, 1001] {
            let x: Vec<f64> = (0..n).map(|i| 0.5 + (i as f64 * 0.37).sin().powi(3)).collect();
            let mean = analytic_signal(&x).iter().map(|c| c.im).sum::<f64>() / n as f64;
            assert!(mean.abs() < 1e-12, "{mean}");
        }
    }

    #[test]
    fn cosine_maps_to_sine() {
        // Whole number of cycles: H(cos) = sin exactly, modulus = amplitude.
        let n = 1000;
        let x: Vec<f64> = (0..n).map(|i| 2.5 * (TAU * 10.0 * i as f64 / n as f64).cos()).collect();
        for (i, a) in analytic_signal(&x).iter().enumerate() {
            let s = 2.5 * (TAU * 10.0 * i as f64 / n as f64).sin();
            assert!((a.im - s).abs() < 1e-9);
            assert!((a.norm() - 2.5).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_lengths() {
        assert!(analytic_signal(&[]).is_empty());
        assert_eq!(analytic_signal(&[3.0])[0], Complex64::new(3.0, 0.0));
    }
}
