//! Savitzky-Golay smoothing.

use crate::error::{Error, Result};

/// Convolution weights that evaluate a least-squares polynomial fit of
/// `degree` over a centered window of `window` samples at the window center.
pub fn smoothing_coefficients(window: usize, degree: usize) -> Result<Vec<f64>> {
    if window.is_multiple_of(2) || window <= degree {
        return Err(Error::InvalidConfig(format!(
            "Savitzky-Golay window must be odd and exceed the degree (window {window}, degree {degree})"
        )));
    }
    let half = (window / 2) as f64;
    // Offsets are scaled into [-1, 1] to keep the normal equations well
    // conditioned for wide windows.
    let scale = if half > 0.0 { half } else { 1.0 };
    let offsets: Vec<f64> = (0..window).map(|k| (k as f64 - half) / scale).collect();

    let dim = degree + 1;
    let mut gram = vec![vec![0.0; dim]; dim];
    let mut moments = vec![0.0; 2 * degree + 1];
    for &t in &offsets {
        let mut p = 1.0;
        for m in moments.iter_mut() {
            *m += p;
            p *= t;
        }
    }
    for (i, row) in gram.iter_mut().enumerate() {
        for (j, g) in row.iter_mut().enumerate() {
            *g = moments[i + j];
        }
    }
    let mut rhs = vec![0.0; dim];
    rhs[0] = 1.0;
    let z = solve(gram, rhs)?;

    Ok(offsets
        .iter()
        .map(|&t| {
            let mut p = 1.0;
            let mut c = 0.0;
            for zi in &z {
                c += zi * p;
                p *= t;
            }
            c
        })
        .collect())
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::InvalidConfig("singular Savitzky-Golay system".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Ok(x)
}

/// Index into a signal of length `n` extended by mirroring about its first
/// and last samples (edge samples are not repeated).
pub(crate) fn mirror_index(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let r = i.rem_euclid(period);
    if r < n as isize {
        r as usize
    } else {
        (period - r) as usize
    }
}

/// Smooths `x` with a centered Savitzky-Golay filter, mirror padding half a
/// window at each end.
pub fn savgol_filter(x: &[f64], window: usize, degree: usize) -> Result<Vec<f64>> {
    let coeffs = smoothing_coefficients(window, degree)?;
    let n = x.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let half = window / 2;
    let padded: Vec<f64> = (0..n + 2 * half)
        .map(|k| x[mirror_index(k as isize - half as isize, n)])
        .collect();
    Ok(padded
        .windows(window)
        .map(|win| win.iter().zip(&coeffs).map(|(a, c)| a * c).sum())
        .collect())
}
