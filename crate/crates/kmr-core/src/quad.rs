//! Composite Simpson quadrature on uniform grids.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Simpson weights for `n` uniform nodes spanning a step of `h`.
/// `n` must be odd and >= 3.
pub fn simpson_weights(n: usize, h: f64) -> Result<Vec<f64>> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidQuadrature(n));
    }
    let mut w = alloc::vec![0.0; n];
    w[0] = h / 3.0;
    w[n - 1] = h / 3.0;
    for (k, wk) in w.iter_mut().enumerate().take(n - 1).skip(1) {
        *wk = if k % 2 == 1 { 4.0 * h / 3.0 } else { 2.0 * h / 3.0 };
    }
    Ok(w)
}

/// Integrate `f` over [lo, hi] with `n` uniform Simpson nodes (odd, >= 3).
pub fn simpson(lo: f64, hi: f64, n: usize, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    let w = simpson_weights(n, h)?;
    let mut acc = 0.0;
    for (k, wk) in w.iter().enumerate() {
        acc += wk * f(lo + h * k as f64);
    }
    Ok(acc)
}

/// Integrate sampled values on a uniform grid with spacing `h`.
pub fn simpson_samples(values: &[f64], h: f64) -> Result<f64> {
    let w = simpson_weights(values.len(), h)?;
    Ok(w.iter().zip(values).map(|(wk, v)| wk * v).sum())
}
