//! Estimation of the common mean function after registration.
//!
//! Once a warp maps the source times onto the target scale, both samples
//! inform a single pooled Nadaraya-Watson smoother. The leave-one-out
//! cross-validation pools both samples; the bandwidth grid is logarithmic
//! over 0.1x to 10x the pooled mean time gap.

use alloc::vec::Vec;

use crate::dataset::FunctionalDataset;
use crate::error::{Error, Result};
use crate::interp;
use crate::kernels::Kernel;
use crate::warp::TimeWarp;

/// Number of bandwidth candidates for the pooled cross-validation.
const CV_GRID: usize = 50;

/// A mean function: either a closed-form piecewise-linear curve (simulation
/// truth) or a pooled kernel regression estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanFunction {
    PiecewiseLinear { xs: Vec<f64>, ys: Vec<f64> },
    NadarayaWatson {
        times: Vec<f64>,
        values: Vec<f64>,
        kernel: Kernel,
        bandwidth: f64,
    },
}

impl MeanFunction {
    /// Closed-form continuous piecewise-linear mean through the given
    /// vertices; extended linearly by the end-segment slopes.
    pub fn piecewise_linear(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                times: xs.len(),
                values: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::TooFewPoints);
        }
        for (k, pair) in xs.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::NonIncreasingTimes(k + 1));
            }
        }
        Ok(MeanFunction::PiecewiseLinear { xs, ys })
    }

    pub fn constant(c: f64) -> Self {
        MeanFunction::PiecewiseLinear {
            xs: alloc::vec![0.0, 1.0],
            ys: alloc::vec![c, c],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            MeanFunction::PiecewiseLinear { xs, ys } => interp::lerp_extended(xs, ys, t),
            MeanFunction::NadarayaWatson {
                times,
                values,
                kernel,
                bandwidth,
            } => {
                let mut num = 0.0;
                let mut den = 0.0;
                for (&ti, &yi) in times.iter().zip(values.iter()) {
                    let w = kernel.eval((t - ti) / bandwidth);
                    num += w * yi;
                    den += w;
                }
                if den > 0.0 {
                    num / den
                } else {
                    // compact kernels can underflow far from the data;
                    // fall back to the nearest observation
                    let mut best = (f64::INFINITY, 0.0);
                    for (&ti, &yi) in times.iter().zip(values.iter()) {
                        let d = (t - ti).abs();
                        if d < best.0 {
                            best = (d, yi);
                        }
                    }
                    best.1
                }
            }
        }
    }

    /// True when `t` falls inside the support of the defining points; false
    /// marks extrapolation.
    pub fn in_hull(&self, t: f64) -> bool {
        let xs = match self {
            MeanFunction::PiecewiseLinear { xs, .. } => xs,
            MeanFunction::NadarayaWatson { times, .. } => times,
        };
        let (lo, hi) = (
            xs.iter().cloned().fold(f64::INFINITY, f64::min),
            xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        );
        (lo..=hi).contains(&t)
    }
}

/// Pooled Nadaraya-Watson estimate of the mean: target observations at their
/// own times, source observations at warped times. `bandwidth = None`
/// selects by pooled leave-one-out cross-validation.
pub fn nadaraya_watson_pooled(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    warp: &impl TimeWarp,
    bandwidth: Option<f64>,
) -> Result<MeanFunction> {
    let mut times: Vec<f64> = d1.times().to_vec();
    times.extend(d2.times().iter().map(|&s| warp.warp(s)));
    let mut values: Vec<f64> = d1.values().to_vec();
    values.extend_from_slice(d2.values());
    nw_from_pooled(times, values, Kernel::Gaussian, bandwidth)
}

/// Nadaraya-Watson estimator on an explicit pooled sample.
pub fn nw_from_pooled(
    times: Vec<f64>,
    values: Vec<f64>,
    kernel: Kernel,
    bandwidth: Option<f64>,
) -> Result<MeanFunction> {
    if times.is_empty() {
        return Err(Error::DegeneratePooledSample);
    }
    if times.len() != values.len() {
        return Err(Error::LengthMismatch {
            times: times.len(),
            values: values.len(),
        });
    }
    let bandwidth = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(Error::InvalidBandwidth(h)),
        None => select_bandwidth_loocv(&times, &values, kernel)?,
    };
    Ok(MeanFunction::NadarayaWatson {
        times,
        values,
        kernel,
        bandwidth,
    })
}

/// Leave-one-out squared-prediction-error bandwidth selection on a 50-point
/// logarithmic grid spanning 0.1x to 10x the pooled mean time gap.
fn select_bandwidth_loocv(times: &[f64], values: &[f64], kernel: Kernel) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let mut sorted = times.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let span = sorted[sorted.len() - 1] - sorted[0];
    if !(span > 0.0) {
        return Err(Error::DegenerateRange);
    }
    let mean_gap = span / (times.len() - 1) as f64;
    let lo = 0.1 * mean_gap;
    let log_step = libm::log(100.0) / (CV_GRID - 1) as f64;
    let mut best = (f64::INFINITY, lo);
    for k in 0..CV_GRID {
        let h = lo * libm::exp(log_step * k as f64);
        let err = loocv_error(times, values, kernel, h);
        if err < best.0 {
            best = (err, h);
        }
    }
    Ok(best.1)
}

pub(crate) fn loocv_error(times: &[f64], values: &[f64], kernel: Kernel, h: f64) -> f64 {
    let n = times.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..n {
            if j != i {
                let w = kernel.eval((times[i] - times[j]) / h);
                num += w * values[j];
                den += w;
            }
        }
        if den <= 0.0 {
            return f64::INFINITY;
        }
        let resid = values[i] - num / den;
        total += resid * resid;
    }
    total / n as f64
}

/// Residuals of a dataset against a mean function, optionally through a warp
/// (source residuals are taken at warped times).
pub fn residuals(
    d: &FunctionalDataset,
    mean: &MeanFunction,
    warp: Option<&dyn TimeWarp>,
) -> Vec<f64> {
    d.times()
        .iter()
        .zip(d.values().iter())
        .map(|(&t, &y)| {
            let u = warp.map_or(t, |w| w.warp(t));
            y - mean.eval(u)
        })
        .collect()
}
