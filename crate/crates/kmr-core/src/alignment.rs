//! The kernel-matched alignment criterion and its population limit.
//!
//! `compute_criterion` evaluates the empirical alignment score of two
//! datasets under a candidate warp: a double sum of value-similarity kernel
//! scores weighted by time-proximity kernel weights, normalized by the sum
//! of the weights. `compute_limit_criterion` evaluates the population limit
//! of that score by tensor-product Simpson quadrature; it exists chiefly as
//! an oracle for the maximizer property of the true warp.

use alloc::vec::Vec;

use crate::dataset::FunctionalDataset;
use crate::density::DensityModel;
use crate::error::{Error, Result};
use crate::kernels::{Bandwidths, Kernel};
use crate::quad;
use crate::regression::MeanFunction;
use crate::warp::TimeWarp;

/// Cutoff, in bandwidths, beyond which a Gaussian time weight is dropped.
/// exp(-72) ~ 5e-32 keeps the truncated sum within 1e-12 relative error of
/// the full double sum.
const GAUSSIAN_CUTOFF: f64 = 12.0;

/// Empirical criterion value with its numerator and denominator parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionValue {
    /// The alignment score, numerator / denominator.
    pub value: f64,
    pub numerator: f64,
    pub denominator: f64,
}

/// Evaluate the alignment criterion of `d1` (target) and `d2` (source)
/// under warp `w`. Pure in its inputs; the summation order is fixed, so
/// identical inputs give bit-identical results.
pub fn compute_criterion(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    w: &impl TimeWarp,
    k1: Kernel,
    k2: Kernel,
    bw: &Bandwidths,
) -> Result<CriterionValue> {
    let (lo, hi) = w.domain();
    let tol = 1e-9 * (hi - lo).abs().max(1.0);
    for &s in d2.times() {
        if s < lo - tol || s > hi + tol {
            return Err(Error::OutOfDomain { t: s, lo, hi });
        }
    }
    let warped: Vec<f64> = d2.times().iter().map(|&s| w.warp(s)).collect();

    let cutoff = if k1.has_unbounded_support() {
        GAUSSIAN_CUTOFF
    } else {
        1.0
    };
    let (mut num, mut den) = accumulate(d1, d2, &warped, k1, k2, bw, Some(cutoff));
    if den <= 0.0 {
        // window may have missed everything; retry without truncation
        (num, den) = accumulate(d1, d2, &warped, k1, k2, bw, None);
    }
    if den <= 0.0 {
        return Err(Error::ZeroDenominator);
    }

    let scale = 1.0 / (d1.len() as f64 * d2.len() as f64);
    let numerator = num * scale / (bw.time * bw.value);
    let denominator = den * scale / bw.time;
    Ok(CriterionValue {
        value: numerator / denominator,
        numerator,
        denominator,
    })
}

fn accumulate(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    warped: &[f64],
    k1: Kernel,
    k2: Kernel,
    bw: &Bandwidths,
    cutoff: Option<f64>,
) -> (f64, f64) {
    let times = d1.times();
    let y1 = d1.values();
    let y2 = d2.values();
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &wsj) in warped.iter().enumerate() {
        let (i_lo, i_hi) = match cutoff {
            Some(c) => {
                let lo = times.partition_point(|&t| t < wsj - c * bw.time);
                let hi = times.partition_point(|&t| t <= wsj + c * bw.time);
                (lo, hi)
            }
            None => (0, times.len()),
        };
        for i in i_lo..i_hi {
            let wt = k1.eval((times[i] - wsj) / bw.time);
            num += wt * k2.eval((y1[i] - y2[j]) / bw.value);
            den += wt;
        }
    }
    (num, den)
}

/// Node counts and tail padding for the limit-criterion quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    /// Simpson nodes per axis; odd, >= 3.
    pub nodes_per_axis: usize,
    /// Integration box padding in standard deviations of the densities.
    pub sd_padding: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            nodes_per_axis: 801,
            sd_padding: 8.0,
        }
    }
}

/// Population limit of the alignment criterion for warp `g` when the truth
/// is `g0`, evaluated by tensor-product Simpson quadrature:
///
/// ```text
/// L(g) = [ ii f1(g(y)) f2(y) fe1(v - m(g(y)) + m(g0(y))) fe2(v) dy dv ]
///        / [ i f1(g(y)) f2(y) dy ]
/// ```
#[allow(clippy::too_many_arguments)]
pub fn compute_limit_criterion(
    g: &impl TimeWarp,
    g0: &impl TimeWarp,
    mean: &MeanFunction,
    f1: &DensityModel,
    f2: &DensityModel,
    fe1: &DensityModel,
    fe2: &DensityModel,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let n = settings.nodes_per_axis;
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidQuadrature(n));
    }
    let pad = settings.sd_padding;

    let (f2_lo, f2_hi) = f2.effective_range(pad);
    let y_lo = f2_lo.max(g.domain().0).max(g0.domain().0);
    let y_hi = f2_hi.min(g.domain().1).min(g0.domain().1);
    if !(y_hi > y_lo) {
        return Err(Error::NoOverlap);
    }

    let hy = (y_hi - y_lo) / (n - 1) as f64;
    let wy = quad::simpson_weights(n, hy)?;
    let mut weight = Vec::with_capacity(n); // f1(g(y)) f2(y), Simpson-weighted
    let mut shift = Vec::with_capacity(n); // m(g(y)) - m(g0(y))
    for k in 0..n {
        let y = y_lo + hy * k as f64;
        weight.push(wy[k] * f1.pdf(g.warp(y)) * f2.pdf(y));
        shift.push(mean.eval(g.warp(y)) - mean.eval(g0.warp(y)));
    }
    let denominator: f64 = weight.iter().sum();
    if !(denominator > 0.0) {
        return Err(Error::ZeroDenominator);
    }

    let (fe1_lo, fe1_hi) = fe1.effective_range(pad);
    let (fe2_lo, fe2_hi) = fe2.effective_range(pad);
    let shift_min = shift.iter().cloned().fold(f64::INFINITY, f64::min);
    let shift_max = shift.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let v_lo = fe2_lo.min(shift_min + fe1_lo);
    let v_hi = fe2_hi.max(shift_max + fe1_hi);

    let hv = (v_hi - v_lo) / (n - 1) as f64;
    let wv = quad::simpson_weights(n, hv)?;
    let v_nodes: Vec<f64> = (0..n).map(|k| v_lo + hv * k as f64).collect();
    let fe2_at: Vec<f64> = v_nodes.iter().map(|&v| fe2.pdf(v)).collect();

    let mut numerator = 0.0;
    for (wk, dm) in weight.iter().zip(shift.iter()) {
        if *wk == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for (k, &v) in v_nodes.iter().enumerate() {
            inner += wv[k] * fe1.pdf(v - dm) * fe2_at[k];
        }
        numerator += wk * inner;
    }
    Ok(numerator / denominator)
}
