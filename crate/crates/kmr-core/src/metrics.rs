//! Alignment-quality metrics for real data pairs.
//!
//! The headline number is the average squared difference between the two
//! linearly interpolated series over a uniform grid on the interval where
//! both (post-warp) time spans overlap; comparing it before and after
//! registration quantifies the improvement.

use alloc::vec::Vec;

use crate::dataset::FunctionalDataset;
use crate::error::{Error, Result};
use crate::interp;
use crate::warp::TimeWarp;

/// Before/after comparison produced by a registration run.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentReport {
    pub pre_gap: f64,
    pub post_gap: f64,
    pub grid_size: usize,
    /// Interval the post-warp comparison was computed over.
    pub overlap_interval: (f64, f64),
}

/// Average squared difference between the linear interpolants of `d1` (on
/// its own times) and `d2` (on warped times), over a uniform grid of
/// `grid_size` points spanning the overlap of the two spans.
pub fn mean_squared_gap(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    w: &impl TimeWarp,
    grid_size: usize,
) -> Result<f64> {
    Ok(gap_with_overlap(d1, d2, w, grid_size)?.0)
}

pub(crate) fn gap_with_overlap(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    w: &impl TimeWarp,
    grid_size: usize,
) -> Result<(f64, (f64, f64))> {
    if grid_size < 2 {
        return Err(Error::GridTooSmall(grid_size));
    }
    let warped: Vec<f64> = d2.times().iter().map(|&s| w.warp(s)).collect();
    let lo = d1.times()[0].max(warped[0]);
    let hi = d1.times()[d1.len() - 1].min(warped[warped.len() - 1]);
    if !(hi > lo) {
        return Err(Error::NoOverlap);
    }
    let mut acc = 0.0;
    for k in 0..grid_size {
        let t = lo + (hi - lo) * k as f64 / (grid_size - 1) as f64;
        let y1 = interp::lerp_clamped(d1.times(), d1.values(), t);
        let y2 = interp::lerp_clamped(&warped, d2.values(), t);
        let d = y1 - y2;
        acc += d * d;
    }
    Ok((acc / grid_size as f64, (lo, hi)))
}

/// Full before/after report for a fitted warp.
pub fn alignment_report(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    w: &impl TimeWarp,
    grid_size: usize,
) -> Result<AlignmentReport> {
    let pre_gap = mean_squared_gap(d1, d2, &crate::warp::Identity, grid_size)?;
    let (post_gap, overlap_interval) = gap_with_overlap(d1, d2, w, grid_size)?;
    Ok(AlignmentReport {
        pre_gap,
        post_gap,
        grid_size,
        overlap_interval,
    })
}
