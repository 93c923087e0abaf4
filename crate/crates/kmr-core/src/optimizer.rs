//! Rotated one-dimensional grid search over the warp coefficients.
//!
//! The criterion is maximized coordinate by coordinate: each knot value is
//! swept over a symmetric candidate grid, candidates violating monotonicity
//! are discarded, and the best strict improvement is kept. When a full
//! sweep improves the criterion by less than the relative tolerance, the
//! candidate half-width shrinks, refining the search resolution until it
//! falls below the slope floor times the knot spacing.

use alloc::vec::Vec;

use crate::alignment::{compute_criterion, CriterionValue};
use crate::dataset::FunctionalDataset;
use crate::error::{Error, Result};
use crate::kernels::{Bandwidths, Kernel};
use crate::warp::{WarpFunction, MIN_SLOPE};

/// Configuration of the coordinate grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    /// Number of spline segments; `None` applies the smaller-sample rule
    /// of [`resolve_segments`].
    pub n_segments: Option<usize>,
    /// Stopping threshold on the relative criterion change per sweep.
    pub rel_tol: f64,
    /// Candidate values per coordinate sweep (odd, >= 3, so the incumbent
    /// is always a candidate).
    pub grid_points: usize,
    pub max_sweeps: usize,
    /// Half-width multiplier applied when a sweep stalls; in (0, 1).
    pub shrink_factor: f64,
    /// Initial candidate half-width; `None` means one knot spacing.
    pub initial_halfwidth: Option<f64>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            n_segments: None,
            rel_tol: 1e-4,
            grid_points: 21,
            max_sweeps: 200,
            shrink_factor: 0.5,
            initial_halfwidth: None,
        }
    }
}

impl FitConfig {
    fn validate(&self) -> Result<()> {
        if let Some(k) = self.n_segments {
            if k < 1 {
                return Err(Error::InvalidConfig("n_segments must be >= 1"));
            }
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidConfig("rel_tol must be positive"));
        }
        if self.grid_points < 3 || self.grid_points % 2 == 0 {
            return Err(Error::InvalidConfig("grid_points must be odd and >= 3"));
        }
        if self.max_sweeps < 1 {
            return Err(Error::InvalidConfig("max_sweeps must be >= 1"));
        }
        if !(self.shrink_factor > 0.0 && self.shrink_factor < 1.0) {
            return Err(Error::InvalidConfig("shrink_factor must lie in (0, 1)"));
        }
        if let Some(h) = self.initial_halfwidth {
            if !(h > 0.0) {
                return Err(Error::InvalidConfig("initial_halfwidth must be positive"));
            }
        }
        Ok(())
    }
}

/// Outcome of a fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub warp: WarpFunction,
    pub criterion: CriterionValue,
    pub sweeps_used: usize,
    /// Criterion value after each sweep (first entry: initial iterate).
    /// Non-decreasing by construction.
    pub criterion_trace: Vec<f64>,
    /// True iff the half-width stopping rule fired before `max_sweeps`.
    pub converged: bool,
}

/// Segment-count rule: 10 times the fifth root of the smaller sample size,
/// rounded to the nearest integer.
pub fn resolve_segments(d1: &FunctionalDataset, d2: &FunctionalDataset) -> Result<usize> {
    if d1.is_empty() || d2.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let m = d1.len().min(d2.len()) as f64;
    Ok(libm::round(10.0 * libm::pow(m, 0.2)) as usize)
}

/// Fit the warp maximizing the alignment criterion, starting from the
/// identity map on the source time span.
pub fn fit_warp(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    k1: Kernel,
    k2: Kernel,
    bw: &Bandwidths,
    cfg: &FitConfig,
) -> Result<FitResult> {
    let segments = match cfg.n_segments {
        Some(k) => k,
        None => resolve_segments(d1, d2)?,
    };
    let (s_lo, s_hi) = d2.time_span();
    if !(s_hi > s_lo) {
        return Err(Error::TooFewPoints);
    }
    let start = WarpFunction::identity(s_lo, s_hi, segments)?;
    fit_warp_from(d1, d2, k1, k2, bw, cfg, start)
}

/// Fit from an explicit starting warp (used by random restarts).
pub fn fit_warp_from(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    k1: Kernel,
    k2: Kernel,
    bw: &Bandwidths,
    cfg: &FitConfig,
    start: WarpFunction,
) -> Result<FitResult> {
    cfg.validate()?;
    let spacing = start.knot_spacing();
    let mut halfwidth = cfg.initial_halfwidth.unwrap_or(spacing);
    let halfwidth_floor = MIN_SLOPE * spacing;

    let mut warp = start;
    let mut best = compute_criterion(d1, d2, &warp, k1, k2, bw)?;
    let mut trace = alloc::vec![best.value];

    let mut sweeps_used = 0;
    let mut converged = false;
    while sweeps_used < cfg.max_sweeps {
        sweeps_used += 1;
        let sweep_start = best.value;
        for index in 0..=warp.segments() {
            let incumbent = warp.values()[index];
            let mut chosen: Option<(f64, CriterionValue, WarpFunction)> = None;
            for k in 0..cfg.grid_points {
                let offset =
                    halfwidth * (2.0 * k as f64 / (cfg.grid_points - 1) as f64 - 1.0);
                if offset == 0.0 {
                    continue; // incumbent already scored
                }
                let Some(candidate) = warp.with_value(index, incumbent + offset)? else {
                    continue;
                };
                let value = compute_criterion(d1, d2, &candidate, k1, k2, bw)?;
                let beats_incumbent = value.value > best.value;
                let beats_chosen = chosen
                    .as_ref()
                    .map_or(true, |(chosen_value, _, _)| value.value > *chosen_value);
                if beats_incumbent && beats_chosen {
                    chosen = Some((value.value, value, candidate));
                }
            }
            if let Some((_, value, candidate)) = chosen {
                warp = candidate;
                best = value;
            }
        }
        trace.push(best.value);

        let rel_gain = (best.value - sweep_start) / sweep_start.abs().max(f64::MIN_POSITIVE);
        if rel_gain < cfg.rel_tol {
            halfwidth *= cfg.shrink_factor;
        }
        if halfwidth < halfwidth_floor {
            converged = true;
            break;
        }
    }

    Ok(FitResult {
        warp,
        criterion: best,
        sweeps_used,
        criterion_trace: trace,
        converged,
    })
}
