//! Model-based bootstrap of the fitted warp.
//!
//! The fitted model (pooled mean, warp, and kernel density estimates of the
//! time designs and residual laws) regenerates whole dataset pairs; each
//! replicate is refitted with the original configuration and the fitted
//! warps' pointwise spread across replicates yields the standard error.
//! Times and errors are drawn from smooth density estimates rather than
//! resampled from the observed rows, so regenerated time samples are free
//! of ties almost surely.

use alloc::vec::Vec;

use crate::dataset::FunctionalDataset;
use crate::density::{kde_fit, DensityModel};
use crate::error::{Error, Result};
use crate::kernels::{Bandwidths, Kernel};
use crate::optimizer::{fit_warp, FitConfig, FitResult};
use crate::regression::{nadaraya_watson_pooled, residuals, MeanFunction};
use crate::rng;
use crate::warp::{TimeWarp, WarpFunction};

/// Frozen model estimate that generates bootstrap replicates.
#[derive(Debug, Clone)]
pub struct BootstrapPlan {
    pub mean: MeanFunction,
    pub warp: WarpFunction,
    pub time_density_1: DensityModel,
    pub time_density_2: DensityModel,
    pub error_density_1: DensityModel,
    pub error_density_2: DensityModel,
    pub n1: usize,
    pub n2: usize,
    pub config: FitConfig,
}

impl BootstrapPlan {
    /// Estimate all bootstrap ingredients from the data and a fitted warp.
    pub fn prepare(
        d1: &FunctionalDataset,
        d2: &FunctionalDataset,
        warp: &WarpFunction,
        config: FitConfig,
    ) -> Result<Self> {
        let mean = nadaraya_watson_pooled(d1, d2, warp, None)?;
        let r1 = residuals(d1, &mean, None);
        let r2 = residuals(d2, &mean, Some(warp));
        Ok(Self {
            mean,
            warp: warp.clone(),
            time_density_1: kde_fit(d1.times(), Kernel::Gaussian)?,
            time_density_2: kde_fit(d2.times(), Kernel::Gaussian)?,
            error_density_1: kde_fit(&r1, Kernel::Gaussian)?,
            error_density_2: kde_fit(&r2, Kernel::Gaussian)?,
            n1: d1.len(),
            n2: d2.len(),
            config,
        })
    }

    /// Regenerate one dataset pair. The stream is a pure function of
    /// `(master_seed, replicate)`; the draw order is target times, source
    /// times, target errors, source errors.
    pub fn synth_pair(
        &self,
        master_seed: u64,
        replicate: u64,
    ) -> Result<(FunctionalDataset, FunctionalDataset)> {
        let mut rng = rng::stream_rng(master_seed, replicate);
        let mut t: Vec<f64> = (0..self.n1)
            .map(|_| self.time_density_1.sample(&mut rng))
            .collect();
        t.sort_unstable_by(f64::total_cmp);
        let mut s: Vec<f64> = (0..self.n2)
            .map(|_| self.time_density_2.sample(&mut rng))
            .collect();
        s.sort_unstable_by(f64::total_cmp);
        let y1: Vec<f64> = t
            .iter()
            .map(|&ti| self.mean.eval(ti) + self.error_density_1.sample(&mut rng))
            .collect();
        // regenerated source times can fall just outside the fitted warp's
        // domain; extend by the end-segment slopes there
        let y2: Vec<f64> = s
            .iter()
            .map(|&sj| self.mean.eval(self.warp.eval_extended(sj)) + self.error_density_2.sample(&mut rng))
            .collect();
        Ok((
            FunctionalDataset::new(t, y1)?,
            FunctionalDataset::new(s, y2)?,
        ))
    }

    /// Run one replicate end to end: regenerate and refit.
    pub fn replicate(&self, master_seed: u64, replicate: u64) -> Result<FitResult> {
        let (d1, d2) = self.synth_pair(master_seed, replicate)?;
        let bw = Bandwidths::default_for(&d1, &d2)?;
        fit_warp(&d1, &d2, Kernel::Gaussian, Kernel::Gaussian, &bw, &self.config)
    }
}

/// Pointwise bootstrap standard error of the fitted warp.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapResult {
    pub eval_grid: Vec<f64>,
    pub se_curve: Vec<f64>,
    /// Fraction of successful replicates whose warp domain did not cover
    /// the grid point (the evaluation was clamped to the domain edge).
    pub flagged_fraction: Vec<f64>,
    pub replicate_count: usize,
    pub failed_replicates: usize,
    pub master_seed: u64,
}

/// Bootstrap standard error of the warp estimate on `eval_grid`.
///
/// Replicates are refitted with `config` (the configuration used for the
/// original fit). Grid points outside a replicate warp's domain are clamped
/// to the domain edge and flagged; replicates whose refit errors out are
/// excluded and counted. The standard error uses the (R-1)-divisor sample
/// standard deviation over the successful replicates.
pub fn bootstrap_se(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    fit: &FitResult,
    config: &FitConfig,
    replicates: usize,
    master_seed: u64,
    eval_grid: &[f64],
) -> Result<BootstrapResult> {
    if replicates < 2 {
        return Err(Error::InvalidConfig("replicates must be >= 2"));
    }
    if eval_grid.is_empty() {
        return Err(Error::InvalidConfig("eval_grid must be nonempty"));
    }
    let plan = BootstrapPlan::prepare(d1, d2, &fit.warp, config.clone())?;
    let outcomes: Vec<Result<FitResult>> = (0..replicates as u64)
        .map(|r| plan.replicate(master_seed, r))
        .collect();
    summarize(&outcomes, eval_grid, master_seed)
}

/// Reduce per-replicate fit outcomes (ordered by replicate index) to the
/// pointwise standard-error curve.
pub fn summarize(
    outcomes: &[Result<FitResult>],
    eval_grid: &[f64],
    master_seed: u64,
) -> Result<BootstrapResult> {
    let fits: Vec<&FitResult> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    let failed_replicates = outcomes.len() - fits.len();
    let r = fits.len();
    if r < 2 {
        return Err(Error::AllReplicatesFailed);
    }
    let npts = eval_grid.len();
    let mut se_curve = alloc::vec![0.0; npts];
    let mut flagged_fraction = alloc::vec![0.0; npts];
    for k in 0..npts {
        let t = eval_grid[k];
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut flagged = 0usize;
        for fit in &fits {
            let (lo, hi) = fit.warp.domain();
            if t < lo || t > hi {
                flagged += 1;
            }
            let v = fit.warp.eval_clamped(t);
            sum += v;
            sumsq += v * v;
        }
        let mean = sum / r as f64;
        se_curve[k] = libm::sqrt((sumsq - r as f64 * mean * mean).max(0.0) / (r - 1) as f64);
        flagged_fraction[k] = flagged as f64 / r as f64;
    }
    Ok(BootstrapResult {
        eval_grid: eval_grid.to_vec(),
        se_curve,
        flagged_fraction,
        replicate_count: outcomes.len(),
        failed_replicates,
        master_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Bandwidths;
    use crate::regression::MeanFunction;
    use alloc::vec;

    fn toy_pair() -> (FunctionalDataset, FunctionalDataset) {
        // mild sine signal with tiny deterministic jitter as "noise"
        let mean = MeanFunction::piecewise_linear(
            vec![0.0, 2.5, 5.0, 7.5, 10.0],
            vec![0.0, 2.0, -1.0, 1.5, 0.0],
        )
        .unwrap();
        let mut rng = rng::stream_rng(99, 0);
        let t: Vec<f64> = (0..30).map(|k| k as f64 / 2.9).collect();
        let y1: Vec<f64> = t
            .iter()
            .map(|&ti| mean.eval(ti) + 0.05 * rng::normal(&mut rng))
            .collect();
        let s = t.clone();
        let y2: Vec<f64> = s
            .iter()
            .map(|&sj| mean.eval(sj) + 0.05 * rng::normal(&mut rng))
            .collect();
        (
            FunctionalDataset::new(t, y1).unwrap(),
            FunctionalDataset::new(s, y2).unwrap(),
        )
    }

    fn quick_config() -> FitConfig {
        FitConfig {
            n_segments: Some(4),
            max_sweeps: 8,
            ..FitConfig::default()
        }
    }

    fn toy_fit() -> (FunctionalDataset, FunctionalDataset, FitResult) {
        let (d1, d2) = toy_pair();
        let bw = Bandwidths::default_for(&d1, &d2).unwrap();
        let cfg = quick_config();
        let fit = fit_warp(&d1, &d2, Kernel::Gaussian, Kernel::Gaussian, &bw, &cfg).unwrap();
        (d1, d2, fit)
    }

    #[test]
    fn replicate_sizes_match_originals() {
        let (d1, d2, fit) = toy_fit();
        let plan = BootstrapPlan::prepare(&d1, &d2, &fit.warp, quick_config()).unwrap();
        for r in 0..3 {
            let (b1, b2) = plan.synth_pair(42, r).unwrap();
            assert_eq!(b1.len(), d1.len());
            assert_eq!(b2.len(), d2.len());
        }
    }

    #[test]
    fn replicate_streams_are_stable_under_count_changes() {
        let (d1, d2, fit) = toy_fit();
        let plan = BootstrapPlan::prepare(&d1, &d2, &fit.warp, quick_config()).unwrap();
        // replicate r's draws depend only on (master_seed, r)
        let a = plan.synth_pair(7, 2).unwrap();
        let _ = plan.synth_pair(7, 5).unwrap();
        let b = plan.synth_pair(7, 2).unwrap();
        assert_eq!(a, b);
        let c = plan.synth_pair(8, 2).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn bootstrap_se_is_deterministic_and_nonnegative() {
        let (d1, d2, fit) = toy_fit();
        let cfg = quick_config();
        let grid: Vec<f64> = (0..11).map(|k| k as f64).collect();
        let a = bootstrap_se(&d1, &d2, &fit, &cfg, 6, 13, &grid).unwrap();
        let b = bootstrap_se(&d1, &d2, &fit, &cfg, 6, 13, &grid).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.replicate_count, 6);
        assert!(a.failed_replicates <= a.replicate_count);
        assert_eq!(a.se_curve.len(), grid.len());
        assert!(a.se_curve.iter().all(|s| *s >= 0.0));
        assert!(a
            .flagged_fraction
            .iter()
            .all(|f| (0.0..=1.0).contains(f)));
    }

    #[test]
    fn summarize_matches_two_pass_sd() {
        let (d1, d2, fit) = toy_fit();
        let plan = BootstrapPlan::prepare(&d1, &d2, &fit.warp, quick_config()).unwrap();
        let outcomes: Vec<Result<FitResult>> =
            (0..5).map(|r| plan.replicate(3, r)).collect();
        let grid: Vec<f64> = (0..7).map(|k| 1.0 + k as f64).collect();
        let out = summarize(&outcomes, &grid, 3).unwrap();
        let fits: Vec<&FitResult> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
        for (k, &t) in grid.iter().enumerate() {
            let vals: Vec<f64> = fits.iter().map(|f| f.warp.eval_clamped(t)).collect();
            let n = vals.len() as f64;
            let m = vals.iter().sum::<f64>() / n;
            let sd = libm::sqrt(
                vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0),
            );
            assert!((out.se_curve[k] - sd).abs() < 1e-12);
        }
    }

    #[test]
    fn summarize_counts_failures_and_rejects_empty() {
        let (d1, d2, fit) = toy_fit();
        let plan = BootstrapPlan::prepare(&d1, &d2, &fit.warp, quick_config()).unwrap();
        let good = plan.replicate(3, 0).unwrap();
        let outcomes = vec![
            Ok(good.clone()),
            Err(Error::DegenerateSample),
            Ok(good),
        ];
        let grid = vec![2.0, 5.0];
        let out = summarize(&outcomes, &grid, 0).unwrap();
        assert_eq!(out.failed_replicates, 1);
        assert_eq!(out.replicate_count, 3);

        let all_bad: Vec<Result<FitResult>> =
            vec![Err(Error::DegenerateSample), Err(Error::DegenerateSample)];
        assert!(matches!(
            summarize(&all_bad, &grid, 0),
            Err(Error::AllReplicatesFailed)
        ));
    }

    #[test]
    fn out_of_domain_grid_points_are_flagged() {
        let (d1, d2, fit) = toy_fit();
        let cfg = quick_config();
        let grid = vec![-50.0, 5.0];
        let out = bootstrap_se(&d1, &d2, &fit, &cfg, 4, 1, &grid).unwrap();
        assert_eq!(out.flagged_fraction[0], 1.0);
        // clamped evaluations are all equal at a far-out point only if the
        // replicate domains share a lower edge; just check the flag wiring
        assert!(out.flagged_fraction[1] < 1.0);
    }
}
