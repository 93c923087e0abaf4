//! Monte Carlo study harness: scenario generators and estimator-quality
//! aggregation.
//!
//! Four scenarios cross two true warps (a linear spline that lies inside
//! the search space, and a periodic perturbation that does not) with two
//! time designs (a fixed uniform grid, and fresh uniform draws per run).
//! The mean curve is a closed-form sawtooth with seven prominent peaks;
//! the noise level is a fixed fraction of the signal standard deviation.

use alloc::string::String;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::alignment::compute_criterion;
use crate::dataset::FunctionalDataset;
use crate::error::{Error, Result};
use crate::kernels::{Bandwidths, Kernel};
use crate::optimizer::{fit_warp, FitConfig};
use crate::quad;
use crate::regression::MeanFunction;
use crate::rng;
use crate::warp::TimeWarp;

/// Time domain of the study.
pub const DOMAIN: (f64, f64) = (0.0, 400.0);

/// Grid used for the signal-standard-deviation quadrature.
const SIGNAL_SD_NODES: usize = 4001;

/// Closed-form true warps of the study scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioWarp {
    /// `0.95 t + 0.2 (t-80)+ - 0.4 (t-160)+ + 0.6 (t-240)+ - 0.55 (t-320)+`
    LinearSpline,
    /// `t + 0.05 t sin(4 pi t / 400)`
    Periodic,
}

impl TimeWarp for ScenarioWarp {
    fn domain(&self) -> (f64, f64) {
        DOMAIN
    }
    fn warp(&self, t: f64) -> f64 {
        match self {
            ScenarioWarp::LinearSpline => {
                0.95 * t + 0.2 * (t - 80.0).max(0.0) - 0.4 * (t - 160.0).max(0.0)
                    + 0.6 * (t - 240.0).max(0.0)
                    - 0.55 * (t - 320.0).max(0.0)
            }
            ScenarioWarp::Periodic => {
                t + 0.05 * t * libm::sin(4.0 * core::f64::consts::PI * t / 400.0)
            }
        }
    }
}

/// True warp of a scenario id.
pub fn true_warp(scenario: u8) -> Result<ScenarioWarp> {
    match scenario {
        1 | 2 => Ok(ScenarioWarp::LinearSpline),
        3 | 4 => Ok(ScenarioWarp::Periodic),
        other => Err(Error::UnknownScenario(other)),
    }
}

/// Closed-form mean surrogate: a continuous sawtooth on [0, 400] with seven
/// prominent sharp peaks.
pub fn builtin_mean(mean_id: &str) -> Result<MeanFunction> {
    match mean_id {
        "sawtooth7" => MeanFunction::piecewise_linear(
            alloc::vec![
                0.0, 25.0, 60.0, 95.0, 130.0, 170.0, 200.0, 240.0, 270.0, 310.0, 340.0, 375.0,
                400.0
            ],
            alloc::vec![0.0, 8.0, 1.0, 9.0, 2.0, 7.0, 0.0, 9.0, 3.0, 8.0, 1.0, 6.0, 2.0],
        ),
        other => Err(Error::UnknownMeanId(String::from(other))),
    }
}

/// Root mean squared deviation of the mean function about its average over
/// `[lo, hi]`, by Simpson quadrature.
pub fn signal_sd(mean: &MeanFunction, lo: f64, hi: f64) -> Result<f64> {
    let span = hi - lo;
    let avg = quad::simpson(lo, hi, SIGNAL_SD_NODES, |t| mean.eval(t))? / span;
    let var = quad::simpson(lo, hi, SIGNAL_SD_NODES, |t| {
        let d = mean.eval(t) - avg;
        d * d
    })? / span;
    Ok(libm::sqrt(var))
}

/// Simulation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    /// Scenario id in 1..=4.
    pub scenario: u8,
    pub n1: usize,
    pub n2: usize,
    /// Noise standard deviation as a multiple of the signal SD.
    pub noise_factor: f64,
    pub runs: usize,
    pub master_seed: u64,
    pub mean_id: String,
}

impl ScenarioSpec {
    pub fn new(scenario: u8, runs: usize, master_seed: u64) -> Self {
        Self {
            scenario,
            n1: 250,
            n2: 250,
            noise_factor: 0.05,
            runs,
            master_seed,
            mean_id: String::from("sawtooth7"),
        }
    }

    fn validate(&self) -> Result<()> {
        true_warp(self.scenario)?;
        if self.n1 < 2 || self.n2 < 2 {
            return Err(Error::TooFewPoints);
        }
        if !(self.noise_factor >= 0.0) {
            return Err(Error::InvalidConfig("noise_factor must be >= 0"));
        }
        Ok(())
    }
}

fn equispaced(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| DOMAIN.0 + (DOMAIN.1 - DOMAIN.0) * k as f64 / (n - 1) as f64)
        .collect()
}

fn uniform_sorted(rng: &mut impl RngCore, n: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (0..n)
        .map(|_| rng::uniform_in(rng, DOMAIN.0, DOMAIN.1))
        .collect();
    t.sort_unstable_by(f64::total_cmp);
    t
}

/// Generate one simulated dataset pair together with the true warp.
/// The draw order (target times, source times, target errors, source
/// errors) is fixed, and the RNG stream is a pure function of
/// `(master_seed, run_index)`.
pub fn gen_run(
    spec: &ScenarioSpec,
    run_index: u64,
) -> Result<(FunctionalDataset, FunctionalDataset, ScenarioWarp)> {
    spec.validate()?;
    let warp = true_warp(spec.scenario)?;
    let mean = builtin_mean(&spec.mean_id)?;
    let noise_sd = spec.noise_factor * signal_sd(&mean, DOMAIN.0, DOMAIN.1)?;

    let mut rng = rng::stream_rng(spec.master_seed, run_index);
    let fixed_grid = matches!(spec.scenario, 1 | 3);
    let t = if fixed_grid {
        equispaced(spec.n1)
    } else {
        uniform_sorted(&mut rng, spec.n1)
    };
    let s = if fixed_grid {
        equispaced(spec.n2)
    } else {
        uniform_sorted(&mut rng, spec.n2)
    };
    let y1: Vec<f64> = t
        .iter()
        .map(|&ti| mean.eval(ti) + noise_sd * rng::normal(&mut rng))
        .collect();
    let y2: Vec<f64> = s
        .iter()
        .map(|&sj| mean.eval(warp.warp(sj)) + noise_sd * rng::normal(&mut rng))
        .collect();
    Ok((
        FunctionalDataset::new(t, y1)?,
        FunctionalDataset::new(s, y2)?,
        warp,
    ))
}

/// Per-run record: the fitted warp on the evaluation grid and the
/// criterion diagnostic pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// Fitted warp evaluated on the study grid (end-slope extended where a
    /// run's source span falls short of the grid).
    pub curve: Vec<f64>,
    /// Criterion at the true warp (closed form).
    pub criterion_at_truth: f64,
    /// Criterion at the fitted warp.
    pub criterion_at_fit: f64,
    pub converged: bool,
}

/// Uniform evaluation grid over the study domain; `size` must be odd so
/// Simpson integrals are well formed.
pub fn eval_grid(size: usize) -> Result<Vec<f64>> {
    if size < 3 || size % 2 == 0 {
        return Err(Error::InvalidQuadrature(size));
    }
    Ok((0..size)
        .map(|k| DOMAIN.0 + (DOMAIN.1 - DOMAIN.0) * k as f64 / (size - 1) as f64)
        .collect())
}

/// Generate, fit, and record a single run.
pub fn run_once(
    spec: &ScenarioSpec,
    cfg: &FitConfig,
    grid: &[f64],
    run_index: u64,
) -> Result<RunRecord> {
    let (d1, d2, truth) = gen_run(spec, run_index)?;
    let bw = Bandwidths::default_for(&d1, &d2)?;
    let fit = fit_warp(&d1, &d2, Kernel::Gaussian, Kernel::Gaussian, &bw, cfg)?;
    let at_truth = compute_criterion(&d1, &d2, &truth, Kernel::Gaussian, Kernel::Gaussian, &bw)?;
    let curve = grid.iter().map(|&t| fit.warp.eval_extended(t)).collect();
    Ok(RunRecord {
        curve,
        criterion_at_truth: at_truth.value,
        criterion_at_fit: fit.criterion.value,
        converged: fit.converged,
    })
}

/// Aggregated estimator-quality metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub eval_grid: Vec<f64>,
    pub bias: Vec<f64>,
    pub sd: Vec<f64>,
    pub mse: Vec<f64>,
    /// Mean over runs of the integrated squared warp error, divided by the
    /// squared norm of the true warp (Simpson integrals on the grid).
    pub normalized_imse: f64,
    /// `(criterion at truth, criterion at fit)` per successful run.
    pub criterion_pairs: Vec<(f64, f64)>,
    pub failed_runs: usize,
}

/// Combine per-run records against the true warp curve on the grid.
/// `sd` uses the (R-1)-divisor sample SD and `mse` the R-divisor mean, so
/// `mse = bias^2 + (R-1)/R * sd^2` holds exactly.
pub fn aggregate(
    grid: Vec<f64>,
    truth_curve: &[f64],
    records: &[Result<RunRecord>],
) -> Result<RunMetrics> {
    let successes: Vec<&RunRecord> = records.iter().filter_map(|r| r.as_ref().ok()).collect();
    let failed_runs = records.len() - successes.len();
    let r = successes.len();
    if r == 0 {
        return Err(Error::AllReplicatesFailed);
    }
    let npts = grid.len();
    let mut bias = alloc::vec![0.0; npts];
    let mut sd = alloc::vec![0.0; npts];
    let mut mse = alloc::vec![0.0; npts];
    for k in 0..npts {
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for rec in &successes {
            let e = rec.curve[k] - truth_curve[k];
            sum += e;
            sumsq += e * e;
        }
        let mean_err = sum / r as f64;
        bias[k] = mean_err;
        mse[k] = sumsq / r as f64;
        sd[k] = if r > 1 {
            libm::sqrt((sumsq - r as f64 * mean_err * mean_err).max(0.0) / (r - 1) as f64)
        } else {
            0.0
        };
    }

    let h = (grid[npts - 1] - grid[0]) / (npts - 1) as f64;
    let truth_sq: Vec<f64> = truth_curve.iter().map(|g| g * g).collect();
    let denom = quad::simpson_samples(&truth_sq, h)?;
    let mut imse_sum = 0.0;
    for rec in &successes {
        let errsq: Vec<f64> = rec
            .curve
            .iter()
            .zip(truth_curve)
            .map(|(c, g)| (c - g) * (c - g))
            .collect();
        imse_sum += quad::simpson_samples(&errsq, h)?;
    }
    let normalized_imse = imse_sum / r as f64 / denom;

    Ok(RunMetrics {
        eval_grid: grid,
        bias,
        sd,
        mse,
        normalized_imse,
        criterion_pairs: successes
            .iter()
            .map(|rec| (rec.criterion_at_truth, rec.criterion_at_fit))
            .collect(),
        failed_runs,
    })
}

/// Run the full study sequentially.
pub fn run_study(spec: &ScenarioSpec, cfg: &FitConfig, eval_grid_size: usize) -> Result<RunMetrics> {
    spec.validate()?;
    let grid = eval_grid(eval_grid_size)?;
    let truth = true_warp(spec.scenario)?;
    let truth_curve: Vec<f64> = grid.iter().map(|&t| truth.warp(t)).collect();
    let records: Vec<Result<RunRecord>> = (0..spec.runs as u64)
        .map(|run| run_once(spec, cfg, &grid, run))
        .collect();
    aggregate(grid, &truth_curve, &records)
}
