//! `kmr` — kernel-matched registration of two irregularly sampled series.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use kmr::csv::{load_csv, write_columns_csv, write_series_csv};
use kmr::warpjson::{load_warp, save_warp};
use kmr::{init_threads, CliError};
use kmr_core as core;
use kmr_core::{
    alignment_report, compute_criterion, fit_warp, fit_warp_from, nadaraya_watson_pooled,
    Bandwidths, BootstrapPlan, FitConfig, FitResult, FunctionalDataset, Identity, Kernel,
    MeanFunction, TimeWarp, WarpFunction,
};

#[derive(Parser)]
#[command(name = "kmr", version, about = "Register two irregularly sampled series by kernel-matched time warping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Direction {
    /// Warp the source onto the target time scale.
    Forward,
    /// Swap the roles of the two files.
    Reverse,
    /// Run both directions and keep the smaller post-alignment gap.
    Best,
}

#[derive(Args)]
struct DataPair {
    /// Target series CSV (time,value)
    #[arg(long)]
    target: PathBuf,
    /// Source series CSV (time,value)
    #[arg(long)]
    source: PathBuf,
}

#[derive(Args)]
struct BandwidthArgs {
    /// Time bandwidth: `auto` or a positive number
    #[arg(long, default_value = "auto")]
    ht: String,
    /// Value bandwidth: `auto` or a positive number
    #[arg(long, default_value = "auto")]
    hy: String,
    /// Time-proximity kernel
    #[arg(long, value_enum, default_value = "gaussian")]
    kernel_t: KernelArg,
    /// Value-similarity kernel
    #[arg(long, value_enum, default_value = "gaussian")]
    kernel_y: KernelArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Gaussian,
    Epanechnikov,
    Triangular,
    Uniform,
    Biweight,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Kernel {
        match k {
            KernelArg::Gaussian => Kernel::Gaussian,
            KernelArg::Epanechnikov => Kernel::Epanechnikov,
            KernelArg::Triangular => Kernel::Triangular,
            KernelArg::Uniform => Kernel::Uniform,
            KernelArg::Biweight => Kernel::Biweight,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit the time warp aligning the source series to the target series
    Register {
        #[command(flatten)]
        data: DataPair,
        #[command(flatten)]
        bw: BandwidthArgs,
        /// Number of spline segments: `auto` or a positive integer
        #[arg(long, default_value = "auto")]
        knots: String,
        #[arg(long, value_enum, default_value = "forward")]
        direction: Direction,
        /// Extra random starts beyond the identity start
        #[arg(long, default_value_t = 0)]
        restarts: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output warp JSON path
        #[arg(long)]
        out: PathBuf,
        /// Optional CSV of the source series on the target time scale
        #[arg(long)]
        aligned_out: Option<PathBuf>,
        /// Optional CSV of the per-sweep criterion trace
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Evaluate the alignment criterion for a given warp
    Criterion {
        #[command(flatten)]
        data: DataPair,
        #[arg(long)]
        warp: PathBuf,
        #[command(flatten)]
        bw: BandwidthArgs,
    },
    /// Pointwise bootstrap standard errors of a fitted warp
    Bootstrap {
        #[command(flatten)]
        data: DataPair,
        #[arg(long)]
        warp: PathBuf,
        #[arg(long, default_value_t = 1000)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Evaluation grid size over the warp domain
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pooled kernel estimate of the common mean function
    Mean {
        #[command(flatten)]
        data: DataPair,
        #[arg(long)]
        warp: PathBuf,
        #[arg(long, default_value_t = 401)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Average squared difference between the two series
    Gap {
        #[command(flatten)]
        data: DataPair,
        /// Optional warp applied to the source times
        #[arg(long)]
        warp: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Monte Carlo study of estimator quality on synthetic scenarios
    Simulate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        scenario: u8,
        #[arg(long)]
        runs: usize,
        /// Sample size for both datasets
        #[arg(long, default_value_t = 250)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Evaluation grid size (odd)
        #[arg(long, default_value_t = 401)]
        grid: usize,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_auto_f64(name: &str, raw: &str) -> Result<Option<f64>, CliError> {
    if raw == "auto" {
        return Ok(None);
    }
    let v: f64 = raw
        .parse()
        .map_err(|_| CliError::Usage(format!("--{name} must be `auto` or a number, got {raw:?}")))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(CliError::Usage(format!("--{name} must be positive, got {v}")));
    }
    Ok(Some(v))
}

fn parse_auto_usize(name: &str, raw: &str) -> Result<Option<usize>, CliError> {
    if raw == "auto" {
        return Ok(None);
    }
    let v: usize = raw
        .parse()
        .map_err(|_| CliError::Usage(format!("--{name} must be `auto` or a positive integer, got {raw:?}")))?;
    if v == 0 {
        return Err(CliError::Usage(format!("--{name} must be >= 1")));
    }
    Ok(Some(v))
}

fn resolve_bandwidths(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    bw: &BandwidthArgs,
) -> Result<Bandwidths, CliError> {
    let ht = parse_auto_f64("ht", &bw.ht)?;
    let hy = parse_auto_f64("hy", &bw.hy)?;
    Ok(match (ht, hy) {
        (Some(t), Some(y)) => Bandwidths::new(t, y)?,
        _ => {
            let auto = Bandwidths::default_for(d1, d2)?;
            Bandwidths::new(ht.unwrap_or(auto.time), hy.unwrap_or(auto.value))?
        }
    })
}

/// Identity start with seeded uniform knot jitter of at most 0.45 spacings,
/// which keeps every slope positive.
fn jittered_start(
    lo: f64,
    hi: f64,
    segments: usize,
    seed: u64,
    restart: u64,
) -> Result<WarpFunction, CliError> {
    let base = WarpFunction::identity(lo, hi, segments)?;
    let spacing = base.knot_spacing();
    let mut rng = core::rng::stream_rng(seed, restart);
    let values: Vec<f64> = base
        .values()
        .iter()
        .map(|&v| v + core::rng::uniform_in(&mut rng, -0.45 * spacing, 0.45 * spacing))
        .collect();
    Ok(WarpFunction::from_values(lo, hi, values)?)
}

struct RegisteredFit {
    fit: FitResult,
    bw: Bandwidths,
    report: core::AlignmentReport,
}

fn register_one_direction(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    bw_args: &BandwidthArgs,
    cfg: &FitConfig,
    restarts: u64,
    seed: u64,
) -> Result<RegisteredFit, CliError> {
    let bw = resolve_bandwidths(d1, d2, bw_args)?;
    let k1: Kernel = bw_args.kernel_t.into();
    let k2: Kernel = bw_args.kernel_y.into();
    let mut best = fit_warp(d1, d2, k1, k2, &bw, cfg)?;
    if restarts > 0 {
        let segments = best.warp.segments();
        let (lo, hi) = d2.time_span();
        for r in 1..=restarts {
            let start = jittered_start(lo, hi, segments, seed, r)?;
            let cand = fit_warp_from(d1, d2, k1, k2, &bw, cfg, start)?;
            if cand.criterion.value > best.criterion.value {
                best = cand;
            }
        }
    }
    let report = alignment_report(d1, d2, &best.warp, 1000)?;
    Ok(RegisteredFit { fit: best, bw, report })
}

#[allow(clippy::too_many_arguments)]
fn cmd_register(
    data: &DataPair,
    bw_args: &BandwidthArgs,
    knots: &str,
    direction: Direction,
    restarts: u64,
    seed: u64,
    out: &Path,
    aligned_out: Option<&Path>,
    trace: Option<&Path>,
) -> Result<(), CliError> {
    let target = load_csv(&data.target)?;
    let source = load_csv(&data.source)?;
    let cfg = FitConfig {
        n_segments: parse_auto_usize("knots", knots)?,
        ..FitConfig::default()
    };

    let forward = || register_one_direction(&target, &source, bw_args, &cfg, restarts, seed);
    let reverse = || register_one_direction(&source, &target, bw_args, &cfg, restarts, seed);
    let (chosen, used_direction, warped_series) = match direction {
        Direction::Forward => (forward()?, "forward", &source),
        Direction::Reverse => (reverse()?, "reverse", &target),
        Direction::Best => {
            let f = forward()?;
            let r = reverse()?;
            if r.report.post_gap < f.report.post_gap {
                (r, "reverse", &target)
            } else {
                (f, "forward", &source)
            }
        }
    };

    save_warp(out, &chosen.fit.warp)?;
    if let Some(path) = aligned_out {
        let warped: Vec<f64> = warped_series
            .times()
            .iter()
            .map(|&s| chosen.fit.warp.eval_clamped(s))
            .collect();
        write_series_csv(path, &warped, warped_series.values())?;
    }
    if let Some(path) = trace {
        let sweeps: Vec<f64> = (0..chosen.fit.criterion_trace.len()).map(|k| k as f64).collect();
        write_columns_csv(path, &["sweep", "criterion"], &[&sweeps, &chosen.fit.criterion_trace])?;
    }

    println!(
        "{}",
        json!({
            "direction": used_direction,
            "converged": chosen.fit.converged,
            "sweeps": chosen.fit.sweeps_used,
            "criterion": chosen.fit.criterion.value,
            "segments": chosen.fit.warp.segments(),
            "ht": chosen.bw.time,
            "hy": chosen.bw.value,
            "pre_gap": chosen.report.pre_gap,
            "post_gap": chosen.report.post_gap,
            "warp": out,
        })
    );
    if !chosen.fit.converged {
        return Err(CliError::NonConvergence);
    }
    Ok(())
}

fn cmd_criterion(data: &DataPair, warp: &Path, bw_args: &BandwidthArgs) -> Result<(), CliError> {
    let d1 = load_csv(&data.target)?;
    let d2 = load_csv(&data.source)?;
    let w = load_warp(warp)?;
    let bw = resolve_bandwidths(&d1, &d2, bw_args)?;
    let c = compute_criterion(&d1, &d2, &w, bw_args.kernel_t.into(), bw_args.kernel_y.into(), &bw)?;
    println!(
        "{}",
        json!({ "l_n": c.value, "N_n": c.numerator, "D_n": c.denominator, "ht": bw.time, "hy": bw.value })
    );
    Ok(())
}

fn cmd_bootstrap(
    data: &DataPair,
    warp: &Path,
    replicates: usize,
    seed: u64,
    grid: usize,
    out: &Path,
) -> Result<(), CliError> {
    if replicates < 2 {
        return Err(CliError::Usage("--replicates must be >= 2".into()));
    }
    if grid < 2 {
        return Err(CliError::Usage("--grid must be >= 2".into()));
    }
    let d1 = load_csv(&data.target)?;
    let d2 = load_csv(&data.source)?;
    let w = load_warp(warp)?;
    let cfg = FitConfig {
        n_segments: Some(w.segments()),
        ..FitConfig::default()
    };
    let (lo, hi) = w.domain();
    let eval_grid: Vec<f64> = (0..grid)
        .map(|k| lo + (hi - lo) * k as f64 / (grid - 1) as f64)
        .collect();

    let plan = BootstrapPlan::prepare(&d1, &d2, &w, cfg)?;
    // replicate index fixes the RNG stream, so the schedule cannot matter
    let outcomes: Vec<core::Result<FitResult>> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| plan.replicate(seed, r))
        .collect();
    let result = core::bootstrap::summarize(&outcomes, &eval_grid, seed)?;

    write_columns_csv(
        out,
        &["t", "se", "flagged_fraction"],
        &[&result.eval_grid, &result.se_curve, &result.flagged_fraction],
    )?;
    println!(
        "{}",
        json!({
            "replicates": result.replicate_count,
            "failed_replicates": result.failed_replicates,
            "seed": result.master_seed,
            "grid": grid,
            "out": out,
        })
    );
    Ok(())
}

fn cmd_mean(data: &DataPair, warp: &Path, grid: usize, out: &Path) -> Result<(), CliError> {
    if grid < 2 {
        return Err(CliError::Usage("--grid must be >= 2".into()));
    }
    let d1 = load_csv(&data.target)?;
    let d2 = load_csv(&data.source)?;
    let w = load_warp(warp)?;
    let mean = nadaraya_watson_pooled(&d1, &d2, &w, None)?;
    let (t_lo, t_hi) = d1.time_span();
    let lo = t_lo.min(w.eval_clamped(d2.times()[0]));
    let hi = t_hi.max(w.eval_clamped(*d2.times().last().unwrap()));
    let ts: Vec<f64> = (0..grid)
        .map(|k| lo + (hi - lo) * k as f64 / (grid - 1) as f64)
        .collect();
    let ms: Vec<f64> = ts.iter().map(|&t| mean.eval(t)).collect();
    write_columns_csv(out, &["t", "mean"], &[&ts, &ms])?;
    let bandwidth = match &mean {
        MeanFunction::NadarayaWatson { bandwidth, .. } => *bandwidth,
        MeanFunction::PiecewiseLinear { .. } => unreachable!("pooled estimate is kernel-based"),
    };
    println!(
        "{}",
        json!({ "bandwidth": bandwidth, "grid": grid, "range": [lo, hi], "out": out })
    );
    Ok(())
}

fn cmd_gap(data: &DataPair, warp: Option<&Path>, grid: usize) -> Result<(), CliError> {
    let d1 = load_csv(&data.target)?;
    let d2 = load_csv(&data.source)?;
    let report = match warp {
        Some(path) => {
            let w = load_warp(path)?;
            alignment_report(&d1, &d2, &w, grid)?
        }
        None => alignment_report(&d1, &d2, &Identity, grid)?,
    };
    println!(
        "{}",
        json!({
            "pre_gap": report.pre_gap,
            "post_gap": report.post_gap,
            "grid_size": report.grid_size,
            "overlap": [report.overlap_interval.0, report.overlap_interval.1],
        })
    );
    Ok(())
}

fn cmd_simulate(
    scenario: u8,
    runs: usize,
    n: usize,
    seed: u64,
    grid_size: usize,
    out_dir: &Path,
) -> Result<(), CliError> {
    if runs == 0 {
        return Err(CliError::Usage("--runs must be >= 1".into()));
    }
    let mut spec = core::ScenarioSpec::new(scenario, runs, seed);
    spec.n1 = n;
    spec.n2 = n;
    let cfg = FitConfig::default();
    let grid = core::simulation::eval_grid(grid_size)
        .map_err(|e| CliError::Usage(format!("--grid: {e}")))?;
    let g0 = core::true_warp(scenario)?;
    let truth: Vec<f64> = grid.iter().map(|&t| g0.warp(t)).collect();

    let records: Vec<core::Result<core::RunRecord>> = (0..runs as u64)
        .into_par_iter()
        .map(|r| core::run_once(&spec, &cfg, &grid, r))
        .collect();
    let metrics = core::simulation::aggregate(grid, &truth, &records)?;

    std::fs::create_dir_all(out_dir)?;
    write_columns_csv(
        &out_dir.join("metrics.csv"),
        &["t", "bias", "sd", "mse"],
        &[&metrics.eval_grid, &metrics.bias, &metrics.sd, &metrics.mse],
    )?;
    let (truth_col, fit_col): (Vec<f64>, Vec<f64>) = metrics.criterion_pairs.iter().copied().unzip();
    write_columns_csv(
        &out_dir.join("criterion_pairs.csv"),
        &["criterion_at_truth", "criterion_at_fit"],
        &[&truth_col, &fit_col],
    )?;
    let truth_above = truth_col
        .iter()
        .zip(&fit_col)
        .filter(|(t, f)| t > f)
        .count() as f64
        / truth_col.len().max(1) as f64;
    let summary = json!({
        "scenario": scenario,
        "runs": runs,
        "n": n,
        "seed": seed,
        "grid": grid_size,
        "normalized_imse": metrics.normalized_imse,
        "failed_runs": metrics.failed_runs,
        "fraction_truth_criterion_above_fit": truth_above,
    });
    std::fs::write(
        out_dir.join("summary.json"),
        serde_json::to_string_pretty(&summary).map_err(|e| CliError::Data(e.to_string()))? + "\n",
    )?;
    println!("{summary}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match &cli.command {
        Command::Register {
            data,
            bw,
            knots,
            direction,
            restarts,
            seed,
            out,
            aligned_out,
            trace,
        } => cmd_register(
            data,
            bw,
            knots,
            *direction,
            *restarts,
            *seed,
            out,
            aligned_out.as_deref(),
            trace.as_deref(),
        ),
        Command::Criterion { data, warp, bw } => cmd_criterion(data, warp, bw),
        Command::Bootstrap {
            data,
            warp,
            replicates,
            seed,
            grid,
            out,
        } => cmd_bootstrap(data, warp, *replicates, *seed, *grid, out),
        Command::Mean { data, warp, grid, out } => cmd_mean(data, warp, *grid, out),
        Command::Gap { data, warp, grid } => cmd_gap(data, warp.as_deref(), *grid),
        Command::Simulate {
            scenario,
            runs,
            n,
            seed,
            grid,
            out,
        } => cmd_simulate(*scenario, *runs, *n, *seed, *grid, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kmr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
