//! End-to-end acceptance checks for the registration pipeline.
//!
//! Each test prints one `acceptance <name>: PASS|FAIL` line (visible with
//! `--nocapture`, or automatically on failure).

use kmr_core::*;

fn report(name: &str, ok: bool) {
    println!("acceptance {name}: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "acceptance criterion failed: {name}");
}

fn sorted_uniform(rng: &mut impl rand_core::RngCore, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut t: Vec<f64> = (0..n).map(|_| rng::uniform_in(rng, lo, hi)).collect();
    t.sort_unstable_by(f64::total_cmp);
    t.dedup();
    t
}

/// Untruncated, textbook double-loop criterion used as the oracle.
fn naive_criterion(
    d1: &FunctionalDataset,
    d2: &FunctionalDataset,
    w: &impl TimeWarp,
    k1: Kernel,
    k2: Kernel,
    bw: &Bandwidths,
) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&sj, &y2j) in d2.times().iter().zip(d2.values()) {
        let wsj = w.warp(sj);
        for (&ti, &y1i) in d1.times().iter().zip(d1.values()) {
            let wt = k1.eval((ti - wsj) / bw.time) / bw.time;
            num += wt * k2.eval((y1i - y2j) / bw.value) / bw.value;
            den += wt;
        }
    }
    num / den
}

#[test]
fn criterion_oracle_equivalence() {
    let mut rng = rng::stream_rng(1001, 0);
    let mut ok = true;
    for case in 0..100 {
        let n1 = 5 + (rng::uniform(&mut rng) * 196.0) as usize;
        let n2 = 5 + (rng::uniform(&mut rng) * 196.0) as usize;
        let t = sorted_uniform(&mut rng, n1, 0.0, 100.0);
        let s = sorted_uniform(&mut rng, n2, 0.0, 100.0);
        let y1: Vec<f64> = (0..t.len()).map(|_| rng::normal(&mut rng)).collect();
        let y2: Vec<f64> = (0..s.len()).map(|_| rng::normal(&mut rng)).collect();
        let d1 = FunctionalDataset::new(t, y1).unwrap();
        let d2 = FunctionalDataset::new(s, y2).unwrap();

        // random monotone warp over the source span, roughly onto [0, 100]
        let segs = 3 + case % 8;
        let (lo, hi) = d2.time_span();
        let mut incs: Vec<f64> = (0..segs).map(|_| rng::uniform_in(&mut rng, 0.2, 2.0)).collect();
        let total: f64 = incs.iter().sum();
        for inc in &mut incs {
            *inc *= 100.0 / total;
        }
        let mut values = vec![rng::uniform_in(&mut rng, -5.0, 5.0)];
        for inc in incs {
            values.push(values.last().unwrap() + inc);
        }
        let w = WarpFunction::from_values(lo, hi, values).unwrap();

        let k2 = [
            Kernel::Gaussian,
            Kernel::Epanechnikov,
            Kernel::Triangular,
            Kernel::Uniform,
            Kernel::Biweight,
        ][case % 5];
        let k1 = if case % 2 == 0 {
            Kernel::Gaussian
        } else {
            Kernel::Epanechnikov
        };
        let bw = Bandwidths::default_for(&d1, &d2).unwrap();

        let fast = compute_criterion(&d1, &d2, &w, k1, k2, &bw);
        let slow = naive_criterion(&d1, &d2, &w, k1, k2, &bw);
        match fast {
            Ok(c) => {
                let rel = (c.value - slow).abs() / slow.abs().max(1e-300);
                if !(rel < 1e-12) {
                    eprintln!("case {case}: rel error {rel}");
                    ok = false;
                }
            }
            Err(Error::ZeroDenominator) => {
                // compact time kernel with no overlapping support; the naive
                // oracle divides 0/0 there
                if slow.is_finite() {
                    ok = false;
                }
            }
            Err(e) => {
                eprintln!("case {case}: unexpected error {e}");
                ok = false;
            }
        }
    }
    report("criterion-oracle-equivalence", ok);
}

/// The true warp plus a smooth bump that keeps the slope positive.
struct BumpWarp {
    base: ScenarioWarp,
    amplitude: f64,
    phase: f64,
}

impl TimeWarp for BumpWarp {
    fn domain(&self) -> (f64, f64) {
        self.base.domain()
    }
    fn warp(&self, t: f64) -> f64 {
        let x = (t - self.phase) * std::f64::consts::PI / 400.0;
        self.base.warp(t) + self.amplitude * x.sin() * x.sin()
    }
}

#[test]
fn limit_criterion_maximizer_property() {
    let g0 = true_warp(1).unwrap();
    let mean = builtin_mean("sawtooth7").unwrap();
    let f1 = DensityModel::Gaussian { mean: 200.0, sd: 60.0 };
    let f2 = DensityModel::Gaussian { mean: 200.0, sd: 60.0 };
    let fe = DensityModel::standard_normal();
    let settings = QuadratureSettings::default();

    let l0 = compute_limit_criterion(&g0, &g0, &mean, &f1, &f2, &fe, &fe, &settings).unwrap();
    let analytic = 1.0 / (2.0 * std::f64::consts::PI.sqrt());
    let mut ok = (l0 - analytic).abs() < 1e-4;
    if !ok {
        eprintln!("L(g0) = {l0}, analytic = {analytic}");
    }

    let mut rng = rng::stream_rng(2002, 0);
    for k in 0..50 {
        let g = BumpWarp {
            base: g0,
            amplitude: 1.0 + 39.0 * k as f64 / 49.0,
            phase: rng::uniform_in(&mut rng, 0.0, 400.0),
        };
        let l = compute_limit_criterion(&g, &g0, &mean, &f1, &f2, &fe, &fe, &settings).unwrap();
        if !(l <= l0 + 1e-6) {
            eprintln!("bump {k}: L = {l} exceeds L(g0) = {l0}");
            ok = false;
        }
    }
    report("limit-criterion-maximizer", ok);
}

#[test]
fn convolved_error_density_unimodal() {
    let cases = [
        DensityModel::standard_normal(),
        DensityModel::Triangular { center: 0.0, halfwidth: 1.0 },
    ];
    let mut ok = true;
    for f in &cases {
        let peak = f.convolution_at(f, 0.0, 2001).unwrap();
        let mut u = 0.01;
        while u <= 5.0 {
            for sign in [-1.0, 1.0] {
                let v = f.convolution_at(f, sign * u, 2001).unwrap();
                if !(peak > v) {
                    eprintln!("convolution not peaked at 0: f(0)={peak} f({})={v}", sign * u);
                    ok = false;
                }
            }
            u += 0.05;
        }
    }
    report("error-convolution-unimodal", ok);
}

fn scenario_runs(
    scenario: u8,
    n: usize,
    runs: usize,
    seed: u64,
    grid: &[f64],
) -> Vec<Result<RunRecord>> {
    let mut spec = ScenarioSpec::new(scenario, runs, seed);
    spec.n1 = n;
    spec.n2 = n;
    let cfg = FitConfig::default();
    (0..runs as u64)
        .map(|r| run_once(&spec, &cfg, grid, r))
        .collect()
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn grid_sup_errors(records: &[Result<RunRecord>], truth: &[f64]) -> Vec<f64> {
    records
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|rec| {
            rec.curve
                .iter()
                .zip(truth)
                .map(|(c, g)| (c - g).abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

#[test]
fn scenario1_recovery() {
    let grid = simulation::eval_grid(801).unwrap();
    let g0 = true_warp(1).unwrap();
    let truth: Vec<f64> = grid.iter().map(|&t| g0.warp(t)).collect();
    let records = scenario_runs(1, 250, 20, 41, &grid);
    let metrics = simulation::aggregate(grid, &truth, &records).unwrap();

    let ht = 0.5 * 400.0 / 249.0;
    let sup_med = median(grid_sup_errors(&records, &truth));
    let ok = metrics.failed_runs == 0 && metrics.normalized_imse < 1e-3 && sup_med < 2.0 * ht;
    println!(
        "  scenario 1: normalized_imse = {:.3e}, median sup error = {:.3} (limit {:.3})",
        metrics.normalized_imse,
        sup_med,
        2.0 * ht
    );
    report("scenario1-recovery", ok);
}

#[test]
fn ascent_and_determinism() {
    let mut spec = ScenarioSpec::new(1, 1, 7);
    spec.n1 = 120;
    spec.n2 = 120;
    let (d1, d2, _) = gen_run(&spec, 0).unwrap();
    let bw = Bandwidths::default_for(&d1, &d2).unwrap();
    let cfg = FitConfig::default();
    let a = fit_warp(&d1, &d2, Kernel::Gaussian, Kernel::Gaussian, &bw, &cfg).unwrap();
    let b = fit_warp(&d1, &d2, Kernel::Gaussian, Kernel::Gaussian, &bw, &cfg).unwrap();

    let bitwise = a.warp.values() == b.warp.values()
        && a.criterion_trace == b.criterion_trace
        && a.criterion.value == b.criterion.value;
    let monotone = a
        .criterion_trace
        .windows(2)
        .all(|p| p[1] >= p[0]);
    report("ascent-and-determinism", bitwise && monotone);
}

#[test]
fn alignment_gap_improvement() {
    let mut improved = 0;
    let mut halved = 0;
    for seed in 0..10u64 {
        let mut spec = ScenarioSpec::new(2, 1, 9000 + seed);
        spec.n1 = 150;
        spec.n2 = 150;
        let (d1, d2, _) = gen_run(&spec, 0).unwrap();
        let bw = Bandwidths::default_for(&d1, &d2).unwrap();
        let fit = fit_warp(
            &d1,
            &d2,
            Kernel::Gaussian,
            Kernel::Gaussian,
            &bw,
            &FitConfig::default(),
        )
        .unwrap();
        let rep = alignment_report(&d1, &d2, &fit.warp, 1000).unwrap();
        if rep.post_gap < rep.pre_gap {
            improved += 1;
        }
        if rep.post_gap < 0.5 * rep.pre_gap {
            halved += 1;
        }
    }
    println!("  gap improved in {improved}/10, halved in {halved}/10");
    report("alignment-gap-improvement", improved >= 9 && halved >= 7);
}

#[test]
fn bootstrap_se_sanity() {
    let grid: Vec<f64> = (0..41).map(|k| k as f64 * 10.0).collect();

    // Monte Carlo SD of the fitted warp over independent runs
    let mut spec = ScenarioSpec::new(4, 50, 555);
    spec.n1 = 150;
    spec.n2 = 150;
    let cfg = FitConfig::default();
    let records: Vec<RunRecord> = (0..50u64)
        .map(|r| run_once(&spec, &cfg, &grid, r).unwrap())
        .collect();
    let mc_sd: Vec<f64> = (0..grid.len())
        .map(|k| {
            let vals: Vec<f64> = records.iter().map(|r| r.curve[k]).collect();
            let m = vals.iter().sum::<f64>() / vals.len() as f64;
            (vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (vals.len() - 1) as f64).sqrt()
        })
        .collect();

    // bootstrap SE from a single instance
    let (d1, d2, _) = gen_run(&spec, 3).unwrap();
    let bw = Bandwidths::default_for(&d1, &d2).unwrap();
    let fit = fit_warp(&d1, &d2, Kernel::Gaussian, Kernel::Gaussian, &bw, &cfg).unwrap();
    let boot = bootstrap_se(&d1, &d2, &fit, &cfg, 50, 901, &grid).unwrap();

    // interior = at least 20 time units away from either domain edge
    let interior: Vec<usize> = (0..grid.len())
        .filter(|&k| grid[k] >= 20.0 && grid[k] <= 380.0)
        .collect();
    let good = interior
        .iter()
        .filter(|&&k| {
            let ratio = boot.se_curve[k] / mc_sd[k];
            (1.0 / 3.0..=3.0).contains(&ratio)
        })
        .count();
    println!(
        "  SE/SD within [1/3, 3] at {good}/{} interior points ({} replicates failed)",
        interior.len(),
        boot.failed_replicates
    );
    report(
        "bootstrap-se-sanity",
        good as f64 >= 0.8 * interior.len() as f64,
    );
}

#[test]
fn mse_decomposition_identity() {
    let mut ok = true;
    for (scenario, n) in [(1u8, 80usize), (4, 60)] {
        let mut spec = ScenarioSpec::new(scenario, 10, 303);
        spec.n1 = n;
        spec.n2 = n;
        let m = run_study(&spec, &FitConfig::default(), 201).unwrap();
        let r = (10 - m.failed_runs) as f64;
        for k in 0..m.eval_grid.len() {
            let recon = m.bias[k] * m.bias[k] + (r - 1.0) / r * m.sd[k] * m.sd[k];
            if (m.mse[k] - recon).abs() >= 1e-9 {
                eprintln!(
                    "scenario {scenario} grid {k}: mse {} vs decomposition {recon}",
                    m.mse[k]
                );
                ok = false;
            }
        }
    }
    report("mse-decomposition-identity", ok);
}

#[test]
fn consistency_trend() {
    let grid = simulation::eval_grid(801).unwrap();
    let g0 = true_warp(1).unwrap();
    let truth: Vec<f64> = grid.iter().map(|&t| g0.warp(t)).collect();

    let small = scenario_runs(1, 100, 20, 606, &grid);
    let large = scenario_runs(1, 400, 20, 606, &grid);
    let med_small = median(grid_sup_errors(&small, &truth));
    let med_large = median(grid_sup_errors(&large, &truth));
    println!("  median sup error: n=100 -> {med_small:.3}, n=400 -> {med_large:.3}");
    report("consistency-trend", med_large < med_small);
}
