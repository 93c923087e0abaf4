//! Probability densities usable both for pointwise evaluation and sampling.
//!
//! Closed forms serve the simulation scenarios and quadrature oracles; the
//! kernel density estimate backs the model-based bootstrap, where sampling
//! from fitted densities (rather than resampling observed rows) avoids ties
//! in regenerated time samples.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::quad;
use crate::rng;

/// Number of bandwidth candidates for likelihood cross-validation.
const CV_GRID: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub enum DensityModel {
    Gaussian { mean: f64, sd: f64 },
    Uniform { lo: f64, hi: f64 },
    /// Symmetric triangular density on [center - halfwidth, center + halfwidth].
    Triangular { center: f64, halfwidth: f64 },
    Kde {
        sample: Vec<f64>,
        kernel: Kernel,
        bandwidth: f64,
    },
}

impl DensityModel {
    pub fn standard_normal() -> Self {
        DensityModel::Gaussian { mean: 0.0, sd: 1.0 }
    }

    /// Pointwise density value.
    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            DensityModel::Gaussian { mean, sd } => {
                let z = (x - mean) / sd;
                libm::exp(-0.5 * z * z) / (sd * libm::sqrt(2.0 * PI))
            }
            DensityModel::Uniform { lo, hi } => {
                if x >= *lo && x <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            DensityModel::Triangular { center, halfwidth } => {
                let z = (x - center) / halfwidth;
                if z.abs() < 1.0 {
                    (1.0 - z.abs()) / halfwidth
                } else {
                    0.0
                }
            }
            DensityModel::Kde {
                sample,
                kernel,
                bandwidth,
            } => {
                let mut acc = 0.0;
                for &xi in sample {
                    acc += kernel.eval((x - xi) / bandwidth);
                }
                acc / (sample.len() as f64 * bandwidth)
            }
        }
    }

    /// One draw from the density.
    pub fn sample(&self, rng: &mut impl RngCore) -> f64 {
        match self {
            DensityModel::Gaussian { mean, sd } => mean + sd * rng::normal(rng),
            DensityModel::Uniform { lo, hi } => rng::uniform_in(rng, *lo, *hi),
            DensityModel::Triangular { center, halfwidth } => {
                let u = rng::uniform(rng) + rng::uniform(rng) - 1.0;
                center + halfwidth * u
            }
            DensityModel::Kde {
                sample,
                kernel,
                bandwidth,
            } => {
                let idx =
                    ((rng::uniform(rng) * sample.len() as f64) as usize).min(sample.len() - 1);
                sample[idx] + bandwidth * kernel_noise(*kernel, rng)
            }
        }
    }

    /// Interval outside which the density is negligible; `pad` is measured
    /// in standard deviations (or bandwidths, for the KDE).
    pub fn effective_range(&self, pad: f64) -> (f64, f64) {
        match self {
            DensityModel::Gaussian { mean, sd } => (mean - pad * sd, mean + pad * sd),
            DensityModel::Uniform { lo, hi } => (*lo, *hi),
            DensityModel::Triangular { center, halfwidth } => {
                (center - halfwidth, center + halfwidth)
            }
            DensityModel::Kde {
                sample, bandwidth, ..
            } => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for &x in sample {
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
                (lo - pad * bandwidth, hi + pad * bandwidth)
            }
        }
    }

    /// Density of the sum of independent draws from `self` and `other`,
    /// evaluated at `u` by Simpson quadrature with `nodes` nodes.
    pub fn convolution_at(&self, other: &DensityModel, u: f64, nodes: usize) -> Result<f64> {
        let (lo, hi) = self.effective_range(10.0);
        quad::simpson(lo, hi, nodes, |v| self.pdf(v) * other.pdf(u - v))
    }
}

/// Draw from the kernel's own density (unit scale).
fn kernel_noise(kernel: Kernel, rng: &mut impl RngCore) -> f64 {
    match kernel {
        Kernel::Gaussian => rng::normal(rng),
        Kernel::Uniform => rng::uniform_in(rng, -1.0, 1.0),
        Kernel::Triangular => rng::uniform(rng) + rng::uniform(rng) - 1.0,
        Kernel::Epanechnikov => {
            // median of three uniforms on (-1, 1)
            let mut u = [
                rng::uniform_in(rng, -1.0, 1.0),
                rng::uniform_in(rng, -1.0, 1.0),
                rng::uniform_in(rng, -1.0, 1.0),
            ];
            u.sort_unstable_by(f64::total_cmp);
            u[1]
        }
        Kernel::Biweight => loop {
            let x = rng::uniform_in(rng, -1.0, 1.0);
            let y = rng::uniform_in(rng, 0.0, 15.0 / 16.0);
            if y < Kernel::Biweight.eval(x) {
                break x;
            }
        },
    }
}

/// Fit a KDE to `sample`, choosing the bandwidth that maximizes the
/// leave-one-out log-likelihood over a logarithmic grid from 0.05x to 5x
/// the sample standard deviation.
pub fn kde_fit(sample: &[f64], kernel: Kernel) -> Result<DensityModel> {
    if sample.len() < 2 {
        return Err(Error::DegenerateSample);
    }
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let var = sample.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    if !(var > 0.0) {
        return Err(Error::DegenerateSample);
    }
    let sd = libm::sqrt(var);

    let (lo, hi) = (0.05 * sd, 5.0 * sd);
    let log_step = libm::log(hi / lo) / (CV_GRID - 1) as f64;
    let mut best_h = lo;
    let mut best_ll = f64::NEG_INFINITY;
    for k in 0..CV_GRID {
        let h = lo * libm::exp(log_step * k as f64);
        let ll = loo_log_likelihood(sample, kernel, h);
        if ll > best_ll {
            best_ll = ll;
            best_h = h;
        }
    }
    Ok(DensityModel::Kde {
        sample: sample.to_vec(),
        kernel,
        bandwidth: best_h,
    })
}

fn loo_log_likelihood(sample: &[f64], kernel: Kernel, h: f64) -> f64 {
    let n = sample.len();
    let mut ll = 0.0;
    for i in 0..n {
        let mut acc = 0.0;
        for (j, &xj) in sample.iter().enumerate() {
            if j != i {
                acc += kernel.eval((sample[i] - xj) / h);
            }
        }
        let dens = acc / ((n - 1) as f64 * h);
        if dens <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ll += libm::log(dens);
    }
    ll
}
