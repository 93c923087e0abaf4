//! Kernel functions and bandwidth rules.
//!
//! The time kernel weights observation pairs by proximity of `t_i` to the
//! warped source time; the value kernel scores similarity of the observed
//! values. The default for both is Gaussian: a vanishing time kernel can
//! zero the criterion denominator, which the Gaussian never does.

use core::f64::consts::PI;
use core::str::FromStr;

use crate::dataset::FunctionalDataset;
use crate::error::{Error, Result};

/// Symmetric probability-density kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kernel {
    #[default]
    Gaussian,
    Epanechnikov,
    Triangular,
    Uniform,
    Biweight,
}

impl Kernel {
    /// Density value at `u`.
    pub fn eval(self, u: f64) -> f64 {
        match self {
            Kernel::Gaussian => libm::exp(-0.5 * u * u) / libm::sqrt(2.0 * PI),
            Kernel::Epanechnikov => {
                if u.abs() < 1.0 {
                    0.75 * (1.0 - u * u)
                } else {
                    0.0
                }
            }
            Kernel::Triangular => {
                if u.abs() < 1.0 {
                    1.0 - u.abs()
                } else {
                    0.0
                }
            }
            Kernel::Uniform => {
                if u.abs() < 1.0 {
                    0.5
                } else {
                    0.0
                }
            }
            Kernel::Biweight => {
                if u.abs() < 1.0 {
                    let w = 1.0 - u * u;
                    15.0 / 16.0 * w * w
                } else {
                    0.0
                }
            }
        }
    }

    /// True for kernels supported on all of the real line.
    pub fn has_unbounded_support(self) -> bool {
        matches!(self, Kernel::Gaussian)
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Gaussian => "gaussian",
            Kernel::Epanechnikov => "epanechnikov",
            Kernel::Triangular => "triangular",
            Kernel::Uniform => "uniform",
            Kernel::Biweight => "biweight",
        }
    }
}

impl FromStr for Kernel {
    type Err = &'static str;
    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "gaussian" => Ok(Kernel::Gaussian),
            "epanechnikov" => Ok(Kernel::Epanechnikov),
            "triangular" => Ok(Kernel::Triangular),
            "uniform" => Ok(Kernel::Uniform),
            "biweight" => Ok(Kernel::Biweight),
            _ => Err("unknown kernel (expected gaussian|epanechnikov|triangular|uniform|biweight)"),
        }
    }
}

/// Time and value bandwidths for the alignment criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidths {
    pub time: f64,
    pub value: f64,
}

impl Bandwidths {
    pub fn new(time: f64, value: f64) -> Result<Self> {
        if !(time > 0.0) || !time.is_finite() {
            return Err(Error::InvalidBandwidth(time));
        }
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InvalidBandwidth(value));
        }
        Ok(Self { time, value })
    }

    /// Default rules: the time bandwidth is half the average consecutive
    /// time gap of the lesser dense dataset (the one with the larger mean
    /// gap; ties resolve to the first), and the value bandwidth is 10% of
    /// the pooled range of observed values.
    pub fn default_for(d1: &FunctionalDataset, d2: &FunctionalDataset) -> Result<Self> {
        let gap1 = d1.mean_time_gap()?;
        let gap2 = d2.mean_time_gap()?;
        let sparser_gap = if gap2 > gap1 { gap2 } else { gap1 };

        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in d1.values().iter().chain(d2.values().iter()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !(hi > lo) {
            return Err(Error::DegenerateRange);
        }
        Self::new(0.5 * sparser_gap, 0.10 * (hi - lo))
    }
}
