//! Kernel-matched registration of irregularly sampled functional data.
//!
//! Two series measuring the same underlying signal on different, possibly
//! warped time scales are aligned by a monotone piecewise-linear warp that
//! maximizes a kernel-based matching criterion between all observation
//! pairs. The crate provides the criterion, the coordinate-wise grid-search
//! optimizer, a pooled kernel regression estimate of the common mean, a
//! model-based bootstrap for pointwise standard errors of the warp, a
//! Monte Carlo study harness, and alignment-quality metrics.
//!
//! The crate is `no_std` compatible (with `alloc`); the `std` feature
//! (default) only switches the math backend niceties and is required by
//! none of the algorithms.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod alignment;
pub mod bootstrap;
pub mod dataset;
pub mod density;
pub mod error;
mod interp;
pub mod kernels;
pub mod metrics;
pub mod optimizer;
pub mod quad;
pub mod regression;
pub mod rng;
pub mod simulation;
pub mod warp;

pub use alignment::{compute_criterion, compute_limit_criterion, CriterionValue, QuadratureSettings};
pub use bootstrap::{bootstrap_se, BootstrapPlan, BootstrapResult};
pub use dataset::FunctionalDataset;
pub use density::{kde_fit, DensityModel};
pub use error::{Error, Result};
pub use kernels::{Bandwidths, Kernel};
pub use metrics::{alignment_report, mean_squared_gap, AlignmentReport};
pub use optimizer::{fit_warp, fit_warp_from, resolve_segments, FitConfig, FitResult};
pub use regression::{nadaraya_watson_pooled, nw_from_pooled, residuals, MeanFunction};
pub use simulation::{
    builtin_mean, gen_run, run_once, run_study, signal_sd, true_warp, RunMetrics, RunRecord,
    ScenarioSpec, ScenarioWarp,
};
pub use warp::{Identity, TimeWarp, WarpFunction, MIN_SLOPE};
