//! Monotone linear-spline time warps.
//!
//! A [`WarpFunction`] is a continuous, strictly increasing piecewise-linear
//! function on a closed interval, stored as its values at equidistant knots.
//! For linear splines on equidistant knots this representation is equivalent
//! to B-spline coefficients, and monotonicity reduces to an increasing-values
//! check with a positive slope floor.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Lower bound on warp slopes, as a ratio of time units. Strictly positive
/// so every stored warp is invertible in principle.
pub const MIN_SLOPE: f64 = 1e-6;

/// Relative tolerance for the equidistant-knots check.
const KNOT_TOL: f64 = 1e-9;

/// A continuous, strictly increasing time transformation on a closed domain.
pub trait TimeWarp {
    /// The closed interval on which the warp is defined.
    fn domain(&self) -> (f64, f64);
    /// Warped time for `t` inside the domain.
    fn warp(&self, t: f64) -> f64;
}

/// The identity transformation, defined everywhere.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl TimeWarp for Identity {
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn warp(&self, t: f64) -> f64 {
        t
    }
}

/// Monotone linear B-spline warp on equidistant knots.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl WarpFunction {
    /// Build a warp from explicit knots and values, validating all invariants:
    /// equidistant strictly increasing knots spanning the domain, and values
    /// increasing with every slope at least [`MIN_SLOPE`].
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidSegments(0));
        }
        if knots.len() != values.len() {
            return Err(Error::LengthMismatch {
                times: knots.len(),
                values: values.len(),
            });
        }
        let lo = knots[0];
        let hi = knots[knots.len() - 1];
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidDomain { lo, hi });
        }
        let spacing = (hi - lo) / (knots.len() - 1) as f64;
        for (k, pair) in knots.windows(2).enumerate() {
            let gap = pair[1] - pair[0];
            if (gap - spacing).abs() > KNOT_TOL * spacing.abs().max(1.0) {
                return Err(Error::NonEquidistantKnots);
            }
            let _ = k;
        }
        for (k, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry(k));
            }
        }
        for (k, pair) in values.windows(2).enumerate() {
            if (pair[1] - pair[0]) / spacing < MIN_SLOPE {
                return Err(Error::NonMonotoneValues { segment: k });
            }
        }
        Ok(Self { knots, values })
    }

    /// Warp with the given values on `n_segments + 1` equidistant knots
    /// over `[lo, hi]`.
    pub fn from_values(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSegments(values.len().saturating_sub(1)));
        }
        let n = values.len();
        let knots: Vec<f64> = (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect();
        Self::new(knots, values)
    }

    /// The identity warp on `[lo, hi]` with `n_segments` equal segments.
    pub fn identity(lo: f64, hi: f64, n_segments: usize) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidDomain { lo, hi });
        }
        if n_segments < 1 {
            return Err(Error::InvalidSegments(n_segments));
        }
        let knots: Vec<f64> = (0..=n_segments)
            .map(|k| lo + (hi - lo) * k as f64 / n_segments as f64)
            .collect();
        let values = knots.clone();
        Self::new(knots, values)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn segments(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn knot_spacing(&self) -> f64 {
        (self.knots[self.knots.len() - 1] - self.knots[0]) / self.segments() as f64
    }

    /// Evaluate at `t`; errors outside the domain. Evaluation at a knot
    /// returns the stored value exactly.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let (lo, hi) = TimeWarp::domain(self);
        if !(lo..=hi).contains(&t) {
            return Err(Error::OutOfDomain { t, lo, hi });
        }
        Ok(self.eval_unchecked(t))
    }

    /// Evaluate with `t` clamped into the domain.
    pub fn eval_clamped(&self, t: f64) -> f64 {
        let (lo, hi) = TimeWarp::domain(self);
        self.eval_unchecked(t.clamp(lo, hi))
    }

    /// Evaluate with linear extrapolation by the boundary segment slopes
    /// outside the domain. The extension is strictly increasing.
    pub fn eval_extended(&self, t: f64) -> f64 {
        let (lo, hi) = TimeWarp::domain(self);
        if t < lo {
            let slope = (self.values[1] - self.values[0]) / (self.knots[1] - self.knots[0]);
            return self.values[0] + slope * (t - lo);
        }
        if t > hi {
            let n = self.knots.len();
            let slope =
                (self.values[n - 1] - self.values[n - 2]) / (self.knots[n - 1] - self.knots[n - 2]);
            return self.values[n - 1] + slope * (t - hi);
        }
        self.eval_unchecked(t)
    }

    fn eval_unchecked(&self, t: f64) -> f64 {
        // partition_point gives the first knot > t; the segment starts one
        // before it. Knot hits return the stored value bit-exactly.
        let idx = self.knots.partition_point(|&k| k <= t);
        let i = idx.saturating_sub(1).min(self.knots.len() - 2);
        if t == self.knots[i] {
            return self.values[i];
        }
        if t == self.knots[i + 1] {
            return self.values[i + 1];
        }
        let slope = (self.values[i + 1] - self.values[i]) / (self.knots[i + 1] - self.knots[i]);
        self.values[i] + slope * (t - self.knots[i])
    }

    /// Copy with `values[index]` replaced, provided the slope floor still
    /// holds. `Ok(None)` signals a rejected (non-monotone) move.
    pub fn with_value(&self, index: usize, new_value: f64) -> Result<Option<Self>> {
        if index >= self.values.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.values.len(),
            });
        }
        if !new_value.is_finite() {
            return Err(Error::NonFiniteEntry(index));
        }
        let spacing = self.knot_spacing();
        let floor = MIN_SLOPE * spacing;
        if index > 0 && new_value - self.values[index - 1] < floor {
            return Ok(None);
        }
        if index + 1 < self.values.len() && self.values[index + 1] - new_value < floor {
            return Ok(None);
        }
        let mut values = self.values.clone();
        values[index] = new_value;
        Ok(Some(Self {
            knots: self.knots.clone(),
            values,
        }))
    }

    /// Supremum of |self - other| over the common domain. Both warps are
    /// piecewise linear, so the supremum is attained on the union of their
    /// knot sets and the result is exact.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        let (a_lo, a_hi) = TimeWarp::domain(self);
        let (b_lo, b_hi) = TimeWarp::domain(other);
        let tol = KNOT_TOL * (a_hi - a_lo).abs().max(1.0);
        if (a_lo - b_lo).abs() > tol || (a_hi - b_hi).abs() > tol {
            return Err(Error::DomainMismatch);
        }
        let mut best = 0.0f64;
        for &t in self.knots.iter().chain(other.knots.iter()) {
            let d = (self.eval_clamped(t) - other.eval_clamped(t)).abs();
            if d > best {
                best = d;
            }
        }
        Ok(best)
    }
}

impl TimeWarp for WarpFunction {
    fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }
    fn warp(&self, t: f64) -> f64 {
        self.eval_clamped(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn scenario1_spline() -> WarpFunction {
        // 0.95t + 0.2(t-80)+ - 0.4(t-160)+ + 0.6(t-240)+ - 0.55(t-320)+ on
        // knots 0,80,...,400.
        let knots = vec![0.0, 80.0, 160.0, 240.0, 320.0, 400.0];
        let f = |t: f64| {
            0.95 * t + 0.2 * (t - 80.0).max(0.0) - 0.4 * (t - 160.0).max(0.0)
                + 0.6 * (t - 240.0).max(0.0)
                - 0.55 * (t - 320.0).max(0.0)
        };
        let values = knots.iter().map(|&t| f(t)).collect();
        WarpFunction::new(knots, values).unwrap()
    }

    #[test]
    fn identity_examples() {
        let w = WarpFunction::identity(0.0, 400.0, 30).unwrap();
        assert!((w.eval(3.7).unwrap() - 3.7).abs() < 1e-12);
        assert_eq!(w.eval(400.0).unwrap(), 400.0);
        let w1 = WarpFunction::identity(0.0, 1.0, 1).unwrap();
        assert_eq!(w1.eval(0.5).unwrap(), 0.5);
    }

    #[test]
    fn identity_rejects_bad_inputs() {
        assert_eq!(
            WarpFunction::identity(1.0, 1.0, 4).unwrap_err(),
            Error::InvalidDomain { lo: 1.0, hi: 1.0 }
        );
        assert_eq!(
            WarpFunction::identity(0.0, 1.0, 0).unwrap_err(),
            Error::InvalidSegments(0)
        );
    }

    #[test]
    fn eval_linear_spline_warp() {
        let w = scenario1_spline();
        assert!((w.eval(80.0).unwrap() - 76.0).abs() < 1e-12);
        assert!((w.eval(400.0).unwrap() - 400.0).abs() < 1e-12);
    }

    #[test]
    fn eval_out_of_domain_errors() {
        let w = WarpFunction::identity(0.0, 1.0, 2).unwrap();
        assert!(matches!(w.eval(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(w.eval(-0.1), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn sup_distance_examples() {
        let w = scenario1_spline();
        assert_eq!(w.sup_distance(&w).unwrap(), 0.0);

        let id = WarpFunction::identity(0.0, 400.0, 5).unwrap();
        let shifted =
            WarpFunction::from_values(0.0, 400.0, id.values().iter().map(|v| v + 2.0).collect())
                .unwrap();
        assert_eq!(id.sup_distance(&shifted).unwrap(), 2.0);

        let a = WarpFunction::identity(0.0, 1.0, 1).unwrap();
        let b = WarpFunction::from_values(0.0, 1.0, vec![0.0, 1.1]).unwrap();
        assert!((a.sup_distance(&b).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn sup_distance_domain_mismatch() {
        let a = WarpFunction::identity(0.0, 1.0, 2).unwrap();
        let b = WarpFunction::identity(0.0, 2.0, 2).unwrap();
        assert_eq!(a.sup_distance(&b).unwrap_err(), Error::DomainMismatch);
    }

    #[test]
    fn perturb_accept_and_reject() {
        let w = WarpFunction::identity(0.0, 400.0, 4).unwrap();
        let ok = w.with_value(1, 120.0).unwrap().unwrap();
        assert_eq!(ok.values(), &[0.0, 120.0, 200.0, 300.0, 400.0]);

        assert!(w.with_value(1, 250.0).unwrap().is_none());
        assert!(w.with_value(0, w.values()[1]).unwrap().is_none());
        assert!(matches!(
            w.with_value(9, 1.0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn extended_eval_is_linear_outside() {
        let w = scenario1_spline();
        // left slope 0.95, right slope 0.8
        assert!((w.eval_extended(-10.0) - (-9.5)).abs() < 1e-12);
        assert!((w.eval_extended(410.0) - 408.0).abs() < 1e-12);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_warp(segments: usize) -> impl Strategy<Value = WarpFunction> {
            proptest::collection::vec(0.05f64..1.0, segments).prop_map(move |incr| {
                let mut values = vec![0.0];
                for d in incr {
                    let last = *values.last().unwrap();
                    values.push(last + d);
                }
                WarpFunction::from_values(0.0, 1.0, values).unwrap()
            })
        }

        proptest! {
            #[test]
            fn strictly_increasing(w in arb_warp(6), t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
                prop_assume!(t1 < t2);
                prop_assert!(w.eval(t1).unwrap() < w.eval(t2).unwrap());
            }

            #[test]
            fn affine_within_segments(w in arb_warp(6), seg in 0usize..6, frac in 0.0f64..1.0) {
                let a = w.knots()[seg];
                let b = w.knots()[seg + 1];
                let mid = a + frac * (b - a);
                let lin = w.eval(a).unwrap()
                    + (w.eval(b).unwrap() - w.eval(a).unwrap()) * frac;
                let got = w.eval(mid).unwrap();
                prop_assert!((got - lin).abs() <= 1e-12 * lin.abs().max(1.0));
            }

            #[test]
            fn sup_distance_metric_axioms(
                a in arb_warp(5),
                b in arb_warp(7),
                c in arb_warp(4),
            ) {
                let dab = a.sup_distance(&b).unwrap();
                let dba = b.sup_distance(&a).unwrap();
                let dac = a.sup_distance(&c).unwrap();
                let dcb = c.sup_distance(&b).unwrap();
                prop_assert!(dab >= 0.0);
                prop_assert!((dab - dba).abs() <= 1e-12);
                prop_assert!(dab <= dac + dcb + 1e-12);
                prop_assert!(a.sup_distance(&a).unwrap() == 0.0);
            }

            #[test]
            fn perturb_never_returns_invalid(w in arb_warp(6), idx in 0usize..7, v in -2.0f64..3.0) {
                if let Some(p) = w.with_value(idx, v).unwrap() {
                    // re-validation must succeed on the accepted warp
                    prop_assert!(WarpFunction::new(
                        p.knots().to_vec(), p.values().to_vec()).is_ok());
                }
            }
        }
    }
}
