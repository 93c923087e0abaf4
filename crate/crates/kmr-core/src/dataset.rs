//! Irregularly sampled functional data.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One series of (time, value) observations with strictly increasing,
/// finite times.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalDataset {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl FunctionalDataset {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::LengthMismatch {
                times: times.len(),
                values: values.len(),
            });
        }
        if times.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for (k, (&t, &v)) in times.iter().zip(values.iter()).enumerate() {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::NonFiniteEntry(k));
            }
        }
        for (k, pair) in times.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::NonIncreasingTimes(k + 1));
            }
        }
        Ok(Self { times, values })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// First and last observation times.
    pub fn time_span(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    /// Mean consecutive time gap, i.e. span / (n - 1). Needs >= 2 points.
    pub fn mean_time_gap(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::TooFewPoints);
        }
        let (lo, hi) = self.time_span();
        Ok((hi - lo) / (self.len() - 1) as f64)
    }

    /// Linear interpolation of the observed values at `t`, clamped to the
    /// observed time hull.
    pub fn interpolate(&self, t: f64) -> f64 {
        crate::interp::lerp_clamped(&self.times, &self.values, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_non_increasing_times() {
        assert!(matches!(
            FunctionalDataset::new(vec![0.0, 0.0], vec![1.0, 2.0]),
            Err(Error::NonIncreasingTimes(1))
        ));
    }

    #[test]
    fn rejects_shape_mismatch_and_empty() {
        assert!(matches!(
            FunctionalDataset::new(vec![0.0], vec![]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            FunctionalDataset::new(vec![], vec![]),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn mean_gap_and_span() {
        let d = FunctionalDataset::new(vec![0.0, 2.0, 4.0, 6.0], vec![0.0; 4]).unwrap();
        assert_eq!(d.mean_time_gap().unwrap(), 2.0);
        assert_eq!(d.time_span(), (0.0, 6.0));
    }
}
