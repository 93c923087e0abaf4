//! Piecewise-linear interpolation over sorted abscissae.

/// Segment index i such that xs[i] <= x < xs[i+1], clamped to valid range.
fn segment(xs: &[f64], x: f64) -> usize {
    let idx = xs.partition_point(|&k| k <= x);
    idx.saturating_sub(1).min(xs.len() - 2)
}

/// Linear interpolation, clamping `x` into [xs[0], xs[last]].
pub(crate) fn lerp_clamped(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.len() == 1 {
        return ys[0];
    }
    let x = x.clamp(xs[0], xs[xs.len() - 1]);
    lerp_at(xs, ys, x)
}

/// Linear interpolation with end-slope extrapolation outside the hull.
pub(crate) fn lerp_extended(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.len() == 1 {
        return ys[0];
    }
    lerp_at(xs, ys, x)
}

fn lerp_at(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = segment(xs, x);
    if x == xs[i] {
        return ys[i];
    }
    let slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    ys[i] + slope * (x - xs[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_and_extends() {
        let xs = [0.0, 1.0, 3.0];
        let ys = [0.0, 2.0, 0.0];
        assert_eq!(lerp_clamped(&xs, &ys, 0.5), 1.0);
        assert_eq!(lerp_clamped(&xs, &ys, 2.0), 1.0);
        assert_eq!(lerp_clamped(&xs, &ys, -1.0), 0.0);
        assert_eq!(lerp_extended(&xs, &ys, -1.0), -2.0);
        assert_eq!(lerp_extended(&xs, &ys, 4.0), -1.0);
    }
}
