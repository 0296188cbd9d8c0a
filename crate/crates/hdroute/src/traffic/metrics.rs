//! Congestion metrics: the order parameter eta and the critical generation
//! rate R_c extrapolated from a sweep.

use super::Simulator;
use crate::error::{Error, Result};

/// Least-squares slope of `w` over `t = warmup..warmup+window`, divided by
/// the generation rate and clamped at zero. This realizes the moving-average
/// growth rate of undelivered-plus-dropped packets with the averaging window
/// absorbed into the regression.
pub fn slope_per_rate(w: &[f64], rate: f64, warmup: usize, window: usize) -> Result<f64> {
    if w.len() < warmup + window || window < 2 {
        return Err(Error::InsufficientRunLength {
            needed: warmup + window.max(2),
            have: w.len(),
        });
    }
    let ys = &w[warmup..warmup + window];
    let nf = window as f64;
    let mean_x = (window as f64 - 1.0) / 2.0;
    let mean_y = ys.iter().sum::<f64>() / nf;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    Ok((slope / rate).max(0.0))
}

/// Drive a simulator for `warmup + window` steps and estimate eta. Suitable
/// for agent-free strategies; hierarchical runs interleave monitor-interval
/// decisions and collect the series themselves.
pub fn measure_eta(sim: &mut Simulator, warmup: usize, window: usize) -> Result<f64> {
    let mut w = Vec::with_capacity(warmup + window);
    for _ in 0..warmup + window {
        w.push(sim.step().w as f64);
    }
    slope_per_rate(&w, sim.config().rate, warmup, window)
}

/// Extrapolate the critical rate from `(R, eta)` sweep points: ordinary
/// least squares on the congested branch, intersected with `eta = 0`.
///
/// Points with `eta <= threshold` are free-flow and excluded. Points with
/// `eta > fit_cap` are deep in the saturated regime where the trend bends
/// away from linear, so they are excluded as well; the near-critical branch
/// is what the linear trend means.
pub fn estimate_rc(points: &[(f64, f64)], threshold: f64, fit_cap: f64) -> Result<f64> {
    let fit: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(_, eta)| eta > threshold && eta <= fit_cap)
        .collect();
    if fit.len() < 3 {
        return Err(Error::NoCongestedPoints);
    }
    let n = fit.len() as f64;
    let mean_x = fit.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = fit.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for &(x, y) in &fit {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    if sxx == 0.0 {
        return Err(Error::NonpositiveSlope);
    }
    let slope = sxy / sxx;
    if slope <= 0.0 {
        return Err(Error::NonpositiveSlope);
    }
    let intercept = mean_y - slope * mean_x;
    Ok(-intercept / slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_linear_sweep_recovers_rc_exactly() {
        // eta(R) = max(0, 0.5 (R - 10)) sampled near the transition
        let points: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let r = 9.6 + 0.1 * i as f64;
                (r, (0.5 * (r - 10.0)).max(0.0))
            })
            .collect();
        let rc = estimate_rc(&points, 0.02, 0.6).unwrap();
        assert!((rc - 10.0).abs() < 1e-9, "rc {rc}");
    }

    #[test]
    fn too_few_congested_points_is_an_error() {
        let points = vec![(1.0, 0.0), (2.0, 0.0), (3.0, 0.01)];
        assert!(matches!(
            estimate_rc(&points, 0.02, 0.6),
            Err(Error::NoCongestedPoints)
        ));
    }

    #[test]
    fn negative_slope_is_an_error() {
        let points = vec![(1.0, 0.5), (2.0, 0.4), (3.0, 0.3)];
        assert!(matches!(
            estimate_rc(&points, 0.02, 0.6),
            Err(Error::NonpositiveSlope)
        ));
    }

    #[test]
    fn slope_estimator_matches_hand_line() {
        let w: Vec<f64> = (0..100).map(|t| 5.0 + 2.0 * t as f64).collect();
        let eta = slope_per_rate(&w, 4.0, 10, 80).unwrap();
        assert!((eta - 0.5).abs() < 1e-12);
    }

    #[test]
    fn short_series_errors() {
        let w = vec![0.0; 10];
        assert!(slope_per_rate(&w, 1.0, 5, 10).is_err());
    }
}
