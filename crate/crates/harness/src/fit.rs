//! Least-squares rates in log-log coordinates.

use hartree_core::{HartreeError, Result};

/// Fits below this residual are reported in sweep summaries.
pub const MAX_REPORTED_RESIDUAL: f64 = 0.1;

/// Fewest points a rate is fitted from.
pub const MIN_POINTS: usize = 4;

/// Slope of `ln(error)` against `ln(epsilon)` and the largest absolute residual of the fit.
pub fn fit_slope(epsilons: &[f64], errors: &[f64]) -> Result<(f64, f64)> {
    if epsilons.len() != errors.len() {
        return Err(HartreeError::InvalidParameter(format!(
            "{} epsilons but {} errors",
            epsilons.len(),
            errors.len()
        )));
    }
    if epsilons.len() < MIN_POINTS {
        return Err(HartreeError::InvalidParameter(format!(
            "{} points; at least {MIN_POINTS} are needed",
            epsilons.len()
        )));
    }
    loglog_fit(epsilons, errors)
}

/// [`fit_slope`] without the minimum point count (at least two points).
pub fn loglog_fit(epsilons: &[f64], errors: &[f64]) -> Result<(f64, f64)> {
    if epsilons.len() != errors.len() || epsilons.len() < 2 {
        return Err(HartreeError::InvalidParameter("need two or more matching points".into()));
    }
    if let Some(bad) = epsilons.iter().chain(errors).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(HartreeError::InvalidParameter(format!("non-positive or non-finite value {bad}")));
    }
    let xs: Vec<f64> = epsilons.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(HartreeError::InvalidParameter("all epsilons are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let resid = xs.iter().zip(&ys).map(|(x, y)| (y - icept - slope * x).abs()).fold(0.0, f64::max);
    Ok((slope, resid))
}
