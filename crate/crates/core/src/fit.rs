//! Least-squares line through `(ln x, ln y)`.

use crate::math::{ln, sqrt};

/// Two-sided 97.5% Student-t quantiles for 1..=30 degrees of freedom.
const T975: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
    2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Half-width of the 95% confidence interval of the slope (infinite with two points).
    pub half_width: f64,
}

/// Fits `ln y = intercept + slope ln x`. Needs at least two distinct positive `x`.
pub fn log_log_fit(pts: &[(f64, f64)]) -> Option<LogLogFit> {
    let v: alloc::vec::Vec<(f64, f64)> =
        pts.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|&(x, y)| (ln(x), ln(y))).collect();
    let n = v.len();
    if n < 2 {
        return None;
    }
    let mx = v.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = v.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = v.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = v.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let half_width = if n > 2 {
        let ssr: f64 = v.iter().map(|p| (p.1 - intercept - slope * p.0) * (p.1 - intercept - slope * p.0)).sum();
        let dof = n - 2;
        let t = if dof <= 30 { T975[dof - 1] } else { 1.96 };
        t * sqrt(ssr / dof as f64 / sxx)
    } else {
        f64::INFINITY
    };
    Some(LogLogFit { slope, intercept, half_width })
}
