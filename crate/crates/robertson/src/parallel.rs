//! Data-parallel sweeps and studies. Results keep input order.

use rayon::prelude::*;
use robertson_core::analysis::{study_point, sweep_point, validate_study, ConvergenceStudy, SweepRow};
use robertson_core::orbits::singular_orbit;
use robertson_core::{Regime, RegimeConfig, Result, SolverSettings};

/// Sweep over the tensor grid `eps1s x eps2s` (eps1 varies slowest).
pub fn sweep(eps1s: &[f64], eps2s: &[f64], c: f64, cfg: &RegimeConfig, settings: &SolverSettings) -> Vec<SweepRow> {
    let grid: Vec<(f64, f64)> = eps1s.iter().flat_map(|&a| eps2s.iter().map(move |&b| (a, b))).collect();
    grid.par_iter().map(|&(a, b)| sweep_point(a, b, c, cfg, settings)).collect()
}

pub fn convergence_study(
    regime: Regime,
    fixed: f64,
    rs: &[f64],
    c: f64,
    cfg: &RegimeConfig,
    settings: &SolverSettings,
    orbit_points: usize,
) -> Result<ConvergenceStudy> {
    validate_study(regime, fixed, rs, c, cfg)?;
    let orbit = singular_orbit(regime, fixed, c, orbit_points)?;
    let points = rs.par_iter().map(|&r| study_point(regime, fixed, r, &orbit, settings)).collect();
    Ok(ConvergenceStudy::from_points(regime, fixed, c, points))
}
