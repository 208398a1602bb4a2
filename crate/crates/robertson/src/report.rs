//! JSON view of a comparison report.

use robertson_core::analysis::ComparisonReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub k3: Option<f64>,
    pub eps1: f64,
    pub eps2: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartInfo {
    pub name: String,
    pub fixed_coord: f64,
    pub radial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YMax {
    pub numeric: f64,
    pub t: f64,
    pub predicted: f64,
    pub rel_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distances {
    pub chart: f64,
    pub original: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lengths {
    pub singular_points: usize,
    pub trajectory_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solver {
    pub steps: usize,
    pub rejected: usize,
    pub newton_iters: usize,
    pub jac_evals: usize,
    pub lu_decomps: usize,
    pub rhs_evals: usize,
    pub scheme: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: Vec<f64>,
    pub truncation_radius: f64,
    pub orbit_points_per_segment: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonJson {
    pub params: Params,
    pub regime: String,
    pub chart: ChartInfo,
    pub y_max: YMax,
    pub hausdorff: Distances,
    pub orbit: Lengths,
    pub solver: Solver,
    pub tolerances: Tolerances,
    pub status: String,
}

impl From<&ComparisonReport> for ComparisonJson {
    fn from(r: &ComparisonReport) -> Self {
        Self {
            params: Params {
                k1: r.rates.map(|k| k.k1),
                k2: r.rates.map(|k| k.k2),
                k3: r.rates.map(|k| k.k3),
                eps1: r.params.eps1,
                eps2: r.params.eps2,
                c: r.params.c,
            },
            regime: r.regime.label().to_string(),
            chart: ChartInfo { name: r.chart.to_string(), fixed_coord: r.fixed_coord, radial: r.radial },
            y_max: YMax {
                numeric: r.y_max_numeric,
                t: r.t_y_max,
                predicted: r.y_max_predicted,
                rel_gap: r.rel_gap,
            },
            hausdorff: Distances { chart: r.hausdorff_chart, original: r.hausdorff_original },
            orbit: Lengths { singular_points: r.orbit_points, trajectory_points: r.trajectory_points },
            solver: Solver {
                steps: r.solver.steps,
                rejected: r.solver.rejected,
                newton_iters: r.solver.newton_iters,
                jac_evals: r.solver.jac_evals,
                lu_decomps: r.solver.lu_decomps,
                rhs_evals: r.solver.rhs_evals,
                scheme: r.solver.scheme.to_string(),
            },
            tolerances: Tolerances {
                rel_tol: r.tolerances.rel_tol,
                abs_tol: r.tolerances.abs_tol.clone(),
                truncation_radius: r.tolerances.truncation_radius,
                orbit_points_per_segment: r.tolerances.orbit_points_per_segment,
            },
            status: "ok".to_string(),
        }
    }
}

/// Error body written to stderr on runtime failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub status: String,
    pub kind: String,
    pub message: String,
}

impl ErrorJson {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        Self { status: "error".into(), kind: kind.into(), message: message.into() }
    }
}
