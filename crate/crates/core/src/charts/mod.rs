//! Phase-space blow-up charts.
//!
//! Every chart maps its coordinates into the coordinates of a base system (the
//! rescaled planar system of a parameter regime, extended by a constant
//! parameter where needed). Maps are expressed relative to the blow-up centre
//! so that finite differences of them do not lose digits to the constant `c`.

mod b11;
mod b12;
mod b2;
mod b3;

use alloc::vec;
use alloc::vec::Vec;

pub use b11::*;
pub use b12::*;
pub use b2::*;
pub use b3::*;

use crate::error::{Error, Result};
use crate::linalg::{solve, Matrix};
use crate::math::{abs, norm, pow, sqrt};
use crate::solver::OdeSystem;

/// Width of the excluded band around `sigma = 0` for chart inverses.
pub const LOCUS_BAND: f64 = 1e-10;

pub trait Chart {
    fn name(&self) -> &'static str;

    fn dim(&self) -> usize;

    /// Power of the radial variable divided out of the transformed field.
    fn desing_power(&self) -> u32 {
        1
    }

    /// Radial variable at a chart point.
    fn radial(&self, p: &[f64]) -> f64;

    /// Blow-up centre in base coordinates.
    fn center(&self) -> Vec<f64>;

    /// Chart to base coordinates, minus [`Chart::center`].
    fn to_base_local(&self, p: &[f64]) -> Vec<f64>;

    /// Inverse of [`Chart::to_base_local`].
    fn from_base_local(&self, q: &[f64]) -> Result<Vec<f64>>;

    /// Base vector field written in centred coordinates.
    fn base_field_local(&self, q: &[f64], out: &mut [f64]);

    /// Desingularized vector field.
    fn field(&self, p: &[f64], out: &mut [f64]);

    fn in_domain(&self, p: &[f64]) -> bool {
        p.iter().all(|v| v.is_finite()) && self.radial(p) > LOCUS_BAND
    }

    fn to_base(&self, p: &[f64]) -> Vec<f64> {
        let mut q = self.to_base_local(p);
        for (a, b) in q.iter_mut().zip(self.center()) {
            *a += b;
        }
        q
    }

    fn from_base(&self, q: &[f64]) -> Result<Vec<f64>> {
        let local: Vec<f64> = q.iter().zip(self.center()).map(|(a, b)| a - b).collect();
        self.from_base_local(&local)
    }

    fn field_vec(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.field(p, &mut out);
        out
    }
}

/// A chart together with its coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    pub chart: &'static str,
    pub coords: Vec<f64>,
}

/// Desingularized chart flow as an integrable system.
pub struct Flow<'a>(pub &'a dyn Chart);

impl OdeSystem for Flow<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn rhs(&self, _t: f64, u: &[f64], du: &mut [f64]) {
        self.0.field(u, du)
    }
}

/// Relative deviation between the chart field and the pulled-back base field
/// `Dphi^{-1} F(phi(p)) / sigma^k`, using a central-difference Jacobian of the
/// chart map with relative step `1e-7`.
pub fn pushforward_check(chart: &dyn Chart, p: &[f64]) -> Result<f64> {
    let n = chart.dim();
    let sigma = chart.radial(p);
    if !chart.in_domain(p) {
        return Err(Error::SingularJacobian);
    }
    let mut jac = Matrix::zeros(n, n);
    let mut x = p.to_vec();
    for j in 0..n {
        let h = 1e-7 * abs(p[j]).max(1e-3);
        x[j] = p[j] + h;
        let fp = chart.to_base_local(&x);
        x[j] = p[j] - h;
        let fm = chart.to_base_local(&x);
        x[j] = p[j];
        for i in 0..n {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    let q = chart.to_base_local(p);
    let mut base = vec![0.0; n];
    chart.base_field_local(&q, &mut base);
    let pulled = solve(&jac, &base)?;
    let scale = pow(sigma, chart.desing_power() as f64);
    let want = chart.field_vec(p);
    let diff: Vec<f64> = pulled.iter().zip(&want).map(|(a, b)| a / scale - b).collect();
    let denom = norm(&want).max(norm(&pulled) / scale).max(f64::MIN_POSITIVE);
    Ok(norm(&diff) / denom)
}

/// Weighted spherical blow-up: `sigma > 0` with `a / sigma^2 + b^2 / sigma^4 = 1`.
pub(crate) fn weighted_radius(a: f64, b: f64) -> f64 {
    sqrt(0.5 * (a + sqrt(a * a + 4.0 * b * b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LandmarkName {
    Pa,
    Pr,
    Q2,
    Q3,
    O2,
    O3,
    Fold,
    Transcritical,
}

impl LandmarkName {
    pub fn is_equilibrium(self) -> bool {
        matches!(self, LandmarkName::Pa | LandmarkName::Pr | LandmarkName::Q2 | LandmarkName::Q3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Landmark {
    pub name: LandmarkName,
    pub point: ChartPoint,
}

fn landmark(name: LandmarkName, chart: &'static str, coords: Vec<f64>) -> Landmark {
    Landmark { name, point: ChartPoint { chart, coords } }
}

/// Distinguished points of the chart systems for the given parameters:
/// `Pa`, `Pr` in `K11^1`, `Q2` in `K11^2`, `O3` in `K12^3`, `Fold` on the
/// sphere of `K12^2`, `O2` and `Q3` in the `B3` charts, and the transcritical
/// point of the `B2` critical manifold when it exists.
pub fn landmarks(c: f64, eps2_tilde: f64, eps1_tilde: f64) -> Vec<Landmark> {
    let mut out = vec![
        landmark(LandmarkName::Pa, K11_1::NAME, vec![-1.0, 0.0, 0.0]),
        landmark(LandmarkName::Pr, K11_1::NAME, vec![0.0, 0.0, 0.0]),
        landmark(LandmarkName::Q2, K11_2::NAME, vec![0.0, 0.0, 0.0]),
        landmark(LandmarkName::O3, K12_3::NAME, vec![0.0, eps2_tilde / sqrt(c), sqrt(c)]),
        landmark(LandmarkName::Fold, K12_2::NAME, vec![-0.5 * c, 0.25 * c * c, 0.0]),
        landmark(LandmarkName::O2, K3_2::NAME, vec![0.0, 0.0, sqrt(eps1_tilde)]),
        landmark(LandmarkName::Q3, K3_3::NAME, vec![0.0, c, eps1_tilde / (c * c)]),
    ];
    if let Some((y, z)) = transcritical_point(eps2_tilde, c) {
        out.push(landmark(LandmarkName::Transcritical, B2Chart::NAME, vec![y, z]));
    }
    out
}

/// Jacobian of the desingularized field by the five-point stencil with step
/// `1e-3`; exact up to round-off for fields polynomial of degree four or less
/// in each coordinate, which covers every chart here.
pub fn linearization(chart: &dyn Chart, p: &[f64]) -> Matrix {
    let n = chart.dim();
    let h = 1e-3;
    let mut jac = Matrix::zeros(n, n);
    let mut x = p.to_vec();
    let eval = |x: &mut Vec<f64>, j: usize, d: f64| {
        x[j] = p[j] + d;
        let f = chart.field_vec(x);
        x[j] = p[j];
        f
    };
    for j in 0..n {
        let f2 = eval(&mut x, j, 2.0 * h);
        let f1 = eval(&mut x, j, h);
        let m1 = eval(&mut x, j, -h);
        let m2 = eval(&mut x, j, -2.0 * h);
        for i in 0..n {
            jac[(i, j)] = (-f2[i] + 8.0 * f1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
        }
    }
    jac
}

/// Eigenvalues (real parts, descending) of the flow restricted to the sphere
/// `sigma = 0`, i.e. of the leading 2x2 block of [`linearization`].
pub fn sphere_spectrum(chart: &dyn Chart, p: &[f64]) -> [f64; 2] {
    let j = linearization(chart, p);
    let [a, b] = crate::linalg::eigenvalues_2x2(j[(0, 0)], j[(0, 1)], j[(1, 0)], j[(1, 1)]);
    [a.re, b.re]
}
