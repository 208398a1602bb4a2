use alloc::vec;
use alloc::vec::Vec;

use super::Chart;
use crate::error::{Error, Result};
use crate::math::{abs, sqrt};
use crate::model::ReducedState;

/// Rescaled planar system `y = r y_tilde` in parameter chart `P1`
/// (`eps1 = r^2`, `eps2 = r eps2_tilde`); coordinates `(y_tilde, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct B2Chart {
    pub r: f64,
    pub eps2_tilde: f64,
    pub c: f64,
}

impl B2Chart {
    pub const NAME: &'static str = "B2";
}

pub fn rescale_b2(s: ReducedState, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) {
        return Err(Error::ChartUndefined("rescaling requires r > 0"));
    }
    Ok((s.y / r, s.z))
}

/// `(c - r y - z - y^2 - eps2 y z, r y^2)`; at `r = 0` the layer problem.
pub fn field_b2(y: f64, z: f64, r: f64, eps2: f64, c: f64) -> (f64, f64) {
    (c - r * y - z - y * y - eps2 * y * z, r * y * y)
}

/// Critical manifold `z = (c - y^2) / (1 + eps2 y)`.
pub fn crit_manifold_b2(y: f64, eps2: f64, c: f64) -> Result<f64> {
    let d = 1.0 + eps2 * y;
    if abs(d) <= super::LOCUS_BAND {
        return Err(Error::PoleAt { y: -1.0 / eps2 });
    }
    Ok((c - y * y) / d)
}

/// Nontrivial eigenvalue of the layer problem, `-2 y - eps2 z`.
pub fn eigenvalue_b2(y: f64, z: f64, eps2: f64) -> f64 {
    -2.0 * y - eps2 * z
}

/// The transcritical point `(-sqrt(c), 2c)`, present when `1 / eps2^2 = c`.
pub fn transcritical_point(eps2: f64, c: f64) -> Option<(f64, f64)> {
    if eps2 > 0.0 && abs(1.0 / (eps2 * eps2) - c) <= 1e-12 * c.max(1.0) {
        Some((-sqrt(c), 2.0 * c))
    } else {
        None
    }
}

impl Chart for B2Chart {
    fn name(&self) -> &'static str {
        Self::NAME
    }
    fn dim(&self) -> usize {
        2
    }
    fn radial(&self, _p: &[f64]) -> f64 {
        self.r
    }
    fn center(&self) -> Vec<f64> {
        vec![0.0, 0.0]
    }
    fn to_base_local(&self, p: &[f64]) -> Vec<f64> {
        vec![self.r * p[0], p[1]]
    }
    fn from_base_local(&self, q: &[f64]) -> Result<Vec<f64>> {
        let (y, z) = rescale_b2(ReducedState::new(q[0], q[1]), self.r)?;
        Ok(vec![y, z])
    }
    fn base_field_local(&self, q: &[f64], out: &mut [f64]) {
        let (e1, e2) = (self.r * self.r, self.r * self.eps2_tilde);
        let (y, z) = (q[0], q[1]);
        out[0] = e1 * (self.c - y - z) - y * y - e2 * y * z;
        out[1] = y * y;
    }
    fn field(&self, p: &[f64], out: &mut [f64]) {
        let (a, b) = field_b2(p[0], p[1], self.r, self.eps2_tilde, self.c);
        out[0] = a;
        out[1] = b;
    }
}
