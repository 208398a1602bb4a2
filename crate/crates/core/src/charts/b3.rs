//! Blow-up of `(y, z, eps1) = (0, 0, 0)` with weights (1, 1, 2) for the `P2`
//! system `y' = eps1 (c - r y - z) - y^2 - y z`, `z' = r y^2`, `eps1' = 0`.

use alloc::vec;
use alloc::vec::Vec;

use super::{weighted_radius, Chart, LOCUS_BAND};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct B3SpherePoint {
    pub sigma: f64,
    pub y: f64,
    pub z: f64,
    pub eps1: f64,
}

pub fn blowup_b3_fwd(p: B3SpherePoint) -> (f64, f64, f64) {
    (p.sigma * p.y, p.sigma * p.z, p.sigma * p.sigma * p.eps1)
}

pub fn blowup_b3_inv(y: f64, z: f64, eps1: f64) -> Result<B3SpherePoint> {
    if y == 0.0 && z == 0.0 && eps1 == 0.0 {
        return Err(Error::NotInvertibleOnBlowupLocus);
    }
    let sigma = weighted_radius(y * y + z * z, eps1);
    Ok(B3SpherePoint { sigma, y: y / sigma, z: z / sigma, eps1: eps1 / (sigma * sigma) })
}

/// Right-hand side of the rescaled `B3` system in `(y, z)` for fixed `eps1`.
pub fn field_b3(y: f64, z: f64, r: f64, eps1: f64, c: f64) -> (f64, f64) {
    (eps1 * (c - r * y - z) - y * y - y * z, r * y * y)
}

fn p2_local(q: &[f64], r: f64, c: f64, out: &mut [f64]) {
    let (a, b) = field_b3(q[0], q[1], r, q[2], c);
    out[0] = a;
    out[1] = b;
    out[2] = 0.0;
}

/// Scaling chart `eps1_bar = 1`: `y = sigma2 y2`, `z = sigma2 z2`, `eps1 = sigma2^2`.
/// Coordinates `(y2, z2, sigma2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_camel_case_types)]
pub struct K3_2 {
    pub r: f64,
    pub c: f64,
}

impl K3_2 {
    pub const NAME: &'static str = "K3_2";
}

pub fn field_k3_2(y2: f64, z2: f64, sigma2: f64, r: f64, c: f64) -> [f64; 3] {
    [c - sigma2 * z2 - y2 * y2 - y2 * z2 - r * sigma2 * y2, r * y2 * y2, 0.0]
}

/// Critical manifold `c - sigma2 z2 - y2^2 - y2 z2 = 0` solved for `z2`.
pub fn crit_manifold_k3_2(y2: f64, sigma2: f64, c: f64) -> Result<f64> {
    let d = sigma2 + y2;
    if crate::math::abs(d) <= LOCUS_BAND {
        return Err(Error::PoleAt { y: -sigma2 });
    }
    Ok((c - y2 * y2) / d)
}

impl Chart for K3_2 {
    fn name(&self) -> &'static str {
        Self::NAME
    }
    fn dim(&self) -> usize {
        3
    }
    fn radial(&self, p: &[f64]) -> f64 {
        p[2]
    }
    fn center(&self) -> Vec<f64> {
        vec![0.0, 0.0, 0.0]
    }
    fn to_base_local(&self, p: &[f64]) -> Vec<f64> {
        vec![p[2] * p[0], p[2] * p[1], p[2] * p[2]]
    }
    fn from_base_local(&self, q: &[f64]) -> Result<Vec<f64>> {
        if !(q[2] > LOCUS_BAND * LOCUS_BAND) {
            return Err(Error::ChartUndefined("K3_2 requires eps1 > 0"));
        }
        let sg = crate::math::sqrt(q[2]);
        Ok(vec![q[0] / sg, q[1] / sg, sg])
    }
    fn base_field_local(&self, q: &[f64], out: &mut [f64]) {
        p2_local(q, self.r, self.c, out)
    }
    fn field(&self, p: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&field_k3_2(p[0], p[1], p[2], self.r, self.c));
    }
}

/// Chart `z_bar = 1`: `y = sigma3 y3`, `z = sigma3`, `eps1 = sigma3^2 eps13`.
/// Coordinates `(y3, sigma3, eps13)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_camel_case_types)]
pub struct K3_3 {
    pub r: f64,
    pub c: f64,
}

impl K3_3 {
    pub const NAME: &'static str = "K3_3";
}

pub fn field_k3_3(y3: f64, sigma3: f64, eps13: f64, r: f64, c: f64) -> [f64; 3] {
    [
        eps13 * (c - r * sigma3 * y3 - sigma3) - y3 * y3 - y3 - r * y3 * y3 * y3,
        r * sigma3 * y3 * y3,
        -2.0 * r * eps13 * y3 * y3,
    ]
}

/// Attracting root `y3 >= 0` of `eps13 (c - sigma3) - y3^2 - y3 = 0`.
pub fn attracting_y3_k3(sigma3: f64, eps13: f64, c: f64) -> f64 {
    let q = eps13 * (c - sigma3);
    2.0 * q / (1.0 + crate::math::sqrt(1.0 + 4.0 * q))
}

impl Chart for K3_3 {
    fn name(&self) -> &'static str {
        Self::NAME
    }
    fn dim(&self) -> usize {
        3
    }
    fn radial(&self, p: &[f64]) -> f64 {
        p[1]
    }
    fn center(&self) -> Vec<f64> {
        vec![0.0, 0.0, 0.0]
    }
    fn to_base_local(&self, p: &[f64]) -> Vec<f64> {
        vec![p[1] * p[0], p[1], p[1] * p[1] * p[2]]
    }
    fn from_base_local(&self, q: &[f64]) -> Result<Vec<f64>> {
        let sg = q[1];
        if !(sg > LOCUS_BAND) {
            return Err(Error::ChartUndefined("K3_3 requires z > 0"));
        }
        Ok(vec![q[0] / sg, sg, q[2] / (sg * sg)])
    }
    fn base_field_local(&self, q: &[f64], out: &mut [f64]) {
        p2_local(q, self.r, self.c, out)
    }
    fn field(&self, p: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&field_k3_3(p[0], p[1], p[2], self.r, self.c));
    }
}

pub fn k3_2_to_3(p: [f64; 3]) -> Result<[f64; 3]> {
    let [y2, z2, sg] = p;
    if !(z2 > 0.0) {
        return Err(Error::ChartUndefined("K3_3 requires z2 > 0"));
    }
    Ok([y2 / z2, sg * z2, 1.0 / (z2 * z2)])
}

pub fn k3_3_to_2(p: [f64; 3]) -> Result<[f64; 3]> {
    let [y3, sg, e13] = p;
    if !(e13 > 0.0) {
        return Err(Error::ChartUndefined("K3_2 requires eps13 > 0"));
    }
    let k = crate::math::sqrt(e13);
    Ok([y3 / k, 1.0 / k, sg * k])
}
