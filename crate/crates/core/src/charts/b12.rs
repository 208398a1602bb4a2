//! Blow-up of `(y, z, s) = (0, c, 0)` for the `P12` system
//! `y' = c - s r1 y - z - y^2 - s y z`, `z' = s r1 y^2`, `s' = 0`.

use alloc::vec;
use alloc::vec::Vec;

use super::{Chart, LOCUS_BAND};
use crate::error::{Error, Result};

fn p12_local(q: &[f64], r1: f64, c: f64, out: &mut [f64]) {
    let (y, w, s) = (q[0], q[1], q[2]);
    out[0] = -s * r1 * y - w - y * y - s * y * (c + w);
    out[1] = s * r1 * y * y;
    out[2] = 0.0;
}

/// Chart `z_bar = -1`: `y = sigma3 y3`, `z = c - sigma3^2`, `s = sigma3 s3`.
/// Coordinates `(y3, s3, sigma3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_camel_case_types)]
pub struct K12_3 {
    pub r1: f64,
    pub c: f64,
}

impl K12_3 {
    pub const NAME: &'static str = "K12_3";
}

/// Desingularized `K12^3` field. The `r1` bracket is `-s3 y3 + y3^3 s3 / 2`,
/// which is what the chain rule gives for the `-s r1 y` term.
pub fn field_k12_3(y3: f64, s3: f64, sigma3: f64, r1: f64, c: f64) -> [f64; 3] {
    [
        1.0 - y3 * y3 - y3 * s3 * c + sigma3 * sigma3 * s3 * y3 + r1 * (-s3 * y3 + 0.5 * s3 * y3 * y3 * y3),
        0.5 * r1 * s3 * s3 * y3 * y3,
        -0.5 * r1 * sigma3 * s3 * y3 * y3,
    ]
}

/// Layer-problem critical manifold `1 - y3^2 - y3 s3 c + sigma3^2 s3 y3 = 0`.
pub fn crit_manifold_k12_3(y3: f64, s3: f64, sigma3: f64, c: f64) -> f64 {
    1.0 - y3 * y3 - y3 * s3 * c + sigma3 * sigma3 * s3 * y3
}

/// Attracting root `y3 > 0` of [`crit_manifold_k12_3`].
pub fn attracting_y3(s3: f64, sigma3: f64, c: f64) -> f64 {
    let b = s3 * (c - sigma3 * sigma3);
    // y3^2 + b y3 - 1 = 0, positive root without cancellation
    2.0 / (b + crate::math::sqrt(b * b + 4.0))
}

impl Chart for K12_3 {
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
        vec![0.0, self.c, 0.0]
    }
    fn to_base_local(&self, p: &[f64]) -> Vec<f64> {
        vec![p[2] * p[0], -p[2] * p[2], p[2] * p[1]]
    }
    fn from_base_local(&self, q: &[f64]) -> Result<Vec<f64>> {
        if !(q[1] < -LOCUS_BAND * LOCUS_BAND) {
            return Err(Error::ChartUndefined("K12_3 requires z < c"));
        }
        let sg = crate::math::sqrt(-q[1]);
        Ok(vec![q[0] / sg, q[2] / sg, sg])
    }
    fn base_field_local(&self, q: &[f64], out: &mut [f64]) {
        p12_local(q, self.r1, self.c, out)
    }
    fn field(&self, p: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&field_k12_3(p[0], p[1], p[2], self.r1, self.c));
    }
}

/// Scaling chart `s_bar = 1`: `y = sigma2 y2`, `z = c + sigma2^2 z2`, `s = sigma2`.
/// Coordinates `(y2, z2, sigma2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_camel_case_types)]
pub struct K12_2 {
    pub r1: f64,
    pub c: f64,
}

impl K12_2 {
    pub const NAME: &'static str = "K12_2";
}

pub fn field_k12_2(y2: f64, z2: f64, sigma2: f64, r1: f64, c: f64) -> [f64; 3] {
    [
        -z2 - y2 * y2 - y2 * c - sigma2 * sigma2 * y2 * z2 - r1 * y2,
        r1 * y2 * y2,
        0.0,
    ]
}

/// Critical manifold `z2 = -(y2^2 + c y2) / (1 + sigma2^2 y2)`.
pub fn crit_manifold_k12_2(y2: f64, sigma2: f64, c: f64) -> Result<f64> {
    let d = 1.0 + sigma2 * sigma2 * y2;
    if crate::math::abs(d) <= LOCUS_BAND {
        return Err(Error::PoleAt { y: y2 });
    }
    Ok(-(y2 * y2 + c * y2) / d)
}

impl Chart for K12_2 {
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
        vec![0.0, self.c, 0.0]
    }
    fn to_base_local(&self, p: &[f64]) -> Vec<f64> {
        vec![p[2] * p[0], p[2] * p[2] * p[1], p[2]]
    }
    fn from_base_local(&self, q: &[f64]) -> Result<Vec<f64>> {
        let sg = q[2];
        if !(sg > LOCUS_BAND) {
            return Err(Error::ChartUndefined("K12_2 requires s > 0"));
        }
        Ok(vec![q[0] / sg, q[1] / (sg * sg), sg])
    }
    fn base_field_local(&self, q: &[f64], out: &mut [f64]) {
        p12_local(q, self.r1, self.c, out)
    }
    fn field(&self, p: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&field_k12_2(p[0], p[1], p[2], self.r1, self.c));
    }
}

pub fn k12_3_to_2(p: [f64; 3]) -> Result<[f64; 3]> {
    let [y3, s3, sg] = p;
    if !(s3 > 0.0) {
        return Err(Error::ChartUndefined("K12_2 requires s3 > 0"));
    }
    Ok([y3 / s3, -1.0 / (s3 * s3), sg * s3])
}

pub fn k12_2_to_3(p: [f64; 3]) -> Result<[f64; 3]> {
    let [y2, z2, sg] = p;
    if !(z2 < 0.0) {
        return Err(Error::ChartUndefined("K12_3 requires z2 < 0"));
    }
    let k = crate::math::sqrt(-z2);
    Ok([y2 / k, 1.0 / k, sg * k])
}
