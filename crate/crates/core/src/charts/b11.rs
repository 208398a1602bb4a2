//! Spherical blow-up of the fold point `(y, z, s) = (0, c, 0)` of the `P11`
//! system `y' = c - s y - z - y^2 - s eps21 y z`, `z' = s y^2`, `s' = 0`,
//! with weights (1, 2, 1).

use alloc::vec;
use alloc::vec::Vec;

use super::{weighted_radius, Chart, LOCUS_BAND};
use crate::error::{Error, Result};

/// Point `(sigma, y_bar, z_bar, s_bar)` of `[0, inf) x S^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub sigma: f64,
    pub y: f64,
    pub z: f64,
    pub s: f64,
}

pub fn blowup_b11_fwd(p: SpherePoint, c: f64) -> (f64, f64, f64) {
    (p.sigma * p.y, c + p.sigma * p.sigma * p.z, p.sigma * p.s)
}

pub fn blowup_b11_inv(y: f64, z: f64, s: f64, c: f64) -> Result<SpherePoint> {
    let w = z - c;
    if y == 0.0 && w == 0.0 && s == 0.0 {
        return Err(Error::NotInvertibleOnBlowupLocus);
    }
    let sigma = weighted_radius(y * y + s * s, w);
    Ok(SpherePoint { sigma, y: y / sigma, z: w / (sigma * sigma), s: s / sigma })
}

/// `P11` system in `(y, z - c, s)`.
fn p11_local(q: &[f64], eps21: f64, c: f64, out: &mut [f64]) {
    let (y, w, s) = (q[0], q[1], q[2]);
    out[0] = -s * y - w - y * y - s * eps21 * y * (c + w);
    out[1] = s * y * y;
    out[2] = 0.0;
}

/// Entrance chart `y_bar = 1`: `y = sigma1`, `z = c + sigma1^2 z1`, `s = sigma1 s1`.
/// Coordinates `(z1, s1, sigma1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_camel_case_types)]
pub struct K11_1 {
    pub eps21: f64,
    pub c: f64,
}

impl K11_1 {
    pub const NAME: &'static str = "K11_1";

    /// Common factor `s1 + z1 + 1 + sigma1^2 eps21 s1 z1 + s1 eps21 c`.
    pub fn factor(&self, z1: f64, s1: f64, sigma1: f64) -> f64 {
        s1 + z1 + 1.0 + sigma1 * sigma1 * self.eps21 * s1 * z1 + s1 * self.eps21 * self.c
    }
}

pub fn field_k11_1(z1: f64, s1: f64, sigma1: f64, eps21: f64, c: f64) -> [f64; 3] {
    let e = K11_1 { eps21, c }.factor(z1, s1, sigma1);
    [s1 + 2.0 * z1 * e, s1 * e, -sigma1 * e]
}

/// First-order coefficient of the attracting centre manifold at `Pa`,
/// `z1 = -1 - (1/2 + eps21 c) s1 + O(s1^2)`.
pub fn center_manifold_slope_k11(eps21: f64, c: f64) -> f64 {
    -(0.5 + eps21 * c)
}

impl Chart for K11_1 {
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
        let (z1, s1, sg) = (p[0], p[1], p[2]);
        vec![sg, sg * sg * z1, sg * s1]
    }
    fn from_base_local(&self, q: &[f64]) -> Result<Vec<f64>> {
        let sg = q[0];
        if !(sg > LOCUS_BAND) {
            return Err(Error::ChartUndefined("K11_1 requires y > 0"));
        }
        Ok(vec![q[1] / (sg * sg), q[2] / sg, sg])
    }
    fn base_field_local(&self, q: &[f64], out: &mut [f64]) {
        p11_local(q, self.eps21, self.c, out)
    }
    fn field(&self, p: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&field_k11_1(p[0], p[1], p[2], self.eps21, self.c));
    }
}

/// Scaling chart `s_bar = 1`: `y = sigma2 y2`, `z = c + sigma2^2 z2`, `s = sigma2`.
/// Coordinates `(y2, z2, sigma2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_camel_case_types)]
pub struct K11_2 {
    pub eps21: f64,
    pub c: f64,
}

impl K11_2 {
    pub const NAME: &'static str = "K11_2";
}

pub fn field_k11_2(y2: f64, z2: f64, sigma2: f64, eps21: f64, c: f64) -> [f64; 3] {
    [
        -y2 - z2 - y2 * y2 - y2 * eps21 * c - sigma2 * sigma2 * z2 * y2 * eps21,
        y2 * y2,
        0.0,
    ]
}

impl Chart for K11_2 {
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
        let (y2, z2, sg) = (p[0], p[1], p[2]);
        vec![sg * y2, sg * sg * z2, sg]
    }
    fn from_base_local(&self, q: &[f64]) -> Result<Vec<f64>> {
        let sg = q[2];
        if !(sg > LOCUS_BAND) {
            return Err(Error::ChartUndefined("K11_2 requires s > 0"));
        }
        Ok(vec![q[0] / sg, q[1] / (sg * sg), sg])
    }
    fn base_field_local(&self, q: &[f64], out: &mut [f64]) {
        p11_local(q, self.eps21, self.c, out)
    }
    fn field(&self, p: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&field_k11_2(p[0], p[1], p[2], self.eps21, self.c));
    }
}

/// Chart `z_bar = -1`: `y = sigma3 y3`, `z = c - sigma3^2`, `s = sigma3 s3`.
/// Coordinates `(y3, s3, sigma3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_camel_case_types)]
pub struct K11_3 {
    pub eps21: f64,
    pub c: f64,
}

impl K11_3 {
    pub const NAME: &'static str = "K11_3";
}

pub fn field_k11_3(y3: f64, s3: f64, sigma3: f64, eps21: f64, c: f64) -> [f64; 3] {
    [
        -y3 * s3 + 1.0 - y3 * y3 + sigma3 * sigma3 * eps21 * y3 * s3 - s3 * eps21 * y3 * c
            + 0.5 * y3 * y3 * y3 * s3,
        0.5 * y3 * y3 * s3 * s3,
        -0.5 * sigma3 * y3 * y3 * s3,
    ]
}

impl Chart for K11_3 {
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
        let (y3, s3, sg) = (p[0], p[1], p[2]);
        vec![sg * y3, -sg * sg, sg * s3]
    }
    fn from_base_local(&self, q: &[f64]) -> Result<Vec<f64>> {
        if !(q[1] < -LOCUS_BAND * LOCUS_BAND) {
            return Err(Error::ChartUndefined("K11_3 requires z < c"));
        }
        let sg = crate::math::sqrt(-q[1]);
        Ok(vec![q[0] / sg, q[2] / sg, sg])
    }
    fn base_field_local(&self, q: &[f64], out: &mut [f64]) {
        p11_local(q, self.eps21, self.c, out)
    }
    fn field(&self, p: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&field_k11_3(p[0], p[1], p[2], self.eps21, self.c));
    }
}

pub fn k11_1_to_2(p: [f64; 3]) -> Result<[f64; 3]> {
    let [z1, s1, sg] = p;
    if !(s1 > 0.0) {
        return Err(Error::ChartUndefined("K11_2 requires s1 > 0"));
    }
    Ok([1.0 / s1, z1 / (s1 * s1), sg * s1])
}

pub fn k11_2_to_1(p: [f64; 3]) -> Result<[f64; 3]> {
    let [y2, z2, sg] = p;
    if !(y2 > 0.0) {
        return Err(Error::ChartUndefined("K11_1 requires y2 > 0"));
    }
    Ok([z2 / (y2 * y2), 1.0 / y2, sg * y2])
}

pub fn k11_3_to_1(p: [f64; 3]) -> Result<[f64; 3]> {
    let [y3, s3, sg] = p;
    if !(y3 > 0.0) {
        return Err(Error::ChartUndefined("K11_1 requires y3 > 0"));
    }
    Ok([-1.0 / (y3 * y3), s3 / y3, sg * y3])
}

pub fn k11_1_to_3(p: [f64; 3]) -> Result<[f64; 3]> {
    let [z1, s1, sg] = p;
    if !(z1 < 0.0) {
        return Err(Error::ChartUndefined("K11_3 requires z1 < 0"));
    }
    let k = crate::math::sqrt(-z1);
    Ok([1.0 / k, s1 / k, sg * k])
}

pub fn k11_3_to_2(p: [f64; 3]) -> Result<[f64; 3]> {
    let [y3, s3, sg] = p;
    if !(s3 > 0.0) {
        return Err(Error::ChartUndefined("K11_2 requires s3 > 0"));
    }
    Ok([y3 / s3, -1.0 / (s3 * s3), sg * s3])
}

/// Pieces of the boundary of the trapping region on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaEdge {
    /// `s_bar = 0`.
    Equator,
    /// `s1 = -z1` in `K11_1`, `z2 = -y2` in `K11_2`, `s3 y3 = 1` in `K11_3`.
    Curve,
    /// `y_bar = 0`.
    Meridian,
}

/// A point on the sphere `sigma = 0` in one of the three `B11` charts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereChartPoint {
    K1 { z1: f64, s1: f64 },
    K2 { y2: f64, z2: f64 },
    K3 { y3: f64, s3: f64 },
}

/// Defining function `g` of an edge (the region lies in `g <= 0`) and its
/// gradient, or `None` when the edge is not visible in the chart.
fn edge_function(edge: OmegaEdge, p: SphereChartPoint) -> Option<(f64, [f64; 2])> {
    use OmegaEdge::*;
    use SphereChartPoint::*;
    match (edge, p) {
        (Equator, K1 { s1, .. }) => Some((-s1, [0.0, -1.0])),
        (Curve, K1 { z1, s1 }) => Some((s1 + z1, [1.0, 1.0])),
        (Meridian, K1 { .. }) => None,
        (Equator, K2 { .. }) => None,
        (Curve, K2 { y2, z2 }) => Some((y2 + z2, [1.0, 1.0])),
        (Meridian, K2 { y2, .. }) => Some((-y2, [-1.0, 0.0])),
        (Equator, K3 { s3, .. }) => Some((-s3, [0.0, -1.0])),
        (Curve, K3 { y3, s3 }) => Some((s3 * y3 - 1.0, [s3, y3])),
        (Meridian, K3 { y3, .. }) => Some((-y3, [-1.0, 0.0])),
    }
}

fn sphere_field(p: SphereChartPoint, eps21: f64, c: f64) -> [f64; 2] {
    match p {
        SphereChartPoint::K1 { z1, s1 } => {
            let f = field_k11_1(z1, s1, 0.0, eps21, c);
            [f[0], f[1]]
        }
        SphereChartPoint::K2 { y2, z2 } => {
            let f = field_k11_2(y2, z2, 0.0, eps21, c);
            [f[0], f[1]]
        }
        SphereChartPoint::K3 { y3, s3 } => {
            let f = field_k11_3(y3, s3, 0.0, eps21, c);
            [f[0], f[1]]
        }
    }
}

/// Whether a sphere point lies in the closed trapping region.
pub fn omega_membership(p: SphereChartPoint) -> bool {
    const TOL: f64 = 1e-12;
    [OmegaEdge::Equator, OmegaEdge::Curve, OmegaEdge::Meridian]
        .into_iter()
        .filter_map(|e| edge_function(e, p))
        .all(|(g, _)| g <= TOL)
}

/// Outward rate `grad g . F` of the sphere flow across an edge; forward
/// invariance requires it to be non-positive.
pub fn omega_boundary_flux(edge: OmegaEdge, p: SphereChartPoint, eps21: f64, c: f64) -> Result<f64> {
    let (_, grad) = edge_function(edge, p).ok_or(Error::ChartUndefined("edge not visible in this chart"))?;
    let f = sphere_field(p, eps21, c);
    Ok(grad[0] * f[0] + grad[1] * f[1])
}
