//! Robertson vector fields: the full three-species system, the planar system
//! obtained from mass conservation, and the parameter reduction
//! `(eps1, eps2) = (k1/k2, k3/k2)` with the fast time `tau = k2 t`.

use alloc::format;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_2x2, Matrix};
use crate::solver::OdeSystem;

/// Mass-action rates of `X -> Y`, `2Y -> Y + Z`, `Y + Z -> X + Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

impl RateConstants {
    /// The classical stiff test values.
    pub const CLASSICAL: Self = Self { k1: 4e-2, k2: 3e7, k3: 1e4 };

    pub fn new(k1: f64, k2: f64, k3: f64) -> Result<Self> {
        if !(k1 > 0.0 && k2 > 0.0 && k3 > 0.0) || !(k1.is_finite() && k2.is_finite() && k3.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "rate constants must be positive and finite, got ({k1}, {k2}, {k3})"
            )));
        }
        Ok(Self { k1, k2, k3 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FullState {
    pub const CLASSICAL_INITIAL: Self = Self { x: 1.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self { x: s[0], y: s[1], z: s[2] }
    }
}

/// Dimensionless parameters of the planar system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledParams {
    pub eps1: f64,
    pub eps2: f64,
    pub c: f64,
}

impl ScaledParams {
    pub fn new(eps1: f64, eps2: f64, c: f64) -> Result<Self> {
        if !(eps1 >= 0.0 && eps2 >= 0.0) || !eps1.is_finite() || !eps2.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "eps1, eps2 must be finite and non-negative, got ({eps1}, {eps2})"
            )));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!("total concentration c must be positive, got {c}")));
        }
        Ok(Self { eps1, eps2, c })
    }

    /// Scaled values of the classical experiment.
    pub fn classical() -> Self {
        reduce(RateConstants::CLASSICAL, FullState::CLASSICAL_INITIAL).0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub y: f64,
    pub z: f64,
}

impl ReducedState {
    pub fn new(y: f64, z: f64) -> Self {
        Self { y, z }
    }
}

pub fn full_rhs(s: FullState, k: RateConstants) -> FullState {
    let conv = k.k1 * s.x;
    let dimer = k.k2 * s.y * s.y;
    let back = k.k3 * s.y * s.z;
    FullState { x: -conv + back, y: conv - dimer - back, z: dimer }
}

/// Analytic Jacobian of [`full_rhs`]; rows are (x', y', z'), columns (x, y, z).
pub fn full_jacobian(s: FullState, k: RateConstants) -> Matrix {
    let mut j = Matrix::zeros(3, 3);
    write_full_jacobian(s, k, &mut j);
    j
}

fn write_full_jacobian(s: FullState, k: RateConstants, j: &mut Matrix) {
    j[(0, 0)] = -k.k1;
    j[(0, 1)] = k.k3 * s.z;
    j[(0, 2)] = k.k3 * s.y;
    j[(1, 0)] = k.k1;
    j[(1, 1)] = -2.0 * k.k2 * s.y - k.k3 * s.z;
    j[(1, 2)] = -k.k3 * s.y;
    j[(2, 0)] = 0.0;
    j[(2, 1)] = 2.0 * k.k2 * s.y;
    j[(2, 2)] = 0.0;
}

/// Scaled parameters and planar initial state for a physical experiment.
pub fn reduce(k: RateConstants, init: FullState) -> (ScaledParams, ReducedState) {
    let p = ScaledParams { eps1: k.k1 / k.k2, eps2: k.k3 / k.k2, c: conserved_quantity(init) };
    (p, ReducedState { y: init.y, z: init.z })
}

/// Planar system in fast time: `y' = eps1 (c - y - z) - y^2 - eps2 y z`, `z' = y^2`.
pub fn reduced_rhs(s: ReducedState, p: ScaledParams) -> ReducedState {
    let ReducedState { y, z } = s;
    ReducedState { y: p.eps1 * (p.c - y - z) - y * y - p.eps2 * y * z, z: y * y }
}

pub fn reduced_jacobian(s: ReducedState, p: ScaledParams) -> Matrix {
    let mut j = Matrix::zeros(2, 2);
    write_reduced_jacobian(s, p, &mut j);
    j
}

fn write_reduced_jacobian(s: ReducedState, p: ScaledParams, j: &mut Matrix) {
    j[(0, 0)] = -p.eps1 - 2.0 * s.y - p.eps2 * s.z;
    j[(0, 1)] = -p.eps1 - p.eps2 * s.y;
    j[(1, 0)] = 2.0 * s.y;
    j[(1, 1)] = 0.0;
}

/// Divergence of the planar field, `-eps1 - 2y - eps2 z`.
pub fn reduced_divergence(s: ReducedState, p: ScaledParams) -> f64 {
    -p.eps1 - 2.0 * s.y - p.eps2 * s.z
}

/// The unique equilibrium `Q = (0, c)` and its spectrum `(-eps1 - eps2 c, 0)`.
pub fn equilibrium(p: ScaledParams) -> (ReducedState, [f64; 2]) {
    (ReducedState { y: 0.0, z: p.c }, [-p.eps1 - p.eps2 * p.c, 0.0])
}

/// Eigenvalues of the analytic Jacobian at `Q`, computed numerically.
pub fn equilibrium_spectrum_numeric(p: ScaledParams) -> [f64; 2] {
    let (q, _) = equilibrium(p);
    let j = reduced_jacobian(q, p);
    let [a, b] = eigenvalues_2x2(j[(0, 0)], j[(0, 1)], j[(1, 0)], j[(1, 1)]);
    [b.re, a.re]
}

pub fn conserved_quantity(s: FullState) -> f64 {
    s.x + s.y + s.z
}

/// Full three-species system as an integrable ODE (physical time).
#[derive(Debug, Clone, Copy)]
pub struct FullSystem {
    pub rates: RateConstants,
}

impl OdeSystem for FullSystem {
    fn dim(&self) -> usize {
        3
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let d = full_rhs(FullState::from_slice(y), self.rates);
        dy.copy_from_slice(&d.to_array());
    }

    fn jacobian(&self, _t: f64, y: &[f64], jac: &mut Matrix) {
        write_full_jacobian(FullState::from_slice(y), self.rates, jac);
    }
}

/// Planar system in fast time.
#[derive(Debug, Clone, Copy)]
pub struct ReducedSystem {
    pub params: ScaledParams,
}

impl OdeSystem for ReducedSystem {
    fn dim(&self) -> usize {
        2
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let d = reduced_rhs(ReducedState::new(y[0], y[1]), self.params);
        dy[0] = d.y;
        dy[1] = d.z;
    }

    fn jacobian(&self, _t: f64, y: &[f64], jac: &mut Matrix) {
        write_reduced_jacobian(ReducedState::new(y[0], y[1]), self.params, jac);
    }
}
