//! Reduced flows along critical manifolds, parametrized by a slow variable.
//!
//! Instead of integrating in time (where centre-like approaches to equilibria
//! take forever) the remaining coordinates are integrated as functions of the
//! slow variable `x` with classical RK4 and step doubling.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::abs;

pub(crate) struct Trace<'a> {
    rhs: &'a dyn Fn(f64, &[f64]) -> Vec<f64>,
    pub xs: Vec<f64>,
    pub us: Vec<Vec<f64>>,
}

fn rk4(rhs: &dyn Fn(f64, &[f64]) -> Vec<f64>, x: f64, u: &[f64], h: f64) -> Vec<f64> {
    let add = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + s * q).collect() };
    let k1 = rhs(x, u);
    let k2 = rhs(x + 0.5 * h, &add(u, &k1, 0.5 * h));
    let k3 = rhs(x + 0.5 * h, &add(u, &k2, 0.5 * h));
    let k4 = rhs(x + h, &add(u, &k3, h));
    (0..u.len()).map(|i| u[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
}

impl<'a> Trace<'a> {
    /// Integrates `du/dx = rhs(x, u)` from `x0` to `x1` (either direction).
    pub fn run(rhs: &'a dyn Fn(f64, &[f64]) -> Vec<f64>, x0: f64, x1: f64, u0: &[f64], tol: f64) -> Result<Self> {
        let span = x1 - x0;
        let dir = if span >= 0.0 { 1.0 } else { -1.0 };
        let h_max = abs(span) / 64.0;
        let mut h = h_max / 16.0;
        let mut x = x0;
        let mut u = u0.to_vec();
        let mut xs = vec![x0];
        let mut us = vec![u.clone()];
        while dir * (x1 - x) > 0.0 {
            let h_min = 1e-14 * abs(x).max(1.0);
            if h < h_min {
                let mut at = vec![x];
                at.extend_from_slice(&u);
                return Err(Error::ReducedFlowStalled { at });
            }
            let step = h.min(abs(x1 - x));
            let full = rk4(rhs, x, &u, dir * step);
            let half = rk4(rhs, x, &u, dir * step / 2.0);
            let two = rk4(rhs, x + dir * step / 2.0, &half, dir * step / 2.0);
            let err = full
                .iter()
                .zip(&two)
                .map(|(a, b)| abs(a - b) / (tol * (1.0 + abs(*b))))
                .fold(0.0, f64::max)
                / 15.0;
            if !err.is_finite() {
                h *= 0.25;
                continue;
            }
            if err <= 1.0 {
                x = if step == abs(x1 - x) { x1 } else { x + dir * step };
                // Richardson-corrected value
                u = two.iter().zip(&full).map(|(b, a)| b + (b - a) / 15.0).collect();
                xs.push(x);
                us.push(u.clone());
            }
            let factor = if err == 0.0 { 4.0 } else { (0.9 * crate::math::pow(err, -0.2)).clamp(0.2, 4.0) };
            h = (h * factor).min(h_max);
        }
        Ok(Self { rhs, xs, us })
    }

    /// State at `x` inside the traced range, by one RK4 step from the nearest
    /// stored node on the left.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        let ascending = self.xs.len() < 2 || self.xs[1] >= self.xs[0];
        let k = if ascending {
            self.xs.partition_point(|&v| v <= x)
        } else {
            self.xs.partition_point(|&v| v >= x)
        };
        let i = k.saturating_sub(1).min(self.xs.len() - 1);
        let h = x - self.xs[i];
        if h == 0.0 {
            return self.us[i].clone();
        }
        // two half steps keep the local error far below the tracing tolerance
        let mid = rk4(self.rhs, self.xs[i], &self.us[i], h / 2.0);
        rk4(self.rhs, self.xs[i] + h / 2.0, &mid, h / 2.0)
    }

    pub fn last(&self) -> (f64, &[f64]) {
        (*self.xs.last().unwrap(), self.us.last().unwrap())
    }
}
