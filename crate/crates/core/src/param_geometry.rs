//! Regime classification of `(eps1, eps2)` and the parameter-space blow-ups.
//!
//! The first blow-up `eps1 = r^2 eps1_bar`, `eps2 = r eps2_bar` resolves the
//! origin with weights (2, 1). Its chart `P1` carries a second blow-up at
//! `(r, eps2_tilde) = (0, 0)`, with charts `P11` and `P12`.

use alloc::format;

use crate::error::{Error, Result};
use crate::math::{abs, sqrt};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub delta: f64,
}

impl Default for RegimeConfig {
    fn default() -> Self {
        Self { beta1: 1.0, beta2: 1.0, beta3: 1e-3, delta: 1.0 }
    }
}

impl RegimeConfig {
    pub fn new(beta1: f64, beta2: f64, beta3: f64, delta: f64) -> Result<Self> {
        if !(0.0 < beta3 && beta3 < beta2 && beta1 > 0.0 && delta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < beta3 < beta2, beta1 > 0, delta > 0; got ({beta1}, {beta2}, {beta3}, {delta})"
            )));
        }
        Ok(Self { beta1, beta2, beta3, delta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    B11,
    B12,
    B2,
    B3,
    OnC1,
    OnC2,
    OnC3,
    OutsideDelta,
    Origin,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::B11 => "B11",
            Regime::B12 => "B12",
            Regime::B2 => "B2",
            Regime::B3 => "B3",
            Regime::OnC1 => "OnC1",
            Regime::OnC2 => "OnC2",
            Regime::OnC3 => "OnC3",
            Regime::OutsideDelta => "OutsideDelta",
            Regime::Origin => "Origin",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Regime::B11,
            Regime::B12,
            Regime::B2,
            Regime::B3,
            Regime::OnC1,
            Regime::OnC2,
            Regime::OnC3,
            Regime::OutsideDelta,
            Regime::Origin,
        ]
        .into_iter()
        .find(|r| r.label().eq_ignore_ascii_case(s))
    }

    /// One of the four open regions.
    pub fn is_region(self) -> bool {
        matches!(self, Regime::B11 | Regime::B12 | Regime::B2 | Regime::B3)
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

/// Regime of `(eps1, eps2)`. `B2` is closed, `B1` and `B3` are open; the
/// curve `C1: eps1 = beta1 eps2` is reported only on exact equality.
pub fn classify(eps1: f64, eps2: f64, cfg: &RegimeConfig) -> Regime {
    if eps1 == 0.0 && eps2 == 0.0 {
        return Regime::Origin;
    }
    if eps1 * eps1 + eps2 * eps2 > cfg.delta * cfg.delta {
        return Regime::OutsideDelta;
    }
    let q = eps2 * eps2;
    if eps1 < cfg.beta3 * q {
        Regime::B3
    } else if eps1 <= cfg.beta2 * q {
        Regime::B2
    } else if eps1 == cfg.beta1 * eps2 {
        Regime::OnC1
    } else if eps1 > cfg.beta1 * eps2 {
        Regime::B11
    } else {
        Regime::B12
    }
}

/// The boundary curve within `rel_tol` of which `(eps1, eps2)` lies, if any:
/// `C1: eps1 = beta1 eps2`, `C2: eps1 = beta2 eps2^2`, `C3: eps1 = beta3 eps2^2`.
pub fn boundary_curve(eps1: f64, eps2: f64, cfg: &RegimeConfig, rel_tol: f64) -> Option<Regime> {
    let near = |a: f64, b: f64| abs(a - b) <= rel_tol * abs(a).max(abs(b));
    let q = eps2 * eps2;
    if eps1 == 0.0 && eps2 == 0.0 {
        None
    } else if near(eps1, cfg.beta3 * q) {
        Some(Regime::OnC3)
    } else if near(eps1, cfg.beta2 * q) {
        Some(Regime::OnC2)
    } else if near(eps1, cfg.beta1 * eps2) && eps1 > cfg.beta2 * q {
        Some(Regime::OnC1)
    } else {
        None
    }
}

/// Point of the first parameter blow-up: radius and a point on the unit quarter circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParBlowup1 {
    pub r: f64,
    pub eps1_bar: f64,
    pub eps2_bar: f64,
}

pub fn phi_par1_fwd(r: f64, eps1_bar: f64, eps2_bar: f64) -> (f64, f64) {
    (r * r * eps1_bar, r * eps2_bar)
}

/// Unique `r > 0` with `(eps1 / r^2)^2 + (eps2 / r)^2 = 1`, i.e.
/// `r^2 = (eps2^2 + sqrt(eps2^4 + 4 eps1^2)) / 2`.
pub fn phi_par1_inv(eps1: f64, eps2: f64) -> Result<ParBlowup1> {
    if eps1 == 0.0 && eps2 == 0.0 {
        return Err(Error::NotInvertibleOnBlowupLocus);
    }
    let q = eps2 * eps2;
    let r2 = 0.5 * (q + sqrt(q * q + 4.0 * eps1 * eps1));
    let r = sqrt(r2);
    Ok(ParBlowup1 { r, eps1_bar: eps1 / r2, eps2_bar: eps2 / r })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P1Coords {
    pub r: f64,
    pub eps2_tilde: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P2Coords {
    pub r: f64,
    pub eps1_tilde: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P11Coords {
    pub s: f64,
    pub eps21: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P12Coords {
    pub s: f64,
    pub r1: f64,
}

/// `eps1 = r^2`, `eps2 = r eps2_tilde`.
pub fn chart_p1(eps1: f64, eps2: f64) -> Result<P1Coords> {
    if !(eps1 > 0.0) {
        return Err(Error::ChartUndefined("P1 requires eps1 > 0"));
    }
    let r = sqrt(eps1);
    Ok(P1Coords { r, eps2_tilde: eps2 / r })
}

pub fn chart_p1_inv(p: P1Coords) -> (f64, f64) {
    (p.r * p.r, p.r * p.eps2_tilde)
}

/// `eps1 = r^2 eps1_tilde`, `eps2 = r`.
pub fn chart_p2(eps1: f64, eps2: f64) -> Result<P2Coords> {
    if !(eps2 > 0.0) {
        return Err(Error::ChartUndefined("P2 requires eps2 > 0"));
    }
    Ok(P2Coords { r: eps2, eps1_tilde: eps1 / (eps2 * eps2) })
}

pub fn chart_p2_inv(p: P2Coords) -> (f64, f64) {
    (p.r * p.r * p.eps1_tilde, p.r)
}

/// `r = s`, `eps2_tilde = s eps21`.
pub fn chart_p11(p: P1Coords) -> Result<P11Coords> {
    if !(p.r > 0.0) {
        return Err(Error::ChartUndefined("P11 requires r > 0"));
    }
    Ok(P11Coords { s: p.r, eps21: p.eps2_tilde / p.r })
}

pub fn chart_p11_inv(p: P11Coords) -> P1Coords {
    P1Coords { r: p.s, eps2_tilde: p.s * p.eps21 }
}

/// `r = s r1`, `eps2_tilde = s`.
pub fn chart_p12(p: P1Coords) -> Result<P12Coords> {
    if !(p.eps2_tilde > 0.0) {
        return Err(Error::ChartUndefined("P12 requires eps2_tilde > 0"));
    }
    Ok(P12Coords { s: p.eps2_tilde, r1: p.r / p.eps2_tilde })
}

pub fn chart_p12_inv(p: P12Coords) -> P1Coords {
    P1Coords { r: p.s * p.r1, eps2_tilde: p.s }
}

/// Second blow-up `r = s r_bar`, `eps2_tilde = s eps2_bar` with `r_bar^2 + eps2_bar^2 = 1`.
pub fn phi_par2_inv(p: P1Coords) -> Result<(f64, f64, f64)> {
    let s = crate::math::hypot(p.r, p.eps2_tilde);
    if s == 0.0 {
        return Err(Error::NotInvertibleOnBlowupLocus);
    }
    Ok((s, p.r / s, p.eps2_tilde / s))
}
