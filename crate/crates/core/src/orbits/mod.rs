//! Singular orbits: concatenations of fast fibres, slow pieces on critical
//! manifolds and (for `B11`) the centre connection on the blow-up sphere.

mod tracer;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::charts::{center_manifold_slope_k11, k11_1_to_2, omega_membership, SphereChartPoint, K11_1, K11_2};
use crate::charts::k12_3_to_2;
use crate::charts::k3_2_to_3;
use crate::charts::Flow;
use crate::error::{Error, Result};
use crate::math::{abs, dist, sqrt};
use crate::model::ScaledParams;
use crate::param_geometry::Regime;
use crate::solver::{integrate, Direction, EventSpec, SolverSettings, Trajectory};
use tracer::Trace;

pub const DEFAULT_POINTS: usize = 2048;

/// Distance to the terminal equilibrium at which integrated and traced
/// segments stop; the equilibrium itself is appended as the last point.
pub const TERMINAL_RADIUS: f64 = 1e-8;

const TRACE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Fast,
    Slow,
    Center,
}

impl SegmentKind {
    pub fn label(self) -> &'static str {
        match self {
            SegmentKind::Fast => "fast",
            SegmentKind::Slow => "slow",
            SegmentKind::Center => "center",
        }
    }
}

/// Polyline in the coordinates of one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub kind: SegmentKind,
    /// `"B2"`, `"P11"` (rescaled `(y~, z)` of the `B11` regime), or a phase-space chart name.
    pub chart: &'static str,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularOrbit {
    pub regime: Regime,
    pub c: f64,
    /// Fixed chart parameter: `eps2~` (B2, B12), `eps21` (B11) or `eps1~` (B3).
    pub fixed: f64,
    pub segments: Vec<Segment>,
}

impl SingularOrbit {
    pub fn n_points(&self) -> usize {
        self.segments.iter().map(|s| s.points.len()).sum()
    }

    /// All points in rescaled `(y~, z)` coordinates, where `y = scale * y~`.
    /// Points on a blow-up sphere collapse onto `Q`.
    pub fn rescaled(&self) -> Vec<[f64; 2]> {
        self.segments
            .iter()
            .flat_map(|s| s.points.iter().map(move |p| to_rescaled(s.chart, p, self.c)))
            .collect()
    }
}

/// Rescaled `(y~, z)` of a chart point.
pub fn to_rescaled(chart: &str, p: &[f64], c: f64) -> [f64; 2] {
    match chart {
        "K11_1" => [p[2], c + p[2] * p[2] * p[0]],
        "K11_2" | "K12_2" => [p[2] * p[0], c + p[2] * p[2] * p[1]],
        "K11_3" | "K12_3" => [p[2] * p[0], c - p[2] * p[2]],
        "K3_2" => [p[2] * p[0], p[2] * p[1]],
        "K3_3" => [p[1] * p[0], p[1]],
        _ => [p[0], p[1]],
    }
}

/// Maps the orbit to original `(y, z)` for the parameters `p`.
pub fn to_original_coords(orbit: &SingularOrbit, p: &ScaledParams) -> Vec<[f64; 2]> {
    let scale = rescale_factor(orbit.regime, p);
    orbit.rescaled().into_iter().map(|[y, z]| [scale * y, z]).collect()
}

/// `y = scale * y~`: `sqrt(eps1)` in the `P1` family of charts, `eps2` in `P2`.
pub fn rescale_factor(regime: Regime, p: &ScaledParams) -> f64 {
    match regime {
        Regime::B3 => p.eps2,
        _ => sqrt(p.eps1),
    }
}

/// Leading-order height of the y peak, `sqrt(eps1 c)`.
pub fn y_max_prediction(p: &ScaledParams) -> f64 {
    sqrt(p.eps1 * p.c)
}

/// Samples `f` on `[t0, t1]` at `n` points equally spaced in arc length.
fn equidistribute(f: &dyn Fn(f64) -> Vec<f64>, t0: f64, t1: f64, n: usize) -> Vec<Vec<f64>> {
    let m = 16 * n.max(2);
    let ts: Vec<f64> = (0..=m).map(|k| t0 + (t1 - t0) * k as f64 / m as f64).collect();
    let pts: Vec<Vec<f64>> = ts.iter().map(|&t| f(t)).collect();
    let mut cum = vec![0.0];
    for w in pts.windows(2) {
        let last = *cum.last().unwrap();
        cum.push(last + dist(&w[0], &w[1]));
    }
    let total = *cum.last().unwrap();
    let n = n.max(2);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if k == 0 {
            out.push(f(t0));
            continue;
        }
        if k == n - 1 {
            out.push(f(t1));
            continue;
        }
        let target = total * k as f64 / (n - 1) as f64;
        let i = cum.partition_point(|&v| v < target).clamp(1, m);
        let span = cum[i] - cum[i - 1];
        let w = if span > 0.0 { (target - cum[i - 1]) / span } else { 0.0 };
        out.push(f(ts[i - 1] + w * (ts[i] - ts[i - 1])));
    }
    out
}

fn check_inputs(c: f64, n: usize) -> Result<()> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidArgument(format!("c must be positive, got {c}")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 points per segment, got {n}")));
    }
    Ok(())
}

/// `B2` in `(y~, z)`: fast fibre `z = 0` from `O` to `(sqrt c, 0)`, then the
/// attracting critical manifold `z = (c - y~^2) / (1 + eps2~ y~)` down to `Q`.
pub fn gamma0_b2(eps2_tilde: f64, c: f64, n: usize) -> Result<SingularOrbit> {
    check_inputs(c, n)?;
    if !(eps2_tilde >= 0.0) || !eps2_tilde.is_finite() {
        return Err(Error::InvalidArgument(format!("eps2~ must be non-negative, got {eps2_tilde}")));
    }
    let rc = sqrt(c);
    let fast = equidistribute(&|t| vec![t, 0.0], 0.0, rc, n);
    let slow = equidistribute(&|y| vec![y, (c - y * y) / (1.0 + eps2_tilde * y)], rc, 0.0, n);
    Ok(SingularOrbit {
        regime: Regime::B2,
        c,
        fixed: eps2_tilde,
        segments: vec![
            Segment { kind: SegmentKind::Fast, chart: "B2", points: fast },
            Segment { kind: SegmentKind::Slow, chart: "B2", points: slow },
        ],
    })
}

/// `B11`: fast fibre in `(y~, z)`, the slow parabola `z1 = -1` in `K11_1` down
/// to `Pa`, and the centre connection on the sphere from `Pa` to `Q2`.
pub fn gamma0_b11(eps21: f64, c: f64, n: usize) -> Result<SingularOrbit> {
    check_inputs(c, n)?;
    if !(eps21 >= 0.0) || !eps21.is_finite() {
        return Err(Error::InvalidArgument(format!("eps21 must be non-negative, got {eps21}")));
    }
    let rc = sqrt(c);
    let fast = equidistribute(&|t| vec![t, 0.0], 0.0, rc, n);
    let slow = equidistribute(&|s| vec![-1.0, 0.0, s], rc, 0.0, n);
    let (c1, c2) = center_b11(eps21, c, n)?;
    Ok(SingularOrbit {
        regime: Regime::B11,
        c,
        fixed: eps21,
        segments: vec![
            Segment { kind: SegmentKind::Fast, chart: "P11", points: fast },
            Segment { kind: SegmentKind::Slow, chart: K11_1::NAME, points: slow },
            Segment { kind: SegmentKind::Center, chart: K11_1::NAME, points: c1 },
            Segment { kind: SegmentKind::Center, chart: K11_2::NAME, points: c2 },
        ],
    })
}

const CENTER_SEED: f64 = 1e-6;

/// Attracting centre manifold of `Pa` followed on the equator-free part of the
/// sphere (`sigma = 0`). Seeded at `Pa + 1e-6 (slope, 1)`, continued in
/// `K11_2` once `s1 >= 1`.
fn center_b11(eps21: f64, c: f64, n: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let k1 = K11_1 { eps21, c };
    let settings = SolverSettings::with_tolerances(1e-11, 1e-14);
    let slope = center_manifold_slope_k11(eps21, c);
    let seed = [-1.0 + slope * CENTER_SEED, CENTER_SEED, 0.0];
    let switch = EventSpec::crossing(1, 1.0, Direction::Rising, true);
    let t1 = integrate(&Flow(&k1), &seed, (0.0, 1e12), &settings, &[switch])?;
    if t1.events.is_empty() {
        return Err(Error::CenterTrackingFailed(format!(
            "s1 did not reach 1 in K11_1 (stopped at {:?})",
            t1.last_state()
        )));
    }
    ensure_in_omega(&t1, |p| SphereChartPoint::K1 { z1: p[0], s1: p[1] })?;

    let k2 = K11_2 { eps21, c };
    let start = k11_1_to_2([t1.last_state()[0], t1.last_state()[1], 0.0])?;
    let arrive = EventSpec::near_weighted(&[0.0, 0.0, 0.0], &[1.0, 1.0, 0.0], TERMINAL_RADIUS);
    let t2 = integrate(&Flow(&k2), &start, (0.0, 1e30), &settings, &[arrive])?;
    if t2.events.is_empty() {
        return Err(Error::CenterTrackingFailed(format!(
            "no approach to Q2 in K11_2 (stopped at {:?})",
            t2.last_state()
        )));
    }
    ensure_in_omega(&t2, |p| SphereChartPoint::K2 { y2: p[0], z2: p[1] })?;

    let mut first = vec![vec![-1.0, 0.0, 0.0]];
    first.extend(resample_trajectory(&t1, n - 1));
    let mut second = resample_trajectory(&t2, n - 1);
    second.push(vec![0.0, 0.0, 0.0]);
    Ok((first, second))
}

fn ensure_in_omega(t: &Trajectory, f: impl Fn(&[f64]) -> SphereChartPoint) -> Result<()> {
    for s in &t.states {
        if !omega_membership(f(s)) {
            return Err(Error::CenterTrackingFailed(format!("left the trapping region at {s:?}")));
        }
    }
    Ok(())
}

/// Dense-output samples of `t` at `n` points equally spaced in arc length.
pub(crate) fn resample_trajectory(t: &Trajectory, n: usize) -> Vec<Vec<f64>> {
    let n = n.max(2);
    let mut cum = vec![0.0];
    for w in t.states.windows(2) {
        let last = *cum.last().unwrap();
        cum.push(last + dist(&w[0], &w[1]));
    }
    let total = *cum.last().unwrap();
    (0..n)
        .map(|k| {
            if k == 0 {
                return t.states[0].clone();
            }
            if k == n - 1 {
                return t.last_state().to_vec();
            }
            let target = total * k as f64 / (n - 1) as f64;
            let i = cum.partition_point(|&v| v < target).clamp(1, cum.len() - 1);
            let span = cum[i] - cum[i - 1];
            let w = if span > 0.0 { (target - cum[i - 1]) / span } else { 0.0 };
            let time = t.times[i - 1] + w * (t.times[i] - t.times[i - 1]);
            t.eval(time)
        })
        .collect()
}

/// Resamples a traced curve; `embed` turns `(x, u)` into chart coordinates.
fn resample_trace(tr: &Trace, n: usize, embed: &dyn Fn(f64, &[f64]) -> Vec<f64>) -> Vec<Vec<f64>> {
    let (x1, _) = tr.last();
    equidistribute(&|x| embed(x, &tr.eval(x)), tr.xs[0], x1, n)
}

/// `B12` for fixed `eps2~ = s`: fast fibre in `K12_3` from `O3` to
/// `(1, eps2~/sqrt c, sqrt c)`, the reduced flow on `S3` with `sigma3 s3 = eps2~`
/// until `s3 = 1`, then on `S2` in `K12_2` (`sigma2 = eps2~`) to `Q2`.
pub fn gamma0_family_b12(eps2_tilde: f64, c: f64, n: usize) -> Result<SingularOrbit> {
    check_inputs(c, n)?;
    if !(eps2_tilde > 0.0) || !eps2_tilde.is_finite() {
        return Err(Error::InvalidArgument(format!("eps2~ must be positive, got {eps2_tilde}")));
    }
    let rc = sqrt(c);
    let s0 = eps2_tilde / rc;
    let mut segments = vec![Segment {
        kind: SegmentKind::Fast,
        chart: "K12_3",
        points: equidistribute(&|y| vec![y, s0, rc], 0.0, 1.0, n),
    }];

    // On S3: x = sigma3, u = (s3, y3).
    let mut entry = [1.0, s0, rc];
    if eps2_tilde < rc {
        let rhs = |sg: f64, u: &[f64]| -> Vec<f64> {
            let (s3, y3) = (u[0], u[1]);
            let ds = -s3 / sg;
            let gy = -2.0 * y3 - s3 * c + sg * sg * s3;
            let gs = -y3 * c + sg * sg * y3;
            let gsg = 2.0 * sg * s3 * y3;
            vec![ds, -(gs * ds + gsg) / gy]
        };
        let tr = Trace::run(&rhs, rc, eps2_tilde, &[s0, 1.0], TRACE_TOL)?;
        let pts = resample_trace(&tr, n, &|sg, u| vec![u[1], u[0], sg]);
        let last = pts.last().unwrap();
        entry = [last[0], last[1], last[2]];
        segments.push(Segment { kind: SegmentKind::Slow, chart: "K12_3", points: pts });
    }

    // On S2: x = z2, u = (y2,), sigma2 = eps2~ fixed.
    let start = k12_3_to_2(entry)?;
    let sg = eps2_tilde;
    let rhs = move |z2: f64, u: &[f64]| -> Vec<f64> {
        let y2 = u[0];
        vec![-(1.0 + sg * sg * y2) / (2.0 * y2 + c + sg * sg * z2)]
    };
    let z_end = -TERMINAL_RADIUS * c / 2.0;
    let tr = Trace::run(&rhs, start[1], z_end, &[start[0]], TRACE_TOL)?;
    let mut pts = resample_trace(&tr, n - 1, &|z2, u| vec![u[0], z2, sg]);
    pts.push(vec![0.0, 0.0, sg]);
    segments.push(Segment { kind: SegmentKind::Slow, chart: "K12_2", points: pts });
    Ok(SingularOrbit { regime: Regime::B12, c, fixed: eps2_tilde, segments })
}

/// `B3` for fixed `eps1~`: fast fibre in `K3_2` at `sigma2 = sqrt(eps1~)` from
/// `y2 = 0` to `sqrt c`, the reduced flow on `S2` up to `z2 = 1`, then on `S3`
/// in `K3_3` (`eps13 sigma3^2 = eps1~`) up to `Q3`.
pub fn gamma0_family_b3(eps1_tilde: f64, c: f64, n: usize) -> Result<SingularOrbit> {
    check_inputs(c, n)?;
    if !(eps1_tilde > 0.0) || !eps1_tilde.is_finite() {
        return Err(Error::InvalidArgument(format!("eps1~ must be positive, got {eps1_tilde}")));
    }
    let rc = sqrt(c);
    let sg = sqrt(eps1_tilde);
    let mut segments = vec![Segment {
        kind: SegmentKind::Fast,
        chart: "K3_2",
        points: equidistribute(&|y| vec![y, 0.0, sg], 0.0, rc, n),
    }];

    let rhs2 = move |z2: f64, u: &[f64]| -> Vec<f64> {
        let y2 = u[0];
        vec![-(sg + y2) / (2.0 * y2 + z2)]
    };
    let z_q = c / sg;
    if z_q <= 1.0 {
        // Q is visible in K3_2 without a chart switch
        let z_end = z_q - TERMINAL_RADIUS / 2.0;
        let tr = Trace::run(&rhs2, 0.0, z_end, &[rc], TRACE_TOL)?;
        let mut pts = resample_trace(&tr, n - 1, &|z2, u| vec![u[0], z2, sg]);
        pts.push(vec![0.0, z_q, sg]);
        segments.push(Segment { kind: SegmentKind::Slow, chart: "K3_2", points: pts });
        return Ok(SingularOrbit { regime: Regime::B3, c, fixed: eps1_tilde, segments });
    }
    let tr = Trace::run(&rhs2, 0.0, 1.0, &[rc], TRACE_TOL)?;
    let pts = resample_trace(&tr, n, &|z2, u| vec![u[0], z2, sg]);
    let last = pts.last().unwrap();
    let entry = k3_2_to_3([last[0], last[1], last[2]])?;
    segments.push(Segment { kind: SegmentKind::Slow, chart: "K3_2", points: pts });

    // On S3: x = sigma3, u = (eps13, y3).
    let rhs3 = move |s3: f64, u: &[f64]| -> Vec<f64> {
        let (e, y3) = (u[0], u[1]);
        let de = -2.0 * e / s3;
        vec![de, ((c - s3) * de - e) / (2.0 * y3 + 1.0)]
    };
    let s_end = c - TERMINAL_RADIUS / 2.0;
    let tr = Trace::run(&rhs3, entry[1], s_end, &[entry[2], entry[0]], TRACE_TOL)?;
    let mut pts = resample_trace(&tr, n - 1, &|s3, u| vec![u[1], s3, u[0]]);
    pts.push(vec![0.0, c, eps1_tilde / (c * c)]);
    segments.push(Segment { kind: SegmentKind::Slow, chart: "K3_3", points: pts });
    Ok(SingularOrbit { regime: Regime::B3, c, fixed: eps1_tilde, segments })
}

/// Singular orbit of a regime for its fixed chart parameter.
pub fn singular_orbit(regime: Regime, fixed: f64, c: f64, n: usize) -> Result<SingularOrbit> {
    match regime {
        Regime::B2 => gamma0_b2(fixed, c, n),
        Regime::B11 => gamma0_b11(fixed, c, n),
        Regime::B12 => gamma0_family_b12(fixed, c, n),
        Regime::B3 => gamma0_family_b3(fixed, c, n),
        other => Err(Error::RegimeMismatch(format!("no singular orbit for {}", other.label()))),
    }
}

/// Largest gap between consecutive points of a segment relative to its length.
pub fn max_relative_spacing(seg: &Segment) -> f64 {
    let gaps: Vec<f64> = seg.points.windows(2).map(|w| dist(&w[0], &w[1])).collect();
    let total: f64 = gaps.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    gaps.iter().fold(0.0f64, |m, g| m.max(abs(*g))) / total
}
