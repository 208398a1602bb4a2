//! Comparison of genuine trajectories with singular orbits: Hausdorff
//! distances in chart coordinates, convergence studies along parameter paths,
//! and per-point sweep quantities.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fit::{log_log_fit, LogLogFit};
use crate::hausdorff::{hausdorff, Point2};
use crate::math::{abs, sqrt};
use crate::model::{RateConstants, ReducedSystem, ScaledParams};
use crate::orbits::{self, SingularOrbit};
use crate::param_geometry::{classify, Regime, RegimeConfig};
use crate::solver::{find_y_max, integrate, Direction, EventSpec, SolverSettings, SolverStats, Trajectory};

/// Genuine trajectories stop once this close to `Q` in chart coordinates.
pub const TRUNCATION_RADIUS: f64 = 1e-6;

/// Slope a convergence study must reach to pass.
pub const SLOPE_THRESHOLD: f64 = 0.8;

/// Dense-output samples added inside every accepted step of a genuine trajectory.
const SAMPLES_PER_STEP: usize = 4;

const T_END: f64 = 1e40;

/// Solver settings used for orbit comparisons: distances down to `~1e-3` of
/// chart units at the smallest radial values need more than the defaults.
pub fn comparison_settings() -> SolverSettings {
    SolverSettings::with_tolerances(1e-10, 1e-14)
}

/// Chart coordinates in which a regime's orbits are compared, at fixed
/// parameters. All four frames are diagonal affine images of `(y, z)`:
///
/// * `B2`: `(y / r, z)` with `r = sqrt(eps1)`.
/// * `B11`: `(y / s, z)` with `s = sqrt(eps1)` (rescaled `P11` coordinates).
/// * `B12`: `K12_2` at `sigma2 = eps2~`, `(y / (r sigma2), (z - c) / sigma2^2)`.
/// * `B3`: `K3_2` at `sigma2 = sqrt(eps1~)`, `(y / (eps2 sigma2), z / sigma2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartFrame {
    pub regime: Regime,
    pub c: f64,
    /// Fixed chart coordinate: `eps2~` (B2, B12), `eps21` (B11), `eps1~` (B3).
    pub fixed: f64,
    /// Radial parameter: `r` (B2, B3), `s` (B11), `r1` (B12).
    pub radial: f64,
    scale: [f64; 2],
    shift: [f64; 2],
}

impl ChartFrame {
    pub fn new(regime: Regime, p: &ScaledParams) -> Result<Self> {
        let c = p.c;
        let (fixed, radial, scale, shift) = match regime {
            Regime::B2 => {
                let r = sqrt(p.eps1);
                (p.eps2 / r, r, [1.0 / r, 1.0], [0.0, 0.0])
            }
            Regime::B11 => {
                let s = sqrt(p.eps1);
                (p.eps2 / p.eps1, s, [1.0 / s, 1.0], [0.0, 0.0])
            }
            Regime::B12 => {
                let r = sqrt(p.eps1);
                let s = p.eps2 / r;
                (s, r / s, [1.0 / (r * s), 1.0 / (s * s)], [0.0, -c])
            }
            Regime::B3 => {
                let r = p.eps2;
                let e = p.eps1 / (r * r);
                let sg = sqrt(e);
                (e, r, [1.0 / (r * sg), 1.0 / sg], [0.0, 0.0])
            }
            other => return Err(Error::RegimeMismatch(format!("no chart frame for {}", other.label()))),
        };
        if !(fixed > 0.0 && radial > 0.0) || !scale.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(format!("degenerate chart frame for {} at {p:?}", regime.label())));
        }
        Ok(Self { regime, c, fixed, radial, scale, shift })
    }

    pub fn chart(&self) -> &'static str {
        match self.regime {
            Regime::B2 => "B2",
            Regime::B11 => "P11",
            Regime::B12 => "K12_2",
            _ => "K3_2",
        }
    }

    pub fn from_original(&self, y: f64, z: f64) -> Point2 {
        [self.scale[0] * (y + self.shift[0]), self.scale[1] * (z + self.shift[1])]
    }

    /// Maps rescaled `(y~, z)` (see [`SingularOrbit::rescaled`]) into the frame.
    pub fn from_rescaled(&self, p: [f64; 2], params: &ScaledParams) -> Point2 {
        let y = orbits::rescale_factor(self.regime, params) * p[0];
        self.from_original(y, p[1])
    }

    /// Weights for the event `|W (u - Q)| = radius` on `(y, z)`.
    pub fn weights(&self) -> [f64; 2] {
        self.scale
    }
}

/// Scaled parameters at radial value `radial` on the path with fixed chart
/// coordinate `fixed`.
pub fn params_on_path(regime: Regime, fixed: f64, radial: f64, c: f64) -> Result<ScaledParams> {
    let (e1, e2) = match regime {
        Regime::B2 => (radial * radial, radial * fixed),
        Regime::B11 => (radial * radial, fixed * radial * radial),
        Regime::B12 => {
            let r = fixed * radial;
            (r * r, r * fixed)
        }
        Regime::B3 => (fixed * radial * radial, radial),
        other => return Err(Error::RegimeMismatch(format!("no parameter path for {}", other.label()))),
    };
    ScaledParams::new(e1, e2, c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: Vec<f64>,
    pub truncation_radius: f64,
    pub orbit_points_per_segment: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub params: ScaledParams,
    /// Rate constants, when the request was made in terms of rates.
    pub rates: Option<RateConstants>,
    pub regime: Regime,
    pub chart: &'static str,
    pub fixed_coord: f64,
    pub radial: f64,
    pub y_max_numeric: f64,
    pub t_y_max: f64,
    pub y_max_predicted: f64,
    pub rel_gap: f64,
    pub hausdorff_chart: f64,
    pub hausdorff_original: f64,
    pub orbit_points: usize,
    pub trajectory_points: usize,
    pub solver: SolverStats,
    pub tolerances: Tolerances,
}

/// Relative gap `|numeric - predicted| / predicted`.
pub fn relative_gap(numeric: f64, predicted: f64) -> f64 {
    abs(numeric - predicted) / predicted
}

/// Integrates the planar system from `(0, 0)` until the weighted distance to
/// `Q` (weights `w`) reaches `radius`.
pub fn genuine_trajectory(p: &ScaledParams, w: [f64; 2], radius: f64, settings: &SolverSettings) -> Result<Trajectory> {
    let sys = ReducedSystem { params: *p };
    let stop = EventSpec::near_weighted(&[0.0, p.c], &w, radius);
    let t = integrate(&sys, &[0.0, 0.0], (0.0, T_END), settings, &[stop])?;
    if t.events.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "trajectory for {p:?} did not approach Q by t = {:e} (stopped at {:?})",
            t.t_end(),
            t.last_state()
        )));
    }
    Ok(t)
}

/// Accepted states plus dense-output samples inside each step.
pub fn trajectory_polyline(t: &Trajectory, map: impl Fn(&[f64]) -> Point2) -> Vec<Point2> {
    let mut out = Vec::with_capacity(t.times.len() * SAMPLES_PER_STEP);
    for (k, w) in t.times.windows(2).enumerate() {
        out.push(map(&t.states[k]));
        for j in 1..SAMPLES_PER_STEP {
            let s = w[0] + (w[1] - w[0]) * j as f64 / SAMPLES_PER_STEP as f64;
            out.push(map(&t.eval(s)));
        }
    }
    out.push(map(t.last_state()));
    out
}

fn check_regime(p: &ScaledParams, cfg: &RegimeConfig) -> Result<Regime> {
    match classify(p.eps1, p.eps2, cfg) {
        Regime::Origin => Err(Error::RegimeOrigin),
        r if r.is_region() => Ok(r),
        other => Err(Error::RegimeMismatch(format!(
            "({}, {}) lies in {}, not in one of the four regions",
            p.eps1,
            p.eps2,
            other.label()
        ))),
    }
}

/// Full comparison of the genuine orbit through `(0, 0)` with the singular
/// orbit of the regime of `p`.
pub fn compare(
    p: &ScaledParams,
    rates: Option<RateConstants>,
    cfg: &RegimeConfig,
    settings: &SolverSettings,
    orbit_points: usize,
) -> Result<ComparisonReport> {
    let regime = check_regime(p, cfg)?;
    let frame = ChartFrame::new(regime, p)?;
    let orbit = orbits::singular_orbit(regime, frame.fixed, p.c, orbit_points)?;
    compare_with_orbit(p, rates, &frame, &orbit, settings)
}

/// [`compare`] against a prebuilt singular orbit (which depends on the fixed
/// chart coordinate only, so studies build it once).
pub fn compare_with_orbit(
    p: &ScaledParams,
    rates: Option<RateConstants>,
    frame: &ChartFrame,
    orbit: &SingularOrbit,
    settings: &SolverSettings,
) -> Result<ComparisonReport> {
    let traj = genuine_trajectory(p, frame.weights(), TRUNCATION_RADIUS, settings)?;
    let ymax = find_y_max(&traj)?;
    let predicted = orbits::y_max_prediction(p);

    let genuine_chart = trajectory_polyline(&traj, |u| frame.from_original(u[0], u[1]));
    let singular_chart: Vec<Point2> = orbit.rescaled().into_iter().map(|q| frame.from_rescaled(q, p)).collect();
    let genuine_orig = trajectory_polyline(&traj, |u| [u[0], u[1]]);
    let singular_orig = orbits::to_original_coords(orbit, p);

    Ok(ComparisonReport {
        params: *p,
        rates,
        regime: frame.regime,
        chart: frame.chart(),
        fixed_coord: frame.fixed,
        radial: frame.radial,
        y_max_numeric: ymax.y,
        t_y_max: ymax.t,
        y_max_predicted: predicted,
        rel_gap: relative_gap(ymax.y, predicted),
        hausdorff_chart: hausdorff(&genuine_chart, &singular_chart),
        hausdorff_original: hausdorff(&genuine_orig, &singular_orig),
        orbit_points: singular_chart.len(),
        trajectory_points: genuine_chart.len(),
        solver: traj.stats.clone(),
        tolerances: Tolerances {
            rel_tol: settings.rel_tol,
            abs_tol: settings.abs_tol.clone(),
            truncation_radius: TRUNCATION_RADIUS,
            orbit_points_per_segment: orbit.segments.first().map_or(0, |s| s.points.len()),
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyPoint {
    pub radial: f64,
    pub params: ScaledParams,
    pub outcome: core::result::Result<ComparisonReport, String>,
}

impl StudyPoint {
    pub fn distance(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|r| r.hausdorff_chart)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub regime: Regime,
    pub fixed: f64,
    pub c: f64,
    pub points: Vec<StudyPoint>,
    /// Fit of `ln d` against `ln r` over the successful points.
    pub fit: Option<LogLogFit>,
    /// Distances strictly decreasing along the (decreasing) radial sequence.
    pub monotone: bool,
    pub pass: bool,
}

/// Checks a study request: at least three strictly decreasing positive radial
/// values, all inside `regime`.
pub fn validate_study(regime: Regime, fixed: f64, rs: &[f64], c: f64, cfg: &RegimeConfig) -> Result<()> {
    if rs.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 radial values, got {}", rs.len())));
    }
    if !rs.iter().all(|r| *r > 0.0 && r.is_finite()) || rs.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidArgument(format!("radial values must be positive and strictly decreasing: {rs:?}")));
    }
    for &r in rs {
        let p = params_on_path(regime, fixed, r, c)?;
        let got = classify(p.eps1, p.eps2, cfg);
        if got != regime {
            return Err(Error::RegimeMismatch(format!(
                "radial value {r} with fixed coordinate {fixed} gives ({}, {}) in {}, not {}",
                p.eps1,
                p.eps2,
                got.label(),
                regime.label()
            )));
        }
    }
    Ok(())
}

/// One study point; failures are recorded, not propagated.
pub fn study_point(
    regime: Regime,
    fixed: f64,
    radial: f64,
    orbit: &SingularOrbit,
    settings: &SolverSettings,
) -> StudyPoint {
    let c = orbit.c;
    let result = params_on_path(regime, fixed, radial, c).and_then(|p| {
        let frame = ChartFrame::new(regime, &p)?;
        compare_with_orbit(&p, None, &frame, orbit, settings).map(|r| (p, r))
    });
    match result {
        Ok((params, report)) => StudyPoint { radial, params, outcome: Ok(report) },
        Err(e) => StudyPoint {
            radial,
            params: params_on_path(regime, fixed, radial, c).unwrap_or(ScaledParams { eps1: 0.0, eps2: 0.0, c }),
            outcome: Err(e.to_string()),
        },
    }
}

impl ConvergenceStudy {
    pub fn from_points(regime: Regime, fixed: f64, c: f64, points: Vec<StudyPoint>) -> Self {
        let pairs: Vec<(f64, f64)> = points.iter().filter_map(|p| p.distance().map(|d| (p.radial, d))).collect();
        let fit = log_log_fit(&pairs);
        let monotone = pairs.len() == points.len() && pairs.windows(2).all(|w| w[1].1 < w[0].1);
        let pass = monotone && fit.is_some_and(|f| f.slope >= SLOPE_THRESHOLD);
        Self { regime, fixed, c, points, fit, monotone, pass }
    }
}

/// Sequential convergence study along the path with fixed chart coordinate.
pub fn convergence_study(
    regime: Regime,
    fixed: f64,
    rs: &[f64],
    c: f64,
    cfg: &RegimeConfig,
    settings: &SolverSettings,
    orbit_points: usize,
) -> Result<ConvergenceStudy> {
    validate_study(regime, fixed, rs, c, cfg)?;
    let orbit = orbits::singular_orbit(regime, fixed, c, orbit_points)?;
    let points = rs.iter().map(|&r| study_point(regime, fixed, r, &orbit, settings)).collect();
    Ok(ConvergenceStudy::from_points(regime, fixed, c, points))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eps1: f64,
    pub eps2: f64,
    pub regime: Regime,
    pub y_max_numeric: f64,
    pub y_max_predicted: f64,
    pub rel_gap: f64,
    /// First time with `z >= c/2`.
    pub t_half: f64,
    /// First time after the peak with `y <= y_max / 2`.
    pub t_decay: f64,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(eps1: f64, eps2: f64, regime: Regime, e: Error) -> Self {
        let nan = f64::NAN;
        Self {
            eps1,
            eps2,
            regime,
            y_max_numeric: nan,
            y_max_predicted: nan,
            rel_gap: nan,
            t_half: nan,
            t_decay: nan,
            error: Some(e.to_string()),
        }
    }
}

/// First time after `t0` at which component `index` falls to `level`, by
/// bisection on the dense output.
fn first_fall(t: &Trajectory, index: usize, t0: f64, level: f64) -> Option<f64> {
    let k0 = t.times.partition_point(|&s| s <= t0);
    let k = (k0..t.times.len()).find(|&k| t.states[k][index] <= level)?;
    let (mut lo, mut hi) = (t.times[k - 1].max(t0), t.times[k]);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if t.eval(mid)[index] <= level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Per-point sweep quantities. Never fails; errors go into the row.
pub fn sweep_point(eps1: f64, eps2: f64, c: f64, cfg: &RegimeConfig, settings: &SolverSettings) -> SweepRow {
    let regime = classify(eps1, eps2, cfg);
    match sweep_point_inner(eps1, eps2, c, regime, settings) {
        Ok(row) => row,
        Err(e) => SweepRow::failed(eps1, eps2, regime, e),
    }
}

fn sweep_point_inner(eps1: f64, eps2: f64, c: f64, regime: Regime, settings: &SolverSettings) -> Result<SweepRow> {
    if regime == Regime::Origin {
        return Err(Error::RegimeOrigin);
    }
    let p = ScaledParams::new(eps1, eps2, c)?;
    let predicted = orbits::y_max_prediction(&p);
    let sys = ReducedSystem { params: p };
    let half = EventSpec::crossing(1, 0.5 * c, Direction::Rising, false);
    let w = [1.0 / predicted.max(f64::MIN_POSITIVE), 1.0 / c];
    let stop = EventSpec::near_weighted(&[0.0, c], &w, 1e-3);
    let t = integrate(&sys, &[0.0, 0.0], (0.0, T_END), settings, &[half, stop])?;
    let ymax = find_y_max(&t)?;
    let t_half = t.first_event(0).map_or(f64::NAN, |e| e.t);
    let t_decay = first_fall(&t, 0, ymax.t, 0.5 * ymax.y).unwrap_or(f64::NAN);
    Ok(SweepRow {
        eps1,
        eps2,
        regime,
        y_max_numeric: ymax.y,
        y_max_predicted: predicted,
        rel_gap: relative_gap(ymax.y, predicted),
        t_half,
        t_decay,
        error: None,
    })
}

/// `n` values from `a` to `b`, geometric when both are positive, else linear.
pub fn grid_axis(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ if a > 0.0 && b > 0.0 => {
            let (la, lb) = (crate::math::ln(a), crate::math::ln(b));
            (0..n)
                .map(|k| if k == n - 1 { b } else { crate::math::exp(la + (lb - la) * k as f64 / (n - 1) as f64) })
                .collect()
        }
        _ => (0..n).map(|k| if k == n - 1 { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect(),
    }
}

/// One point per regime at the same radial scale `r` of the first parameter
/// blow-up (`eps1 = r^2 eps1_bar`, `eps2 = r eps2_bar`, on the unit circle),
/// in the order `B11, B12, B2, B3`.
pub fn fig10_representatives(r: f64, c: f64) -> Result<[(Regime, ScaledParams); 4]> {
    let on_circle = |e2_bar: f64| (r * r * sqrt(1.0 - e2_bar * e2_bar), r * e2_bar);
    let e1_only = |e1_bar: f64| (r * r * e1_bar, r * sqrt(1.0 - e1_bar * e1_bar));
    let pts = [
        (Regime::B11, on_circle(0.5 * r)),
        (Regime::B12, on_circle(0.5)),
        (Regime::B2, on_circle(0.9)),
        (Regime::B3, e1_only(5e-4)),
    ];
    let mut out = [(Regime::Origin, ScaledParams { eps1: 0.0, eps2: 0.0, c }); 4];
    for (slot, (regime, (e1, e2))) in out.iter_mut().zip(pts) {
        *slot = (regime, ScaledParams::new(e1, e2, c)?);
    }
    Ok(out)
}

/// Dense-output samples on a geometric grid, `per_decade` points per decade,
/// starting at the first accepted step.
pub fn timeseries_export(t: &Trajectory, per_decade: usize) -> Vec<(f64, Vec<f64>)> {
    let first = t.times.get(1).copied().unwrap_or(t.t_end());
    t.sample_log(first, per_decade.max(1))
}

pub const DEFAULT_PER_DECADE: usize = 64;
