//! Adaptive stiff integration with dense output and event location.
//!
//! The stepper is the three-stage Radau IIA collocation method (order 5,
//! L-stable) with simplified Newton iterations, an embedded error estimate and
//! a predictive PI step-size controller. See [`radau`] for the details.

mod radau;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::math::abs;

pub use radau::SCHEME_NAME;

/// A first-order system `u' = f(t, u)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;

    fn rhs(&self, t: f64, u: &[f64], du: &mut [f64]);

    /// Jacobian `df/du`. The default uses central differences.
    fn jacobian(&self, t: f64, u: &[f64], jac: &mut Matrix) {
        let n = self.dim();
        let mut up = u.to_vec();
        let mut fp = vec![0.0; n];
        let mut fm = vec![0.0; n];
        for j in 0..n {
            let h = 1e-7 * (1.0 + abs(u[j]));
            up[j] = u[j] + h;
            self.rhs(t, &up, &mut fp);
            up[j] = u[j] - h;
            self.rhs(t, &up, &mut fm);
            up[j] = u[j];
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
    }
}

impl<S: OdeSystem + ?Sized> OdeSystem for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn rhs(&self, t: f64, u: &[f64], du: &mut [f64]) {
        (**self).rhs(t, u, du)
    }
    fn jacobian(&self, t: f64, u: &[f64], jac: &mut Matrix) {
        (**self).jacobian(t, u, jac)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub rel_tol: f64,
    /// One entry per component, or a single entry applied to all.
    pub abs_tol: Vec<f64>,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
    pub newton_tol: f64,
    pub newton_max_iters: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self::with_tolerances(1e-8, 1e-12)
    }
}

impl SolverSettings {
    /// Settings with the Newton tolerance derived from `rel_tol`.
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: vec![abs_tol],
            h_init: 1e-6,
            h_min: 1e-30,
            h_max: f64::INFINITY,
            max_steps: 200_000,
            newton_tol: default_newton_tol(rel_tol),
            newton_max_iters: 6,
        }
    }

    pub fn atol(&self, i: usize) -> f64 {
        if self.abs_tol.len() == 1 {
            self.abs_tol[0]
        } else {
            self.abs_tol[i]
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("solver settings: {m}")));
        if !(self.rel_tol > 0.0) {
            return bad("rel_tol must be positive");
        }
        if self.abs_tol.is_empty() || self.abs_tol.iter().any(|a| !(*a > 0.0)) {
            return bad("abs_tol entries must be positive");
        }
        if self.abs_tol.len() != 1 && self.abs_tol.len() != dim {
            return bad("abs_tol must have one entry or one per component");
        }
        if !(self.h_min <= self.h_init && self.h_init <= self.h_max && self.h_min >= 0.0) {
            return bad("need 0 <= h_min <= h_init <= h_max");
        }
        if self.max_steps == 0 || self.newton_max_iters == 0 {
            return bad("max_steps and newton_max_iters must be at least 1");
        }
        if !(self.newton_tol > 0.0) {
            return bad("newton_tol must be positive");
        }
        Ok(())
    }
}

pub fn default_newton_tol(rel_tol: f64) -> f64 {
    let a = 10.0 * f64::EPSILON / rel_tol;
    let b = crate::math::sqrt(rel_tol).min(0.03);
    a.max(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Rising,
    Falling,
    Either,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    /// Sign change of `f_index`; with [`Direction::Falling`] this is a maximum of component `index`.
    YMaximum { index: usize },
    /// Weighted distance to `target` drops to `radius`.
    EquilibriumProximity { target: Vec<f64>, weights: Vec<f64>, radius: f64 },
    /// Component `index` crosses `value`.
    ComponentCrossing { index: usize, value: f64 },
}

impl EventKind {
    pub fn label(&self) -> &'static str {
        match self {
            EventKind::YMaximum { .. } => "y-maximum",
            EventKind::EquilibriumProximity { .. } => "equilibrium-proximity",
            EventKind::ComponentCrossing { .. } => "component-crossing",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventSpec {
    pub kind: EventKind,
    pub direction: Direction,
    pub terminal: bool,
}

impl EventSpec {
    pub fn y_maximum(index: usize) -> Self {
        Self { kind: EventKind::YMaximum { index }, direction: Direction::Falling, terminal: false }
    }

    /// Terminal event when the (unweighted) distance to `target` reaches `radius`.
    pub fn near(target: &[f64], radius: f64) -> Self {
        Self::near_weighted(target, &vec![1.0; target.len()], radius)
    }

    pub fn near_weighted(target: &[f64], weights: &[f64], radius: f64) -> Self {
        Self {
            kind: EventKind::EquilibriumProximity {
                target: target.to_vec(),
                weights: weights.to_vec(),
                radius,
            },
            direction: Direction::Falling,
            terminal: true,
        }
    }

    pub fn crossing(index: usize, value: f64, direction: Direction, terminal: bool) -> Self {
        Self { kind: EventKind::ComponentCrossing { index, value }, direction, terminal }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let ok = match &self.kind {
            EventKind::YMaximum { index } | EventKind::ComponentCrossing { index, .. } => *index < dim,
            EventKind::EquilibriumProximity { target, weights, radius } => {
                *radius > 0.0 && target.len() == dim && weights.len() == dim
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid event specification {:?}", self.kind)))
        }
    }

    fn value<S: OdeSystem + ?Sized>(&self, sys: &S, t: f64, u: &[f64], scratch: &mut [f64]) -> f64 {
        match &self.kind {
            EventKind::YMaximum { index } => {
                sys.rhs(t, u, scratch);
                scratch[*index]
            }
            EventKind::EquilibriumProximity { target, weights, radius } => {
                let d2: f64 = u
                    .iter()
                    .zip(target)
                    .zip(weights)
                    .map(|((a, b), w)| (w * (a - b)) * (w * (a - b)))
                    .sum();
                crate::math::sqrt(d2) - radius
            }
            EventKind::ComponentCrossing { index, value } => u[*index] - value,
        }
    }

    fn triggered(&self, g0: f64, g1: f64) -> bool {
        let rising = g0 < 0.0 && g1 >= 0.0;
        let falling = g0 > 0.0 && g1 <= 0.0;
        match self.direction {
            Direction::Rising => rising,
            Direction::Falling => falling,
            Direction::Either => rising || falling,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub t: f64,
    /// Position of the triggering spec in the list passed to [`integrate`].
    pub spec: usize,
    pub kind: &'static str,
    pub state: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverStats {
    pub steps: usize,
    pub rejected: usize,
    pub newton_iters: usize,
    pub jac_evals: usize,
    pub lu_decomps: usize,
    pub rhs_evals: usize,
    pub scheme: &'static str,
}

/// Collocation polynomial of one accepted step, through the values at
/// `t0 + theta h` for the nodes `theta = 0, c1, c2, 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    values: Vec<f64>,
}

impl DenseSegment {
    pub(crate) fn new(t0: f64, h: f64, values: Vec<f64>) -> Self {
        Self { t0, h, values }
    }

    pub fn dim(&self) -> usize {
        self.values.len() / 4
    }

    /// Evaluates the polynomial; extrapolates outside the step.
    pub fn eval(&self, t: f64, out: &mut [f64]) {
        let n = self.dim();
        let th = (t - self.t0) / self.h;
        let w = radau::lagrange_weights(th);
        for i in 0..n {
            out[i] = (0..4).map(|k| w[k] * self.values[k * n + i]).sum();
        }
    }

    /// Time derivative of the polynomial.
    pub fn eval_derivative(&self, t: f64, out: &mut [f64]) {
        let n = self.dim();
        let th = (t - self.t0) / self.h;
        let w = radau::lagrange_weight_derivatives(th);
        for i in 0..n {
            out[i] = (0..4).map(|k| w[k] * self.values[k * n + i]).sum::<f64>() / self.h;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dim: usize,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `segments[k]` spans `times[k]..times[k + 1]`.
    pub segments: Vec<DenseSegment>,
    pub events: Vec<EventRecord>,
    pub stats: SolverStats,
}

impl Trajectory {
    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.last().unwrap()
    }

    /// Index of the y species: 1 for `(x, y, z)`, otherwise 0.
    pub fn y_index(&self) -> usize {
        if self.dim == 3 {
            1
        } else {
            0
        }
    }

    fn segment_index(&self, t: f64) -> usize {
        let k = self.times.partition_point(|&s| s <= t);
        k.saturating_sub(1).min(self.segments.len().saturating_sub(1))
    }

    /// Dense output at `t`, clamped to the integrated span.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        if self.segments.is_empty() {
            out.copy_from_slice(&self.states[0]);
            return out;
        }
        let t = t.clamp(self.t_start(), self.t_end());
        if t == self.t_end() {
            out.copy_from_slice(self.last_state());
            return out;
        }
        self.segments[self.segment_index(t)].eval(t, &mut out);
        out
    }

    pub fn eval_derivative(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        if !self.segments.is_empty() {
            let t = t.clamp(self.t_start(), self.t_end());
            self.segments[self.segment_index(t)].eval_derivative(t, &mut out);
        }
        out
    }

    /// Samples dense output on a geometric grid with `per_decade` points per
    /// decade from `t_first` to the end time, preceded by the start time.
    pub fn sample_log(&self, t_first: f64, per_decade: usize) -> Vec<(f64, Vec<f64>)> {
        let mut out = vec![(self.t_start(), self.states[0].clone())];
        let t_end = self.t_end();
        if !(t_first > 0.0) || t_first >= t_end {
            out.push((t_end, self.last_state().to_vec()));
            return out;
        }
        let lo = crate::math::log10(t_first);
        let hi = crate::math::log10(t_end);
        let m = crate::math::ceil((hi - lo) * per_decade as f64) as usize;
        for k in 0..=m {
            let t = if k == m { t_end } else { crate::math::pow(10.0, lo + (hi - lo) * k as f64 / m as f64) };
            if t > out.last().unwrap().0 {
                out.push((t, self.eval(t)));
            }
        }
        out
    }

    pub fn first_event(&self, spec: usize) -> Option<&EventRecord> {
        self.events.iter().find(|e| e.spec == spec)
    }
}

/// Integrates `sys` from `y0` over `t_span`, recording every accepted step.
pub fn integrate<S: OdeSystem + ?Sized>(
    sys: &S,
    y0: &[f64],
    t_span: (f64, f64),
    settings: &SolverSettings,
    events: &[EventSpec],
) -> Result<Trajectory> {
    let n = sys.dim();
    if y0.len() != n {
        return Err(Error::InvalidArgument(format!("initial state has {} components, system has {n}", y0.len())));
    }
    if !(t_span.0 < t_span.1) || !t_span.0.is_finite() || !t_span.1.is_finite() {
        return Err(Error::InvalidArgument(format!("invalid time span {:?}", t_span)));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite initial state {y0:?}")));
    }
    settings.validate(n)?;
    for e in events {
        e.validate(n)?;
    }
    radau::run(sys, y0, t_span, settings, events)
}

/// Location and value of the maximum of the y species.
#[derive(Debug, Clone, PartialEq)]
pub struct YMax {
    pub t: f64,
    pub y: f64,
    pub state: Vec<f64>,
}

/// Maximizer of the y species over the dense output: node search, grid
/// refinement on the neighbouring steps, then parabolic refinement.
pub fn find_y_max(traj: &Trajectory) -> Result<YMax> {
    find_component_max(traj, traj.y_index())
}

pub fn find_component_max(traj: &Trajectory, index: usize) -> Result<YMax> {
    let nodes = traj.times.len();
    if nodes < 3 {
        return Err(Error::NoInteriorMaximum);
    }
    let k = (0..nodes)
        .max_by(|&a, &b| traj.states[a][index].total_cmp(&traj.states[b][index]))
        .unwrap();
    let y_at = |t: f64| traj.eval(t)[index];
    let (mut lo, mut hi) = (traj.times[k.saturating_sub(1)], traj.times[(k + 1).min(nodes - 1)]);
    if k == 0 || k == nodes - 1 {
        return Err(Error::NoInteriorMaximum);
    }
    let mut best = (traj.times[k], traj.states[k][index]);
    const GRID: usize = 32;
    for _ in 0..6 {
        let step = (hi - lo) / GRID as f64;
        for i in 0..=GRID {
            let t = if i == GRID { hi } else { lo + step * i as f64 };
            let v = y_at(t);
            if v > best.1 {
                best = (t, v);
            }
        }
        lo = (best.0 - step).max(traj.t_start());
        hi = (best.0 + step).min(traj.t_end());
    }
    if best.0 <= traj.t_start() || best.0 >= traj.t_end() {
        return Err(Error::NoInteriorMaximum);
    }
    let h = (best.0 - lo).min(hi - best.0);
    let (t0, tm, tp) = (best.0 - h, best.0, best.0 + h);
    let (f0, fm, fp) = (y_at(t0), y_at(tm), y_at(tp));
    let denom = f0 - 2.0 * fm + fp;
    let mut t = tm;
    if denom < 0.0 && h > 0.0 {
        let shift = 0.5 * h * (f0 - fp) / denom;
        if abs(shift) <= h {
            t = tm + shift;
        }
    }
    let mut state = traj.eval(t);
    if state[index] < fm {
        t = tm;
        state = traj.eval(t);
    }
    Ok(YMax { t, y: state[index], state })
}
