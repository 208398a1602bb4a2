//! Three-stage Radau IIA stepper.
//!
//! The stage increments `Z_i = u(t0 + c_i h) - u0` solve
//! `Z = h (A (x) I) F(Z)`; the simplified Newton iteration works on the full
//! `3n x 3n` matrix `I - h A (x) J`, factored by dense LU. Because the
//! iteration matrix is built from `J` without a similarity transform, linear
//! first integrals with `1^T J = 0` are preserved to round-off.

use alloc::vec;
use alloc::vec::Vec;

use super::{DenseSegment, EventRecord, EventSpec, OdeSystem, SolverSettings, SolverStats, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::math::{abs, cbrt, pow, sqrt};

pub const SCHEME_NAME: &str = "radau-iia-5";

const S6: f64 = 2.449_489_742_783_178;

pub(crate) fn nodes() -> [f64; 3] {
    [(4.0 - S6) / 10.0, (4.0 + S6) / 10.0, 1.0]
}

fn coefficients() -> [[f64; 3]; 3] {
    [
        [(88.0 - 7.0 * S6) / 360.0, (296.0 - 169.0 * S6) / 1800.0, (-2.0 + 3.0 * S6) / 225.0],
        [(296.0 + 169.0 * S6) / 1800.0, (88.0 + 7.0 * S6) / 360.0, (-2.0 - 3.0 * S6) / 225.0],
        [(16.0 - S6) / 36.0, (16.0 + S6) / 36.0, 1.0 / 9.0],
    ]
}

/// Weights of the embedded error estimate applied to the stage increments.
fn error_weights() -> [f64; 3] {
    [-(13.0 + 7.0 * S6) / 3.0, (-13.0 + 7.0 * S6) / 3.0, -1.0 / 3.0]
}

/// Real eigenvalue of `A^{-1}`, `3 + 3^(2/3) - 3^(1/3)`.
fn mu_real() -> f64 {
    3.0 + cbrt(9.0) - cbrt(3.0)
}

/// Lagrange basis on `0, c1, c2, 1` evaluated at `th`.
pub(crate) fn lagrange_weights(th: f64) -> [f64; 4] {
    let [c1, c2, _] = nodes();
    let x = [0.0, c1, c2, 1.0];
    let mut w = [1.0; 4];
    for (k, wk) in w.iter_mut().enumerate() {
        for m in 0..4 {
            if m != k {
                *wk *= (th - x[m]) / (x[k] - x[m]);
            }
        }
    }
    w
}

pub(crate) fn lagrange_weight_derivatives(th: f64) -> [f64; 4] {
    let [c1, c2, _] = nodes();
    let x = [0.0, c1, c2, 1.0];
    let mut w = [0.0; 4];
    for (k, wk) in w.iter_mut().enumerate() {
        let mut denom = 1.0;
        for m in 0..4 {
            if m != k {
                denom *= x[k] - x[m];
            }
        }
        let mut sum = 0.0;
        for skip in 0..4 {
            if skip == k {
                continue;
            }
            let mut prod = 1.0;
            for m in 0..4 {
                if m != k && m != skip {
                    prod *= th - x[m];
                }
            }
            sum += prod;
        }
        *wk = sum / denom;
    }
    w
}

fn rms(v: &[f64], scale: &[f64]) -> f64 {
    let n = v.len();
    sqrt(v.iter().zip(scale).map(|(a, s)| (a / s) * (a / s)).sum::<f64>() / n as f64)
}

fn predict_factor(h: f64, h_old: Option<f64>, err: f64, err_old: Option<f64>) -> f64 {
    let multiplier = match (h_old, err_old) {
        (Some(ho), Some(eo)) if err > 0.0 => h / ho * pow(eo / err, 0.25),
        _ => 1.0,
    };
    if err == 0.0 {
        return f64::INFINITY;
    }
    multiplier.min(1.0) * pow(err, -0.25)
}

struct Newton {
    converged: bool,
    iters: usize,
    rate: f64,
}

struct Workspace<'a, S: OdeSystem + ?Sized> {
    sys: &'a S,
    n: usize,
    a: [[f64; 3]; 3],
    c: [f64; 3],
    stats: SolverStats,
}

impl<'a, S: OdeSystem + ?Sized> Workspace<'a, S> {
    fn f(&mut self, t: f64, u: &[f64], out: &mut [f64]) {
        self.stats.rhs_evals += 1;
        self.sys.rhs(t, u, out);
    }

    fn jac(&mut self, t: f64, u: &[f64], j: &mut Matrix) {
        self.stats.jac_evals += 1;
        self.sys.jacobian(t, u, j);
    }

    fn newton_matrix(&mut self, h: f64, j: &Matrix) -> Result<Lu> {
        let n = self.n;
        let mut m = Matrix::identity(3 * n);
        for bi in 0..3 {
            for bj in 0..3 {
                let s = h * self.a[bi][bj];
                for r in 0..n {
                    for col in 0..n {
                        m[(bi * n + r, bj * n + col)] -= s * j[(r, col)];
                    }
                }
            }
        }
        self.stats.lu_decomps += 1;
        Lu::factor(&m)
    }

    fn error_matrix(&mut self, h: f64, j: &Matrix) -> Result<Lu> {
        let n = self.n;
        let mut m = Matrix::zeros(n, n);
        let d = mu_real() / h;
        for r in 0..n {
            for col in 0..n {
                m[(r, col)] = -j[(r, col)];
            }
            m[(r, r)] += d;
        }
        self.stats.lu_decomps += 1;
        Lu::factor(&m)
    }

    #[allow(clippy::too_many_arguments)]
    fn solve_collocation(
        &mut self,
        t: f64,
        u: &[f64],
        h: f64,
        z: &mut [f64],
        lu: &Lu,
        scale: &[f64],
        tol: f64,
        max_iter: usize,
    ) -> Newton {
        let n = self.n;
        let mut f = vec![0.0; 3 * n];
        let mut stage = vec![0.0; n];
        let mut rhs = vec![0.0; 3 * n];
        let scale3: Vec<f64> = (0..3 * n).map(|k| scale[k % n]).collect();
        let mut dw_old: Option<f64> = None;
        let mut rate = f64::NAN;
        for k in 0..max_iter {
            for i in 0..3 {
                for r in 0..n {
                    stage[r] = u[r] + z[i * n + r];
                }
                let ti = t + self.c[i] * h;
                let (lo, hi) = (i * n, (i + 1) * n);
                let mut fi = vec![0.0; n];
                self.f(ti, &stage, &mut fi);
                f[lo..hi].copy_from_slice(&fi);
            }
            if f.iter().any(|v| !v.is_finite()) {
                return Newton { converged: false, iters: k + 1, rate };
            }
            for i in 0..3 {
                for r in 0..n {
                    let mut s = 0.0;
                    for j in 0..3 {
                        s += self.a[i][j] * f[j * n + r];
                    }
                    rhs[i * n + r] = h * s - z[i * n + r];
                }
            }
            lu.solve_in_place(&mut rhs);
            let dw = rms(&rhs, &scale3);
            if let Some(old) = dw_old {
                rate = dw / old;
            }
            if rate.is_finite()
                && (rate >= 0.99 || pow(rate, (max_iter - k) as f64) / (1.0 - rate) * dw > tol)
            {
                self.stats.newton_iters += k + 1;
                return Newton { converged: false, iters: k + 1, rate };
            }
            for (zk, d) in z.iter_mut().zip(&rhs) {
                *zk += d;
            }
            if dw == 0.0 || (rate.is_finite() && rate / (1.0 - rate) * dw < tol) {
                self.stats.newton_iters += k + 1;
                return Newton { converged: true, iters: k + 1, rate };
            }
            dw_old = Some(dw);
        }
        self.stats.newton_iters += max_iter;
        Newton { converged: false, iters: max_iter, rate }
    }
}

pub(super) fn run<S: OdeSystem + ?Sized>(
    sys: &S,
    y0: &[f64],
    (t0, t_end): (f64, f64),
    st: &SolverSettings,
    events: &[EventSpec],
) -> Result<Trajectory> {
    let n = sys.dim();
    let mut ws = Workspace {
        sys,
        n,
        a: coefficients(),
        c: nodes(),
        stats: SolverStats {
            steps: 0,
            rejected: 0,
            newton_iters: 0,
            jac_evals: 0,
            lu_decomps: 0,
            rhs_evals: 0,
            scheme: SCHEME_NAME,
        },
    };
    let ew = error_weights();
    let mut times = vec![t0];
    let mut states = vec![y0.to_vec()];
    let mut segments: Vec<DenseSegment> = Vec::new();
    let mut records: Vec<EventRecord> = Vec::new();

    let mut t = t0;
    let mut u = y0.to_vec();
    let mut fu = vec![0.0; n];
    ws.f(t, &u, &mut fu);
    let mut jac = Matrix::zeros(n, n);
    ws.jac(t, &u, &mut jac);
    let mut current_jac = true;
    let mut lus: Option<(Lu, Lu)> = None;
    let mut h_abs = st.h_init.min(t_end - t0);
    let mut h_old: Option<f64> = None;
    let mut err_old: Option<f64> = None;
    let mut scratch = vec![0.0; n];
    let mut g_prev: Vec<f64> = events.iter().map(|e| e.value(sys, t, &u, &mut scratch)).collect();

    'outer: while t < t_end {
        if ws.stats.steps >= st.max_steps {
            return Err(Error::MaxStepsExceeded { t, state: u });
        }
        let min_step = st.h_min.max(10.0 * f64::EPSILON * abs(t));
        let mut rejected = false;
        let (z, h, err_norm, n_iter, rate) = loop {
            if h_abs < min_step {
                return Err(Error::StepUnderflow { t, h: h_abs, state: u });
            }
            let mut h = h_abs;
            if t + h > t_end || t_end - (t + h) < min_step {
                h = t_end - t;
                h_abs = h;
                lus = None;
            }
            let mut z = vec![0.0; 3 * n];
            if let Some(seg) = segments.last() {
                let mut tmp = vec![0.0; n];
                for i in 0..3 {
                    seg.eval(t + ws.c[i] * h, &mut tmp);
                    for r in 0..n {
                        z[i * n + r] = tmp[r] - u[r];
                    }
                }
                if z.iter().any(|v| !v.is_finite()) {
                    z.iter_mut().for_each(|v| *v = 0.0);
                }
            }
            let z_start = z.clone();
            let scale: Vec<f64> = (0..n).map(|i| st.atol(i) + abs(u[i]) * st.rel_tol).collect();
            let newton = loop {
                if lus.is_none() {
                    let m = match ws.newton_matrix(h, &jac) {
                        Ok(m) => m,
                        Err(_) => break Newton { converged: false, iters: 0, rate: f64::NAN },
                    };
                    let e = ws.error_matrix(h, &jac)?;
                    lus = Some((m, e));
                }
                let (m, _) = lus.as_ref().unwrap();
                let m = m.clone();
                let nw = ws.solve_collocation(t, &u, h, &mut z, &m, &scale, st.newton_tol, st.newton_max_iters);
                if nw.converged || current_jac {
                    break nw;
                }
                ws.jac(t, &u, &mut jac);
                current_jac = true;
                lus = None;
                z.copy_from_slice(&z_start);
            };
            if !newton.converged {
                h_abs *= 0.5;
                lus = None;
                ws.stats.rejected += 1;
                rejected = true;
                if h_abs < min_step {
                    return Err(Error::NewtonDivergence { t, state: u });
                }
                continue;
            }
            let mut ze = vec![0.0; n];
            for r in 0..n {
                ze[r] = (0..3).map(|i| ew[i] * z[i * n + r]).sum::<f64>() / h;
            }
            let (_, elu) = lus.as_ref().unwrap();
            let mut err: Vec<f64> = (0..n).map(|r| fu[r] + ze[r]).collect();
            elu.solve_in_place(&mut err);
            let scale: Vec<f64> = (0..n)
                .map(|i| st.atol(i) + abs(u[i]).max(abs(u[i] + z[2 * n + i])) * st.rel_tol)
                .collect();
            let mut err_norm = rms(&err, &scale);
            if (rejected || ws.stats.steps == 0) && err_norm > 1.0 {
                let shifted: Vec<f64> = (0..n).map(|r| u[r] + err[r]).collect();
                let mut fs = vec![0.0; n];
                ws.f(t, &shifted, &mut fs);
                let mut e2: Vec<f64> = (0..n).map(|r| fs[r] + ze[r]).collect();
                let (_, elu) = lus.as_ref().unwrap();
                elu.solve_in_place(&mut e2);
                err_norm = rms(&e2, &scale);
            }
            if !err_norm.is_finite() || err_norm > 1.0 {
                let safety = 0.9 * (2 * st.newton_max_iters + 1) as f64
                    / (2 * st.newton_max_iters + newton.iters) as f64;
                let factor = if err_norm.is_finite() { predict_factor(h_abs, h_old, err_norm, err_old) } else { 0.2 };
                h_abs *= (safety * factor).max(0.2);
                lus = None;
                ws.stats.rejected += 1;
                rejected = true;
                continue;
            }
            break (z, h, err_norm, newton.iters, newton.rate);
        };

        let t_new = if h == t_end - t { t_end } else { t + h };
        let u_new: Vec<f64> = (0..n).map(|r| u[r] + z[2 * n + r]).collect();
        if u_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::NewtonDivergence { t, state: u });
        }
        let mut values = Vec::with_capacity(4 * n);
        values.extend_from_slice(&u);
        for i in 0..2 {
            values.extend((0..n).map(|r| u[r] + z[i * n + r]));
        }
        values.extend_from_slice(&u_new);
        let seg = DenseSegment::new(t, h, values);
        ws.stats.steps += 1;

        let mut stop_at: Option<(f64, Vec<f64>)> = None;
        let mut hits: Vec<(f64, usize, Vec<f64>)> = Vec::new();
        for (k, e) in events.iter().enumerate() {
            let g1 = e.value(sys, t_new, &u_new, &mut scratch);
            if e.triggered(g_prev[k], g1) {
                let (te, ue) = locate(sys, e, &seg, t, t_new, g_prev[k], &mut scratch);
                hits.push((te, k, ue));
            }
            g_prev[k] = g1;
        }
        hits.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (te, k, ue) in hits {
            if stop_at.as_ref().is_some_and(|(ts, _)| te > *ts) {
                break;
            }
            records.push(EventRecord { t: te, spec: k, kind: events[k].kind.label(), state: ue.clone() });
            if events[k].terminal {
                stop_at = Some((te, ue));
            }
        }
        if let Some((te, ue)) = stop_at {
            if te > t {
                segments.push(seg);
                times.push(te);
                states.push(ue);
            }
            break 'outer;
        }
        segments.push(seg);
        times.push(t_new);
        states.push(u_new.clone());

        let recompute_jac = n_iter > 2 && rate.is_finite() && rate > 0.5;
        let safety =
            0.9 * (2 * st.newton_max_iters + 1) as f64 / (2 * st.newton_max_iters + n_iter) as f64;
        let mut factor = (safety * predict_factor(h_abs, h_old, err_norm, err_old)).min(10.0);
        if !recompute_jac && factor < 1.2 {
            factor = 1.0;
        } else {
            lus = None;
        }
        t = t_new;
        u = u_new;
        ws.f(t, &u, &mut fu);
        if recompute_jac {
            ws.jac(t, &u, &mut jac);
            current_jac = true;
        } else {
            current_jac = false;
        }
        h_old = Some(h_abs);
        err_old = Some(err_norm);
        h_abs = (h_abs * factor).min(st.h_max);
        if h_abs != h_old.unwrap() * factor {
            lus = None;
        }
    }

    Ok(Trajectory { dim: n, times, states, segments, events: records, stats: ws.stats })
}

/// Bisection on the dense output until the bracket is below `1e-3 h`.
fn locate<S: OdeSystem + ?Sized>(
    sys: &S,
    e: &EventSpec,
    seg: &DenseSegment,
    t0: f64,
    t1: f64,
    g0: f64,
    scratch: &mut [f64],
) -> (f64, Vec<f64>) {
    let n = seg.dim();
    let mut u = vec![0.0; n];
    let (mut lo, mut hi) = (t0, t1);
    let mut glo = g0;
    let tol = 1e-3 * (t1 - t0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        seg.eval(mid, &mut u);
        let g = e.value(sys, mid, &u, scratch);
        if (glo < 0.0) == (g < 0.0) && g != 0.0 {
            lo = mid;
            glo = g;
        } else {
            hi = mid;
        }
    }
    seg.eval(hi, &mut u);
    (hi, u)
}
