//! Acceptance checks. One PASS/FAIL line per criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robertson_core::analysis::{convergence_study, fig10_representatives, sweep_point};
use robertson_core::charts::*;
use robertson_core::model::{full_rhs, FullSystem, ReducedSystem};
use robertson_core::solver::find_y_max;
use robertson_core::*;

type Outcome = std::result::Result<String, String>;

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn classical_full() -> std::result::Result<Trajectory, String> {
    let sys = FullSystem { rates: RateConstants::CLASSICAL };
    integrate(&sys, &FullState::CLASSICAL_INITIAL.to_array(), (0.0, 1e6), &SolverSettings::default(), &[])
        .map_err(|e| e.to_string())
}

fn y_max_reproduction() -> Outcome {
    let p = ScaledParams::new(1.3333e-9, 3.3333e-4, 1.0).map_err(|e| e.to_string())?;
    let target = (p.eps1 * p.c).sqrt();
    let tr = integrate(&ReducedSystem { params: p }, &[0.0, 0.0], (0.0, 1e12), &SolverSettings::default(), &[])
        .map_err(|e| e.to_string())?;
    let ym = find_y_max(&tr).map_err(|e| e.to_string())?;
    let rel = (ym.y - target).abs() / target;
    check(rel < 0.01 && (target - 3.6515e-5).abs() < 5e-9, format!("y_max={:.5e} target={target:.5e} rel={rel:.2e}", ym.y))
}

fn conservation() -> Outcome {
    let tr = classical_full()?;
    let worst = tr.states.iter().map(|s| (s[0] + s[1] + s[2] - 1.0).abs()).fold(0.0, f64::max);
    check(worst <= 1e-9, format!("max |x+y+z-1|={worst:.2e} over {} steps", tr.states.len()))
}

fn long_time_limit() -> Outcome {
    let tr = classical_full()?;
    let s = tr.last_state();
    let dev = [s[0], s[1], s[2] - 1.0].iter().map(|v| v.abs()).fold(0.0, f64::max);
    check(dev <= 1e-3, format!("state(1e6)=({:.3e}, {:.3e}, {:.6}) max dev={dev:.2e}", s[0], s[1], s[2]))
}

fn chart_transcription() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut count = 0;
    for _ in 0..100 {
        let c = rng.gen_range(0.5..2.0);
        let e = rng.gen_range(0.0..1.0);
        let charts: [Box<dyn Chart>; 8] = [
            Box::new(B2Chart { r: 1e-3, eps2_tilde: rng.gen_range(0.5..5.0), c }),
            Box::new(K11_1 { eps21: e, c }),
            Box::new(K11_2 { eps21: e, c }),
            Box::new(K11_3 { eps21: e, c }),
            Box::new(K12_2 { r1: rng.gen_range(0.0..0.5), c }),
            Box::new(K12_3 { r1: rng.gen_range(0.0..0.5), c }),
            Box::new(K3_2 { r: rng.gen_range(0.0..0.5), c }),
            Box::new(K3_3 { r: rng.gen_range(0.0..0.5), c }),
        ];
        for ch in &charts {
            let mut p: Vec<f64> = (0..ch.dim()).map(|_| rng.gen_range(-1.5..1.5)).collect();
            match ch.name() {
                "B2" => {}
                "K3_3" => {
                    p[1] = rng.gen_range(0.05..1.0);
                    p[2] = rng.gen_range(0.0..2.0);
                }
                _ => p[2] = rng.gen_range(0.05..1.0),
            }
            let err = pushforward_check(ch.as_ref(), &p).map_err(|e| format!("{}: {e}", ch.name()))?;
            worst = worst.max(err);
            count += 1;
        }
    }
    check(worst <= 1e-8, format!("{count} points over 8 charts, worst rel err={worst:.2e}"))
}

fn landmark_spectra() -> Outcome {
    let c = 1.0;
    let mut worst = 0.0f64;
    for eps21 in [0.0, 0.5, 1.0] {
        let k1 = K11_1 { eps21, c };
        let k2 = K11_2 { eps21, c };
        let cases: [(&dyn Chart, [f64; 3], [f64; 2]); 3] = [
            (&k1, [-1.0, 0.0, 0.0], [0.0, -2.0]),
            (&k1, [0.0, 0.0, 0.0], [2.0, 1.0]),
            (&k2, [0.0, 0.0, 0.0], [0.0, -1.0 - eps21 * c]),
        ];
        for (ch, p, expected) in cases {
            let mut got = sphere_spectrum(ch, &p);
            let mut want = expected;
            got.sort_by(f64::total_cmp);
            want.sort_by(f64::total_cmp);
            worst = worst.max((got[0] - want[0]).abs()).max((got[1] - want[1]).abs());
        }
    }
    check(worst <= 1e-12, format!("9 spectra, worst abs err={worst:.2e}"))
}

/// Least-squares fit `z1 + 1 = a s1 + b s1^2`, returns `a`.
fn quadratic_slope(samples: &[(f64, f64)]) -> f64 {
    let (mut s11, mut s12, mut s22, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(s, z) in samples {
        let w = z + 1.0;
        s11 += s * s;
        s12 += s * s * s;
        s22 += s * s * s * s;
        t1 += s * w;
        t2 += s * s * w;
    }
    (t1 * s22 - t2 * s12) / (s11 * s22 - s12 * s12)
}

fn center_manifold() -> Outcome {
    let st = SolverSettings::with_tolerances(1e-12, 1e-16);
    let mut parts = Vec::new();
    let mut ok = true;
    for eps21 in [0.0, 1.0] {
        let ch = K11_1 { eps21, c: 1.0 };
        let mut samples = Vec::new();
        for dz in [-1e-3, 1e-3] {
            let tr = integrate(&Flow(&ch), &[-1.0 + dz, 1e-4, 0.0], (0.0, 2e4), &st, &[]).map_err(|e| e.to_string())?;
            samples.extend(tr.sample_log(1e2, 64).into_iter().filter(|(_, u)| u[1] > 3e-4 && u[1] < 3e-3).map(|(_, u)| (u[1], u[0])));
        }
        let a = quadratic_slope(&samples);
        let expected = -(0.5 + eps21);
        ok &= samples.len() > 20 && (a - expected).abs() <= 1e-3;
        parts.push(format!("eps21={eps21}: slope={a:.6} expected={expected}"));
    }
    check(ok, parts.join(", "))
}

fn omega_invariance() -> Outcome {
    let c = 1.0;
    let beta1 = RegimeConfig::default().beta1;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut max_flux = f64::NEG_INFINITY;
    let mut worst_identity = 0.0f64;
    let mut count = 0;
    for k in 0..=4 {
        let eps21 = beta1 * k as f64 / 4.0;
        for i in 0..200 {
            let t: f64 = rng.gen_range(1e-3..5.0);
            let (edge, p) = match i % 6 {
                0 => (OmegaEdge::Equator, SphereChartPoint::K1 { z1: -t, s1: 0.0 }),
                1 => (OmegaEdge::Equator, SphereChartPoint::K3 { y3: t, s3: 0.0 }),
                2 => (OmegaEdge::Curve, SphereChartPoint::K1 { z1: -t, s1: t }),
                3 => (OmegaEdge::Curve, SphereChartPoint::K2 { y2: t, z2: -t }),
                4 => (OmegaEdge::Meridian, SphereChartPoint::K2 { y2: 0.0, z2: -t }),
                _ => (OmegaEdge::Meridian, SphereChartPoint::K3 { y3: 0.0, s3: t }),
            };
            let f = omega_boundary_flux(edge, p, eps21, c).map_err(|e| e.to_string())?;
            max_flux = max_flux.max(f);
            count += 1;
            let on_curve = SphereChartPoint::K1 { z1: -t, s1: t };
            let id = omega_boundary_flux(OmegaEdge::Curve, on_curve, eps21, c).map_err(|e| e.to_string())?;
            worst_identity = worst_identity.max((id + t * t * eps21 * c).abs());
        }
    }
    check(
        max_flux <= 0.0 && worst_identity <= 1e-12,
        format!("{count} boundary points, max outward flux={max_flux:.2e}, identity err={worst_identity:.2e}"),
    )
}

fn hausdorff_convergence(regime: Regime, fixed: f64) -> Outcome {
    let rs = [1e-2, 3e-3, 1e-3, 3e-4];
    let st = convergence_study(regime, fixed, &rs, 1.0, &RegimeConfig::default(), &analysis::comparison_settings(), orbits::DEFAULT_POINTS)
        .map_err(|e| e.to_string())?;
    let d: Vec<String> = st.points.iter().map(|p| p.distance().map_or("err".into(), |d| format!("{d:.3e}"))).collect();
    let slope = st.fit.map_or(f64::NAN, |f| f.slope);
    check(st.pass && st.monotone && slope >= 0.8, format!("fixed={fixed} d=[{}] slope={slope:.3} monotone={}", d.join(", "), st.monotone))
}

fn b2_convergence() -> Outcome {
    hausdorff_convergence(Regime::B2, 1.0)
}

fn b11_convergence() -> Outcome {
    hausdorff_convergence(Regime::B11, RegimeConfig::default().beta1 / 2.0)
}

fn b12_convergence() -> Outcome {
    hausdorff_convergence(Regime::B12, 0.5)
}

fn b3_convergence() -> Outcome {
    hausdorff_convergence(Regime::B3, RegimeConfig::default().beta3 / 2.0)
}

fn conserved_chart_quantities() -> Outcome {
    let st = SolverSettings::with_tolerances(1e-13, 1e-16);
    let drift = |tr: &Trajectory, q: &dyn Fn(&[f64]) -> f64| {
        let q0 = q(&tr.states[0]);
        tr.states.iter().map(|s| ((q(s) - q0) / q0).abs()).fold(0.0, f64::max)
    };
    let mut worst = [0.0f64; 3];
    let starts = [[-0.8, 0.2, 0.3], [-0.5, 0.4, 0.6], [-1.2, 0.1, 0.9]];
    for (k, u0) in starts.iter().enumerate() {
        let e = 0.3 * k as f64;
        let k1 = K11_1 { eps21: e, c: 1.0 };
        let tr = integrate(&Flow(&k1), u0, (0.0, 5.0), &st, &[]).map_err(|e| e.to_string())?;
        worst[0] = worst[0].max(drift(&tr, &|u| u[1] * u[2]));
        let k3 = K12_3 { r1: 0.2 + 0.1 * k as f64, c: 1.0 };
        let u = [u0[1], u0[2], 0.5 + 0.1 * k as f64];
        let tr = integrate(&Flow(&k3), &u, (0.0, 5.0), &st, &[]).map_err(|e| e.to_string())?;
        worst[1] = worst[1].max(drift(&tr, &|u| u[1] * u[2]));
        let b3 = K3_3 { r: 0.1 + 0.1 * k as f64, c: 1.0 };
        let u = [0.5, 0.2 + 0.1 * k as f64, 0.4];
        let tr = integrate(&Flow(&b3), &u, (0.0, 5.0), &st, &[]).map_err(|e| e.to_string())?;
        worst[2] = worst[2].max(drift(&tr, &|u| u[1] * u[1] * u[2]));
    }
    check(
        worst.iter().all(|&w| w <= 1e-10),
        format!("rel drift sigma1*s1={:.1e} sigma3*s3={:.1e} sigma3^2*eps13={:.1e}", worst[0], worst[1], worst[2]),
    )
}

fn classifier() -> Outcome {
    let cfg = RegimeConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = 0;
    for _ in 0..100_000 {
        // log-uniform radius so all regions are hit
        let rad = cfg.delta * 10f64.powf(rng.gen_range(-8.0..0.0));
        let th = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let (e1, e2) = (rad * th.cos(), rad * th.sin());
        let q = e2 * e2;
        let regions = [
            (Regime::B3, e1 < cfg.beta3 * q),
            (Regime::B2, cfg.beta3 * q <= e1 && e1 <= cfg.beta2 * q),
            (Regime::B11, e1 > cfg.beta2 * q && e1 > cfg.beta1 * e2),
            (Regime::B12, e1 > cfg.beta2 * q && e1 < cfg.beta1 * e2),
        ];
        let hits: Vec<Regime> = regions.iter().filter(|r| r.1).map(|r| r.0).collect();
        if hits.len() != 1 || hits[0] != classify(e1, e2, &cfg) {
            bad += 1;
        }
    }
    let mut c2_bad = 0;
    for k in 0..1000 {
        let e2 = 1e-4 + 0.5 * k as f64 / 1000.0;
        if classify(cfg.beta2 * e2 * e2, e2, &cfg) != Regime::B2 {
            c2_bad += 1;
        }
    }
    check(bad == 0 && c2_bad == 0, format!("1e5 random points, {bad} mismatches; 1000 C2 points, {c2_bad} not B2"))
}

fn rk4_reference(rates: RateConstants, h: f64, steps: usize) -> [f64; 3] {
    let f = |u: [f64; 3]| {
        let d = full_rhs(FullState::new(u[0], u[1], u[2]), rates);
        [d.x, d.y, d.z]
    };
    let add = |a: [f64; 3], b: [f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    let mut y = [1.0, 0.0, 0.0];
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f(add(y, k1, h / 2.0));
        let k3 = f(add(y, k2, h / 2.0));
        let k4 = f(add(y, k3, h));
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

fn solver_oracle() -> Outcome {
    let rates = RateConstants::new(0.04, 1e3, 10.0).map_err(|e| e.to_string())?;
    let reference = rk4_reference(rates, 1e-6, 1_000_000);
    let tr = integrate(&FullSystem { rates }, &[1.0, 0.0, 0.0], (0.0, 1.0), &SolverSettings::default(), &[])
        .map_err(|e| e.to_string())?;
    let err = (0..3).map(|i| (tr.last_state()[i] - reference[i]).abs()).fold(0.0, f64::max);
    check(err <= 1e-6, format!("max abs err at t=1: {err:.2e}"))
}

fn fig10_ordering() -> Outcome {
    let reps = fig10_representatives(1e-2, 1.0).map_err(|e| e.to_string())?;
    let cfg = RegimeConfig::default();
    let mut rows = Vec::new();
    for (regime, p) in reps {
        let row = sweep_point(p.eps1, p.eps2, p.c, &cfg, &SolverSettings::default());
        if let Some(e) = &row.error {
            return Err(format!("{regime}: {e}"));
        }
        if row.regime != regime {
            return Err(format!("representative {regime} classified as {}", row.regime));
        }
        rows.push((regime, row.y_max_numeric, row.t_half / row.t_decay));
    }
    let y_dec = rows.windows(2).all(|w| w[1].1 < w[0].1);
    let ratio_inc = rows.windows(2).all(|w| w[1].2 > w[0].2);
    let detail: Vec<String> = rows.iter().map(|(r, y, q)| format!("{r}: y_max={y:.2e} t_half/t_decay={q:.3}")).collect();
    check(y_dec && ratio_inc, detail.join("; "))
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { name: "y_max reproduction", budget: secs(5), run: y_max_reproduction },
        Criterion { name: "conservation", budget: secs(5), run: conservation },
        Criterion { name: "long-time limit", budget: None, run: long_time_limit },
        Criterion { name: "chart transcription", budget: secs(10), run: chart_transcription },
        Criterion { name: "landmark spectra", budget: None, run: landmark_spectra },
        Criterion { name: "center-manifold coefficient", budget: None, run: center_manifold },
        Criterion { name: "omega invariance", budget: None, run: omega_invariance },
        Criterion { name: "hausdorff convergence B2", budget: secs(60), run: b2_convergence },
        Criterion { name: "hausdorff convergence B11", budget: secs(60), run: b11_convergence },
        Criterion { name: "hausdorff convergence B12", budget: secs(60), run: b12_convergence },
        Criterion { name: "hausdorff convergence B3", budget: secs(60), run: b3_convergence },
        Criterion { name: "conserved chart quantities", budget: None, run: conserved_chart_quantities },
        Criterion { name: "regime classifier", budget: None, run: classifier },
        Criterion { name: "solver oracle", budget: None, run: solver_oracle },
        Criterion { name: "fig10 ordering", budget: None, run: fig10_ordering },
    ];
    let mut failed = 0;
    for c in &criteria {
        let t0 = Instant::now();
        let outcome = (c.run)();
        let dt = t0.elapsed();
        let over = c.budget.is_some_and(|b| dt > b);
        let (tag, detail) = match outcome {
            Ok(d) if !over => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time budget {:?}", c.budget.unwrap())),
            Err(d) => ("FAIL", d),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} {}: {detail} [{:.2} s]", c.name, dt.as_secs_f64());
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
