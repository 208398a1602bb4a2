use proptest::prelude::*;
use robertson_core::model::{
    full_jacobian, full_rhs, reduced_divergence, reduced_jacobian, reduced_rhs, ReducedSystem,
};
use robertson_core::{
    classify, integrate, FullState, RateConstants, ReducedState, Regime, RegimeConfig, ScaledParams, SolverSettings,
};

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

fn rates() -> impl Strategy<Value = RateConstants> {
    (log_uniform(1e-3, 1e2), log_uniform(1e-1, 1e8), log_uniform(1e-1, 1e5))
        .prop_map(|(k1, k2, k3)| RateConstants::new(k1, k2, k3).unwrap())
}

fn state() -> impl Strategy<Value = FullState> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64).prop_map(|(x, y, z)| FullState::new(x, y, z))
}

/// Region inequalities written out independently of the classifier.
fn regions(e1: f64, e2: f64, cfg: &RegimeConfig) -> Vec<Regime> {
    let q = e2 * e2;
    let mut out = vec![];
    if e1 < cfg.beta3 * q {
        out.push(Regime::B3);
    }
    if cfg.beta3 * q <= e1 && e1 <= cfg.beta2 * q {
        out.push(Regime::B2);
    }
    if e1 > cfg.beta2 * q && e1 > cfg.beta1 * e2 {
        out.push(Regime::B11);
    }
    if e1 > cfg.beta2 * q && e1 < cfg.beta1 * e2 {
        out.push(Regime::B12);
    }
    out
}

proptest! {
    #[test]
    fn full_jacobian_matches_differences(k in rates(), s in state()) {
        let j = full_jacobian(s, k);
        let u = s.to_array();
        for col in 0..3 {
            let h = 1e-6 * u[col].abs().max(1e-3);
            let mut p = u;
            let mut m = u;
            p[col] += h;
            m[col] -= h;
            let fp = full_rhs(FullState::from_slice(&p), k).to_array();
            let fm = full_rhs(FullState::from_slice(&m), k).to_array();
            for row in 0..3 {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                let scale = j[(row, col)].abs().max(k.k1 + k.k2 + k.k3);
                prop_assert!((fd - j[(row, col)]).abs() <= 1e-6 * scale, "{row} {col} {fd} {}", j[(row, col)]);
            }
        }
    }

    #[test]
    fn full_rhs_conserves_mass(k in rates(), s in state()) {
        let d = full_rhs(s, k);
        let scale = k.k1 * s.x + k.k2 * s.y * s.y + k.k3 * s.y * s.z;
        prop_assert!((d.x + d.y + d.z).abs() <= 4.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE));
        let j = full_jacobian(s, k);
        for col in 0..3 {
            let sum = j[(0, col)] + j[(1, col)] + j[(2, col)];
            prop_assert!(sum.abs() <= 4.0 * f64::EPSILON * (k.k1 + k.k2 + k.k3));
        }
    }

    #[test]
    fn planar_field_is_rescaled_full_field(k in rates(), y in 0.0..0.5f64, z in 0.0..0.5f64, c in 1.0..2.0f64) {
        let p = ScaledParams::new(k.k1 / k.k2, k.k3 / k.k2, c).unwrap();
        let r = reduced_rhs(ReducedState::new(y, z), p);
        let f = full_rhs(FullState::new(c - y - z, y, z), k);
        prop_assert!((r.y - f.y / k.k2).abs() <= 1e-12 * (f.y.abs() / k.k2).max(1e-300) + 1e-15);
        prop_assert!((r.z - f.z / k.k2).abs() <= 1e-12 * r.z.abs() + 1e-300);
    }

    #[test]
    fn divergence_is_negative_trace(e1 in log_uniform(1e-12, 1.0), e2 in log_uniform(1e-12, 1.0),
                                    y in 0.0..1.0f64, z in 0.0..1.0f64) {
        let p = ScaledParams::new(e1, e2, 1.0).unwrap();
        let s = ReducedState::new(y, z);
        let j = reduced_jacobian(s, p);
        let div = reduced_divergence(s, p);
        prop_assert_eq!(div, j[(0, 0)] + j[(1, 1)]);
        prop_assert!(div < 0.0);
    }

    #[test]
    fn regions_partition_the_quadrant(e1 in log_uniform(1e-14, 0.7), e2 in log_uniform(1e-14, 0.7)) {
        let cfg = RegimeConfig::default();
        let hit = regions(e1, e2, &cfg);
        let got = classify(e1, e2, &cfg);
        if got == Regime::OnC1 {
            prop_assert!(hit.is_empty());
        } else {
            prop_assert_eq!(hit, vec![got]);
        }
    }

    #[test]
    fn points_on_c2_are_b2(e2 in log_uniform(1e-8, 0.5), b2 in 0.5..2.0f64) {
        let cfg = RegimeConfig::new(1.0, b2, 1e-3, 1.0).unwrap();
        let e1 = cfg.beta2 * (e2 * e2);
        prop_assert_eq!(classify(e1, e2, &cfg), Regime::B2);
    }

    #[test]
    fn z_increases_and_y_stays_positive(e1 in log_uniform(1e-8, 1e-2), e2 in log_uniform(1e-6, 1.0)) {
        let p = ScaledParams::new(e1, e2, 1.0).unwrap();
        let t = integrate(&ReducedSystem { params: p }, &[0.0, 0.0], (0.0, 1e4), &SolverSettings::default(), &[]).unwrap();
        for w in t.states.windows(2) {
            prop_assert!(w[1][1] >= w[0][1]);
            prop_assert!(w[1][0] >= -1e-12);
            prop_assert!(w[1][0] + w[1][1] <= 1.0 + 1e-9);
        }
    }
}
