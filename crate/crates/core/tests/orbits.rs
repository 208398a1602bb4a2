use robertson_core::charts::{
    crit_manifold_b2, crit_manifold_k12_2, crit_manifold_k12_3, crit_manifold_k3_2, k11_1_to_2, k12_3_to_2,
    k3_2_to_3, omega_membership, SphereChartPoint,
};
use robertson_core::orbits::{
    gamma0_b11, gamma0_b2, gamma0_family_b12, gamma0_family_b3, max_relative_spacing, to_original_coords,
    y_max_prediction, SegmentKind, SingularOrbit, DEFAULT_POINTS,
};
use robertson_core::{Error, ScaledParams};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn spacing_ok(o: &SingularOrbit) {
    for s in &o.segments {
        let n = s.points.len();
        assert!(max_relative_spacing(s) <= 1.02 / (n - 1) as f64, "{} {:?}", s.chart, s.kind);
    }
}

#[test]
fn b2_orbit_lies_on_its_pieces() {
    let (eps2, c) = (1.0, 1.0);
    let o = gamma0_b2(eps2, c, 257).unwrap();
    assert_eq!(o.segments.len(), 2);
    let fast = &o.segments[0];
    assert_eq!(fast.kind, SegmentKind::Fast);
    assert!(fast.points.iter().all(|p| p[1] == 0.0));
    assert_eq!(fast.points.first().unwrap(), &vec![0.0, 0.0]);
    let slow = &o.segments[1];
    for p in &slow.points {
        assert!((p[1] - crit_manifold_b2(p[0], eps2, c).unwrap()).abs() <= 1e-12);
    }
    assert!(close(slow.points.last().unwrap(), &[0.0, c], 1e-15));
    assert!(close(fast.points.last().unwrap(), slow.points.first().unwrap(), 1e-15));
    spacing_ok(&o);
}

#[test]
fn default_resolution() {
    let o = gamma0_b2(2.0, 1.0, DEFAULT_POINTS).unwrap();
    assert!(o.segments.iter().all(|s| s.points.len() == 2048));
}

#[test]
fn b11_center_connection_reaches_q2_inside_omega() {
    for eps21 in [0.0, 0.5, 1.0] {
        let o = gamma0_b11(eps21, 1.0, 512).unwrap();
        let kinds: Vec<_> = o.segments.iter().map(|s| (s.kind, s.chart)).collect();
        assert_eq!(
            kinds,
            vec![
                (SegmentKind::Fast, "P11"),
                (SegmentKind::Slow, "K11_1"),
                (SegmentKind::Center, "K11_1"),
                (SegmentKind::Center, "K11_2"),
            ]
        );
        // slow ends at Pa, centre starts there
        assert!(close(o.segments[1].points.last().unwrap(), &[-1.0, 0.0, 0.0], 0.0));
        assert!(close(o.segments[2].points[0].as_slice(), &[-1.0, 0.0, 0.0], 0.0));
        for p in &o.segments[2].points {
            assert_eq!(p[2], 0.0);
            assert!(omega_membership(SphereChartPoint::K1 { z1: p[0], s1: p[1] }));
        }
        for p in &o.segments[3].points {
            assert!(omega_membership(SphereChartPoint::K2 { y2: p[0], z2: p[1] }));
        }
        let handoff = o.segments[2].points.last().unwrap();
        let mapped = k11_1_to_2([handoff[0], handoff[1], handoff[2]]).unwrap();
        assert!(close(&mapped, &o.segments[3].points[0], 1e-12));
        assert_eq!(o.segments[3].points.last().unwrap(), &vec![0.0, 0.0, 0.0]);
        let before = &o.segments[3].points[o.segments[3].points.len() - 2];
        assert!(before[0].hypot(before[1]) <= 1e-7, "{before:?}");
        spacing_ok(&o);
    }
}

#[test]
fn b11_without_eps21_approaches_along_the_antidiagonal() {
    let o = gamma0_b11(0.0, 1.0, 4096).unwrap();
    let pts = &o.segments[3].points;
    // points close to Q2 but outside the tail
    let near: Vec<_> = pts.iter().filter(|p| p[0].hypot(p[1]) < 1e-2 && p[0] > 0.0).collect();
    assert!(!near.is_empty());
    for p in near {
        assert!((p[1] / p[0] + 1.0).abs() < 0.05, "{p:?}");
    }
}

#[test]
fn b11_orbit_blows_down_to_the_fold() {
    let o = gamma0_b11(0.5, 1.0, 256).unwrap();
    let pts = o.rescaled();
    let last = pts.last().unwrap();
    assert_eq!(*last, [0.0, 1.0]);
    // the sphere collapses onto Q in (y~, z)
    for s in &o.segments[2..] {
        for p in &s.points {
            let q = robertson_core::orbits::to_rescaled(s.chart, p, 1.0);
            assert_eq!(q, [0.0, 1.0]);
        }
    }
}

#[test]
fn b12_slow_pieces_lie_on_critical_manifolds() {
    for (eps2, c) in [(0.5, 1.0), (0.1, 2.0), (0.9, 1.0)] {
        let o = gamma0_family_b12(eps2, c, 512).unwrap();
        let s3_0: f64 = eps2 / f64::sqrt(c);
        assert!(close(&o.segments[0].points[0], &[0.0, s3_0, c.sqrt()], 1e-15));
        assert!(close(o.segments[0].points.last().unwrap(), &[1.0, s3_0, c.sqrt()], 1e-15));
        let k3 = &o.segments[1];
        assert_eq!(k3.chart, "K12_3");
        for p in &k3.points {
            assert!(crit_manifold_k12_3(p[0], p[1], p[2], c).abs() <= 1e-10);
            assert!((p[1] * p[2] - eps2).abs() <= 1e-10);
        }
        let end = k3.points.last().unwrap();
        assert!((end[1] - 1.0).abs() <= 1e-10);
        let k2 = &o.segments[2];
        assert_eq!(k2.chart, "K12_2");
        let entry = k12_3_to_2([end[0], end[1], end[2]]).unwrap();
        assert!(close(&entry, &k2.points[0], 1e-10));
        for p in &k2.points {
            assert_eq!(p[2], eps2);
            assert!((p[1] - crit_manifold_k12_2(p[0], eps2, c).unwrap()).abs() <= 1e-10);
        }
        assert_eq!(k2.points.last().unwrap(), &vec![0.0, 0.0, eps2]);
        spacing_ok(&o);
    }
}

#[test]
fn b12_and_b2_agree_on_shared_parameters() {
    // fixed s = eps2~ makes the B12 layer problem the B2 one
    let (eps2, c) = (0.5, 1.0);
    let a = gamma0_family_b12(eps2, c, 512).unwrap().rescaled();
    for q in a {
        assert!((q[1] - crit_manifold_b2(q[0], eps2, c).unwrap()).abs() <= 1e-9 || q[1] == 0.0);
    }
}

#[test]
fn b3_slow_pieces_lie_on_critical_manifolds() {
    for (eps1, c) in [(5e-4, 1.0), (1e-4, 0.5)] {
        let o = gamma0_family_b3(eps1, c, 512).unwrap();
        let sg = f64::sqrt(eps1);
        let k2 = &o.segments[1];
        for p in &k2.points {
            assert_eq!(p[2], sg);
            assert!((p[1] - crit_manifold_k3_2(p[0], sg, c).unwrap()).abs() <= 1e-10);
        }
        let end = k2.points.last().unwrap();
        let entry = k3_2_to_3([end[0], end[1], end[2]]).unwrap();
        let k3 = &o.segments[2];
        assert!(close(&entry, &k3.points[0], 1e-10));
        for p in &k3.points {
            let (y3, s3, e13) = (p[0], p[1], p[2]);
            assert!((e13 * s3 * s3 - eps1).abs() <= 1e-12);
            assert!((e13 * (c - s3) - y3 * y3 - y3).abs() <= 1e-10);
        }
        assert!(close(k3.points.last().unwrap(), &[0.0, c, eps1 / (c * c)], 0.0));
        spacing_ok(&o);
    }
}

#[test]
fn original_coordinates_connect_origin_to_q() {
    // parameters consistent with each orbit's fixed chart coordinate, r = 1e-2
    let r: f64 = 1e-2;
    let cases = [
        (gamma0_b2(1.0, 1.0, 128).unwrap(), ScaledParams::new(r * r, r, 1.0).unwrap()),
        (gamma0_b11(0.5, 1.0, 128).unwrap(), ScaledParams::new(r * r, 0.5 * r * r, 1.0).unwrap()),
        (gamma0_family_b12(0.5, 1.0, 128).unwrap(), ScaledParams::new(r * r, 0.5 * r, 1.0).unwrap()),
        (gamma0_family_b3(5e-4, 1.0, 128).unwrap(), ScaledParams::new(5e-4 * r * r, r, 1.0).unwrap()),
    ];
    for (o, p) in cases {
        let pts = to_original_coords(&o, &p);
        assert!(close(&pts[0], &[0.0, 0.0], 1e-15), "{:?}", o.regime);
        assert!(close(pts.last().unwrap(), &[0.0, 1.0], 1e-12), "{:?}", o.regime);
        let peak = pts.iter().map(|q| q[0]).fold(0.0, f64::max);
        assert!((peak - y_max_prediction(&p)).abs() <= 1e-12 * peak.max(1e-3), "{:?} {peak}", o.regime);
    }
}

#[test]
fn y_max_prediction_is_sqrt_eps1_c() {
    let p = ScaledParams::new(4e-6, 1e-3, 0.25).unwrap();
    assert!((y_max_prediction(&p) - 1e-3).abs() < 1e-18);
}

#[test]
fn rejects_bad_arguments() {
    assert!(matches!(gamma0_b2(1.0, -1.0, 10), Err(Error::InvalidArgument(_))));
    assert!(matches!(gamma0_family_b12(0.0, 1.0, 10), Err(Error::InvalidArgument(_))));
    assert!(matches!(gamma0_family_b3(1e-4, 1.0, 1), Err(Error::InvalidArgument(_))));
}
