use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

use multiaffine::berry::{
    berry_connection, berry_curvature, berry_phase_loop, stokes_check, GaugeShifted, LoopPath, RealAmplitude,
    SpinHalf, SurfaceMesh,
};
use multiaffine::numeric::wrap_angle;

fn cap_phase(theta_c: f64) -> f64 {
    -PI * (1.0 - theta_c.cos())
}

const CAPS: [f64; 4] = [FRAC_PI_6, FRAC_PI_3, FRAC_PI_2, 2.0 * FRAC_PI_3];

#[test]
fn latitude_loops_and_stokes() {
    let shifted = GaugeShifted {
        inner: SpinHalf,
        gauge: |r: &[f64]| 0.7 * r[0] + r[1].sin(),
    };
    for tc in CAPS {
        let path = LoopPath::latitude(tc, 2000).unwrap();
        let mesh = SurfaceMesh::polar_cap(tc, 24).unwrap();
        let rep = stokes_check(&SpinHalf, &mesh, &path).unwrap();
        assert!(wrap_angle(rep.loop_phase.principal - cap_phase(tc)).abs() <= 1e-4);
        assert!((rep.loop_phase.total - cap_phase(tc)).abs() <= 1e-4);
        assert!(rep.discrepancy <= 1e-3);
        let g = stokes_check(&shifted, &mesh, &path).unwrap();
        assert!(wrap_angle(g.loop_phase.principal - rep.loop_phase.principal).abs() <= 1e-10);
        assert!((g.surface_flux - rep.surface_flux).abs() <= 1e-8);
    }
}

#[test]
fn reversal_negates_phase() {
    for tc in CAPS {
        let path = LoopPath::latitude(tc, 500).unwrap();
        let fwd = berry_phase_loop(&SpinHalf, &path).unwrap();
        let back = berry_phase_loop(&SpinHalf, &path.reversed()).unwrap();
        assert!(wrap_angle(fwd.principal + back.principal).abs() <= 1e-12);
    }
}

#[test]
fn loop_phase_converges_quadratically() {
    let tc = 1.0;
    let err = |k: usize| (berry_phase_loop(&SpinHalf, &LoopPath::latitude(tc, k).unwrap()).unwrap().total - cap_phase(tc)).abs();
    let (e1, e2) = (err(100), err(200));
    let order = (e1 / e2).log2();
    assert!((order - 2.0).abs() <= 0.1, "order {order}");
}

#[test]
fn curvature_is_gauge_invariant_and_connection_is_not() {
    let shifted = GaugeShifted {
        inner: SpinHalf,
        gauge: |r: &[f64]| r[0] * r[1],
    };
    for r in [[0.4, 1.0], [1.3, -2.0], [2.6, 0.3]] {
        let a = berry_connection(&SpinHalf, &r).unwrap();
        let b = berry_connection(&shifted, &r).unwrap();
        assert!((b[0] - (a[0] - r[1])).abs() <= 1e-8);
        assert!((b[1] - (a[1] - r[0])).abs() <= 1e-8);
        let f = berry_curvature(&SpinHalf, &r).unwrap();
        assert!((f - berry_curvature(&shifted, &r).unwrap()).amax() <= 1e-8);
    }
}

#[test]
fn real_family_has_trivial_holonomy() {
    let path = LoopPath::new((0..64).map(|j| {
        let t = 2.0 * PI * j as f64 / 64.0;
        vec![0.8 + 0.3 * t.cos(), 0.5 + 0.3 * t.sin()]
    }).collect())
    .unwrap();
    let p = berry_phase_loop(&RealAmplitude, &path).unwrap();
    assert!(p.principal.abs() <= 1e-12);
}
