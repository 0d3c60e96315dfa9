mod common;

use std::f64::consts::FRAC_PI_4;

use multiaffine::distributions::{Chart, DistributionFamily, ParameterPoint, Tensor3};
use multiaffine::infogeo::{
    bregman_divergence, christoffel, christoffel_first_kind, dual_metrics, fisher_metric, kl_divergence,
    legendre_dual, pythagorean_gap, pythagorean_orthogonality, transform_christoffel, transform_metric,
    MetricTensor, PotentialPair, RotationMap,
};
use multiaffine::lengths::{arc_length, integrate_geodesic, ParamPath};
use multiaffine::numeric::fd_step;
use nalgebra::DMatrix;

fn grid_points() -> Vec<(DistributionFamily, ParameterPoint)> {
    let mut pts = Vec::new();
    for i in 0..=16 {
        let t = -4.0 + 0.5 * i as f64;
        pts.push((DistributionFamily::Bernoulli, ParameterPoint::natural(vec![t])));
    }
    for mu in [-2.0, -0.5, 0.0, 1.3] {
        for sigma in [0.3, 1.0, 2.5] {
            pts.push((
                DistributionFamily::Gaussian,
                DistributionFamily::Gaussian
                    .convert(&ParameterPoint::raw(vec![mu, sigma]), Chart::Natural)
                    .unwrap(),
            ));
        }
    }
    let mut rng = common::rng(7);
    for k in [3, 4, 6] {
        let fam = DistributionFamily::Categorical(k);
        for _ in 0..10 {
            let p = fam.point_from_probabilities(&common::random_probabilities(&mut rng, k)).unwrap();
            pts.push((fam, fam.convert(&p, Chart::Natural).unwrap()));
        }
    }
    pts
}

#[test]
fn bregman_equals_kl_on_grids() {
    let pts = grid_points();
    for (fam, q) in &pts {
        for (fam2, p) in &pts {
            if fam != fam2 {
                continue;
            }
            let eta_p = fam.convert(p, Chart::Mean).unwrap();
            let b = bregman_divergence(fam, q, &eta_p).unwrap();
            let kl = kl_divergence(fam, p, q).unwrap();
            assert!((b - kl).abs() <= 1e-8 * kl.max(1.0), "{} {b} {kl}", fam.name());
            assert!(kl >= 0.0);
        }
        assert_eq!(kl_divergence(fam, q, q).unwrap(), 0.0);
    }
}

#[test]
fn legendre_round_trip_and_metric_duality() {
    for (fam, theta) in grid_points() {
        let (eta, phi) = legendre_dual(&fam, &theta).unwrap();
        assert!((phi - fam.phi(eta.coords()).unwrap()).abs() < 1e-9);
        let back = fam.grad_phi(eta.coords()).unwrap();
        let err = back.iter().zip(theta.coords()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-8 * theta.coords().iter().fold(1.0_f64, |m, x| m.max(x.abs())), "{} {err}", fam.name());
        let (g, gs) = dual_metrics(&fam, &theta).unwrap();
        let d = g.dim();
        let defect = (&g.components * &gs.components - DMatrix::identity(d, d)).amax();
        assert!(defect <= 1e-6, "{} {defect}", fam.name());
    }
}

#[test]
fn connections_are_flat_in_their_own_charts() {
    for (fam, theta) in grid_points() {
        let e = christoffel(&fam, &theta, 1.0).unwrap();
        assert!(e.max_abs() <= 1e-6, "{} e {}", fam.name(), e.max_abs());
        let eta = fam.convert(&theta, Chart::Mean).unwrap();
        let m = christoffel(&fam, &eta, -1.0).unwrap();
        assert!(m.max_abs() <= 1e-6 * fam.hess_phi(eta.coords()).unwrap().amax().max(1.0), "{} m {}", fam.name(), m.max_abs());
    }
}

fn metric_derivative(fam: &DistributionFamily, p: &ParameterPoint, k: usize) -> DMatrix<f64> {
    let h = fd_step(p.coords()[k]);
    let mut plus = p.coords().to_vec();
    plus[k] += h;
    let mut minus = p.coords().to_vec();
    minus[k] -= h;
    let gp = fisher_metric(fam, &ParameterPoint::new(p.chart(), plus)).unwrap().components;
    let gm = fisher_metric(fam, &ParameterPoint::new(p.chart(), minus)).unwrap().components;
    (gp - gm) / (2.0 * h)
}

#[test]
fn metric_derivative_splits_into_dual_connections() {
    let fam = DistributionFamily::Gaussian;
    let mut points = vec![
        (fam, ParameterPoint::raw(vec![0.3, 1.4])),
        (fam, ParameterPoint::raw(vec![-1.0, 0.7])),
        (fam, ParameterPoint::natural(vec![0.5, -0.8])),
        (fam, ParameterPoint::mean(vec![0.2, 1.5])),
    ];
    for eta in [0.15, 0.5, 0.8] {
        points.push((DistributionFamily::Bernoulli, ParameterPoint::mean(vec![eta])));
        points.push((DistributionFamily::Bernoulli, ParameterPoint::natural(vec![eta * 3.0 - 1.0])));
    }
    let cat = DistributionFamily::Categorical(3);
    points.push((cat, cat.point_from_probabilities(&[0.2, 0.3, 0.5]).unwrap()));
    points.push((cat, cat.convert(&cat.point_from_probabilities(&[0.6, 0.1, 0.3]).unwrap(), Chart::Natural).unwrap()));
    for (fam, p) in points {
        let d = fam.dimension();
        for alpha in [-1.0, -0.4, 0.0, 0.5, 1.0] {
            let plus = christoffel_first_kind(&fam, &p, alpha).unwrap();
            let minus = christoffel_first_kind(&fam, &p, -alpha).unwrap();
            for k in 0..d {
                let dg = metric_derivative(&fam, &p, k);
                for i in 0..d {
                    for j in 0..d {
                        let rhs = plus.get(k, i, j) + minus.get(k, j, i);
                        let scale = dg[(i, j)].abs().max(1.0);
                        assert!((dg[(i, j)] - rhs).abs() <= 1e-5 * scale, "{} {:?} α={alpha}", fam.name(), p);
                    }
                }
            }
        }
    }
}

/// I-projection of `q` onto `{r : E_r[f] = E_p[f]}`: `r ∝ q e^{λ f}` with
/// `λ` found by bisection (the constraint is monotone in `λ`).
fn i_projection(p: &[f64], q: &[f64], f: &[f64]) -> Vec<f64> {
    let target: f64 = p.iter().zip(f).map(|(a, b)| a * b).sum();
    let tilt = |lam: f64| -> Vec<f64> {
        let w: Vec<f64> = q.iter().zip(f).map(|(a, b)| a * (lam * b).exp()).collect();
        let s: f64 = w.iter().sum();
        w.iter().map(|x| x / s).collect()
    };
    let mean = |r: &[f64]| -> f64 { r.iter().zip(f).map(|(a, b)| a * b).sum() };
    let (mut lo, mut hi) = (-50.0, 50.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean(&tilt(mid)) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    tilt(0.5 * (lo + hi))
}

#[test]
fn pythagorean_triples_have_no_gap() {
    let mut rng = common::rng(11);
    for k in [3, 4, 5] {
        let fam = DistributionFamily::Categorical(k);
        let f: Vec<f64> = (0..k).map(|i| i as f64).collect();
        for _ in 0..20 {
            let p = common::random_probabilities(&mut rng, k);
            let q = common::random_probabilities(&mut rng, k);
            let r = i_projection(&p, &q, &f);
            let (pp, rp, qp) = (
                fam.point_from_probabilities(&p).unwrap(),
                fam.point_from_probabilities(&r).unwrap(),
                fam.point_from_probabilities(&q).unwrap(),
            );
            let gap = pythagorean_gap(&fam, &pp, &rp, &qp).unwrap();
            assert!(gap.abs() <= 1e-8, "gap {gap}");
            assert!(pythagorean_orthogonality(&fam, &pp, &rp, &qp).unwrap().abs() <= 1e-8);
        }
    }
    // Gaussian: moving Q's mean onto P's keeps Q's spread; that point splits KL exactly.
    let g = DistributionFamily::Gaussian;
    for (mp, sp, mq, sq) in [(0.0, 1.0, 2.0, 0.5), (-1.2, 0.4, 0.3, 2.2), (3.0, 1.5, 3.5, 1.0)] {
        let p = ParameterPoint::raw(vec![mp, sp]);
        let r = ParameterPoint::raw(vec![mp, sq]);
        let q = ParameterPoint::raw(vec![mq, sq]);
        assert!(pythagorean_gap(&g, &p, &r, &q).unwrap().abs() <= 1e-8);
        assert!(pythagorean_orthogonality(&g, &p, &r, &q).unwrap().abs() <= 1e-8);
    }
}

#[test]
fn generic_triangles_have_a_gap_matching_the_pairing() {
    let mut rng = common::rng(12);
    let fam = DistributionFamily::Categorical(4);
    let mut nonzero = 0;
    for _ in 0..50 {
        let pts: Vec<ParameterPoint> =
            (0..3).map(|_| fam.point_from_probabilities(&common::random_probabilities(&mut rng, 4)).unwrap()).collect();
        let gap = pythagorean_gap(&fam, &pts[0], &pts[1], &pts[2]).unwrap();
        let eta = |p: &ParameterPoint| fam.convert(p, Chart::Mean).unwrap().into_coords();
        let theta = |p: &ParameterPoint| fam.convert(p, Chart::Natural).unwrap().into_coords();
        let (ep, er) = (eta(&pts[0]), eta(&pts[1]));
        let (tr, tq) = (theta(&pts[1]), theta(&pts[2]));
        let pairing: f64 = (0..3).map(|i| (er[i] - ep[i]) * (tr[i] - tq[i])).sum();
        assert!((gap - pairing).abs() <= 1e-10, "{gap} vs {pairing}");
        if gap.abs() > 1e-4 {
            nonzero += 1;
        }
    }
    assert!(nonzero >= 45);
}

#[test]
fn rotated_metric_preserves_arc_length() {
    let fam = DistributionFamily::Gaussian;
    let fisher = |x: &[f64]| fisher_metric(&fam, &ParameterPoint::raw(x.to_vec())).map(|g| g.components);
    let path = ParamPath::from_fn(Chart::Raw, 201, |t| vec![t.sin(), 1.0 + 0.5 * t * t]).unwrap();
    let base = arc_length(&path, fisher).unwrap();
    for angle in [0.3, FRAC_PI_4, 2.0] {
        let r = RotationMap::planar(angle);
        let rotated = ParamPath::new(Chart::Raw, path.samples().iter().map(|x| r.apply_transpose(x)).collect()).unwrap();
        let len = arc_length(&rotated, |xt| {
            let x = r.apply(xt);
            let g = MetricTensor {
                chart: Chart::Raw,
                at: ParameterPoint::raw(x.clone()),
                components: fisher(&x)?,
            };
            transform_metric(&g, &r).map(|m| m.components)
        })
        .unwrap();
        assert!((len - base).abs() <= 1e-10, "{len} vs {base}");
    }
}

fn bernoulli_pair_connection(x: &[f64]) -> multiaffine::Result<Tensor3> {
    let mut t = Tensor3::zeros(2);
    for i in 0..2 {
        let g = christoffel(&DistributionFamily::Bernoulli, &ParameterPoint::mean(vec![x[i]]), 0.0)?;
        t.set(i, i, i, g.get(0, 0, 0));
    }
    Ok(t)
}

#[test]
fn rotated_connection_maps_geodesics_to_geodesics() {
    let r = RotationMap::planar(FRAC_PI_4);
    let x0 = [0.3, 0.6];
    let v0 = [0.25, -0.2];
    let direct = integrate_geodesic(bernoulli_pair_connection, &x0, &v0, 400).unwrap();
    let rotated = integrate_geodesic(
        |xt: &[f64]| {
            let x = r.apply(xt);
            let gamma = multiaffine::infogeo::ChristoffelArray {
                chart: Chart::Mean,
                at: ParameterPoint::mean(x.clone()),
                alpha: 0.0,
                components: bernoulli_pair_connection(&x)?,
            };
            transform_christoffel(&gamma, &r).map(|g| g.components)
        },
        &r.apply_transpose(&x0),
        &r.apply_transpose(&v0),
        400,
    )
    .unwrap();
    for (a, b) in direct.iter().zip(&rotated) {
        let back = r.apply(b);
        assert!((a[0] - back[0]).abs() <= 1e-6 && (a[1] - back[1]).abs() <= 1e-6);
    }
    // The pair geodesic is not a straight line, so the check is not vacuous.
    let mid = &direct[200];
    assert!((mid[0] - (x0[0] + 0.5 * v0[0])).abs() > 1e-4);
}

#[test]
fn pinning_scales_inverse_square() {
    for sigma in [1.0, 0.1, 0.01] {
        let g = fisher_metric(&DistributionFamily::Gaussian, &ParameterPoint::raw(vec![0.0, sigma])).unwrap();
        let expected = 2.0 / (sigma * sigma);
        assert!((g.components[(1, 1)] - expected).abs() <= 1e-6 * expected);
        assert!((g.components[(0, 0)] - 1.0 / (sigma * sigma)).abs() <= 1e-6 / (sigma * sigma));
    }
}
