//! Quadrature rules and finite-difference helpers shared by the geometry
//! modules.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Central first-difference step, `max(1, |x|) * eps^(1/3)`.
pub fn fd_step(x: f64) -> f64 {
    x.abs().max(1.0) * f64::EPSILON.cbrt()
}

/// Central second-difference step, `max(1, |x|) * eps^(1/4)`.
pub fn fd_step2(x: f64) -> f64 {
    x.abs().max(1.0) * f64::EPSILON.powf(0.25)
}

// Kronrod 15-point abscissae and weights, with the embedded 7-point Gauss
// weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Subintervals with the largest error estimate are bisected until the total
/// estimate drops below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = kronrod15(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureNonConvergence(f64::INFINITY));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNonConvergence(err));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(&mut f, lo, mid);
        let (v2, e2) = kronrod15(&mut f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Nodes and weights of a quadrature rule from its symmetric Jacobi matrix
/// (Golub–Welsch). Weights are scaled by `mass`.
fn golub_welsch(off_diagonal: impl Fn(usize) -> f64, n: usize, mass: f64) -> Vec<(f64, f64)> {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = off_diagonal(k);
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut rule: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mass * v0 * v0)
        })
        .collect();
    rule.sort_by(|x, y| x.0.total_cmp(&y.0));
    rule
}

/// Number of Gauss–Hermite nodes used for Gaussian expectations; exact for
/// polynomial integrands up to degree 63.
pub const HERMITE_ORDER: usize = 32;

/// Gauss–Hermite rule for the standard normal: `E[f(Z)] ≈ Σ w f(z)`, weights
/// summing to one.
pub fn gauss_hermite() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut rule = golub_welsch(|k| (k as f64).sqrt(), HERMITE_ORDER, 1.0);
        // Symmetrize to remove eigen-solver noise.
        let n = rule.len();
        for i in 0..n / 2 {
            let z = 0.5 * (rule[n - 1 - i].0 - rule[i].0);
            let w = 0.5 * (rule[n - 1 - i].1 + rule[i].1);
            rule[i] = (-z, w);
            rule[n - 1 - i] = (z, w);
        }
        let total: f64 = rule.iter().map(|r| r.1).sum();
        rule.iter().map(|&(z, w)| (z, w / total)).collect()
    })
}

/// Gauss–Legendre rule of order `n` on `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    golub_welsch(
        |k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        },
        n,
        2.0,
    )
    .into_iter()
    .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
    .collect()
}

/// Composite trapezoid rule on a uniform grid of spacing `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => h * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}

/// Second-order derivative estimate of uniformly sampled data (central
/// differences inside, one-sided three-point stencils at the ends).
pub fn uniform_gradient(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        2 => vec![(values[1] - values[0]) / h; 2],
        _ => (0..n)
            .map(|i| {
                if i == 0 {
                    (4.0 * (values[1] - values[0]) - (values[2] - values[0])) / (2.0 * h)
                } else if i == n - 1 {
                    (4.0 * (values[n - 1] - values[n - 2]) - (values[n - 1] - values[n - 3])) / (2.0 * h)
                } else {
                    (values[i + 1] - values[i - 1]) / (2.0 * h)
                }
            })
            .collect(),
    }
}

/// Second derivative of uniformly sampled data, second order everywhere
/// (four-point one-sided stencils at the ends).
pub fn uniform_second_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    if n < 4 {
        return vec![0.0; n];
    }
    let h2 = h * h;
    (0..n)
        .map(|i| {
            if i == 0 {
                (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h2
            } else if i == n - 1 {
                (2.0 * values[n - 1] - 5.0 * values[n - 2] + 4.0 * values[n - 3] - values[n - 4])
                    / h2
            } else {
                (values[i + 1] - 2.0 * values[i] + values[i - 1]) / h2
            }
        })
        .collect()
}

/// Wrap an angle to `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut y = x.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    y
}
