//! Arc-length functionals on statistical manifolds and geodesics of the
//! e-, m- and Levi-Civita connections.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::distributions::{Chart, DistributionFamily, ParameterPoint, Tensor3};
use crate::error::{check_dim, Error, Result};
use crate::infogeo::{christoffel, fisher_metric, kl_divergence, PotentialPair};
use crate::numeric::{fd_step2, trapezoid, uniform_gradient};

/// A curve sampled on the uniform grid `t_i = i / (n - 1)` of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPath {
    chart: Chart,
    samples: Vec<Vec<f64>>,
}

impl ParamPath {
    pub fn new(chart: Chart, samples: Vec<Vec<f64>>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("samples", "a path needs at least two samples"));
        }
        let d = samples[0].len();
        if d == 0 {
            return Err(Error::invalid("samples", "points must have at least one coordinate"));
        }
        for s in &samples {
            check_dim(d, s.len())?;
            if s.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("samples", "coordinates must be finite"));
            }
        }
        Ok(ParamPath { chart, samples })
    }

    /// Samples `f(t)` at `n` uniform parameter values.
    pub fn from_fn(chart: Chart, n: usize, mut f: impl FnMut(f64) -> Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("samples", "a path needs at least two samples"));
        }
        let h = 1.0 / (n - 1) as f64;
        Self::new(chart, (0..n).map(|i| f(i as f64 * h)).collect())
    }

    /// Straight segment from `a` to `b` in their common chart.
    pub fn straight(a: &ParameterPoint, b: &ParameterPoint, n: usize) -> Result<Self> {
        b.expect_chart(a.chart())?;
        check_dim(a.dim(), b.dim())?;
        let (x, y) = (a.coords(), b.coords());
        Self::from_fn(a.chart(), n, |t| {
            x.iter().zip(y).map(|(p, q)| p + t * (q - p)).collect()
        })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.samples[0].len()
    }

    /// Grid spacing in `t`.
    pub fn step(&self) -> f64 {
        1.0 / (self.samples.len() - 1) as f64
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn point(&self, i: usize) -> ParameterPoint {
        ParameterPoint::new(self.chart, self.samples[i].clone())
    }

    pub fn start(&self) -> ParameterPoint {
        self.point(0)
    }

    pub fn end(&self) -> ParameterPoint {
        self.point(self.len() - 1)
    }

    /// Re-expresses every sample of the path in another chart of `family`.
    pub fn to_chart(&self, family: &DistributionFamily, chart: Chart) -> Result<ParamPath> {
        let samples = self
            .samples
            .iter()
            .map(|s| {
                family
                    .convert(&ParameterPoint::new(self.chart, s.clone()), chart)
                    .map(ParameterPoint::into_coords)
            })
            .collect::<Result<Vec<_>>>()?;
        ParamPath::new(chart, samples)
    }

    /// Velocity `dx/dt` at every sample (second-order differences).
    pub fn velocities(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let h = self.step();
        let mut out = vec![vec![0.0; self.dim()]; n];
        for c in 0..self.dim() {
            let col: Vec<f64> = self.samples.iter().map(|s| s[c]).collect();
            for (i, v) in uniform_gradient(&col, h).into_iter().enumerate() {
                out[i][c] = v;
            }
        }
        out
    }
}

fn quad_form(g: &DMatrix<f64>, v: &[f64]) -> f64 {
    let v = DVector::from_column_slice(v);
    v.dot(&(g * &v))
}

/// `∫ √(gᵢⱼ ẋⁱ ẋʲ) dt` by the trapezoid rule, with `metric` evaluated at each
/// sample.
pub fn arc_length<F>(path: &ParamPath, mut metric: F) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<DMatrix<f64>>,
{
    let vel = path.velocities();
    let speeds = path
        .samples()
        .iter()
        .zip(&vel)
        .map(|(x, v)| {
            let g = metric(x)?;
            check_dim(path.dim(), g.nrows())?;
            Ok(quad_form(&g, v).max(0.0).sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(trapezoid(&speeds, path.step()))
}

/// Fisher–Rao length of the path in its own chart.
pub fn primal_length(path: &ParamPath, family: &DistributionFamily) -> Result<f64> {
    let chart = path.chart();
    arc_length(path, |x| {
        fisher_metric(family, &ParameterPoint::new(chart, x.to_vec())).map(|g| g.components)
    })
}

/// Length under the dual metric `g* = ∇²φ` of the image `η(t) = ∇ψ(θ(t))`
/// of a natural-chart path. The image velocity comes from the chain rule
/// `η̇ = ∇²ψ θ̇`.
pub fn dual_length<P: PotentialPair + ?Sized>(path: &ParamPath, pot: &P) -> Result<f64> {
    if path.chart() != Chart::Natural {
        return Err(Error::ChartMismatch {
            expected: Chart::Natural,
            found: path.chart(),
        });
    }
    check_dim(pot.dim(), path.dim())?;
    let vel = path.velocities();
    let speeds = path
        .samples()
        .iter()
        .zip(&vel)
        .map(|(theta, v)| {
            let eta = pot.grad_psi(theta)?;
            let eta_dot = pot.hess_psi(theta)? * DVector::from_column_slice(v);
            let g_star = pot.hess_phi(eta.as_slice())?;
            Ok(quad_form(&g_star, eta_dot.as_slice()).max(0.0).sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(trapezoid(&speeds, path.step()))
}

fn spd_inverse(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    Cholesky::new(m)
        .map(|c| c.inverse())
        .ok_or(Error::SingularMetric)
}

/// Length under the pointwise harmonic mean `H = 2 (g⁻¹ + g*⁻¹)⁻¹` of two
/// metric fields.
pub fn harmonic_length<G, H>(path: &ParamPath, mut g_field: G, mut g_star_field: H) -> Result<f64>
where
    G: FnMut(&[f64]) -> Result<DMatrix<f64>>,
    H: FnMut(&[f64]) -> Result<DMatrix<f64>>,
{
    arc_length(path, |x| {
        let gi = spd_inverse(g_field(x)?)?;
        let gsi = spd_inverse(g_star_field(x)?)?;
        Ok(2.0 * spd_inverse(gi + gsi)?)
    })
}

/// Second-order Hessians of a divergence at the diagonal `x = y`: the first
/// matrix differentiates the first argument, the second the second.
pub fn divergence_hessians<D>(x: &[f64], mut div: D) -> Result<(DMatrix<f64>, DMatrix<f64>)>
where
    D: FnMut(&[f64], &[f64]) -> Result<f64>,
{
    let d = x.len();
    let h: Vec<f64> = x.iter().map(|&xi| fd_step2(xi)).collect();
    let shifted = |u: &[f64]| -> Vec<f64> { x.iter().zip(u).map(|(a, b)| a + b).collect() };
    // S(u) = D(x+u, x) + D(x-u, x) = uᵀ g u + O(|u|⁴), and likewise in y.
    let mut sym = |u: &[f64], first: bool| -> Result<f64> {
        let neg: Vec<f64> = u.iter().map(|v| -v).collect();
        let (p, m) = (shifted(u), shifted(&neg));
        if first {
            Ok(div(&p, x)? + div(&m, x)?)
        } else {
            Ok(div(x, &p)? + div(x, &m)?)
        }
    };
    let mut g = DMatrix::zeros(d, d);
    let mut gs = DMatrix::zeros(d, d);
    for i in 0..d {
        let mut u = vec![0.0; d];
        u[i] = h[i];
        g[(i, i)] = sym(&u, true)? / (h[i] * h[i]);
        gs[(i, i)] = sym(&u, false)? / (h[i] * h[i]);
        for j in 0..i {
            let mut plus = vec![0.0; d];
            plus[i] = h[i];
            plus[j] = h[j];
            let mut minus = plus.clone();
            minus[j] = -h[j];
            let denom = 4.0 * h[i] * h[j];
            let a = (sym(&plus, true)? - sym(&minus, true)?) / denom;
            let b = (sym(&plus, false)? - sym(&minus, false)?) / denom;
            g[(i, j)] = a;
            g[(j, i)] = a;
            gs[(i, j)] = b;
            gs[(j, i)] = b;
        }
    }
    Ok((g, gs))
}

/// `∫ √((gᵢⱼ + g*ᵢⱼ) ẋⁱ ẋʲ) dt` with both metrics read off the Hessians of
/// an arbitrary divergence on the path chart.
pub fn divergence_length_with<D>(path: &ParamPath, mut div: D) -> Result<f64>
where
    D: FnMut(&[f64], &[f64]) -> Result<f64>,
{
    arc_length(path, |x| {
        let (g, gs) = divergence_hessians(x, &mut div)?;
        Ok(g + gs)
    })
}

fn kl_in_chart<'a>(
    family: &'a DistributionFamily,
    chart: Chart,
) -> impl FnMut(&[f64], &[f64]) -> Result<f64> + 'a {
    move |x, y| {
        kl_divergence(
            family,
            &ParameterPoint::new(chart, x.to_vec()),
            &ParameterPoint::new(chart, y.to_vec()),
        )
    }
}

/// Divergence-element length induced by KL divergence. Both KL Hessians equal
/// the Fisher metric, so this is `√2` times the primal length.
pub fn divergence_length(path: &ParamPath, family: &DistributionFamily) -> Result<f64> {
    divergence_length_with(path, kl_in_chart(family, path.chart()))
}

/// Alternate estimator of the divergence length from the symmetrized
/// divergence between neighbouring samples: the integrand is the square root
/// of `d²/ds² [D(γ(t+s)||γ(t)) + D(γ(t)||γ(t+s))]` at `s = 0`.
pub fn divergence_length_alternate_with<D>(path: &ParamPath, mut div: D) -> Result<f64>
where
    D: FnMut(&[f64], &[f64]) -> Result<f64>,
{
    let n = path.len();
    if n < 3 {
        return Err(Error::invalid("samples", "the alternate estimator needs at least three samples"));
    }
    let h = path.step();
    let s = path.samples();
    let mut sym = |a: usize, b: usize| -> Result<f64> { Ok(div(&s[a], &s[b])? + div(&s[b], &s[a])?) };
    let mut speeds = Vec::with_capacity(n);
    for i in 0..n {
        let second = if i == 0 || i == n - 1 {
            // One-sided: f(s) = a s² + b s³ + ..., eliminate b with steps h and 2h.
            let (n1, n2) = if i == 0 { (1, 2) } else { (n - 2, n - 3) };
            2.0 * (2.0 * sym(i, n1)? / (h * h) - sym(i, n2)? / (4.0 * h * h))
        } else {
            (sym(i, i + 1)? + sym(i, i - 1)?) / (h * h)
        };
        speeds.push(second.max(0.0).sqrt());
    }
    Ok(trapezoid(&speeds, h))
}

/// KL instance of [`divergence_length_alternate_with`].
pub fn divergence_length_alternate(path: &ParamPath, family: &DistributionFamily) -> Result<f64> {
    divergence_length_alternate_with(path, kl_in_chart(family, path.chart()))
}

/// All four lengths of one path, evaluated in the natural chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthReport {
    pub primal: f64,
    pub dual: f64,
    pub harmonic: f64,
    pub divergence_based: f64,
    pub grid_size: usize,
}

pub fn length_report(path: &ParamPath, family: &DistributionFamily) -> Result<LengthReport> {
    let natural = path.to_chart(family, Chart::Natural)?;
    let fisher = |x: &[f64]| family.hess_psi(x);
    let dual_at = |x: &[f64]| -> Result<DMatrix<f64>> {
        let eta = family.grad_psi(x)?;
        family.hess_phi(eta.as_slice())
    };
    Ok(LengthReport {
        primal: primal_length(path, family)?,
        dual: dual_length(&natural, family)?,
        harmonic: harmonic_length(&natural, fisher, dual_at)?,
        divergence_based: divergence_length(path, family)?,
        grid_size: path.len(),
    })
}

/// Geodesic acceleration `-Γⁱⱼₖ vʲ vᵏ`.
fn acceleration(gamma: &Tensor3, v: &[f64]) -> Vec<f64> {
    let d = gamma.dim();
    (0..d)
        .map(|i| {
            let mut a = 0.0;
            for j in 0..d {
                for k in 0..d {
                    a -= gamma.get(i, j, k) * v[j] * v[k];
                }
            }
            a
        })
        .collect()
}

/// Integrates `ẍⁱ + Γⁱⱼₖ ẋʲ ẋᵏ = 0` over `t ∈ [0, 1]` with `steps` classical
/// RK4 steps and returns the `steps + 1` positions.
pub fn integrate_geodesic<F>(mut connection: F, x0: &[f64], v0: &[f64], steps: usize) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(&[f64]) -> Result<Tensor3>,
{
    check_dim(x0.len(), v0.len())?;
    if steps == 0 {
        return Err(Error::invalid("steps", "must be positive"));
    }
    let d = x0.len();
    let h = 1.0 / steps as f64;
    let axpy = |x: &[f64], a: f64, y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(p, q)| p + a * q).collect() };
    let mut x = x0.to_vec();
    let mut v = v0.to_vec();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(x.clone());
    for _ in 0..steps {
        let k1x = v.clone();
        let k1v = acceleration(&connection(&x)?, &v);
        let (x2, v2) = (axpy(&x, 0.5 * h, &k1x), axpy(&v, 0.5 * h, &k1v));
        let k2v = acceleration(&connection(&x2)?, &v2);
        let (x3, v3) = (axpy(&x, 0.5 * h, &v2), axpy(&v, 0.5 * h, &k2v));
        let k3v = acceleration(&connection(&x3)?, &v3);
        let (x4, v4) = (axpy(&x, h, &v3), axpy(&v, h, &k3v));
        let k4v = acceleration(&connection(&x4)?, &v4);
        for i in 0..d {
            x[i] += h / 6.0 * (k1x[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            v[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        if x.iter().chain(&v).any(|c| !c.is_finite()) {
            return Err(Error::invalid("geodesic", "trajectory left the representable range"));
        }
        out.push(x.clone());
    }
    Ok(out)
}

const SHOOTING_MAX_ITER: usize = 50;
const SHOOTING_TOL: f64 = 1e-10;
const SHOOTING_ACCEPT: f64 = 1e-6;

/// Shooting solve of the boundary-value problem `x(0) = a`, `x(1) = b` for a
/// connection field given in some chart.
pub fn shoot_geodesic<F>(mut connection: F, a: &[f64], b: &[f64], steps: usize) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(&[f64]) -> Result<Tensor3>,
{
    check_dim(a.len(), b.len())?;
    let d = a.len();
    let mut residual = |v: &[f64]| -> Result<(Vec<Vec<f64>>, DVector<f64>)> {
        let traj = integrate_geodesic(&mut connection, a, v, steps)?;
        let end = traj.last().expect("non-empty trajectory");
        let r = DVector::from_iterator(d, end.iter().zip(b).map(|(x, y)| x - y));
        Ok((traj, r))
    };
    let mut v: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let no_conv = |iterations, residual| Error::ShootingNoConvergence { iterations, residual };
    // The straight-line guess can overshoot a chart boundary; shorten it
    // until the trajectory stays inside.
    let mut first = residual(&v);
    for _ in 0..40 {
        if first.is_ok() {
            break;
        }
        v.iter_mut().for_each(|x| *x *= 0.5);
        first = residual(&v);
    }
    let (mut traj, mut r) = first.map_err(|_| no_conv(0, f64::INFINITY))?;
    for iter in 0..SHOOTING_MAX_ITER {
        let norm = r.amax();
        if norm <= SHOOTING_TOL {
            return Ok(traj);
        }
        let mut jac = DMatrix::zeros(d, d);
        for c in 0..d {
            let step = 1e-7 * v[c].abs().max(1.0);
            let mut vp = v.clone();
            vp[c] += step;
            let mut vm = v.clone();
            vm[c] -= step;
            let (_, rp) = residual(&vp).map_err(|_| no_conv(iter, norm))?;
            let (_, rm) = residual(&vm).map_err(|_| no_conv(iter, norm))?;
            jac.set_column(c, &((rp - rm) / (2.0 * step)));
        }
        let delta = jac.lu().solve(&r).ok_or_else(|| no_conv(iter, norm))?;
        let mut damping = 1.0;
        let mut accepted = false;
        while damping > 1e-4 {
            let trial: Vec<f64> = v.iter().zip(delta.iter()).map(|(x, dx)| x - damping * dx).collect();
            if let Ok((t, rt)) = residual(&trial) {
                if rt.amax() < norm {
                    v = trial;
                    traj = t;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        if !accepted {
            if norm <= SHOOTING_ACCEPT {
                return Ok(traj);
            }
            return Err(no_conv(iter + 1, norm));
        }
    }
    let norm = r.amax();
    if norm <= SHOOTING_ACCEPT {
        Ok(traj)
    } else {
        Err(no_conv(SHOOTING_MAX_ITER, norm))
    }
}

/// Geodesic from `a` to `b` returned in `chart` with `samples` points.
///
/// `alpha = 1` is the straight segment in the natural chart, `alpha = -1`
/// the straight segment in the mean chart, and `alpha = 0` the Fisher–Rao
/// geodesic obtained by shooting in `chart`.
pub fn geodesic(
    family: &DistributionFamily,
    chart: Chart,
    a: &ParameterPoint,
    b: &ParameterPoint,
    alpha: f64,
    samples: usize,
) -> Result<ParamPath> {
    if !family.charts().contains(&chart) {
        return Err(Error::invalid("chart", format!("{chart} is not a chart of {}", family.name())));
    }
    if samples < 2 {
        return Err(Error::invalid("samples", "a path needs at least two samples"));
    }
    family.validate(a)?;
    family.validate(b)?;
    let flat_chart = if alpha == 1.0 {
        Some(Chart::Natural)
    } else if alpha == -1.0 {
        Some(Chart::Mean)
    } else if alpha == 0.0 {
        None
    } else {
        return Err(Error::invalid("alpha", format!("must be -1, 0 or 1 (got {alpha})")));
    };
    match flat_chart {
        Some(flat) => {
            let pa = family.convert(a, flat)?;
            let pb = family.convert(b, flat)?;
            ParamPath::straight(&pa, &pb, samples)?.to_chart(family, chart)
        }
        None => {
            let pa = family.convert(a, chart)?;
            let pb = family.convert(b, chart)?;
            if pa.coords() == pb.coords() {
                return ParamPath::new(chart, vec![pa.coords().to_vec(); samples]);
            }
            let traj = shoot_geodesic(
                |x| christoffel(family, &ParameterPoint::new(chart, x.to_vec()), 0.0).map(|g| g.components),
                pa.coords(),
                pb.coords(),
                samples - 1,
            )?;
            ParamPath::new(chart, traj)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infogeo::QuadraticPotential;
    use approx::assert_relative_eq;

    fn fisher_distance_bernoulli(a: f64, b: f64) -> f64 {
        2.0 * (b.sqrt().asin() - a.sqrt().asin()).abs()
    }

    #[test]
    fn path_validation() {
        assert!(ParamPath::new(Chart::Mean, vec![vec![0.5]]).is_err());
        assert!(ParamPath::new(Chart::Mean, vec![vec![0.5], vec![0.1, 0.2]]).is_err());
        assert!(ParamPath::new(Chart::Mean, vec![vec![0.5], vec![f64::NAN]]).is_err());
    }

    #[test]
    fn constant_paths_have_zero_length() {
        let b = DistributionFamily::Bernoulli;
        let p = ParamPath::new(Chart::Mean, vec![vec![0.3]; 5]).unwrap();
        assert_eq!(primal_length(&p, &b).unwrap(), 0.0);
        assert_eq!(divergence_length(&p, &b).unwrap(), 0.0);
        let q = ParamPath::new(Chart::Natural, vec![vec![0.3]; 5]).unwrap();
        assert_eq!(dual_length(&q, &b).unwrap(), 0.0);
    }

    #[test]
    fn bernoulli_straight_mean_path() {
        let b = DistributionFamily::Bernoulli;
        let p = ParamPath::straight(&ParameterPoint::mean(vec![0.25]), &ParameterPoint::mean(vec![0.75]), 2001).unwrap();
        let l = primal_length(&p, &b).unwrap();
        assert_relative_eq!(l, fisher_distance_bernoulli(0.25, 0.75), epsilon = 1e-6);
        assert_relative_eq!(l, std::f64::consts::FRAC_PI_3, epsilon = 1e-6);
    }

    #[test]
    fn gaussian_mean_shift_path() {
        let g = DistributionFamily::Gaussian;
        let p = ParamPath::straight(&ParameterPoint::raw(vec![0.0, 1.0]), &ParameterPoint::raw(vec![1.0, 1.0]), 11).unwrap();
        assert_relative_eq!(primal_length(&p, &g).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(divergence_length(&p, &g).unwrap(), 2.0_f64.sqrt(), epsilon = 1e-7);
    }

    #[test]
    fn self_dual_potential_has_equal_lengths() {
        let q = QuadraticPotential { dim: 2 };
        let p = ParamPath::from_fn(Chart::Natural, 101, |t| vec![t.cos(), t * t]).unwrap();
        let primal = arc_length(&p, |x| q.hess_psi(x)).unwrap();
        assert_relative_eq!(dual_length(&p, &q).unwrap(), primal, epsilon = 1e-12);
    }

    #[test]
    fn dual_length_matches_mapped_primal() {
        let b = DistributionFamily::Bernoulli;
        let p = ParamPath::straight(&ParameterPoint::natural(vec![-1.0]), &ParameterPoint::natural(vec![1.0]), 2001).unwrap();
        let mapped = p.to_chart(&b, Chart::Mean).unwrap();
        let dual = dual_length(&p, &b).unwrap();
        assert_relative_eq!(dual, primal_length(&mapped, &b).unwrap(), epsilon = 1e-6);
    }

    #[test]
    fn scalar_harmonic_mean() {
        let p = ParamPath::from_fn(Chart::Natural, 3, |t| vec![t]).unwrap();
        let one = |_: &[f64]| Ok(DMatrix::from_element(1, 1, 1.0));
        let four = |_: &[f64]| Ok(DMatrix::from_element(1, 1, 4.0));
        assert_relative_eq!(harmonic_length(&p, one, four).unwrap(), (8.0_f64 / 5.0).sqrt(), epsilon = 1e-14);
        let zero = |_: &[f64]| Ok(DMatrix::from_element(1, 1, 0.0));
        assert_eq!(harmonic_length(&p, one, zero), Err(Error::SingularMetric));
    }

    #[test]
    fn alternate_estimator_on_gaussian_shift() {
        let g = DistributionFamily::Gaussian;
        let p = ParamPath::straight(&ParameterPoint::raw(vec![0.0, 1.0]), &ParameterPoint::raw(vec![1.0, 1.0]), 201).unwrap();
        let alt = divergence_length_alternate(&p, &g).unwrap();
        assert_relative_eq!(alt, divergence_length(&p, &g).unwrap(), epsilon = 1e-3);
    }

    #[test]
    fn flat_geodesics_differ() {
        let b = DistributionFamily::Bernoulli;
        let (a, c) = (ParameterPoint::mean(vec![0.2]), ParameterPoint::mean(vec![0.8]));
        let e = geodesic(&b, Chart::Mean, &a, &c, 1.0, 101).unwrap();
        let m = geodesic(&b, Chart::Mean, &a, &c, -1.0, 101).unwrap();
        let gap = e
            .samples()
            .iter()
            .zip(m.samples())
            .map(|(x, y)| (x[0] - y[0]).abs())
            .fold(0.0, f64::max);
        assert!(gap > 0.01, "gap {gap}");
        assert_relative_eq!(e.end().coords()[0], 0.8, epsilon = 1e-14);
    }

    #[test]
    fn levi_civita_geodesic_length() {
        let b = DistributionFamily::Bernoulli;
        let (a, c) = (ParameterPoint::mean(vec![0.2]), ParameterPoint::mean(vec![0.8]));
        let path = geodesic(&b, Chart::Mean, &a, &c, 0.0, 401).unwrap();
        assert_relative_eq!(path.end().coords()[0], 0.8, epsilon = 1e-9);
        let l = primal_length(&path, &b).unwrap();
        assert_relative_eq!(l, fisher_distance_bernoulli(0.2, 0.8), epsilon = 1e-5);
    }

    #[test]
    fn coincident_endpoints() {
        let b = DistributionFamily::Bernoulli;
        let a = ParameterPoint::mean(vec![0.4]);
        for alpha in [-1.0, 0.0, 1.0] {
            let p = geodesic(&b, Chart::Mean, &a, &a, alpha, 9).unwrap();
            assert!(p.samples().iter().all(|s| (s[0] - 0.4).abs() < 1e-15));
        }
        assert!(geodesic(&b, Chart::Mean, &a, &a, 0.5, 9).is_err());
    }
}
