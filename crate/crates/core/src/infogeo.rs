//! Dual-affine geometry of statistical manifolds: Fisher metrics, Legendre
//! duality, Bregman and Kullback–Leibler divergences, the triangle gap, the
//! α-family of connections, and rigid frame changes of metrics and
//! connections.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::distributions::{Chart, DistributionFamily, ParameterPoint, Tensor3};
use crate::error::{check_dim, Error, Result};

/// A convex potential `ψ` on the primal chart together with its Legendre
/// dual `φ` on the dual chart.
pub trait PotentialPair {
    fn dim(&self) -> usize;
    fn psi(&self, theta: &[f64]) -> Result<f64>;
    fn grad_psi(&self, theta: &[f64]) -> Result<DVector<f64>>;
    fn hess_psi(&self, theta: &[f64]) -> Result<DMatrix<f64>>;
    fn phi(&self, eta: &[f64]) -> Result<f64>;
    fn grad_phi(&self, eta: &[f64]) -> Result<DVector<f64>>;
    fn hess_phi(&self, eta: &[f64]) -> Result<DMatrix<f64>>;
}

impl PotentialPair for DistributionFamily {
    fn dim(&self) -> usize {
        self.dimension()
    }

    fn psi(&self, theta: &[f64]) -> Result<f64> {
        self.log_partition(theta)
    }

    fn grad_psi(&self, theta: &[f64]) -> Result<DVector<f64>> {
        self.log_partition_gradient(theta)
    }

    fn hess_psi(&self, theta: &[f64]) -> Result<DMatrix<f64>> {
        self.log_partition_hessian(theta)
    }

    fn phi(&self, eta: &[f64]) -> Result<f64> {
        self.dual_potential(eta)
    }

    fn grad_phi(&self, eta: &[f64]) -> Result<DVector<f64>> {
        self.dual_potential_gradient(eta)
    }

    fn hess_phi(&self, eta: &[f64]) -> Result<DMatrix<f64>> {
        self.dual_potential_hessian(eta)
    }
}

/// The self-dual potential `ψ(θ) = ½|θ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticPotential {
    pub dim: usize,
}

impl QuadraticPotential {
    fn check(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())
    }
}

impl PotentialPair for QuadraticPotential {
    fn dim(&self) -> usize {
        self.dim
    }

    fn psi(&self, theta: &[f64]) -> Result<f64> {
        self.check(theta)?;
        Ok(0.5 * theta.iter().map(|t| t * t).sum::<f64>())
    }

    fn grad_psi(&self, theta: &[f64]) -> Result<DVector<f64>> {
        self.check(theta)?;
        Ok(DVector::from_column_slice(theta))
    }

    fn hess_psi(&self, theta: &[f64]) -> Result<DMatrix<f64>> {
        self.check(theta)?;
        Ok(DMatrix::identity(self.dim, self.dim))
    }

    fn phi(&self, eta: &[f64]) -> Result<f64> {
        self.psi(eta)
    }

    fn grad_phi(&self, eta: &[f64]) -> Result<DVector<f64>> {
        self.grad_psi(eta)
    }

    fn hess_phi(&self, eta: &[f64]) -> Result<DMatrix<f64>> {
        self.hess_psi(eta)
    }
}

/// Position-dependent symmetric bilinear form in a named chart.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTensor {
    pub chart: Chart,
    pub at: ParameterPoint,
    pub components: DMatrix<f64>,
}

impl MetricTensor {
    pub fn dim(&self) -> usize {
        self.components.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.components.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn is_positive_definite(&self) -> bool {
        Cholesky::new(self.components.clone()).is_some()
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.components - self.components.transpose()).amax()
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let u = DVector::from_column_slice(u);
        let v = DVector::from_column_slice(v);
        u.dot(&(&self.components * v))
    }
}

/// Fisher information `E[∂ᵢ log p ∂ⱼ log p]` in the chart of `point`: exact
/// outcome sums for discrete families, Gauss–Hermite quadrature for the
/// Gaussian.
pub fn fisher_metric(family: &DistributionFamily, point: &ParameterPoint) -> Result<MetricTensor> {
    let d = family.dimension();
    let mut g = DMatrix::<f64>::zeros(d, d);
    for (x, w) in family.expectation_nodes(point)? {
        let s = family.score(point, x)?;
        g += w * &s * s.transpose();
    }
    let g = 0.5 * (&g + g.transpose());
    Ok(MetricTensor {
        chart: point.chart(),
        at: point.clone(),
        components: g,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Legendre transform at `theta`: returns `η = ∇ψ(θ)` and
/// `φ(η) = <θ, η> - ψ(θ)`.
pub fn legendre_dual<P: PotentialPair + ?Sized>(
    pot: &P,
    theta: &ParameterPoint,
) -> Result<(ParameterPoint, f64)> {
    theta.expect_chart(Chart::Natural)?;
    check_dim(pot.dim(), theta.dim())?;
    if Cholesky::new(pot.hess_psi(theta.coords())?).is_none() {
        return Err(Error::NotConvex);
    }
    let eta = pot.grad_psi(theta.coords())?;
    let phi = dot(theta.coords(), eta.as_slice()) - pot.psi(theta.coords())?;
    Ok((ParameterPoint::mean(eta.as_slice().to_vec()), phi))
}

/// Bregman divergence `ψ(θ) + φ(η) - <θ, η>`, which equals
/// `KL(p_η || p_θ)` on exponential families.
pub fn bregman_divergence<P: PotentialPair + ?Sized>(
    pot: &P,
    theta: &ParameterPoint,
    eta: &ParameterPoint,
) -> Result<f64> {
    theta.expect_chart(Chart::Natural)?;
    eta.expect_chart(Chart::Mean)?;
    check_dim(pot.dim(), theta.dim())?;
    check_dim(pot.dim(), eta.dim())?;
    Ok(pot.psi(theta.coords())? + pot.phi(eta.coords())? - dot(theta.coords(), eta.coords()))
}

/// `KL(P || Q) = E_P[log p - log q]`, evaluated directly from the
/// log-densities. Returns `+∞` when `Q` vanishes where `P` does not.
pub fn kl_divergence(
    family: &DistributionFamily,
    p: &ParameterPoint,
    q: &ParameterPoint,
) -> Result<f64> {
    family.validate(q)?;
    let mut total = 0.0;
    for (x, w) in family.expectation_nodes(p)? {
        if w == 0.0 {
            continue;
        }
        let lq = family.log_density(q, x)?;
        if lq == f64::NEG_INFINITY {
            return Ok(f64::INFINITY);
        }
        total += w * (family.log_density(p, x)? - lq);
    }
    Ok(total.max(0.0))
}

/// Signed triangle excess `δ = KL(P||R) + KL(R||Q) - KL(P||Q)`.
pub fn pythagorean_gap(
    family: &DistributionFamily,
    p: &ParameterPoint,
    r: &ParameterPoint,
    q: &ParameterPoint,
) -> Result<f64> {
    Ok(kl_divergence(family, p, r)? + kl_divergence(family, r, q)? - kl_divergence(family, p, q)?)
}

/// Fisher inner product at `R` between the arriving m-geodesic velocity
/// (from `P`, straight in the mean chart) and the departing e-geodesic
/// velocity (towards `Q`, straight in the natural chart). Zero exactly in
/// the Pythagorean configuration.
pub fn pythagorean_orthogonality(
    family: &DistributionFamily,
    p: &ParameterPoint,
    r: &ParameterPoint,
    q: &ParameterPoint,
) -> Result<f64> {
    let eta_p = family.convert(p, Chart::Mean)?;
    let eta_r = family.convert(r, Chart::Mean)?;
    let th_r = family.convert(r, Chart::Natural)?;
    let th_q = family.convert(q, Chart::Natural)?;
    let m_velocity = DVector::from_iterator(
        family.dimension(),
        eta_r.coords().iter().zip(eta_p.coords()).map(|(a, b)| a - b),
    );
    let e_velocity = DVector::from_iterator(
        family.dimension(),
        th_q.coords().iter().zip(th_r.coords()).map(|(a, b)| a - b),
    );
    // e-velocity pushed into mean coordinates through dη/dθ = ∇²ψ.
    let e_in_mean = family.hess_psi(th_r.coords())? * e_velocity;
    let g_mean = family.hess_phi(eta_r.coords())?;
    Ok(m_velocity.dot(&(g_mean * e_in_mean)))
}

/// Primal and dual metrics `g = ∇²ψ(θ)` and `g* = ∇²φ(η)` at `η = ∇ψ(θ)`.
pub fn dual_metrics<P: PotentialPair + ?Sized>(
    pot: &P,
    theta: &ParameterPoint,
) -> Result<(MetricTensor, MetricTensor)> {
    let (eta, _) = legendre_dual(pot, theta)?;
    let g = pot.hess_psi(theta.coords())?;
    let g_star = pot.hess_phi(eta.coords())?;
    if Cholesky::new(g_star.clone()).is_none() {
        return Err(Error::NotConvex);
    }
    Ok((
        MetricTensor {
            chart: Chart::Natural,
            at: theta.clone(),
            components: g,
        },
        MetricTensor {
            chart: Chart::Mean,
            at: eta,
            components: g_star,
        },
    ))
}

/// Connection coefficients `Γ^i_{jk}` of the α-connection, stored at
/// `[i][j][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelArray {
    pub chart: Chart,
    pub at: ParameterPoint,
    pub alpha: f64,
    pub components: Tensor3,
}

impl ChristoffelArray {
    pub fn dim(&self) -> usize {
        self.components.dim()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.components.get(i, j, k)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.max_abs()
    }

    /// Largest violation of symmetry in the lower indices.
    pub fn torsion(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((self.get(i, j, k) - self.get(i, k, j)).abs());
                }
            }
        }
        worst
    }

    /// Geodesic acceleration `-Γ^i_{jk} vʲ vᵏ`.
    pub fn acceleration(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut a = 0.0;
                for j in 0..d {
                    for k in 0..d {
                        a -= self.get(i, j, k) * v[j] * v[k];
                    }
                }
                a
            })
            .collect()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::invalid("alpha", format!("must lie in [-1, 1] (got {alpha})")))
    }
}

/// Lowered coefficients `Γ_{ij,k} = E[(∂ᵢ∂ⱼℓ + (1-α)/2 ∂ᵢℓ ∂ⱼℓ) ∂ₖℓ]`,
/// stored at `[i][j][k]`.
pub fn christoffel_first_kind(
    family: &DistributionFamily,
    point: &ParameterPoint,
    alpha: f64,
) -> Result<Tensor3> {
    check_alpha(alpha)?;
    let d = family.dimension();
    let c = 0.5 * (1.0 - alpha);
    let mut t = Tensor3::zeros(d);
    for (x, w) in family.expectation_nodes(point)? {
        let s = family.score(point, x)?;
        let h = family.log_density_hessian(point, x)?;
        for i in 0..d {
            for j in 0..d {
                let a = h[(i, j)] + c * s[i] * s[j];
                for k in 0..d {
                    t.add(i, j, k, w * a * s[k]);
                }
            }
        }
    }
    Ok(t)
}

/// α-connection coefficients (α = 1 exponential, α = -1 mixture, α = 0
/// Levi-Civita of the Fisher metric) in the chart of `point`.
pub fn christoffel(
    family: &DistributionFamily,
    point: &ParameterPoint,
    alpha: f64,
) -> Result<ChristoffelArray> {
    let lowered = christoffel_first_kind(family, point, alpha)?;
    let g = fisher_metric(family, point)?;
    let g_inv = g
        .components
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::BoundaryParameter("degenerate Fisher metric".into()))?;
    let d = family.dimension();
    let mut raised = Tensor3::zeros(d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let v = (0..d).map(|l| g_inv[(i, l)] * lowered.get(j, k, l)).sum();
                raised.set(i, j, k, v);
            }
        }
    }
    Ok(ChristoffelArray {
        chart: point.chart(),
        at: point.clone(),
        alpha,
        components: raised,
    })
}

/// Rotation by `angle` in the coordinate plane `(i, j)` of `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationMap {
    dim: usize,
    plane: (usize, usize),
    angle: f64,
    matrix: DMatrix<f64>,
}

impl RotationMap {
    pub fn new(dim: usize, i: usize, j: usize, angle: f64) -> Result<Self> {
        if i == j || i >= dim || j >= dim {
            return Err(Error::invalid(
                "plane",
                format!("({i}, {j}) is not a coordinate plane of dimension {dim}"),
            ));
        }
        if !angle.is_finite() {
            return Err(Error::invalid("angle", "must be finite"));
        }
        let mut m = DMatrix::identity(dim, dim);
        let (s, c) = angle.sin_cos();
        m[(i, i)] = c;
        m[(j, j)] = c;
        m[(i, j)] = -s;
        m[(j, i)] = s;
        Ok(RotationMap {
            dim,
            plane: (i, j),
            angle,
            matrix: m,
        })
    }

    /// The 2×2 rotation `[[cos, -sin], [sin, cos]]`.
    pub fn planar(angle: f64) -> Self {
        Self::new(2, 0, 1, angle).expect("valid plane")
    }

    pub fn identity(dim: usize) -> Self {
        RotationMap {
            dim,
            plane: (0, 1.min(dim.saturating_sub(1))),
            angle: 0.0,
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn plane(&self) -> (usize, usize) {
        self.plane
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `max |RᵀR - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.matrix.transpose() * &self.matrix - DMatrix::identity(self.dim, self.dim)).amax()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(x)).as_slice().to_vec()
    }

    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        (self.matrix.transpose() * DVector::from_column_slice(x))
            .as_slice()
            .to_vec()
    }
}

/// Metric in rotated coordinates: `g̃ᵢⱼ = Rᵏᵢ Rˡⱼ gₖₗ`, i.e. `RᵀgR`.
///
/// Old and new coordinates are related by `x = R x̃`.
pub fn transform_metric(g: &MetricTensor, r: &RotationMap) -> Result<MetricTensor> {
    check_dim(g.dim(), r.dim())?;
    let m = r.matrix();
    Ok(MetricTensor {
        chart: g.chart,
        at: ParameterPoint::new(g.at.chart(), r.apply_transpose(g.at.coords())),
        components: m.transpose() * &g.components * m,
    })
}

/// Coordinate change `x = J(x̃) x̃` used to transport a connection. A rigid
/// rotation has constant Jacobian; a varying frame must supply
/// `∂J/∂x̃ᵏ` for each `k`.
#[derive(Debug, Clone)]
pub enum FrameMap {
    Constant(RotationMap),
    Varying {
        jacobian: DMatrix<f64>,
        derivatives: Option<Vec<DMatrix<f64>>>,
    },
}

/// Connection under a constant rotation; the inhomogeneous term vanishes.
pub fn transform_christoffel(gamma: &ChristoffelArray, r: &RotationMap) -> Result<ChristoffelArray> {
    transform_christoffel_with(gamma, &FrameMap::Constant(r.clone()))
}

/// `Γ̃ⁱⱼₖ = (J⁻¹)ⁱₘ Jⁿⱼ Jᵖₖ Γᵐₙₚ + (J⁻¹)ⁱₘ ∂ₖJᵐⱼ`.
pub fn transform_christoffel_with(
    gamma: &ChristoffelArray,
    map: &FrameMap,
) -> Result<ChristoffelArray> {
    let d = gamma.dim();
    let (jac, derivs) = match map {
        FrameMap::Constant(r) => (r.matrix().clone(), None),
        FrameMap::Varying {
            jacobian,
            derivatives,
        } => match derivatives {
            Some(ds) => {
                check_dim(d, ds.len())?;
                (jacobian.clone(), Some(ds))
            }
            None => return Err(Error::MissingDerivativeField),
        },
    };
    check_dim(d, jac.nrows())?;
    check_dim(d, jac.ncols())?;
    let inv = jac
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::invalid("map", "frame Jacobian is singular"))?;
    let mut out = Tensor3::zeros(d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let mut v = 0.0;
                for m in 0..d {
                    if inv[(i, m)] == 0.0 {
                        continue;
                    }
                    let mut inner = 0.0;
                    for n in 0..d {
                        for p in 0..d {
                            inner += jac[(n, j)] * jac[(p, k)] * gamma.get(m, n, p);
                        }
                    }
                    if let Some(ds) = derivs {
                        inner += ds[k][(m, j)];
                    }
                    v += inv[(i, m)] * inner;
                }
                out.set(i, j, k, v);
            }
        }
    }
    let at = (&inv * DVector::from_column_slice(gamma.at.coords()))
        .as_slice()
        .to_vec();
    Ok(ChristoffelArray {
        chart: gamma.chart,
        at: ParameterPoint::new(gamma.at.chart(), at),
        alpha: gamma.alpha,
        components: out,
    })
}
