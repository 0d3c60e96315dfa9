//! Finite-dimensional quantum states: Bloch parametrization, density
//! matrices, subsystem rotations, Schmidt decomposition and the entanglement
//! and coherence measures built on them.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::infogeo::RotationMap;
use crate::numeric::trapezoid;

const NORM_TOL: f64 = 1e-12;

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

fn check_normalized(amps: &[Complex64]) -> Result<()> {
    let n = norm_sqr(amps);
    if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

fn normalize(mut amps: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let n = norm_sqr(&amps).sqrt();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::NotNormalized(n * n));
    }
    for a in &mut amps {
        *a /= n;
    }
    Ok(amps)
}

/// Argument with `arg(0) = 0`.
fn arg0(z: Complex64) -> f64 {
    if z == Complex64::new(0.0, 0.0) {
        0.0
    } else {
        z.arg()
    }
}

/// Normalized state vector of a `d`-level system.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::invalid("state", "dimension must be at least 2"));
        }
        check_normalized(&amplitudes)?;
        Ok(PureState { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::invalid("state", "dimension must be at least 2"));
        }
        Ok(PureState {
            amplitudes: normalize(amplitudes)?,
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::invalid("basis", format!("index {k} out of range for dimension {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn density(&self) -> DensityMatrix {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityMatrix { components: m }
    }
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    components: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(components: DMatrix<Complex64>) -> Result<Self> {
        if !components.is_square() || components.nrows() < 2 {
            return Err(Error::invalid("density", "must be a square matrix of size at least 2"));
        }
        let herm = (&components - components.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > NORM_TOL {
            return Err(Error::invalid("density", format!("not Hermitian (defect {herm:e})")));
        }
        let tr = components.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::invalid("density", format!("trace {tr} is not 1")));
        }
        let rho = DensityMatrix { components };
        if let Some(&min) = rho.eigenvalues().first() {
            if min < -1e-10 {
                return Err(Error::invalid("density", format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(rho)
    }

    pub fn components(&self) -> &DMatrix<Complex64> {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.nrows()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.components.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.components * &self.components).trace().re
    }

    /// von Neumann entropy in nats.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues().into_iter().filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum()
    }

    /// Bloch vector `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` of a qubit density matrix.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        check_dim(2, self.dim())?;
        let m = &self.components;
        Ok([2.0 * m[(1, 0)].re, 2.0 * m[(1, 0)].im, (m[(0, 0)] - m[(1, 1)]).re])
    }
}

/// Point of the Bloch ball with its polar angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r: [f64; 3],
    pub theta: f64,
    pub phi: f64,
}

impl BlochVector {
    pub fn from_cartesian(r: [f64; 3]) -> Result<Self> {
        let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if !n.is_finite() || n > 1.0 + 1e-12 {
            return Err(Error::invalid("bloch", format!("length {n} exceeds 1")));
        }
        let theta = if n == 0.0 { 0.0 } else { (r[2] / n).clamp(-1.0, 1.0).acos() };
        let phi = r[1].atan2(r[0]).rem_euclid(TAU);
        Ok(BlochVector { r, theta, phi })
    }

    /// Unit vector with the given polar angles.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        BlochVector {
            r: [st * cp, st * sp, ct],
            theta,
            phi: phi.rem_euclid(TAU),
        }
    }

    pub fn norm(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Bloch angles of a qubit state `α|0⟩ + β|1⟩`: `θ = 2 arccos|α|`,
/// `φ = arg β - arg α`.
pub fn bloch_from_state(psi: &PureState) -> Result<BlochVector> {
    check_dim(2, psi.dim())?;
    check_normalized(psi.amplitudes())?;
    let (a, b) = (psi.amplitudes[0], psi.amplitudes[1]);
    let theta = 2.0 * a.norm().min(1.0).acos();
    let phi = arg0(b) - arg0(a);
    Ok(BlochVector::from_angles(theta, phi))
}

/// `ρ = ½ (I + r·σ)`.
pub fn density_from_bloch(b: &BlochVector) -> Result<DensityMatrix> {
    let n = b.norm();
    if !n.is_finite() || n > 1.0 + 1e-12 {
        return Err(Error::invalid("bloch", format!("length {n} exceeds 1")));
    }
    let [x, y, z] = b.r;
    let c = |re: f64, im: f64| Complex64::new(0.5 * re, 0.5 * im);
    Ok(DensityMatrix {
        components: DMatrix::from_row_slice(2, 2, &[c(1.0 + z, 0.0), c(x, -y), c(x, y), c(1.0 - z, 0.0)]),
    })
}

/// Pure state of `A ⊗ B`, amplitudes stored row-major at `i * dim_b + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<Complex64>,
}

impl BipartiteState {
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if dim_a < 2 || dim_b < 2 {
            return Err(Error::invalid("state", "subsystem dimensions must be at least 2"));
        }
        check_dim(dim_a * dim_b, amplitudes.len())?;
        check_normalized(&amplitudes)?;
        Ok(BipartiteState { dim_a, dim_b, amplitudes })
    }

    pub fn normalized(dim_a: usize, dim_b: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(dim_a * dim_b, amplitudes.len())?;
        Self::new(dim_a, dim_b, normalize(amplitudes)?)
    }

    pub fn from_real(dim_a: usize, dim_b: usize, amplitudes: &[f64]) -> Result<Self> {
        Self::new(dim_a, dim_b, amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn product(a: &PureState, b: &PureState) -> Self {
        let amplitudes = a
            .amplitudes
            .iter()
            .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
            .collect();
        BipartiteState {
            dim_a: a.dim(),
            dim_b: b.dim(),
            amplitudes,
        }
    }

    /// `(|00⟩ + |11⟩) / √2`.
    pub fn bell() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real(2, 2, &[s, 0.0, 0.0, s]).expect("normalized")
    }

    /// `(|01⟩ - |10⟩) / √2`.
    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real(2, 2, &[0.0, s, -s, 0.0]).expect("normalized")
    }

    /// `√p |00⟩ + √(1-p) |11⟩`.
    pub fn partially_entangled(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid("p", format!("must lie in [0, 1] (got {p})")));
        }
        Self::normalized(
            2,
            2,
            [p.sqrt(), 0.0, 0.0, (1.0 - p).sqrt()].iter().map(|&a| Complex64::new(a, 0.0)).collect(),
        )
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize, k: usize) -> Complex64 {
        self.amplitudes[i * self.dim_b + k]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// The `dim_a × dim_b` coefficient matrix.
    pub fn coefficient_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim_a, self.dim_b, &self.amplitudes)
    }

    /// Reduced density operator of subsystem A.
    pub fn reduced_density_a(&self) -> DensityMatrix {
        let m = self.coefficient_matrix();
        DensityMatrix {
            components: &m * m.adjoint(),
        }
    }

    /// Reduced density operator of subsystem B.
    pub fn reduced_density_b(&self) -> DensityMatrix {
        let m = self.coefficient_matrix();
        DensityMatrix {
            components: (m.adjoint() * &m).transpose(),
        }
    }
}

fn check_rotation_on_b(psi: &BipartiteState, r: &RotationMap) -> Result<()> {
    check_dim(psi.dim_b, r.dim())
}

fn apply_on_b(psi: &BipartiteState, r: &RotationMap, row: usize, out: &mut [Complex64]) {
    let m = r.matrix();
    let db = psi.dim_b;
    for k in 0..db {
        out[row * db + k] = (0..db).map(|l| psi.amplitude(row, l) * m[(k, l)]).sum();
    }
}

/// Applies `I ⊗ R`. Local, so the Schmidt spectrum is unchanged.
pub fn rotate_subsystem_local(psi: &BipartiteState, r: &RotationMap) -> Result<BipartiteState> {
    check_rotation_on_b(psi, r)?;
    let mut out = psi.amplitudes.clone();
    for i in 0..psi.dim_a {
        apply_on_b(psi, r, i, &mut out);
    }
    Ok(BipartiteState {
        amplitudes: out,
        ..psi.clone()
    })
}

/// Applies `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ R` to a state whose first factor is a
/// qubit.
pub fn rotate_subsystem_controlled(psi: &BipartiteState, r: &RotationMap) -> Result<BipartiteState> {
    check_dim(2, psi.dim_a)?;
    check_rotation_on_b(psi, r)?;
    let mut out = psi.amplitudes.clone();
    apply_on_b(psi, r, 1, &mut out);
    Ok(BipartiteState {
        amplitudes: out,
        ..psi.clone()
    })
}

/// `(|0⟩ + |1⟩)/√2 ⊗ |0⟩` after a controlled planar rotation by `theta`.
pub fn controlled_rotation_benchmark(theta: f64) -> Result<BipartiteState> {
    let plus = PureState::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2])?;
    let zero = PureState::basis(2, 0)?;
    rotate_subsystem_controlled(&BipartiteState::product(&plus, &zero), &RotationMap::planar(theta))
}

/// `Ψ = Σ λᵢ |uᵢ⟩ ⊗ |vᵢ⟩` with `λ` descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c > tol).count()
    }

    /// Amplitudes `Σ λᵢ uᵢ ⊗ vᵢ` in row-major order.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let (da, db) = (self.left[0].len(), self.right[0].len());
        let mut out = vec![Complex64::new(0.0, 0.0); da * db];
        for ((lam, u), v) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for i in 0..da {
                for k in 0..db {
                    out[i * db + k] += *lam * u[i] * v[k];
                }
            }
        }
        out
    }
}

/// Schmidt form from the singular values of the coefficient matrix.
pub fn schmidt(psi: &BipartiteState) -> Result<SchmidtDecomposition> {
    check_normalized(&psi.amplitudes)?;
    let svd = psi.coefficient_matrix().svd(true, true);
    let u = svd.u.as_ref().expect("left vectors requested");
    let vt = svd.v_t.as_ref().expect("right vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    Ok(SchmidtDecomposition {
        coefficients: order.iter().map(|&j| svd.singular_values[j]).collect(),
        left: order.iter().map(|&j| u.column(j).iter().copied().collect()).collect(),
        right: order.iter().map(|&j| vt.row(j).iter().copied().collect()).collect(),
    })
}

/// `S = -Σ λ² ln λ²` in nats; vanishing coefficients contribute nothing.
pub fn entanglement_entropy(s: &SchmidtDecomposition) -> f64 {
    s.coefficients
        .iter()
        .map(|l| l * l)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum::<f64>()
        .max(0.0)
}

/// Displacement `(I - R) x` between a vector and its rotated copy.
pub fn coherence_gap(x: &[f64], r: &RotationMap) -> Result<Vec<f64>> {
    check_dim(r.dim(), x.len())?;
    Ok(x.iter().zip(r.apply(x)).map(|(a, b)| a - b).collect())
}

/// Nonnegative density sampled on a uniform 1-D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    pub start: f64,
    pub spacing: f64,
    pub values: Vec<f64>,
}

impl GridDensity {
    pub fn new(start: f64, spacing: f64, values: Vec<f64>) -> Result<Self> {
        if !(spacing > 0.0) || !start.is_finite() {
            return Err(Error::invalid("grid", "spacing must be positive and start finite"));
        }
        if values.len() < 2 {
            return Err(Error::invalid("grid", "need at least two samples"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("density", "values must be finite and nonnegative"));
        }
        Ok(GridDensity { start, spacing, values })
    }

    /// Samples `f` at `n` points spanning `[a, b]`.
    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(Error::invalid("grid", "need b > a and at least two samples"));
        }
        let h = (b - a) / (n - 1) as f64;
        Self::new(a, h, (0..n).map(|i| f(a + i as f64 * h)).collect())
    }
}

/// `∫ p₁ p₂ dx` by the trapezoid rule on the shared grid.
pub fn overlap(p1: &GridDensity, p2: &GridDensity) -> Result<f64> {
    if p1.start != p2.start || p1.spacing != p2.spacing || p1.values.len() != p2.values.len() {
        return Err(Error::invalid("grid", "densities are sampled on different grids"));
    }
    let prod: Vec<f64> = p1.values.iter().zip(&p2.values).map(|(a, b)| a * b).collect();
    Ok(trapezoid(&prod, p1.spacing))
}

/// Splits `n` into `(E, C) = (n sin²θ, n cos²θ)` with `E + C == n` exactly in
/// floating point.
pub fn ec_decomposition(theta: f64, n: f64) -> Result<(f64, f64)> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::invalid("N", format!("must be positive and finite (got {n})")));
    }
    if !theta.is_finite() {
        return Err(Error::invalid("theta", "must be finite"));
    }
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    // The larger share is rounded once; the smaller is recovered from it, and
    // that subtraction is exact because the larger share lies in [n/2, n].
    let small = n * s2.min(c2);
    let large = (n - small).max(0.5 * n);
    let small = n - large;
    Ok(if s2 <= c2 { (small, large) } else { (large, small) })
}
