//! Berry connection, curvature and geometric phase of parametrized state
//! families, with a loop holonomy and a surface flux that can be checked
//! against each other.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::numeric::{fd_step, gauss_legendre_unit, wrap_angle};
use crate::quantum::PureState;

/// Smooth map from parameter space to normalized states.
pub trait StateFamily {
    fn parameter_dim(&self) -> usize;
    fn state(&self, r: &[f64]) -> Result<PureState>;
}

impl<T: StateFamily + ?Sized> StateFamily for &T {
    fn parameter_dim(&self) -> usize {
        (**self).parameter_dim()
    }

    fn state(&self, r: &[f64]) -> Result<PureState> {
        (**self).state(r)
    }
}

impl<T: StateFamily + ?Sized> StateFamily for Box<T> {
    fn parameter_dim(&self) -> usize {
        (**self).parameter_dim()
    }

    fn state(&self, r: &[f64]) -> Result<PureState> {
        (**self).state(r)
    }
}

/// `|n(θ, φ)⟩ = (cos(θ/2), e^{iφ} sin(θ/2))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpinHalf;

impl StateFamily for SpinHalf {
    fn parameter_dim(&self) -> usize {
        2
    }

    fn state(&self, r: &[f64]) -> Result<PureState> {
        check_dim(2, r.len())?;
        let (s, c) = (0.5 * r[0]).sin_cos();
        PureState::new(vec![Complex64::new(c, 0.0), Complex64::from_polar(s, r[1])])
    }
}

/// Three-level family with real amplitudes
/// `(cos a, sin a cos b, sin a sin b)`; its curvature vanishes.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealAmplitude;

impl StateFamily for RealAmplitude {
    fn parameter_dim(&self) -> usize {
        2
    }

    fn state(&self, r: &[f64]) -> Result<PureState> {
        check_dim(2, r.len())?;
        let (sa, ca) = r[0].sin_cos();
        let (sb, cb) = r[1].sin_cos();
        PureState::from_real(&[ca, sa * cb, sa * sb])
    }
}

/// `e^{iα(R)} |n(R)⟩`: the same rays with a different phase convention.
pub struct GaugeShifted<F, G> {
    pub inner: F,
    pub gauge: G,
}

impl<F: StateFamily, G: Fn(&[f64]) -> f64> StateFamily for GaugeShifted<F, G> {
    fn parameter_dim(&self) -> usize {
        self.inner.parameter_dim()
    }

    fn state(&self, r: &[f64]) -> Result<PureState> {
        let phase = Complex64::from_polar(1.0, (self.gauge)(r));
        let amps = self.inner.state(r)?.amplitudes().iter().map(|a| a * phase).collect();
        PureState::new(amps)
    }
}

/// Family restricted to a two-parameter patch `(u, v) ↦ map(u, v)`.
pub struct PulledBack<'a, F: ?Sized> {
    pub family: &'a F,
    pub map: &'a (dyn Fn(f64, f64) -> Vec<f64> + Send + Sync),
}

impl<F: StateFamily + ?Sized> StateFamily for PulledBack<'_, F> {
    fn parameter_dim(&self) -> usize {
        2
    }

    fn state(&self, r: &[f64]) -> Result<PureState> {
        check_dim(2, r.len())?;
        self.family.state(&(self.map)(r[0], r[1]))
    }
}

const DEGENERACY_THRESHOLD: f64 = 1e6;

fn overlap(a: &PureState, b: &PureState) -> Result<Complex64> {
    a.inner(b)
}

/// `A_μ = i⟨n|∂_μ n⟩ = -Im⟨n|∂_μ n⟩`, differentiated by central differences
/// in the family's own phase convention (so the result is gauge dependent).
pub fn berry_connection<F: StateFamily + ?Sized>(f: &F, r: &[f64]) -> Result<Vec<f64>> {
    check_dim(f.parameter_dim(), r.len())?;
    let n = f.state(r)?;
    (0..r.len())
        .map(|mu| {
            let h = fd_step(r[mu]);
            let mut rp = r.to_vec();
            rp[mu] += h;
            let mut rm = r.to_vec();
            rm[mu] -= h;
            let (np, nm) = (f.state(&rp)?, f.state(&rm)?);
            let dn: Vec<Complex64> = np
                .amplitudes()
                .iter()
                .zip(nm.amplitudes())
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect();
            let dn_norm = dn.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !dn_norm.is_finite() || dn_norm > DEGENERACY_THRESHOLD {
                return Err(Error::DegenerateState);
            }
            let z: Complex64 = n.amplitudes().iter().zip(&dn).map(|(a, d)| a.conj() * d).sum();
            // Normalization forces Re⟨n|∂n⟩ = 0; a residue means a broken family.
            if z.re.abs() > 1e-6 * dn_norm.max(1.0) {
                return Err(Error::DegenerateState);
            }
            Ok(-z.im)
        })
        .collect()
}

/// `F_μν` from the phase of the overlap product around a small plaquette
/// centred at `r`, divided by its area. Exactly gauge invariant.
pub fn berry_curvature<F: StateFamily + ?Sized>(f: &F, r: &[f64]) -> Result<DMatrix<f64>> {
    let m = f.parameter_dim();
    check_dim(m, r.len())?;
    let mut out = DMatrix::zeros(m, m);
    for mu in 0..m {
        for nu in mu + 1..m {
            let hm = 1e-4 * r[mu].abs().max(1.0);
            let hn = 1e-4 * r[nu].abs().max(1.0);
            let corner = |a: f64, b: f64| {
                let mut p = r.to_vec();
                p[mu] += a * hm;
                p[nu] += b * hn;
                f.state(&p)
            };
            let c = [
                corner(-0.5, -0.5)?,
                corner(0.5, -0.5)?,
                corner(0.5, 0.5)?,
                corner(-0.5, 0.5)?,
            ];
            let mut prod = Complex64::new(1.0, 0.0);
            for k in 0..4 {
                let o = overlap(&c[k], &c[(k + 1) % 4])?;
                if o.norm() < 0.5 {
                    return Err(Error::DegenerateState);
                }
                prod *= o;
            }
            let v = -prod.arg() / (hm * hn);
            out[(mu, nu)] = v;
            out[(nu, mu)] = -v;
        }
    }
    Ok(out)
}

/// Closed loop `R_0, …, R_{K-1}` in parameter space; the closing segment
/// `R_{K-1} → R_0` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopPath {
    points: Vec<Vec<f64>>,
}

impl LoopPath {
    /// Accepts either the `K` distinct vertices or `K + 1` points whose last
    /// repeats the first.
    pub fn new(mut points: Vec<Vec<f64>>) -> Result<Self> {
        if let (Some(first), Some(last)) = (points.first(), points.last()) {
            if points.len() > 1
                && first.len() == last.len()
                && first.iter().zip(last).all(|(a, b)| (a - b).abs() <= 1e-12)
            {
                points.pop();
            }
        }
        if points.len() < 8 {
            return Err(Error::invalid("segments", "a loop needs at least 8 segments"));
        }
        let d = points[0].len();
        for p in &points {
            check_dim(d, p.len())?;
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("loop", "points must be finite"));
            }
        }
        Ok(LoopPath { points })
    }

    /// Circle of constant polar angle `theta_c`, traversed with increasing
    /// azimuth.
    pub fn latitude(theta_c: f64, segments: usize) -> Result<Self> {
        Self::new(
            (0..segments)
                .map(|j| vec![theta_c, TAU * j as f64 / segments as f64])
                .collect(),
        )
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn segments(&self) -> usize {
        self.points.len()
    }

    pub fn reversed(&self) -> LoopPath {
        let mut points = self.points.clone();
        points[1..].reverse();
        LoopPath { points }
    }
}

/// Geometric phase of a loop: principal value in `(-π, π]`, the unwrapped
/// total from cumulative phase tracking, and the number of extra turns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerryPhase {
    pub principal: f64,
    pub total: f64,
    pub winding: i64,
}

/// Discrete holonomy `γ = -arg Π ⟨n(R_k)|n(R_{k+1})⟩`.
pub fn berry_phase_loop<F: StateFamily + ?Sized>(f: &F, path: &LoopPath) -> Result<BerryPhase> {
    let states = path
        .points()
        .iter()
        .map(|p| {
            check_dim(f.parameter_dim(), p.len())?;
            f.state(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let k = states.len();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut cumulative = 0.0;
    for i in 0..k {
        let o = overlap(&states[i], &states[(i + 1) % k])?;
        if o.norm() < 1e-6 {
            return Err(Error::VanishingOverlap(i));
        }
        let o = o / o.norm();
        cumulative -= o.arg();
        prod *= o;
        prod /= prod.norm();
    }
    let principal = wrap_angle(-prod.arg());
    let winding = ((cumulative - principal) / TAU).round();
    Ok(BerryPhase {
        principal,
        total: principal + TAU * winding,
        winding: winding as i64,
    })
}

type PatchMap = Box<dyn Fn(f64, f64) -> Vec<f64> + Send + Sync>;

/// Two-parameter patch `(u, v) ∈ [0, 1]²` whose edge `u = 1` traces the
/// boundary loop with increasing `v`, plus a tensor Gauss–Legendre rule.
pub struct SurfaceMesh {
    map: PatchMap,
    rule: Vec<(f64, f64)>,
}

impl std::fmt::Debug for SurfaceMesh {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SurfaceMesh").field("order", &self.rule.len()).finish()
    }
}

impl SurfaceMesh {
    pub fn new(map: impl Fn(f64, f64) -> Vec<f64> + Send + Sync + 'static, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::invalid("order", "quadrature order must be at least 2"));
        }
        Ok(SurfaceMesh {
            map: Box::new(map),
            rule: gauss_legendre_unit(order),
        })
    }

    /// Cap `θ ≤ θ_c` around the north pole in `(θ, φ)` coordinates.
    pub fn polar_cap(theta_c: f64, order: usize) -> Result<Self> {
        Self::new(move |u, v| vec![theta_c * u, TAU * v], order)
    }

    /// Complementary cap `θ ≥ θ_c` around the south pole, bounded by the
    /// same latitude traversed the same way.
    pub fn south_cap(theta_c: f64, order: usize) -> Result<Self> {
        Self::new(move |u, v| vec![PI - (PI - theta_c) * u, TAU * v], order)
    }

    pub fn point(&self, u: f64, v: f64) -> Vec<f64> {
        (self.map)(u, v)
    }

    pub fn order(&self) -> usize {
        self.rule.len()
    }

    /// Boundary loop `map(1, j/K)`, `j = 0..K`.
    pub fn boundary(&self, segments: usize) -> Result<LoopPath> {
        LoopPath::new(
            (0..segments)
                .map(|j| self.point(1.0, j as f64 / segments as f64))
                .collect(),
        )
    }

    /// Largest deviation between `path` and the patch boundary sampled at
    /// the same number of segments.
    pub fn boundary_mismatch(&self, path: &LoopPath) -> f64 {
        let k = path.segments();
        path.points()
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let q = self.point(1.0, j as f64 / k as f64);
                if q.len() != p.len() {
                    return f64::INFINITY;
                }
                p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Flux `∫∫ F_uv du dv` of the curvature pulled back to the patch.
pub fn berry_phase_surface<F: StateFamily + ?Sized>(f: &F, mesh: &SurfaceMesh) -> Result<f64> {
    let pulled = PulledBack {
        family: f,
        map: mesh.map.as_ref(),
    };
    let mut total = 0.0;
    for &(u, wu) in &mesh.rule {
        for &(v, wv) in &mesh.rule {
            total += wu * wv * berry_curvature(&pulled, &[u, v])?[(0, 1)];
        }
    }
    Ok(total)
}

/// Loop holonomy and surface flux for a patch whose boundary is `path`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesReport {
    pub loop_phase: BerryPhase,
    pub surface_flux: f64,
    /// `|loop - flux|` reduced modulo 2π.
    pub discrepancy: f64,
}

pub fn stokes_check<F: StateFamily + ?Sized>(f: &F, mesh: &SurfaceMesh, path: &LoopPath) -> Result<StokesReport> {
    let mismatch = mesh.boundary_mismatch(path);
    if !(mismatch <= 1e-10) {
        return Err(Error::MeshBoundaryMismatch(format!("max deviation {mismatch:e}")));
    }
    let loop_phase = berry_phase_loop(f, path)?;
    let surface_flux = berry_phase_surface(f, mesh)?;
    Ok(StokesReport {
        loop_phase,
        surface_flux,
        discrepancy: wrap_angle(loop_phase.principal - surface_flux).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn cap_phase(theta_c: f64) -> f64 {
        -PI * (1.0 - theta_c.cos())
    }

    #[test]
    fn spin_half_connection() {
        for th in [0.3, FRAC_PI_2, 2.5] {
            let a = berry_connection(&SpinHalf, &[th, 0.7]).unwrap();
            assert!(a[0].abs() < 1e-9);
            assert_relative_eq!(a[1], -(0.5 * th).sin().powi(2), epsilon = 1e-9);
        }
        let a = berry_connection(&SpinHalf, &[FRAC_PI_2, 0.0]).unwrap();
        assert_relative_eq!(a[1], -0.5, epsilon = 1e-10);
    }

    #[test]
    fn gauge_shift_moves_connection_only() {
        let shifted = GaugeShifted {
            inner: SpinHalf,
            gauge: |r: &[f64]| r[0],
        };
        let r = [1.1, 0.4];
        let a = berry_connection(&SpinHalf, &r).unwrap();
        let b = berry_connection(&shifted, &r).unwrap();
        assert_relative_eq!(b[0], a[0] - 1.0, epsilon = 1e-9);
        assert_relative_eq!(b[1], a[1], epsilon = 1e-9);
        let f = berry_curvature(&SpinHalf, &r).unwrap();
        let g = berry_curvature(&shifted, &r).unwrap();
        assert!((f - g).amax() < 1e-8);
    }

    #[test]
    fn curvature_examples() {
        let f = berry_curvature(&SpinHalf, &[FRAC_PI_2, 1.0]).unwrap();
        assert_relative_eq!(f[(0, 1)], -0.5, epsilon = 1e-7);
        assert_eq!(f[(1, 0)], -f[(0, 1)]);
        let f = berry_curvature(&SpinHalf, &[0.4, 1.0]).unwrap();
        assert_relative_eq!(f[(0, 1)], -0.5 * 0.4_f64.sin(), epsilon = 1e-7);
        let z = berry_curvature(&RealAmplitude, &[0.7, 0.2]).unwrap();
        assert_eq!(z.amax(), 0.0);
    }

    #[test]
    fn loop_examples() {
        let p = berry_phase_loop(&SpinHalf, &LoopPath::latitude(FRAC_PI_2, 2000).unwrap()).unwrap();
        assert_relative_eq!(p.total, -PI, epsilon = 1e-4);
        assert_relative_eq!(p.principal.abs(), PI, epsilon = 1e-4);
        let p = berry_phase_loop(&SpinHalf, &LoopPath::latitude(FRAC_PI_3, 2000).unwrap()).unwrap();
        assert_relative_eq!(p.principal, -FRAC_PI_2, epsilon = 1e-4);
        let constant = LoopPath::new(vec![vec![0.5, 0.5]; 10]).unwrap();
        assert_eq!(berry_phase_loop(&SpinHalf, &constant).unwrap().principal, 0.0);
    }

    #[test]
    fn loop_validation() {
        assert!(LoopPath::latitude(1.0, 7).is_err());
        let mut pts: Vec<Vec<f64>> = (0..9).map(|j| vec![1.0, j as f64 * 0.1]).collect();
        pts.push(pts[0].clone());
        assert_eq!(LoopPath::new(pts).unwrap().segments(), 9);
        let jump = LoopPath::new((0..8).map(|j| vec![if j == 3 { PI } else { 0.0 }, j as f64 * 0.1]).collect()).unwrap();
        assert_eq!(berry_phase_loop(&SpinHalf, &jump), Err(Error::VanishingOverlap(2)));
    }

    #[test]
    fn multi_winding_loop() {
        // Going round the θ = 2π/3 latitude gives -3π/2: principal π/2, one extra turn down.
        let p = berry_phase_loop(&SpinHalf, &LoopPath::latitude(2.0 * FRAC_PI_3, 4000).unwrap()).unwrap();
        assert_relative_eq!(p.total, cap_phase(2.0 * FRAC_PI_3), epsilon = 1e-4);
        assert_eq!(p.winding, -1);
    }

    #[test]
    fn surface_matches_loop() {
        for tc in [FRAC_PI_3, FRAC_PI_2] {
            let mesh = SurfaceMesh::polar_cap(tc, 24).unwrap();
            let path = LoopPath::latitude(tc, 2000).unwrap();
            let rep = stokes_check(&SpinHalf, &mesh, &path).unwrap();
            assert_relative_eq!(rep.surface_flux, cap_phase(tc), epsilon = 1e-6);
            assert!(rep.discrepancy < 1e-3);
        }
        let zero = SurfaceMesh::polar_cap(0.0, 8).unwrap();
        assert_eq!(berry_phase_surface(&SpinHalf, &zero).unwrap(), 0.0);
    }

    #[test]
    fn complementary_caps_differ_by_full_flux() {
        let tc = 1.2;
        let north = berry_phase_surface(&SpinHalf, &SurfaceMesh::polar_cap(tc, 24).unwrap()).unwrap();
        let south = berry_phase_surface(&SpinHalf, &SurfaceMesh::south_cap(tc, 24).unwrap()).unwrap();
        assert_relative_eq!(north - south, -TAU, epsilon = 1e-6);
    }

    #[test]
    fn mismatched_boundary_is_rejected() {
        let mesh = SurfaceMesh::polar_cap(1.0, 8).unwrap();
        let path = LoopPath::latitude(1.1, 64).unwrap();
        assert!(matches!(
            stokes_check(&SpinHalf, &mesh, &path),
            Err(Error::MeshBoundaryMismatch(_))
        ));
    }
}
