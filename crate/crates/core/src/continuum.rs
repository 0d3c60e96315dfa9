//! Continuum models: a clamped circular membrane under uniform pressure, and
//! a sinusoidal string whose arc length is compared with a compressed
//! approximation.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::numeric::integrate;

/// Axisymmetric membrane `T Δw = p` on a disk of radius `R`, clamped at the
/// rim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneProblem {
    pub tension: f64,
    pub pressure: f64,
    pub radius: f64,
    pub radial_nodes: usize,
}

impl MembraneProblem {
    pub fn new(tension: f64, pressure: f64, radius: f64, radial_nodes: usize) -> Result<Self> {
        if !(tension > 0.0) || !tension.is_finite() {
            return Err(Error::invalid("T", format!("tension must be positive (got {tension})")));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid("R", format!("radius must be positive (got {radius})")));
        }
        if !pressure.is_finite() {
            return Err(Error::invalid("p", "pressure must be finite"));
        }
        if radial_nodes < 16 {
            return Err(Error::invalid("nodes", format!("need at least 16 radial nodes (got {radial_nodes})")));
        }
        Ok(MembraneProblem {
            tension,
            pressure,
            radius,
            radial_nodes,
        })
    }
}

/// Parabolic profile `w(r) = p/(4T) (r² - R²)`.
pub fn membrane_closed_form(prob: &MembraneProblem, r: f64) -> Result<f64> {
    if !(0.0..=prob.radius).contains(&r) {
        return Err(Error::invalid("r", format!("must lie in [0, {}] (got {r})", prob.radius)));
    }
    Ok(prob.pressure / (4.0 * prob.tension) * (r * r - prob.radius * prob.radius))
}

/// Deflection samples at the centre, at every cell centre, and at the rim.
#[derive(Debug, Clone, PartialEq)]
pub struct DeflectionField {
    pub r: Vec<f64>,
    pub w: Vec<f64>,
}

impl DeflectionField {
    /// Largest deviation from the closed-form profile.
    pub fn max_error(&self, prob: &MembraneProblem) -> Result<f64> {
        self.r.iter().zip(&self.w).try_fold(0.0_f64, |m, (&r, &w)| {
            Ok(m.max((w - membrane_closed_form(prob, r)?).abs()))
        })
    }
}

/// Solves a tridiagonal system in place (`lower[0]` and `upper[n-1]` unused).
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 {
        return Err(Error::SingularSystem);
    }
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularSystem);
        }
        c[i] = upper[i] / pivot;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Finite-volume solve of `(1/r)(r w')' = p/T` on `radial_nodes` annular
/// cells. The flux through `r = 0` vanishes; the rim value enters through
/// a ghost cell mirrored about `R`.
pub fn membrane_solve(prob: &MembraneProblem) -> Result<DeflectionField> {
    let n = prob.radial_nodes;
    let h = prob.radius / n as f64;
    let load = prob.pressure / prob.tension;
    let face = |i: usize| i as f64 * h;
    let centre = |i: usize| (i as f64 + 0.5) * h;
    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        let (inner, outer) = (face(i), face(i + 1));
        lower[i] = inner;
        upper[i] = if i + 1 < n { outer } else { 0.0 };
        // Mirrored ghost -w at the rim doubles the outer coefficient.
        diag[i] = -inner - if i + 1 < n { outer } else { 2.0 * outer };
        rhs[i] = load * centre(i) * h * h;
    }
    let cells = thomas(&lower, &diag, &upper, &rhs)?;
    let mut r = Vec::with_capacity(n + 2);
    let mut w = Vec::with_capacity(n + 2);
    r.push(0.0);
    // Even quadratic through the first two centres, evaluated at r = 0.
    w.push((9.0 * cells[0] - cells[1]) / 8.0);
    for (i, &wi) in cells.iter().enumerate() {
        r.push(centre(i));
        w.push(wi);
    }
    r.push(prob.radius);
    w.push(0.0);
    Ok(DeflectionField { r, w })
}

/// Max errors at `radial_nodes` and twice as many, and the observed order
/// `log2(e_n / e_2n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceStudy {
    pub coarse_error: f64,
    pub fine_error: f64,
    pub order: f64,
}

pub fn membrane_convergence(prob: &MembraneProblem) -> Result<ConvergenceStudy> {
    let fine = MembraneProblem {
        radial_nodes: 2 * prob.radial_nodes,
        ..*prob
    };
    let coarse_error = membrane_solve(prob)?.max_error(prob)?;
    let fine_error = membrane_solve(&fine)?.max_error(&fine)?;
    Ok(ConvergenceStudy {
        coarse_error,
        fine_error,
        order: (coarse_error / fine_error).log2(),
    })
}

/// `W(t) = A sin(f_s t)` with `f_s` the sum of the energy levels.
#[derive(Debug, Clone, PartialEq)]
pub struct StringModel {
    amplitude: f64,
    levels: Vec<f64>,
    frequency: f64,
}

impl StringModel {
    pub fn new(amplitude: f64, levels: Vec<f64>) -> Result<Self> {
        if !(amplitude >= 0.0) || !amplitude.is_finite() {
            return Err(Error::invalid("A", format!("amplitude must be nonnegative (got {amplitude})")));
        }
        if levels.is_empty() || levels.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(Error::invalid("levels", "energy levels must be positive"));
        }
        let frequency = levels.iter().sum();
        Ok(StringModel {
            amplitude,
            levels,
            frequency,
        })
    }

    pub fn with_frequency(amplitude: f64, frequency: f64) -> Result<Self> {
        Self::new(amplitude, vec![frequency])
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }
}

pub fn string_profile(model: &StringModel, t: f64) -> f64 {
    model.amplitude * (model.frequency * t).sin()
}

fn check_extent(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("x", format!("must be positive (got {x})")))
    }
}

pub const ARC_LENGTH_TOL: f64 = 1e-10;

/// `∫₀ˣ √(1 + (A f_s cos(f_s u))²) du`, integrating one quarter period at a
/// time and reusing it for whole periods.
pub fn string_arc_length_exact(model: &StringModel, x: f64) -> Result<f64> {
    check_extent(x)?;
    let k = model.amplitude * model.frequency;
    if k == 0.0 {
        return Ok(x);
    }
    let f = model.frequency;
    let integrand = |u: f64| (1.0 + (k * (f * u).cos()).powi(2)).sqrt();
    let quarter = FRAC_PI_2 / f;
    let quarters = (x / quarter).floor();
    let q = |a: f64, b: f64| integrate(integrand, a, b, 0.01 * ARC_LENGTH_TOL, 1e-14);
    let one_quarter = q(0.0, quarter)?;
    // The integrand has period half a wave and is symmetric in each half, so
    // every quarter contributes the same amount.
    let rest = x - quarters * quarter;
    Ok(quarters * one_quarter + q(quarters * quarter, quarters * quarter + rest)?)
}

/// The compressed estimate `l ≈ sin(f_s x)`.
pub fn string_effective_length(model: &StringModel, x: f64) -> Result<f64> {
    check_extent(x)?;
    Ok((model.frequency * x).sin())
}

/// The compressed estimate next to the integral it abbreviates and the true
/// arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveLengthReport {
    pub approximate: f64,
    /// `∫₀ˣ f_s cos(f_s u) du` by quadrature.
    pub slope_integral: f64,
    pub exact: f64,
    /// `|approximate - slope_integral| / max(1, |slope_integral|)`.
    pub identity_error: f64,
    /// `exact - approximate`.
    pub absolute_discrepancy: f64,
    /// `(exact - approximate) / exact`.
    pub relative_discrepancy: f64,
}

pub fn effective_length_report(model: &StringModel, x: f64) -> Result<EffectiveLengthReport> {
    let approximate = string_effective_length(model, x)?;
    let f = model.frequency;
    let slope_integral = integrate(|u| f * (f * u).cos(), 0.0, x, 1e-13, 1e-13)?;
    let exact = string_arc_length_exact(model, x)?;
    Ok(EffectiveLengthReport {
        approximate,
        slope_integral,
        exact,
        identity_error: (approximate - slope_integral).abs() / slope_integral.abs().max(1.0),
        absolute_discrepancy: exact - approximate,
        relative_discrepancy: (exact - approximate) / exact,
    })
}

/// Inverts the compressed estimate: `x = arcsin(l) / f_s`.
pub fn invert_effective_length(model: &StringModel, l: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&l) {
        return Err(Error::invalid("l", format!("must lie in [-1, 1] (got {l})")));
    }
    Ok(l.asin() / model.frequency)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavelengthCheck {
    pub wavelength: f64,
    /// Number of whole waves on the string, `x / λ`.
    pub ratio: f64,
    /// `λ / x`.
    pub inverse_ratio: f64,
    pub is_integer: bool,
}

pub const QUANTIZATION_TOL: f64 = 1e-9;

/// Whether `x` holds a whole number of wavelengths `λ = 2π / f_s`.
pub fn wavelength_quantization_check(model: &StringModel, x: f64) -> Result<WavelengthCheck> {
    check_extent(x)?;
    let wavelength = std::f64::consts::TAU / model.frequency;
    let ratio = x / wavelength;
    Ok(WavelengthCheck {
        wavelength,
        ratio,
        inverse_ratio: wavelength / x,
        is_integer: (ratio - ratio.round()).abs() <= QUANTIZATION_TOL,
    })
}

/// Interference amplitude `A = 2B cos(φ/2)`.
pub fn superposed_amplitude(b: f64, phi: f64) -> f64 {
    2.0 * b * (0.5 * phi).cos()
}

/// `A sin(kx - ωt + φ) - A sin(kx - ωt)` with `A = 2B cos(φ/2)`.
pub fn superposed_wave(b: f64, k: f64, omega: f64, phi: f64, x: f64, t: f64) -> f64 {
    let a = superposed_amplitude(b, phi);
    let arg = k * x - omega * t;
    a * (arg + phi).sin() - a * arg.sin()
}

/// Peak magnitude of [`superposed_wave`] over `(x, t)`: `|2A sin(φ/2)|`.
pub fn superposed_envelope(b: f64, phi: f64) -> f64 {
    (2.0 * superposed_amplitude(b, phi) * (0.5 * phi).sin()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, SQRT_2};

    fn unit(nodes: usize) -> MembraneProblem {
        MembraneProblem::new(1.0, 1.0, 1.0, nodes).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let p = unit(16);
        assert_eq!(membrane_closed_form(&p, 1.0).unwrap(), 0.0);
        assert_eq!(membrane_closed_form(&p, 0.0).unwrap(), -0.25);
        let stiff = MembraneProblem::new(2.0, 1.0, 1.0, 16).unwrap();
        assert_eq!(membrane_closed_form(&stiff, 0.0).unwrap(), -0.125);
        assert!(membrane_closed_form(&p, 1.5).is_err());
        assert!(MembraneProblem::new(0.0, 1.0, 1.0, 16).is_err());
        assert!(MembraneProblem::new(1.0, 1.0, 1.0, 15).is_err());
    }

    #[test]
    fn solve_matches_closed_form() {
        let p = unit(512);
        let field = membrane_solve(&p).unwrap();
        assert!(field.max_error(&p).unwrap() <= 1e-5);
        assert_eq!(*field.w.last().unwrap(), 0.0);
        assert!(field.w.iter().all(|&w| w <= 0.0));
        let zero = MembraneProblem::new(1.0, 0.0, 1.0, 32).unwrap();
        assert!(membrane_solve(&zero).unwrap().w.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn second_order_convergence() {
        let study = membrane_convergence(&unit(64)).unwrap();
        assert!(study.order >= 1.9, "order {}", study.order);
        assert_relative_eq!(study.coarse_error / study.fine_error, 4.0, epsilon = 1e-3);
    }

    #[test]
    fn string_profile_examples() {
        let m = StringModel::with_frequency(1.0, 1.0).unwrap();
        assert_eq!(string_profile(&m, 0.0), 0.0);
        assert_eq!(string_profile(&m, FRAC_PI_2), 1.0);
        let m = StringModel::new(2.0, vec![1.0, 2.0]).unwrap();
        assert_eq!(m.frequency(), 3.0);
        assert_relative_eq!(string_profile(&m, PI / 6.0), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn arc_length_examples() {
        let flat = StringModel::with_frequency(0.0, 3.0).unwrap();
        assert_eq!(string_arc_length_exact(&flat, 1.7).unwrap(), 1.7);
        let m = StringModel::with_frequency(1.0, 1.0).unwrap();
        assert_relative_eq!(string_arc_length_exact(&m, FRAC_PI_2).unwrap(), 1.910_098_894_5, epsilon = 1e-9);
        // Many periods agree with a direct integration.
        let m = StringModel::with_frequency(0.7, 5.0).unwrap();
        let x = 7.3;
        let direct = integrate(|u| (1.0 + (3.5 * (5.0 * u).cos()).powi(2)).sqrt(), 0.0, x, 1e-12, 1e-13).unwrap();
        assert_relative_eq!(string_arc_length_exact(&m, x).unwrap(), direct, epsilon = 1e-9);
        assert!(string_arc_length_exact(&m, 0.0).is_err());
    }

    #[test]
    fn effective_length_examples() {
        let m = StringModel::with_frequency(1.0, 1.0).unwrap();
        assert_eq!(string_effective_length(&m, FRAC_PI_2).unwrap(), 1.0);
        let rep = effective_length_report(&m, FRAC_PI_2).unwrap();
        assert_relative_eq!(rep.absolute_discrepancy, 0.910_098_894_5, epsilon = 1e-9);
        assert!(rep.identity_error < 1e-13);
        for x in [0.0, 0.3, 1.0, FRAC_PI_2] {
            let l = (m.frequency() * x).sin();
            assert_relative_eq!(invert_effective_length(&m, l).unwrap(), x, epsilon = 1e-12);
        }
    }

    #[test]
    fn quantization_examples() {
        let m = StringModel::with_frequency(1.0, 2.0 * PI).unwrap();
        let c = wavelength_quantization_check(&m, 3.0).unwrap();
        assert_relative_eq!(c.ratio, 3.0, epsilon = 1e-15);
        assert!(c.is_integer);
        let c = wavelength_quantization_check(&m, 2.5).unwrap();
        assert!(!c.is_integer);
        assert_relative_eq!(c.inverse_ratio, 0.4, epsilon = 1e-15);
        let c = wavelength_quantization_check(&m, 1.0).unwrap();
        assert!(c.is_integer);
    }

    #[test]
    fn superposition_examples() {
        assert_eq!(superposed_wave(1.3, 2.0, 0.5, 0.0, 0.7, 0.2), 0.0);
        assert!(superposed_wave(1.3, 2.0, 0.5, PI, 0.7, 0.2).abs() < 1e-15);
        let v = superposed_wave(1.0, 1.0, 0.0, FRAC_PI_2, FRAC_PI_2, 0.0);
        assert_relative_eq!(v, -SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(superposed_amplitude(1.0, FRAC_PI_2), SQRT_2, epsilon = 1e-15);
    }
}
