//! Parametrized probability families: the points of the statistical
//! manifold.
//!
//! Every family is an exponential family `p(x) = h(x) exp(<θ, T(x)> - ψ(θ))`
//! and exposes two charts, the natural parameters `θ` and the mean
//! parameters `η = ∇ψ(θ)`. The univariate Gaussian additionally carries the
//! raw `(μ, σ)` chart.
//!
//! Discrete families use the last outcome as the reference (Bernoulli uses
//! outcome `0`), so the natural chart has `k - 1` log-odds coordinates and
//! `ψ` is strictly convex.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::numeric::gauss_hermite;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Natural (canonical) parameters `θ`.
    Natural,
    /// Expectation parameters `η = E[T(x)]`.
    Mean,
    /// Raw `(μ, σ)` parameters of the Gaussian.
    Raw,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Natural => "natural",
            Chart::Mean => "mean",
            Chart::Raw => "raw",
        })
    }
}

impl FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" | "theta" => Ok(Chart::Natural),
            "mean" | "eta" => Ok(Chart::Mean),
            "raw" => Ok(Chart::Raw),
            _ => Err(Error::invalid("chart", format!("unknown chart '{s}'"))),
        }
    }
}

/// A point of a statistical manifold in a named chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPoint {
    chart: Chart,
    coords: Vec<f64>,
}

impl ParameterPoint {
    pub fn new(chart: Chart, coords: Vec<f64>) -> Self {
        ParameterPoint { chart, coords }
    }

    pub fn natural(coords: Vec<f64>) -> Self {
        Self::new(Chart::Natural, coords)
    }

    pub fn mean(coords: Vec<f64>) -> Self {
        Self::new(Chart::Mean, coords)
    }

    pub fn raw(coords: Vec<f64>) -> Self {
        Self::new(Chart::Raw, coords)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub(crate) fn expect_chart(&self, chart: Chart) -> Result<()> {
        if self.chart == chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                expected: chart,
                found: self.chart,
            })
        }
    }
}

/// Symmetric rank-3 array stored densely, indexed `[i][j][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Tensor3 {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.dim + j) * self.dim + k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.dim + j) * self.dim + k] += v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Contract the last index with `v`: `M_ij = Σ_k T_ijk v_k`.
    pub fn contract_last(&self, v: &[f64]) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |i, j| (0..d).map(|k| self.get(i, j, k) * v[k]).sum())
    }
}

/// The parametrized families supported by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionFamily {
    /// Univariate normal distribution.
    Gaussian,
    /// Two outcomes `{0, 1}`.
    Bernoulli,
    /// `k` outcomes `{0, …, k-1}`.
    Categorical(usize),
}

impl DistributionFamily {
    pub fn categorical(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid("outcomes", "categorical family needs k >= 2"));
        }
        Ok(DistributionFamily::Categorical(k))
    }

    pub fn name(&self) -> String {
        match self {
            DistributionFamily::Gaussian => "gaussian".into(),
            DistributionFamily::Bernoulli => "bernoulli".into(),
            DistributionFamily::Categorical(k) => format!("categorical{k}"),
        }
    }

    /// Manifold dimension (number of coordinates in every chart).
    pub fn dimension(&self) -> usize {
        match self {
            DistributionFamily::Gaussian => 2,
            DistributionFamily::Bernoulli => 1,
            DistributionFamily::Categorical(k) => k - 1,
        }
    }

    /// Number of outcomes for discrete families.
    pub fn outcome_count(&self) -> Option<usize> {
        match self {
            DistributionFamily::Gaussian => None,
            DistributionFamily::Bernoulli => Some(2),
            DistributionFamily::Categorical(k) => Some(*k),
        }
    }

    pub fn charts(&self) -> &'static [Chart] {
        match self {
            DistributionFamily::Gaussian => &[Chart::Raw, Chart::Natural, Chart::Mean],
            _ => &[Chart::Natural, Chart::Mean],
        }
    }

    pub fn gaussian_point(mu: f64, sigma: f64) -> Result<ParameterPoint> {
        let p = ParameterPoint::raw(vec![mu, sigma]);
        DistributionFamily::Gaussian.validate(&p)?;
        Ok(p)
    }

    pub fn bernoulli_point(p: f64) -> Result<ParameterPoint> {
        let pt = ParameterPoint::mean(vec![p]);
        DistributionFamily::Bernoulli.validate(&pt)?;
        Ok(pt)
    }

    /// Mean-chart point of a discrete family from its full outcome
    /// probabilities.
    pub fn point_from_probabilities(&self, probs: &[f64]) -> Result<ParameterPoint> {
        let k = self
            .outcome_count()
            .ok_or_else(|| Error::invalid("family", "not a discrete family"))?;
        check_dim(k, probs.len())?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "probabilities",
                format!("must sum to 1 (sum = {total})"),
            ));
        }
        let coords = match self {
            DistributionFamily::Bernoulli => vec![probs[1]],
            _ => probs[..k - 1].to_vec(),
        };
        let p = ParameterPoint::mean(coords);
        self.validate(&p)?;
        Ok(p)
    }

    /// Full outcome probabilities of a discrete family at `point`.
    pub fn probabilities(&self, point: &ParameterPoint) -> Result<Vec<f64>> {
        let eta = self.convert(point, Chart::Mean)?;
        let eta = eta.coords();
        match self {
            DistributionFamily::Gaussian => Err(Error::invalid("family", "not a discrete family")),
            DistributionFamily::Bernoulli => Ok(vec![1.0 - eta[0], eta[0]]),
            DistributionFamily::Categorical(_) => {
                let mut p = eta.to_vec();
                p.push(1.0 - eta.iter().sum::<f64>());
                Ok(p)
            }
        }
    }

    pub fn validate(&self, point: &ParameterPoint) -> Result<()> {
        if !self.charts().contains(&point.chart) {
            return Err(Error::invalid(
                "chart",
                format!("{} has no {} chart", self.name(), point.chart),
            ));
        }
        check_dim(self.dimension(), point.dim())?;
        if let Some(bad) = point.coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::invalid("point", format!("non-finite coordinate {bad}")));
        }
        let c = point.coords();
        match (self, point.chart) {
            (DistributionFamily::Gaussian, Chart::Raw) => positive("sigma", c[1]),
            (DistributionFamily::Gaussian, Chart::Natural) => positive("theta2", -c[1]),
            (DistributionFamily::Gaussian, Chart::Mean) => positive("variance", c[1] - c[0] * c[0]),
            (_, Chart::Mean) => {
                for &p in c {
                    unit_interval("probability", p)?;
                }
                unit_interval("probability", 1.0 - c.iter().sum::<f64>())
            }
            _ => Ok(()),
        }
    }

    /// Re-express `point` in another chart using the closed-form maps.
    pub fn convert(&self, point: &ParameterPoint, chart: Chart) -> Result<ParameterPoint> {
        self.validate(point)?;
        if point.chart == chart {
            return Ok(point.clone());
        }
        if !self.charts().contains(&chart) {
            return Err(Error::invalid(
                "chart",
                format!("{} has no {} chart", self.name(), chart),
            ));
        }
        let c = point.coords();
        let coords = match self {
            DistributionFamily::Gaussian => {
                let (mu, sigma) = match point.chart {
                    Chart::Raw => (c[0], c[1]),
                    Chart::Natural => {
                        let var = -0.5 / c[1];
                        (c[0] * var, var.sqrt())
                    }
                    Chart::Mean => (c[0], (c[1] - c[0] * c[0]).sqrt()),
                };
                let var = sigma * sigma;
                match chart {
                    Chart::Raw => vec![mu, sigma],
                    Chart::Natural => vec![mu / var, -0.5 / var],
                    Chart::Mean => vec![mu, mu * mu + var],
                }
            }
            _ => match chart {
                Chart::Mean => discrete_mean_from_natural(c).0,
                Chart::Natural => {
                    let reference = 1.0 - c.iter().sum::<f64>();
                    c.iter().map(|&p| p.ln() - reference.ln()).collect()
                }
                Chart::Raw => unreachable!("checked above"),
            },
        };
        Ok(ParameterPoint::new(chart, coords))
    }

    /// Sufficient statistic `T(x)`.
    pub fn sufficient_statistic(&self, x: f64) -> Result<DVector<f64>> {
        match self {
            DistributionFamily::Gaussian => {
                if !x.is_finite() {
                    return Err(Error::OutsideSupport(x));
                }
                Ok(DVector::from_vec(vec![x, x * x]))
            }
            _ => {
                let mut t = DVector::zeros(self.dimension());
                if let Some(i) = self.stat_index(x)? {
                    t[i] = 1.0;
                }
                Ok(t)
            }
        }
    }

    /// Coordinate of `T(x)` that equals one, or `None` for the reference
    /// outcome.
    fn stat_index(&self, x: f64) -> Result<Option<usize>> {
        let k = self.outcome_count().expect("discrete family");
        if x.fract() != 0.0 || x < 0.0 || x >= k as f64 {
            return Err(Error::OutsideSupport(x));
        }
        let x = x as usize;
        Ok(match self {
            DistributionFamily::Bernoulli => (x == 1).then_some(0),
            _ => (x < k - 1).then_some(x),
        })
    }

    fn log_base_measure(&self) -> f64 {
        match self {
            DistributionFamily::Gaussian => -0.5 * LN_2PI,
            _ => 0.0,
        }
    }

    /// `log p(x)` at `point`.
    pub fn log_density(&self, point: &ParameterPoint, x: f64) -> Result<f64> {
        self.validate(point)?;
        if point.chart == Chart::Raw {
            let (mu, sigma) = (point.coords[0], point.coords[1]);
            if !x.is_finite() {
                return Err(Error::OutsideSupport(x));
            }
            let z = (x - mu) / sigma;
            return Ok(-0.5 * LN_2PI - sigma.ln() - 0.5 * z * z);
        }
        if self.outcome_count().is_some() {
            // Direct probability lookup keeps degenerate limits accurate.
            let idx = self.stat_index(x)?;
            let eta = self.convert(point, Chart::Mean)?;
            let e = eta.coords();
            let p = match idx {
                Some(i) => e[i],
                None => 1.0 - e.iter().sum::<f64>(),
            };
            return Ok(p.ln());
        }
        let theta = self.convert(point, Chart::Natural)?;
        let t = self.sufficient_statistic(x)?;
        let dot: f64 = theta.coords.iter().zip(t.iter()).map(|(a, b)| a * b).sum();
        Ok(dot - self.log_partition(theta.coords())? + self.log_base_measure())
    }

    /// Analytic score `∂ log p(x) / ∂ξ` in the chart of `point`.
    pub fn score(&self, point: &ParameterPoint, x: f64) -> Result<DVector<f64>> {
        self.validate(point)?;
        let c = point.coords();
        match point.chart {
            Chart::Raw => {
                if !x.is_finite() {
                    return Err(Error::OutsideSupport(x));
                }
                let (mu, s) = (c[0], c[1]);
                let d = x - mu;
                Ok(DVector::from_vec(vec![
                    d / (s * s),
                    (d * d - s * s) / (s * s * s),
                ]))
            }
            Chart::Natural => {
                let t = self.sufficient_statistic(x)?;
                Ok(t - self.log_partition_gradient(c)?)
            }
            Chart::Mean => {
                let t = self.sufficient_statistic(x)?;
                let eta = DVector::from_column_slice(c);
                Ok(self.dual_potential_hessian(c)? * (t - eta))
            }
        }
    }

    /// Analytic Hessian of `log p(x)` in the chart of `point`.
    pub fn log_density_hessian(&self, point: &ParameterPoint, x: f64) -> Result<DMatrix<f64>> {
        self.validate(point)?;
        let c = point.coords();
        match point.chart {
            Chart::Raw => {
                if !x.is_finite() {
                    return Err(Error::OutsideSupport(x));
                }
                let (mu, s) = (c[0], c[1]);
                let d = x - mu;
                let s2 = s * s;
                let off = -2.0 * d / (s2 * s);
                Ok(DMatrix::from_row_slice(
                    2,
                    2,
                    &[-1.0 / s2, off, off, 1.0 / s2 - 3.0 * d * d / (s2 * s2)],
                ))
            }
            Chart::Natural => {
                self.sufficient_statistic(x)?;
                Ok(-self.log_partition_hessian(c)?)
            }
            Chart::Mean => {
                let t = self.sufficient_statistic(x)?;
                let resid: Vec<f64> = t.iter().zip(c).map(|(a, b)| a - b).collect();
                let third = self.dual_potential_third(c)?;
                Ok(third.contract_last(&resid) - self.dual_potential_hessian(c)?)
            }
        }
    }

    /// Mean parameters `η = ∇ψ(θ)` from a natural-chart point.
    pub fn sufficient_stat_mean(&self, point: &ParameterPoint) -> Result<DVector<f64>> {
        match point.chart {
            Chart::Natural => self.log_partition_gradient(point.coords()),
            Chart::Mean => {
                self.validate(point)?;
                Ok(DVector::from_column_slice(point.coords()))
            }
            Chart::Raw => Err(Error::NotExponential(Chart::Raw)),
        }
    }

    /// Quadrature nodes `(x, w)` with `E_p[f] = Σ w f(x)`: the outcomes and
    /// their probabilities for discrete families, a Gauss–Hermite rule for
    /// the Gaussian.
    pub fn expectation_nodes(&self, point: &ParameterPoint) -> Result<Vec<(f64, f64)>> {
        match self {
            DistributionFamily::Gaussian => {
                let raw = self.convert(point, Chart::Raw)?;
                let (mu, sigma) = (raw.coords[0], raw.coords[1]);
                Ok(gauss_hermite()
                    .iter()
                    .map(|&(z, w)| (mu + sigma * z, w))
                    .collect())
            }
            _ => Ok(self
                .probabilities(point)?
                .into_iter()
                .enumerate()
                .map(|(x, p)| (x as f64, p))
                .collect()),
        }
    }

    fn natural_coords(&self, theta: &[f64]) -> Result<()> {
        let p = ParameterPoint::natural(theta.to_vec());
        self.validate(&p)
    }

    fn mean_coords(&self, eta: &[f64]) -> Result<()> {
        let p = ParameterPoint::mean(eta.to_vec());
        self.validate(&p)
    }

    /// Log-partition function `ψ(θ)`.
    pub fn log_partition(&self, theta: &[f64]) -> Result<f64> {
        self.natural_coords(theta)?;
        Ok(match self {
            DistributionFamily::Gaussian => {
                let (a, b) = (theta[0], theta[1]);
                -a * a / (4.0 * b) - 0.5 * (-2.0 * b).ln()
            }
            _ => discrete_mean_from_natural(theta).1,
        })
    }

    pub fn log_partition_gradient(&self, theta: &[f64]) -> Result<DVector<f64>> {
        self.natural_coords(theta)?;
        Ok(match self {
            DistributionFamily::Gaussian => {
                let (a, b) = (theta[0], theta[1]);
                DVector::from_vec(vec![-a / (2.0 * b), a * a / (4.0 * b * b) - 0.5 / b])
            }
            _ => DVector::from_vec(discrete_mean_from_natural(theta).0),
        })
    }

    pub fn log_partition_hessian(&self, theta: &[f64]) -> Result<DMatrix<f64>> {
        self.natural_coords(theta)?;
        Ok(match self {
            DistributionFamily::Gaussian => {
                let (a, b) = (theta[0], theta[1]);
                let b2 = b * b;
                let off = a / (2.0 * b2);
                DMatrix::from_row_slice(
                    2,
                    2,
                    &[-0.5 / b, off, off, -a * a / (2.0 * b2 * b) + 0.5 / b2],
                )
            }
            _ => {
                let (p, _) = discrete_mean_from_natural(theta);
                discrete_cumulant2(&p)
            }
        })
    }

    /// Third derivatives of `ψ` (third cumulant of `T`).
    pub fn log_partition_third(&self, theta: &[f64]) -> Result<Tensor3> {
        self.natural_coords(theta)?;
        Ok(match self {
            DistributionFamily::Gaussian => {
                let (a, b) = (theta[0], theta[1]);
                let b2 = b * b;
                let mut t = Tensor3::zeros(2);
                let t112 = 0.5 / b2;
                let t122 = -a / (b2 * b);
                let t222 = 1.5 * a * a / (b2 * b2) - 1.0 / (b2 * b);
                for (i, j, k) in [(0, 0, 1), (0, 1, 0), (1, 0, 0)] {
                    t.set(i, j, k, t112);
                }
                for (i, j, k) in [(0, 1, 1), (1, 0, 1), (1, 1, 0)] {
                    t.set(i, j, k, t122);
                }
                t.set(1, 1, 1, t222);
                t
            }
            _ => {
                let (p, _) = discrete_mean_from_natural(theta);
                discrete_cumulant3(&p)
            }
        })
    }

    /// Legendre dual potential `φ(η) = <θ, η> - ψ(θ)` (the negative entropy
    /// up to the base measure).
    pub fn dual_potential(&self, eta: &[f64]) -> Result<f64> {
        self.mean_coords(eta)?;
        Ok(match self {
            DistributionFamily::Gaussian => -0.5 - 0.5 * (eta[1] - eta[0] * eta[0]).ln(),
            _ => {
                let reference = 1.0 - eta.iter().sum::<f64>();
                eta.iter().map(|&p| xlogx(p)).sum::<f64>() + xlogx(reference)
            }
        })
    }

    pub fn dual_potential_gradient(&self, eta: &[f64]) -> Result<DVector<f64>> {
        self.mean_coords(eta)?;
        Ok(match self {
            DistributionFamily::Gaussian => {
                let v = eta[1] - eta[0] * eta[0];
                DVector::from_vec(vec![eta[0] / v, -0.5 / v])
            }
            _ => {
                let lr = (1.0 - eta.iter().sum::<f64>()).ln();
                DVector::from_iterator(eta.len(), eta.iter().map(|p| p.ln() - lr))
            }
        })
    }

    pub fn dual_potential_hessian(&self, eta: &[f64]) -> Result<DMatrix<f64>> {
        self.mean_coords(eta)?;
        let d = eta.len();
        Ok(match self {
            DistributionFamily::Gaussian => {
                let (v, dv, ddv) = gaussian_variance_jets(eta);
                DMatrix::from_fn(2, 2, |i, j| -0.5 * (ddv[i][j] / v - dv[i] * dv[j] / (v * v)))
            }
            _ => {
                let r = 1.0 - eta.iter().sum::<f64>();
                DMatrix::from_fn(d, d, |i, j| {
                    let diag = if i == j { 1.0 / eta[i] } else { 0.0 };
                    diag + 1.0 / r
                })
            }
        })
    }

    pub fn dual_potential_third(&self, eta: &[f64]) -> Result<Tensor3> {
        self.mean_coords(eta)?;
        let d = eta.len();
        let mut t = Tensor3::zeros(d);
        match self {
            DistributionFamily::Gaussian => {
                let (v, dv, ddv) = gaussian_variance_jets(eta);
                let (v2, v3) = (v * v, v * v * v);
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            let val = -0.5
                                * (-(ddv[i][j] * dv[k] + ddv[i][k] * dv[j] + ddv[j][k] * dv[i])
                                    / v2
                                    + 2.0 * dv[i] * dv[j] * dv[k] / v3);
                            t.set(i, j, k, val);
                        }
                    }
                }
            }
            _ => {
                let r = 1.0 - eta.iter().sum::<f64>();
                let common = 1.0 / (r * r);
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            let diag = if i == j && j == k {
                                -1.0 / (eta[i] * eta[i])
                            } else {
                                0.0
                            };
                            t.set(i, j, k, diag + common);
                        }
                    }
                }
            }
        }
        Ok(t)
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 {
        Ok(())
    } else if v == 0.0 {
        Err(Error::BoundaryParameter(format!("{field} = 0")))
    } else {
        Err(Error::invalid(field, format!("must be > 0 (got {v})")))
    }
}

fn unit_interval(field: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else if p == 0.0 || p == 1.0 || (p.abs() < 1e-15) {
        Err(Error::BoundaryParameter(format!("{field} = {p}")))
    } else {
        Err(Error::invalid(field, format!("must lie in (0, 1) (got {p})")))
    }
}

fn xlogx(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

/// Softmax against an implicit zero reference logit; returns the
/// non-reference probabilities and `log(1 + Σ exp θ)`.
fn discrete_mean_from_natural(theta: &[f64]) -> (Vec<f64>, f64) {
    let m = theta.iter().copied().fold(0.0_f64, f64::max);
    let denom = (-m).exp() + theta.iter().map(|t| (t - m).exp()).sum::<f64>();
    let probs = theta.iter().map(|t| (t - m).exp() / denom).collect();
    (probs, m + denom.ln())
}

fn discrete_outcome_stats(p: &[f64]) -> impl Iterator<Item = (f64, Vec<f64>)> + '_ {
    let d = p.len();
    let reference = 1.0 - p.iter().sum::<f64>();
    (0..=d).map(move |x| {
        let weight = if x < d { p[x] } else { reference };
        let centered: Vec<f64> = (0..d)
            .map(|i| if i == x { 1.0 } else { 0.0 } - p[i])
            .collect();
        (weight, centered)
    })
}

fn discrete_cumulant2(p: &[f64]) -> DMatrix<f64> {
    let d = p.len();
    let mut m = DMatrix::zeros(d, d);
    for (w, c) in discrete_outcome_stats(p) {
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] += w * c[i] * c[j];
            }
        }
    }
    m
}

fn discrete_cumulant3(p: &[f64]) -> Tensor3 {
    let d = p.len();
    let mut t = Tensor3::zeros(d);
    for (w, c) in discrete_outcome_stats(p) {
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    t.add(i, j, k, w * c[i] * c[j] * c[k]);
                }
            }
        }
    }
    t
}

/// `v = η₂ - η₁²` with its gradient and Hessian (third derivatives vanish).
fn gaussian_variance_jets(eta: &[f64]) -> (f64, [f64; 2], [[f64; 2]; 2]) {
    (
        eta[1] - eta[0] * eta[0],
        [-2.0 * eta[0], 1.0],
        [[-2.0, 0.0], [0.0, 0.0]],
    )
}
