//! Two-party measurements in the z–x plane: joint outcome distributions,
//! correlators, CHSH sums and the search for their quantum maximum.

use std::f64::consts::{SQRT_2, TAU};

use crate::error::{check_dim, Error, Result};
use crate::quantum::BipartiteState;
use crate::scan_io::ScanTable;

/// Slack used when classifying `|S|` against the classical and quantum
/// bounds.
pub const BOUND_TOL: f64 = 1e-9;
pub const TSIRELSON: f64 = 2.0 * SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
}

/// Analyzer direction `cos(angle) σz + sin(angle) σx` for one party.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub angle: f64,
    pub party: Party,
}

impl MeasurementSetting {
    pub fn alice(angle: f64) -> Self {
        MeasurementSetting { angle, party: Party::Alice }
    }

    pub fn bob(angle: f64) -> Self {
        MeasurementSetting { angle, party: Party::Bob }
    }
}

/// Eigenvectors of the analyzer for outcomes `+1` and `-1`.
fn analyzer_basis(angle: f64) -> [[f64; 2]; 2] {
    let (s, c) = (0.5 * angle).sin_cos();
    [[c, s], [-s, c]]
}

/// `p(s_A, s_B)` stored at `[a][b]` with index 0 for outcome `+1` and 1 for
/// outcome `-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    pub probabilities: [[f64; 2]; 2],
    pub settings: (f64, f64),
}

fn outcome_index(s: i8) -> usize {
    if s > 0 {
        0
    } else {
        1
    }
}

impl JointDistribution {
    pub fn new(probabilities: [[f64; 2]; 2], settings: (f64, f64)) -> Result<Self> {
        let flat = probabilities.iter().flatten();
        if flat.clone().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::invalid("distribution", "probabilities must be nonnegative"));
        }
        let total: f64 = flat.sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("distribution", format!("probabilities sum to {total}")));
        }
        Ok(JointDistribution { probabilities, settings })
    }

    pub fn uniform() -> Self {
        JointDistribution {
            probabilities: [[0.25; 2]; 2],
            settings: (0.0, 0.0),
        }
    }

    /// Probability of the outcome pair `(s_a, s_b)` with `s = ±1`.
    pub fn p(&self, s_a: i8, s_b: i8) -> f64 {
        self.probabilities[outcome_index(s_a)][outcome_index(s_b)]
    }

    /// Alice's marginal `(p(+1), p(-1))`.
    pub fn marginal_a(&self) -> [f64; 2] {
        let p = &self.probabilities;
        [p[0][0] + p[0][1], p[1][0] + p[1][1]]
    }

    /// Bob's marginal `(p(+1), p(-1))`.
    pub fn marginal_b(&self) -> [f64; 2] {
        let p = &self.probabilities;
        [p[0][0] + p[1][0], p[0][1] + p[1][1]]
    }

    /// Probability that the two outcomes disagree.
    pub fn disagreement(&self) -> f64 {
        self.p(1, -1) + self.p(-1, 1)
    }
}

fn check_two_qubits(psi: &BipartiteState) -> Result<()> {
    check_dim(2, psi.dim_a())?;
    check_dim(2, psi.dim_b())
}

/// Outcome probabilities `|⟨u_{s_A} ⊗ v_{s_B}|Ψ⟩|²` for one pair of settings.
pub fn joint_distribution(
    psi: &BipartiteState,
    a: &MeasurementSetting,
    b: &MeasurementSetting,
) -> Result<JointDistribution> {
    check_two_qubits(psi)?;
    if a.party != Party::Alice || b.party != Party::Bob {
        return Err(Error::invalid("settings", "expected one setting for Alice and one for Bob"));
    }
    if !a.angle.is_finite() || !b.angle.is_finite() {
        return Err(Error::invalid("settings", "angles must be finite"));
    }
    let (ua, ub) = (analyzer_basis(a.angle), analyzer_basis(b.angle));
    let mut probabilities = [[0.0; 2]; 2];
    for (sa, u) in ua.iter().enumerate() {
        for (sb, v) in ub.iter().enumerate() {
            let mut amp = num_complex::Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for k in 0..2 {
                    amp += psi.amplitude(i, k) * (u[i] * v[k]);
                }
            }
            probabilities[sa][sb] = amp.norm_sqr();
        }
    }
    Ok(JointDistribution {
        probabilities,
        settings: (a.angle, b.angle),
    })
}

/// `E = Σ s_A s_B p(s_A, s_B)`.
pub fn correlator(d: &JointDistribution) -> f64 {
    d.p(1, 1) + d.p(-1, -1) - d.p(1, -1) - d.p(-1, 1)
}

/// `Ẽ = 1 - 2Ω` with `Ω` the disagreement probability.
pub fn geometric_correlator(d: &JointDistribution) -> f64 {
    1.0 - 2.0 * d.disagreement()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Classical,
    Quantum,
    SuperQuantum,
}

impl Regime {
    pub fn of(s: f64) -> Self {
        let a = s.abs();
        if a <= 2.0 + BOUND_TOL {
            Regime::Classical
        } else if a <= TSIRELSON + BOUND_TOL {
            Regime::Quantum
        } else {
            Regime::SuperQuantum
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::Classical => "classical",
            Regime::Quantum => "quantum",
            Regime::SuperQuantum => "super-quantum",
        }
    }
}

/// Settings `(a, a', b, b')` in radians.
pub type Settings = [f64; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CHSHResult {
    pub s: f64,
    pub settings: Settings,
    /// `E(a,b), E(a,b'), E(a',b), E(a',b')`.
    pub correlators: [f64; 4],
    pub regime: Regime,
}

/// `S = E(a,b) - E(a,b') + E(a',b) + E(a',b')`.
pub fn chsh_s(psi: &BipartiteState, settings: Settings) -> Result<CHSHResult> {
    let [a, a2, b, b2] = settings;
    let e = |x: f64, y: f64| -> Result<f64> {
        Ok(correlator(&joint_distribution(psi, &MeasurementSetting::alice(x), &MeasurementSetting::bob(y))?))
    };
    let correlators = [e(a, b)?, e(a, b2)?, e(a2, b)?, e(a2, b2)?];
    let s = correlators[0] - correlators[1] + correlators[2] + correlators[3];
    Ok(CHSHResult {
        s,
        settings,
        correlators,
        regime: Regime::of(s),
    })
}

/// `max(0, |S| - 2)`: the part of the CHSH value no local model reaches.
pub fn loop_excess(psi: &BipartiteState, settings: Settings) -> Result<f64> {
    Ok((chsh_s(psi, settings)?.s.abs() - 2.0).max(0.0))
}

/// Deterministic local strategies `(A(a), A(a'), B(b), B(b'))` and their
/// CHSH extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalPolytope {
    pub max: f64,
    pub min: f64,
    pub maximizers: Vec<[i8; 4]>,
    pub values: Vec<([i8; 4], f64)>,
}

pub fn classical_strategy_value(s: [i8; 4]) -> f64 {
    let [a, a2, b, b2] = s.map(f64::from);
    a * b - a * b2 + a2 * b + a2 * b2
}

pub fn classical_polytope_max() -> ClassicalPolytope {
    let values: Vec<([i8; 4], f64)> = (0..16u8)
        .map(|bits| {
            let s = [0, 1, 2, 3].map(|k| if bits >> k & 1 == 0 { 1 } else { -1 });
            (s, classical_strategy_value(s))
        })
        .collect();
    let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    ClassicalPolytope {
        max,
        min,
        maximizers: values.iter().filter(|v| v.1 == max).map(|v| v.0).collect(),
        values,
    }
}

/// `T_{jk} = ⟨Ψ|σ_j ⊗ σ_k|Ψ⟩` for `j, k ∈ {z, x}`, so that
/// `E(a, b) = (cos a, sin a) T (cos b, sin b)ᵀ`.
pub fn correlation_matrix(psi: &BipartiteState) -> Result<[[f64; 2]; 2]> {
    check_two_qubits(psi)?;
    let amp = |i: usize, k: usize| psi.amplitude(i, k);
    let z = |i: usize| if i == 0 { 1.0 } else { -1.0 };
    let mut t = [[0.0; 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            let a = amp(i, k);
            t[0][0] += z(i) * z(k) * a.norm_sqr();
            t[0][1] += z(i) * (a.conj() * amp(i, 1 - k)).re;
            t[1][0] += z(k) * (a.conj() * amp(1 - i, k)).re;
            t[1][1] += (a.conj() * amp(1 - i, 1 - k)).re;
        }
    }
    Ok(t)
}

fn s_from_matrix(t: &[[f64; 2]; 2], x: &Settings) -> f64 {
    let e = |a: f64, b: f64| {
        let (sa, ca) = a.sin_cos();
        let (sb, cb) = b.sin_cos();
        ca * (t[0][0] * cb + t[0][1] * sb) + sa * (t[1][0] * cb + t[1][1] * sb)
    };
    e(x[0], x[2]) - e(x[0], x[3]) + e(x[1], x[2]) + e(x[1], x[3])
}

/// Result of a grid scan plus local refinement of `|S|`.
#[derive(Debug, Clone)]
pub struct TsirelsonScan {
    pub table: ScanTable,
    pub best: CHSHResult,
    pub grid_best: CHSHResult,
}

pub const SCAN_STEP_TOL: f64 = 1e-10;

/// Scans `(a, a', b, b')` over a uniform grid of `[0, 2π)`, then refines the
/// best cell with a compass pattern search on `|S|`.
///
/// Ties on the grid go to the lexicographically smallest settings. The table
/// holds, for every value of `a`, the best grid row, followed by the refined
/// optimum (`stage` 0 and 1 respectively).
pub fn tsirelson_scan(psi: &BipartiteState, grid_size: usize) -> Result<TsirelsonScan> {
    if grid_size < 8 {
        return Err(Error::invalid("grid", format!("must be at least 8 (got {grid_size})")));
    }
    let t = correlation_matrix(psi)?;
    let n = grid_size;
    let angles: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
    let mut e = vec![0.0; n * n];
    for (i, &a) in angles.iter().enumerate() {
        for (k, &b) in angles.iter().enumerate() {
            let (sa, ca) = a.sin_cos();
            let (sb, cb) = b.sin_cos();
            e[i * n + k] = ca * (t[0][0] * cb + t[0][1] * sb) + sa * (t[1][0] * cb + t[1][1] * sb);
        }
    }
    let mut table = ScanTable::new("tsirelson_scan", ["a", "a_prime", "b", "b_prime", "s", "abs_s", "stage"])?
        .with_grid(n as u64)
        .with_tolerance("step", SCAN_STEP_TOL);
    let mut global: Option<([usize; 4], f64)> = None;
    for i in 0..n {
        let mut row_best: Option<([usize; 4], f64)> = None;
        for i2 in 0..n {
            for k in 0..n {
                for k2 in 0..n {
                    let s = e[i * n + k] - e[i * n + k2] + e[i2 * n + k] + e[i2 * n + k2];
                    if row_best.is_none_or(|(_, b)| s.abs() > b.abs()) {
                        row_best = Some(([i, i2, k, k2], s));
                    }
                }
            }
        }
        let (idx, s) = row_best.expect("non-empty grid");
        table.push_row(vec![angles[idx[0]], angles[idx[1]], angles[idx[2]], angles[idx[3]], s, s.abs(), 0.0])?;
        if global.is_none_or(|(_, b)| s.abs() > b.abs()) {
            global = Some((idx, s));
        }
    }
    let (idx, _) = global.expect("non-empty grid");
    let start: Settings = idx.map(|j| angles[j]);
    let refined = pattern_search(|x| s_from_matrix(&t, x).abs(), start, TAU / n as f64);
    let best = chsh_s(psi, refined)?;
    table.push_row(vec![refined[0], refined[1], refined[2], refined[3], best.s, best.s.abs(), 1.0])?;
    Ok(TsirelsonScan {
        table,
        best,
        grid_best: chsh_s(psi, start)?,
    })
}

/// Compass search maximizing `f`: try `±step` along each coordinate in order,
/// move on strict improvement, halve the step when none improves.
fn pattern_search(f: impl Fn(&Settings) -> f64, start: Settings, mut step: f64) -> Settings {
    let mut x = start;
    let mut fx = f(&x);
    while step >= SCAN_STEP_TOL {
        let mut improved = false;
        for c in 0..4 {
            for dir in [1.0, -1.0] {
                let mut y = x;
                y[c] += dir * step;
                let fy = f(&y);
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    x.map(|v| v.rem_euclid(TAU))
}
