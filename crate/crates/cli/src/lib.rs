//! Command-line front end: every computation is a subcommand that prints a
//! single table (CSV or JSON) whose provenance block records its inputs.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multiaffine::berry::{stokes_check, LoopPath, RealAmplitude, SpinHalf, StateFamily, SurfaceMesh};
use multiaffine::chsh::{chsh_s, tsirelson_scan, Regime};
use multiaffine::continuum::{
    effective_length_report, membrane_closed_form, membrane_solve, wavelength_quantization_check, MembraneProblem,
    StringModel,
};
use multiaffine::distributions::{Chart, DistributionFamily, ParameterPoint};
use multiaffine::infogeo::{
    bregman_divergence, fisher_metric, kl_divergence, legendre_dual, pythagorean_gap, PotentialPair,
    QuadraticPotential,
};
use multiaffine::lengths::{geodesic, length_report, ParamPath};
use multiaffine::quantum::{
    controlled_rotation_benchmark, ec_decomposition, entanglement_entropy, schmidt, BipartiteState,
};
use multiaffine::scan_io::{to_csv, to_json, ScanTable};
use multiaffine::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Parser)]
#[command(name = "multiaffine", version, about = "Information-geometry and quantum-correlation toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for randomized inputs.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Read angle arguments in degrees.
    #[arg(long, global = true)]
    pub deg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fisher metric of a family at a point.
    Fisher(FisherArgs),
    /// Legendre dual coordinates and potential.
    Legendre(LegendreArgs),
    /// KL and Bregman divergences, with the triangle gap through an optional third point.
    Divergence(DivergenceArgs),
    /// Primal, dual, harmonic and divergence-based lengths of a straight path.
    Lengths(PathArgs),
    /// Samples of the e-, m- or Levi-Civita geodesic between two points.
    Geodesic(GeodesicArgs),
    /// Latitude-loop Berry phase and the curvature flux through its cap.
    Berry(BerryArgs),
    /// CHSH value at given settings, or a grid scan for the maximum.
    Chsh(ChshArgs),
    /// E/C split of a budget and entanglement of the controlled-rotation benchmark.
    Decompose(DecomposeArgs),
    /// Finite-volume membrane deflection against the closed form.
    Membrane(MembraneArgs),
    /// Exact and compressed string lengths.
    String(StringArgs),
}

#[derive(Debug, Args)]
pub struct FisherArgs {
    /// gaussian, bernoulli or categorical<K>.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value = "natural")]
    pub chart: String,
    /// Comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Debug, Args)]
pub struct LegendreArgs {
    /// A family name, or `quadratic` for ψ(θ) = |θ|²/2.
    #[arg(long)]
    pub potential: String,
    /// Comma-separated natural coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: String,
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value = "natural")]
    pub chart: String,
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    /// Intermediate point for the triangle gap.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[arg(long)]
    pub family: String,
    /// Chart in which the path is a straight segment.
    #[arg(long, default_value = "natural")]
    pub chart: String,
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct GeodesicArgs {
    #[arg(long)]
    pub family: String,
    /// Chart of the endpoints and of the output samples.
    #[arg(long, default_value = "natural")]
    pub chart: String,
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    /// 1 (exponential), -1 (mixture) or 0 (Levi-Civita).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BerryFamily {
    SpinHalf,
    RealAmplitude,
}

#[derive(Debug, Args)]
pub struct BerryArgs {
    #[arg(long, value_enum, default_value_t = BerryFamily::SpinHalf)]
    pub family: BerryFamily,
    /// Polar angle of the latitude loop.
    #[arg(long = "theta-c", allow_hyphen_values = true)]
    pub theta_c: f64,
    #[arg(long, default_value_t = 2000)]
    pub segments: usize,
    /// Gauss–Legendre order per direction for the surface flux.
    #[arg(long, default_value_t = 24)]
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateSpec {
    Singlet,
    Bell,
    Product,
    Partial,
    Random,
}

#[derive(Debug, Args)]
pub struct ChshArgs {
    #[arg(long, value_enum)]
    pub state: StateSpec,
    /// Weight of |00⟩ for `--state partial`.
    #[arg(long, default_value_t = 0.9, allow_hyphen_values = true)]
    pub weight: f64,
    /// a,a',b,b' analyzer angles.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "scan")]
    pub settings: Option<String>,
    /// Grid points per angle for a maximizing scan.
    #[arg(long)]
    pub scan: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long = "N", default_value_t = 1.0, allow_hyphen_values = true)]
    pub n: f64,
}

#[derive(Debug, Args)]
pub struct MembraneArgs {
    #[arg(long = "T", allow_hyphen_values = true)]
    pub tension: f64,
    #[arg(long = "p", allow_hyphen_values = true)]
    pub pressure: f64,
    #[arg(long = "R", allow_hyphen_values = true)]
    pub radius: f64,
    #[arg(long, default_value_t = 512)]
    pub nodes: usize,
}

#[derive(Debug, Args)]
pub struct StringArgs {
    #[arg(long = "A", allow_hyphen_values = true)]
    pub amplitude: f64,
    /// Comma-separated energy levels; their sum is the frequency.
    #[arg(long = "fs")]
    pub levels: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
}

/// Exit status: 0 success, 2 invalid input, 3 numerical non-convergence.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_non_convergence() {
        3
    } else {
        2
    }
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field: field.into(),
        reason: reason.into(),
    }
}

fn parse_list(field: &str, s: &str) -> multiaffine::Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let v: f64 = t.parse().map_err(|_| invalid(field, format!("'{t}' is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(invalid(field, "values must be finite"))
            }
        })
        .collect()
}

fn parse_family(s: &str) -> multiaffine::Result<DistributionFamily> {
    match s {
        "gaussian" => Ok(DistributionFamily::Gaussian),
        "bernoulli" => Ok(DistributionFamily::Bernoulli),
        _ => match s.strip_prefix("categorical").map(str::parse::<usize>) {
            Some(Ok(k)) => DistributionFamily::categorical(k),
            _ => Err(invalid("family", format!("unknown family '{s}'"))),
        },
    }
}

fn point(fam: &DistributionFamily, chart: Chart, field: &str, s: &str) -> multiaffine::Result<ParameterPoint> {
    let p = ParameterPoint::new(chart, parse_list(field, s)?);
    fam.validate(&p)?;
    Ok(p)
}

fn finite(field: &str, v: f64) -> multiaffine::Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(field, "must be finite"))
    }
}

struct Ctx<'a> {
    global: &'a GlobalOpts,
}

impl Ctx<'_> {
    fn angle(&self, field: &str, v: f64) -> multiaffine::Result<f64> {
        let v = finite(field, v)?;
        Ok(if self.global.deg { v.to_radians() } else { v })
    }

    fn table<S: Into<String>>(
        &self,
        op: &str,
        columns: impl IntoIterator<Item = S>,
        params: &[(&str, String)],
    ) -> multiaffine::Result<ScanTable> {
        Ok(self.stamp(ScanTable::new(op, columns)?, params))
    }

    /// Records the global options and the command's own inputs.
    fn stamp(&self, mut t: ScanTable, params: &[(&str, String)]) -> ScanTable {
        t = t
            .with_parameter("seed", self.global.seed)
            .with_parameter("deg", self.global.deg)
            .with_parameter("format", format!("{:?}", self.global.format).to_lowercase());
        for (k, v) in params {
            t = t.with_parameter(k, v);
        }
        t
    }
}

fn random_state(seed: u64) -> multiaffine::Result<BipartiteState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..4)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    BipartiteState::normalized(2, 2, amps)
}

fn regime_code(r: Regime) -> f64 {
    match r {
        Regime::Classical => 0.0,
        Regime::Quantum => 1.0,
        Regime::SuperQuantum => 2.0,
    }
}

/// Runs one parsed command and returns the rendered table.
pub fn execute(cli: &Cli) -> multiaffine::Result<Vec<u8>> {
    let ctx = Ctx { global: &cli.global };
    let table = match &cli.command {
        Command::Fisher(a) => {
            let fam = parse_family(&a.family)?;
            let chart: Chart = a.chart.parse()?;
            let p = point(&fam, chart, "point", &a.point)?;
            let g = fisher_metric(&fam, &p)?;
            let mut t = ctx.table(
                "fisher",
                ["i", "j", "g"],
                &[("family", a.family.clone()), ("chart", a.chart.clone()), ("point", a.point.clone())],
            )?;
            for i in 0..g.dim() {
                for j in 0..g.dim() {
                    t.push_row(vec![i as f64, j as f64, g.components[(i, j)]])?;
                }
            }
            t
        }
        Command::Legendre(a) => {
            let theta = ParameterPoint::natural(parse_list("theta", &a.theta)?);
            let quad;
            let fam;
            let pot: &dyn PotentialPair = if a.potential == "quadratic" {
                quad = QuadraticPotential { dim: theta.dim() };
                &quad
            } else {
                fam = parse_family(&a.potential)?;
                fam.validate(&theta)?;
                &fam
            };
            let (eta, phi) = legendre_dual(pot, &theta)?;
            let psi = pot.psi(theta.coords())?;
            let mut t = ctx.table(
                "legendre",
                ["component", "theta", "eta", "psi", "phi"],
                &[("potential", a.potential.clone()), ("theta", a.theta.clone())],
            )?;
            for (i, (th, et)) in theta.coords().iter().zip(eta.coords()).enumerate() {
                t.push_row(vec![i as f64, *th, *et, psi, phi])?;
            }
            t
        }
        Command::Divergence(a) => {
            let fam = parse_family(&a.family)?;
            let chart: Chart = a.chart.parse()?;
            let p = point(&fam, chart, "p", &a.p)?;
            let q = point(&fam, chart, "q", &a.q)?;
            let kl = kl_divergence(&fam, &p, &q)?;
            let bregman = bregman_divergence(&fam, &fam.convert(&q, Chart::Natural)?, &fam.convert(&p, Chart::Mean)?)?;
            let mut params = vec![
                ("family", a.family.clone()),
                ("chart", a.chart.clone()),
                ("p", a.p.clone()),
                ("q", a.q.clone()),
            ];
            match &a.r {
                Some(rs) => {
                    let r = point(&fam, chart, "r", rs)?;
                    params.push(("r", rs.clone()));
                    let gap = pythagorean_gap(&fam, &p, &r, &q)?;
                    let mut t = ctx.table("divergence", ["kl", "bregman", "gap"], &params)?;
                    t.push_row(vec![kl, bregman, gap])?;
                    t
                }
                None => {
                    let mut t = ctx.table("divergence", ["kl", "bregman"], &params)?;
                    t.push_row(vec![kl, bregman])?;
                    t
                }
            }
        }
        Command::Lengths(a) => {
            let fam = parse_family(&a.family)?;
            let chart: Chart = a.chart.parse()?;
            let from = point(&fam, chart, "from", &a.from)?;
            let to = point(&fam, chart, "to", &a.to)?;
            let path = ParamPath::straight(&from, &to, a.samples)?;
            let rep = length_report(&path, &fam)?;
            let mut t = ctx
                .table(
                    "lengths",
                    ["primal", "dual", "harmonic", "divergence_based"],
                    &[
                        ("family", a.family.clone()),
                        ("chart", a.chart.clone()),
                        ("from", a.from.clone()),
                        ("to", a.to.clone()),
                        ("samples", a.samples.to_string()),
                    ],
                )?
                .with_grid(rep.grid_size as u64);
            t.push_row(vec![rep.primal, rep.dual, rep.harmonic, rep.divergence_based])?;
            t
        }
        Command::Geodesic(a) => {
            let fam = parse_family(&a.family)?;
            let chart: Chart = a.chart.parse()?;
            let from = point(&fam, chart, "from", &a.from)?;
            let to = point(&fam, chart, "to", &a.to)?;
            let path = geodesic(&fam, chart, &from, &to, a.alpha, a.samples)?;
            let mut cols = vec!["t".to_string()];
            cols.extend((0..path.dim()).map(|i| format!("x{i}")));
            let mut t = ctx
                .table(
                    "geodesic",
                    cols,
                    &[
                        ("family", a.family.clone()),
                        ("chart", a.chart.clone()),
                        ("from", a.from.clone()),
                        ("to", a.to.clone()),
                        ("alpha", a.alpha.to_string()),
                        ("samples", a.samples.to_string()),
                    ],
                )?
                .with_grid(a.samples as u64);
            for (i, x) in path.samples().iter().enumerate() {
                let mut row = vec![i as f64 * path.step()];
                row.extend_from_slice(x);
                t.push_row(row)?;
            }
            t
        }
        Command::Berry(a) => {
            let theta_c = ctx.angle("theta-c", a.theta_c)?;
            let path = LoopPath::latitude(theta_c, a.segments)?;
            let mesh = SurfaceMesh::polar_cap(theta_c, a.order)?;
            let family: Box<dyn StateFamily> = match a.family {
                BerryFamily::SpinHalf => Box::new(SpinHalf),
                BerryFamily::RealAmplitude => Box::new(RealAmplitude),
            };
            let rep = stokes_check(&family, &mesh, &path)?;
            let mut t = ctx
                .table(
                    "berry",
                    ["theta_c", "phase", "total_phase", "winding", "surface_flux", "discrepancy"],
                    &[
                        ("family", format!("{:?}", a.family)),
                        ("theta-c", a.theta_c.to_string()),
                        ("segments", a.segments.to_string()),
                        ("order", a.order.to_string()),
                    ],
                )?
                .with_grid(a.segments as u64)
                .with_tolerance("mesh_boundary", 1e-10);
            t.push_row(vec![
                theta_c,
                rep.loop_phase.principal,
                rep.loop_phase.total,
                rep.loop_phase.winding as f64,
                rep.surface_flux,
                rep.discrepancy,
            ])?;
            t
        }
        Command::Chsh(a) => {
            let psi = match a.state {
                StateSpec::Singlet => BipartiteState::singlet(),
                StateSpec::Bell => BipartiteState::bell(),
                StateSpec::Product => BipartiteState::partially_entangled(1.0)?,
                StateSpec::Partial => BipartiteState::partially_entangled(a.weight)?,
                StateSpec::Random => random_state(ctx.global.seed)?,
            };
            let mut params = vec![("state", format!("{:?}", a.state).to_lowercase())];
            if a.state == StateSpec::Partial {
                params.push(("weight", a.weight.to_string()));
            }
            match (a.scan, &a.settings) {
                (Some(n), _) => {
                    params.push(("scan", n.to_string()));
                    ctx.stamp(tsirelson_scan(&psi, n)?.table, &params)
                }
                (None, Some(s)) => {
                    let raw = parse_list("settings", s)?;
                    if raw.len() != 4 {
                        return Err(invalid("settings", format!("expected 4 angles, found {}", raw.len())));
                    }
                    let mut x = [0.0; 4];
                    for (xi, v) in x.iter_mut().zip(&raw) {
                        *xi = ctx.angle("settings", *v)?;
                    }
                    params.push(("settings", s.clone()));
                    let r = chsh_s(&psi, x)?;
                    let mut t = ctx.table(
                        "chsh",
                        ["a", "a_prime", "b", "b_prime", "e_ab", "e_ab_prime", "e_a_prime_b", "e_a_prime_b_prime", "s", "regime"],
                        &params,
                    )?;
                    let mut row = x.to_vec();
                    row.extend_from_slice(&r.correlators);
                    row.push(r.s);
                    row.push(regime_code(r.regime));
                    t.push_row(row)?;
                    t
                }
                (None, None) => return Err(invalid("settings", "give --settings or --scan")),
            }
        }
        Command::Decompose(a) => {
            let theta = ctx.angle("theta", a.theta)?;
            let (e, c) = ec_decomposition(theta, a.n)?;
            let entropy = entanglement_entropy(&schmidt(&controlled_rotation_benchmark(theta)?)?);
            let mut t = ctx.table(
                "decompose",
                ["theta", "n", "e", "c", "entropy"],
                &[("theta", a.theta.to_string()), ("N", a.n.to_string())],
            )?;
            t.push_row(vec![theta, a.n, e, c, entropy])?;
            t
        }
        Command::Membrane(a) => {
            let prob = MembraneProblem::new(a.tension, a.pressure, a.radius, a.nodes)?;
            let field = membrane_solve(&prob)?;
            let mut t = ctx
                .table(
                    "membrane",
                    ["r", "w", "closed_form", "abs_error"],
                    &[
                        ("T", a.tension.to_string()),
                        ("p", a.pressure.to_string()),
                        ("R", a.radius.to_string()),
                        ("nodes", a.nodes.to_string()),
                    ],
                )?
                .with_grid(a.nodes as u64);
            for (r, w) in field.r.iter().zip(&field.w) {
                let exact = membrane_closed_form(&prob, *r)?;
                t.push_row(vec![*r, *w, exact, (w - exact).abs()])?;
            }
            t
        }
        Command::String(a) => {
            let model = StringModel::new(a.amplitude, parse_list("fs", &a.levels)?)?;
            let rep = effective_length_report(&model, a.x)?;
            let q = wavelength_quantization_check(&model, a.x)?;
            let mut t = ctx
                .table(
                    "string",
                    [
                        "amplitude",
                        "frequency",
                        "x",
                        "exact",
                        "approximate",
                        "slope_integral",
                        "absolute_discrepancy",
                        "relative_discrepancy",
                        "wavelength",
                        "waves",
                        "whole_waves",
                    ],
                    &[("A", a.amplitude.to_string()), ("fs", a.levels.clone()), ("x", a.x.to_string())],
                )?
                .with_tolerance("arc_length", multiaffine::continuum::ARC_LENGTH_TOL)
                .with_tolerance("quantization", multiaffine::continuum::QUANTIZATION_TOL);
            t.push_row(vec![
                model.amplitude(),
                model.frequency(),
                a.x,
                rep.exact,
                rep.approximate,
                rep.slope_integral,
                rep.absolute_discrepancy,
                rep.relative_discrepancy,
                q.wavelength,
                q.ratio,
                if q.is_integer { 1.0 } else { 0.0 },
            ])?;
            t
        }
    };
    Ok(match cli.global.format {
        Format::Csv => to_csv(&table),
        Format::Json => to_json(&table),
    })
}

/// One-line `<field>: <reason>` form of a parse error.
fn clap_diagnostic(e: &clap::Error) -> String {
    use clap::error::{ContextKind, ContextValue};
    let first = match e.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => Some(s.as_str()),
        Some(ContextValue::Strings(v)) => v.first().map(String::as_str),
        _ => None,
    };
    let field = first
        .and_then(|s| s.split_whitespace().next())
        .map_or("arguments", |s| s.trim_start_matches('-'));
    let text = e.render().to_string();
    let mut reason = text.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
    if reason.ends_with(':') {
        reason = "required argument was not provided".into();
    }
    format!("{field}: {reason}")
}

/// Parses `args`, runs the command and writes the result; returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            eprintln!("error: {}", clap_diagnostic(&e));
            return 2;
        }
    };
    let bytes = match execute(&cli) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.global.output {
        Some(path) => fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: output: {e}");
            2
        }
    }
}
