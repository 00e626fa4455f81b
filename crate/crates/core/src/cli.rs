//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a `check` assertion failed, 2 usage or
//! validation error.

use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::discrete_time::dt_translation;
use crate::error::{Error, Result};
use crate::graph::{self, laplacian, Graph, GraphKind};
use crate::io;
use crate::joint::{self, JointOperator, TimeVertexSignal};
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::schrodinger;
use crate::spectral::{dft_basis, eig_sym, BasisSource, SpectralBasis};
use crate::translation::{self, frequencies, gto, EigenOrdering, FrequencySpec, Variant};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Eigen-gap below which Gavili operators depend on the solver's basis.
const GAP_WARNING: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "isoshift", version, about = "Isometric translation operators on graphs and time-vertex signals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate graphs in edge-list format.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Build a translation or shift operator and write it as JSON.
    Op(OpArgs),
    /// Apply an operator JSON file to a signal.
    Apply(ApplyArgs),
    /// Power spectrum of a vertex signal, or joint spectrum of a time-vertex signal.
    Spectrum(SpectrumArgs),
    /// Schrödinger evolution snapshots of a vertex signal.
    Evolve(EvolveArgs),
    /// Run an invariant suite and report PASS/FAIL per assertion.
    Check(CheckArgs),
}

#[derive(Debug, Subcommand)]
enum GraphAction {
    /// Generate a graph.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Cycle,
    Path,
    Complete,
    Grid,
    ErdosRenyi,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Vertex count (grid: number of rows).
    #[arg(long)]
    n: usize,
    /// Grid columns.
    #[arg(long)]
    m: Option<usize>,
    /// Erdős–Rényi edge probability.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Weight carried by every edge.
    #[arg(long, default_value_t = 1.0)]
    weight: f64,
    /// Output path (standard output when omitted).
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpKind {
    Gto,
    Dt,
    Jto,
    JtoSpectral,
    Segarra,
    SegarraBiv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    LaplacianSqrt,
    Girault,
    GaviliE,
    GaviliPhi,
    Custom,
}

impl VariantArg {
    fn name(self) -> &'static str {
        match self {
            VariantArg::LaplacianSqrt => "laplacian-sqrt",
            VariantArg::Girault => "girault",
            VariantArg::GaviliE => "gavili-e",
            VariantArg::GaviliPhi => "gavili-phi",
            VariantArg::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderingArg {
    Descending,
    Columns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Laplacian,
    Adjacency,
}

#[derive(Debug, Args, Clone)]
struct VariantOpts {
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Upper bound on Laplacian eigenvalues for the girault variant.
    #[arg(long)]
    rho: Option<f64>,
    /// Phases for gavili-phi, one per line.
    #[arg(long)]
    phi_file: Option<PathBuf>,
    /// Frequencies for the custom variant, one per line.
    #[arg(long)]
    values_file: Option<PathBuf>,
    /// Phase ordering for gavili-e.
    #[arg(long, value_enum)]
    ordering: Option<OrderingArg>,
    /// Basis for the custom variant.
    #[arg(long, value_enum, default_value = "laplacian")]
    basis: BasisArg,
}

#[derive(Debug, Args)]
struct OpArgs {
    #[arg(value_enum)]
    kind: OpKind,
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Number of time steps M.
    #[arg(long)]
    time: Option<usize>,
    #[command(flatten)]
    variant: VariantOpts,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    upsilon: Option<f64>,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    #[arg(long)]
    op: PathBuf,
    /// Signal file: CSV (real) or JSON (complex).
    #[arg(long)]
    signal: PathBuf,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    signal: PathBuf,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    variant: VariantOpts,
    /// Final evolution time.
    #[arg(long = "t", allow_hyphen_values = true)]
    t: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Number of intervals; snapshots are taken at t·j/steps for j = 0..=steps.
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long)]
    signal: PathBuf,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Unitarity,
    Group,
    SpectrumInvariance,
    Theorem1,
    Transition,
    Jwss,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Vertex graph; the jwss suite defaults to the cycle on N vertices.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    time: Option<usize>,
    #[command(flatten)]
    variant: VariantOpts,
    /// Comma-separated translation values.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.7])]
    kappa: Vec<f64>,
    /// Comma-separated evolution times for the transition suite.
    #[arg(long = "t", value_delimiter = ',', default_values_t = vec![1.0, 2.0, 5.0])]
    t: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Joint shifts as "k,u;k,u".
    #[arg(long)]
    grid: Option<String>,
    /// Directory of ensemble signals (CSV or JSON), read in file-name order.
    #[arg(long)]
    signals_dir: Option<PathBuf>,
    /// Pass threshold for the jwss suite.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Graph { action: GraphAction::Gen(args) } => cmd_graph_gen(&args),
        Command::Op(args) => cmd_op(&args),
        Command::Apply(args) => cmd_apply(&args),
        Command::Spectrum(args) => cmd_spectrum(&args),
        Command::Evolve(args) => cmd_evolve(&args),
        Command::Check(args) => cmd_check(&args),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph> {
    graph::load_edges(&fs::read_to_string(path)?)
}

fn cmd_graph_gen(args: &GenArgs) -> Result<i32> {
    let kind = match args.kind {
        KindArg::Cycle => GraphKind::Cycle { n: args.n },
        KindArg::Path => GraphKind::Path { n: args.n },
        KindArg::Complete => GraphKind::Complete { n: args.n },
        KindArg::Grid => GraphKind::Grid {
            rows: args.n,
            cols: args.m.ok_or_else(|| usage("grid needs --m (columns)"))?,
        },
        KindArg::ErdosRenyi => GraphKind::ErdosRenyi {
            n: args.n,
            p: args.p.ok_or_else(|| usage("erdos-renyi needs --p"))?,
        },
    };
    let g = graph::generate_weighted(kind, args.weight, args.seed)?;
    emit(args.output.as_deref(), &graph::save_edges(&g))?;
    Ok(EXIT_OK)
}

fn read_values(path: &Path) -> Result<Vec<f64>> {
    io::parse_values(&fs::read_to_string(path)?)
}

/// Basis and resolved frequencies for a variant on graph `g`.
fn graph_operator_parts(g: &Graph, opts: &VariantOpts, variant: VariantArg) -> Result<(SpectralBasis, FrequencySpec)> {
    let lap = || eig_sym(&laplacian(g), BasisSource::Laplacian);
    let adj = || -> Result<SpectralBasis> {
        let b = eig_sym(&g.adjacency(), BasisSource::Adjacency)?;
        if b.min_eigen_gap() < GAP_WARNING {
            eprintln!(
                "warning: adjacency eigenvalues are (nearly) repeated (min gap {:e}); \
                 the {} operator depends on the eigensolver's basis",
                b.min_eigen_gap(),
                variant.name()
            );
        }
        Ok(b)
    };
    let (basis, v) = match variant {
        VariantArg::LaplacianSqrt => (lap()?, Variant::LaplacianSqrt),
        VariantArg::Girault => (lap()?, Variant::GiraultReduced { rho: opts.rho }),
        VariantArg::GaviliE => {
            let ordering = opts.ordering.map(|o| match o {
                OrderingArg::Descending => EigenOrdering::DescendingEigenvalue,
                OrderingArg::Columns => EigenOrdering::BasisColumns,
            });
            (adj()?, Variant::GaviliUniform { ordering })
        }
        VariantArg::GaviliPhi => {
            let path = opts.phi_file.as_deref().ok_or_else(|| usage("gavili-phi needs --phi-file"))?;
            (adj()?, Variant::GaviliPhases { phi: read_values(path)? })
        }
        VariantArg::Custom => {
            let path = opts.values_file.as_deref().ok_or_else(|| usage("custom needs --values-file"))?;
            let basis = match opts.basis {
                BasisArg::Laplacian => lap()?,
                BasisArg::Adjacency => eig_sym(&g.adjacency(), BasisSource::Adjacency)?,
            };
            (basis, Variant::Custom { values: read_values(path)? })
        }
    };
    if opts.rho.is_some() && variant != VariantArg::Girault {
        return Err(usage("--rho only applies to --variant girault"));
    }
    if opts.phi_file.is_some() && variant != VariantArg::GaviliPhi {
        return Err(usage("--phi-file only applies to --variant gavili-phi"));
    }
    let f = frequencies(&v, &basis)?;
    Ok((basis, f))
}

fn require<T: Copy>(v: Option<T>, flag: &str, what: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("{what} needs {flag}")))
}

fn cmd_op(args: &OpArgs) -> Result<i32> {
    let name = format!("op {:?}", args.kind).to_lowercase();
    let graph = || -> Result<Graph> { load_graph(require(args.graph.as_ref(), "--graph", &name)?) };
    let variant = || require(args.variant.variant, "--variant", &name);
    let (matrix, meta) = match args.kind {
        OpKind::Gto => {
            let g = graph()?;
            let (b, f) = graph_operator_parts(&g, &args.variant, variant()?)?;
            let op = gto(&b, &f, require(args.kappa, "--kappa", &name)?)?;
            (op.matrix().clone(), op.metadata())
        }
        OpKind::Dt => {
            let m = require(args.time, "--time", &name)?;
            let upsilon = require(args.upsilon.or(args.kappa), "--upsilon", &name)?;
            (dt_translation(m, upsilon)?, json!({"kind": "dt", "time": m, "upsilon": upsilon}))
        }
        OpKind::Jto | OpKind::JtoSpectral => {
            let g = graph()?;
            let m = require(args.time, "--time", &name)?;
            let kappa = require(args.kappa, "--kappa", &name)?;
            let upsilon = require(args.upsilon, "--upsilon", &name)?;
            let (b, f) = graph_operator_parts(&g, &args.variant, variant()?)?;
            let op = if args.kind == OpKind::Jto {
                joint::jto_kronecker(&gto(&b, &f, kappa)?, m, upsilon)?
            } else {
                joint::jto_spectral(&b, &dft_basis(m)?, &f, kappa, upsilon)?
            };
            (op.matrix().clone(), joint_meta(&op, Some(&f)))
        }
        OpKind::Segarra | OpKind::SegarraBiv => {
            if args.variant.variant.is_some() {
                return Err(usage("segarra operators take no --variant"));
            }
            let g = graph()?;
            let m = require(args.time, "--time", &name)?;
            let wd = graph::generate(GraphKind::Cycle { n: m }, None)?.adjacency();
            let op = if args.kind == OpKind::Segarra {
                joint::segarra_shift(&g.adjacency(), &wd)?
            } else {
                let as_power = |v: f64, flag: &str| -> Result<u32> {
                    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                        Ok(v as u32)
                    } else {
                        Err(usage(format!("{flag} must be a nonnegative integer for segarra-biv")))
                    }
                };
                let kappa = as_power(require(args.kappa, "--kappa", &name)?, "--kappa")?;
                let upsilon = as_power(require(args.upsilon, "--upsilon", &name)?, "--upsilon")?;
                let bg = eig_sym(&g.adjacency(), BasisSource::Adjacency)?;
                let bd = eig_sym(&wd, BasisSource::Adjacency)?;
                joint::segarra_bivariate(&bg, &bd, kappa, upsilon)?
            };
            (op.matrix().clone(), joint_meta(&op, None))
        }
    };
    emit(args.output.as_deref(), &io::matrix_to_json(&matrix, meta)?)?;
    Ok(EXIT_OK)
}

fn joint_meta(op: &JointOperator, f: Option<&FrequencySpec>) -> serde_json::Value {
    let mut meta = op.metadata();
    if let Some(f) = f {
        meta["graph"] = f.metadata();
    }
    meta
}

fn cmd_apply(args: &ApplyArgs) -> Result<i32> {
    let (op, _) = io::matrix_from_json(&fs::read_to_string(&args.op)?)?;
    if !op.is_square() {
        return Err(usage(format!("operator is {}x{}, expected square", op.nrows(), op.ncols())));
    }
    let x = io::read_signal(&args.signal)?;
    let (rows, cols) = x.shape();
    if rows * cols != op.ncols() {
        return Err(Error::DimensionMismatch { expected: op.ncols(), found: rows * cols });
    }
    let y = &op * linalg::vec_columns(&x);
    let y = linalg::unvec_columns(&y, rows, cols);
    emit(args.output.as_deref(), &io::matrix_to_json(&y, json!({"kind": "signal"}))?)?;
    Ok(EXIT_OK)
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<i32> {
    let g = load_graph(&args.graph)?;
    let b = eig_sym(&laplacian(&g), BasisSource::Laplacian)?;
    let x = io::read_signal(&args.signal)?;
    let text = if x.ncols() == 1 {
        let v: ComplexVector = x.column(0).into_owned();
        io::format_values(&translation::power_spectrum(&v, &b)?)
    } else {
        let bd = dft_basis(x.ncols())?;
        io::format_csv(&joint::joint_power_spectrum(&TimeVertexSignal::new(x)?, &b, &bd)?)
    };
    emit(args.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_evolve(args: &EvolveArgs) -> Result<i32> {
    let g = load_graph(&args.graph)?;
    let variant = args.variant.variant.unwrap_or(VariantArg::LaplacianSqrt);
    let (b, f) = graph_operator_parts(&g, &args.variant, variant)?;
    let h = schrodinger::hamiltonian(&b, &f)?;
    let x = io::read_signal(&args.signal)?;
    if x.ncols() != 1 {
        return Err(usage("evolve needs a vertex signal (one value per line)"));
    }
    let u0: ComplexVector = x.column(0).into_owned();
    if args.steps == 0 {
        return Err(usage("--steps must be positive"));
    }
    let steps = if args.t == 0.0 { 0 } else { args.steps };
    let n = u0.len();
    let mut out = String::from("# t");
    for i in 0..n {
        out.push_str(&format!(",re{i}"));
    }
    for i in 0..n {
        out.push_str(&format!(",im{i}"));
    }
    out.push('\n');
    for j in 0..=steps {
        let t = if steps == 0 { 0.0 } else { args.t * j as f64 / steps as f64 };
        let u = schrodinger::evolve(&u0, &h, t, args.alpha)?;
        let mut row = vec![t.to_string()];
        row.extend(u.iter().map(|z| z.re.to_string()));
        row.extend(u.iter().map(|z| z.im.to_string()));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    emit(args.output.as_deref(), &out)?;
    Ok(EXIT_OK)
}

/// Collects PASS/FAIL lines for a check suite.
struct Report {
    lines: Vec<String>,
    failed: usize,
}

impl Report {
    fn new() -> Self {
        Self { lines: Vec::new(), failed: 0 }
    }

    fn assert(&mut self, name: impl AsRef<str>, residual: f64, tol: f64) {
        let pass = residual <= tol;
        if !pass {
            self.failed += 1;
        }
        self.lines.push(format!(
            "{} {} residual={:e} tol={:e}",
            if pass { "PASS" } else { "FAIL" },
            name.as_ref(),
            residual,
            tol
        ));
    }

    fn finish(self) -> i32 {
        for l in &self.lines {
            println!("{l}");
        }
        let total = self.lines.len();
        println!("{} of {} assertions passed", total - self.failed, total);
        if self.failed == 0 {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

/// Distinct phases `2π(ℓ + 1/2)/N` used when no phase file is given.
fn default_phases(n: usize) -> Vec<f64> {
    (0..n).map(|l| TAU * (l as f64 + 0.5) / n as f64).collect()
}

/// Variants exercised by a check: the requested one, or all four GTO
/// variants.
fn check_variants(g: &Graph, opts: &VariantOpts) -> Result<Vec<(String, SpectralBasis, FrequencySpec)>> {
    if let Some(v) = opts.variant {
        let (b, f) = graph_operator_parts(g, opts, v)?;
        return Ok(vec![(v.name().to_string(), b, f)]);
    }
    let lap = eig_sym(&laplacian(g), BasisSource::Laplacian)?;
    let adj = eig_sym(&g.adjacency(), BasisSource::Adjacency)?;
    let mut out = Vec::new();
    for (name, b, v) in [
        ("laplacian-sqrt", &lap, Variant::LaplacianSqrt),
        ("girault", &lap, Variant::GiraultReduced { rho: None }),
        ("gavili-e", &adj, Variant::GaviliUniform { ordering: None }),
        ("gavili-phi", &adj, Variant::GaviliPhases { phi: default_phases(g.n()) }),
    ] {
        out.push((name.to_string(), b.clone(), frequencies(&v, b)?));
    }
    Ok(out)
}

fn lap_sqrt_parts(g: &Graph, opts: &VariantOpts) -> Result<(SpectralBasis, FrequencySpec)> {
    graph_operator_parts(g, opts, opts.variant.unwrap_or(VariantArg::LaplacianSqrt))
}

fn parse_grid(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for pair in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
        let parse = |s: &str| s.parse::<f64>().map_err(|_| usage(format!("bad grid value {s:?}")));
        match parts.as_slice() {
            [k, u] => out.push((parse(k)?, parse(u)?)),
            _ => return Err(usage(format!("grid entry {pair:?} is not \"kappa,upsilon\""))),
        }
    }
    if out.is_empty() {
        return Err(usage("empty --grid"));
    }
    Ok(out)
}

fn random_vector(n: usize, seed: u64) -> ComplexVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexVector::from_fn(n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
}

fn cmd_check(args: &CheckArgs) -> Result<i32> {
    let mut report = Report::new();
    if args.suite == Suite::Jwss {
        check_jwss(args, &mut report)?;
        return Ok(report.finish());
    }
    let g = load_graph(require(args.graph.as_ref(), "--graph", "check")?)?;
    match args.suite {
        Suite::Unitarity => {
            for (name, b, f) in check_variants(&g, &args.variant)? {
                for &k in &args.kappa {
                    let op = gto(&b, &f, k)?;
                    report.assert(format!("unitary gto {name} kappa={k}"), op.unitarity_residual(), 1e-10);
                    if let Some(m) = args.time {
                        let tj = joint::jto_kronecker(&op, m, k)?;
                        report.assert(format!("unitary jto {name} kappa={k} upsilon={k}"), tj.unitarity_residual(), 1e-10);
                    }
                }
            }
        }
        Suite::Group => {
            for (name, b, f) in check_variants(&g, &args.variant)? {
                for &k1 in &args.kappa {
                    for &k2 in &args.kappa {
                        let t1 = gto(&b, &f, k1)?;
                        let t2 = gto(&b, &f, k2)?;
                        let sum = gto(&b, &f, k1 + k2)?;
                        let p12 = t1.matrix() * t2.matrix();
                        let p21 = t2.matrix() * t1.matrix();
                        let res = linalg::max_abs_diff(&p12, sum.matrix()).max(linalg::max_abs_diff(&p21, sum.matrix()));
                        report.assert(format!("group {name} kappa1={k1} kappa2={k2}"), res, 1e-9);
                    }
                }
            }
        }
        Suite::SpectrumInvariance => {
            let x = random_vector(g.n(), args.seed);
            for (name, b, f) in check_variants(&g, &args.variant)? {
                let before = translation::power_spectrum(&x, &b)?;
                for &k in &args.kappa {
                    let y = translation::translate(&gto(&b, &f, k)?, &x)?;
                    let after = translation::power_spectrum(&y, &b)?;
                    let res = before.iter().zip(&after).fold(0.0f64, |m, (a, c)| m.max((a - c).abs()));
                    report.assert(format!("spectrum {name} kappa={k}"), res, 1e-10);
                }
            }
        }
        Suite::Theorem1 => {
            let m = require(args.time, "--time", "check theorem1")?;
            let grid = parse_grid(args.grid.as_deref().unwrap_or("1,1;0.5,2;3,0"))?;
            let (b, f) = lap_sqrt_parts(&g, &args.variant)?;
            let bd = dft_basis(m)?;
            let psi_j = joint::joint_basis(&b, &bd)?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let x = TimeVertexSignal::new(ComplexMatrix::from_fn(g.n(), m, |_, _| {
                Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            }))?;
            let spectrum = joint::joint_power_spectrum(&x, &b, &bd)?;
            for (k, u) in grid {
                let kron = joint::jto_kronecker(&gto(&b, &f, k)?, m, u)?;
                let spec = joint::jto_spectral(&b, &bd, &f, k, u)?;
                let tag = format!("kappa={k} upsilon={u}");
                report.assert(format!("kronecker=spectral {tag}"), linalg::max_abs_diff(kron.matrix(), spec.matrix()), 1e-9);
                report.assert(format!("unitary kronecker {tag}"), kron.unitarity_residual(), 1e-10);
                report.assert(format!("unitary spectral {tag}"), spec.unitarity_residual(), 1e-10);
                let conj = psi_j.adjoint() * kron.matrix() * &psi_j;
                report.assert(format!("convolutive {tag}"), linalg::max_off_diagonal(&conj), 1e-10);
                let moved = joint::joint_power_spectrum(&kron.apply(&x)?, &b, &bd)?;
                report.assert(format!("joint spectrum {tag}"), (moved - &spectrum).amax(), 1e-10);
            }
        }
        Suite::Transition => {
            let (b, f) = lap_sqrt_parts(&g, &args.variant)?;
            let h = schrodinger::hamiltonian(&b, &f)?;
            let u0 = random_vector(g.n(), args.seed);
            for &t in &args.t {
                let spectral = schrodinger::transition_spectral(&h, t, args.alpha)?;
                let op = gto(&b, &f, t / args.alpha)?;
                report.assert(format!("transition=gto t={t} alpha={}", args.alpha), linalg::max_abs_diff(&spectral, op.matrix()), 1e-10);
                for tol in [1e-8, 1e-12] {
                    let series = schrodinger::transition_series(&h, t, args.alpha, tol)?;
                    report.assert(format!("series t={t} tol={tol:e}"), linalg::max_abs_diff(&series, &spectral), 10.0 * tol);
                }
                let u = schrodinger::evolve(&u0, &h, t, args.alpha)?;
                report.assert(format!("norm conserved t={t}"), (u.norm() - u0.norm()).abs(), 1e-10);
            }
        }
        Suite::Jwss => unreachable!(),
    }
    Ok(report.finish())
}

fn check_jwss(args: &CheckArgs, report: &mut Report) -> Result<()> {
    let dir = require(args.signals_dir.as_ref(), "--signals-dir", "check jwss")?;
    let grid = parse_grid(require(args.grid.as_ref(), "--grid", "check jwss")?)?;
    let signals = read_signal_dir(dir)?;
    let (n, m) = signals.first().map(TimeVertexSignal::shape).ok_or_else(|| usage(format!("no signals in {}", dir.display())))?;
    let g = match &args.graph {
        Some(path) => load_graph(path)?,
        None => graph::generate(GraphKind::Cycle { n }, None)?,
    };
    let (b, f) = lap_sqrt_parts(&g, &args.variant)?;
    let result = joint::jwss_check(&signals, &grid, |k, u| joint::jto_kronecker(&gto(&b, &f, k)?, m, u), args.tol)?;
    for s in &result.shifts {
        let tag = format!("kappa={} upsilon={}", s.kappa, s.upsilon);
        report.assert(format!("jwss mean {tag}"), s.mean_deviation, args.tol);
        report.assert(format!("jwss second moment {tag}"), s.moment_deviation, args.tol);
    }
    Ok(())
}

fn read_signal_dir(dir: &Path) -> Result<Vec<TimeVertexSignal>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "csv" | "json"))
        })
        .collect();
    paths.sort();
    paths.iter().map(|p| TimeVertexSignal::new(io::read_signal(p)?)).collect()
}
