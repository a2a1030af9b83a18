//! Command-line front end for `fourstab`.
//!
//! [`dispatch`] is the whole program; `main` only wires it to the process
//! streams so tests can drive it in memory.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use fourstab::bounds::{self, BoundReport, ClumpConstants};
use fourstab::core_matrix::{
    build_dft, build_figure1, build_gamma, build_instability_submatrix, build_perturbed_dft_freq, build_vandermonde,
    ComplexDense, FrequencySet, NodeSet,
};
use fourstab::experiments::{random_frequency_perturbation, trial_rng, ExperimentRequest, SweepConfig};
use fourstab::exp_systems::{classify_system, separation, ExponentialSystemSpec};
use fourstab::spectral::{default_rank_tol, extreme_singular_values, summarize, svd_values, SpectralOptions, SpectralSummary};
use fourstab::verify::{run_verify, Suite};

pub mod config;
pub mod parse;

pub use config::{load_config, parse_config, CliConfig, ConfigError};
use parse::{parse_finite, parse_int_points, parse_points, parse_real, parse_reals, parse_sizes};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fourstab", version, about = "Generalized Fourier matrices and their stability bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a matrix and emit it as JSON or CSV
    Build(BuildArgs),
    /// Singular spectrum of a matrix
    Spectral(SpectralArgs),
    /// Evaluate a closed-form stability bound
    Bounds(BoundsArgs),
    /// Classify the exponential system on a union of unit cubes
    Classify(ClassifyArgs),
    /// Run the invariant suites; exits nonzero on any violation
    Verify(VerifyArgs),
    /// Run a named sweep from a JSON config
    Experiment(ExperimentArgs),
    /// Run any command from a JSON config
    Run(RunArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Exactly one matrix source.
#[derive(Debug, Args)]
struct MatrixArgs {
    /// DFT on the lattice with these sizes, e.g. 4 or 8,8
    #[arg(long, value_name = "M")]
    dft: Option<String>,
    /// Lattice sizes for a DFT with randomly perturbed frequencies
    #[arg(long, value_name = "M")]
    m: Option<String>,
    /// Perturbation size; one entry is pinned to ±ell
    #[arg(long, value_parser = parse_finite, requires = "m")]
    ell: Option<f64>,
    /// Use a rank-one (per-axis) perturbation
    #[arg(long, requires = "m")]
    rank_one: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shifts of the exponential system, e.g. "0,1/2" or "0,0;1/2,1/2"
    #[arg(long, requires = "p")]
    deltas: Option<String>,
    /// Integer cube offsets
    #[arg(long, requires = "deltas")]
    p: Option<String>,
    /// Vandermonde nodes on the torus
    #[arg(long, requires = "rows")]
    nodes: Option<String>,
    /// Vandermonde row count
    #[arg(long = "L", requires = "nodes")]
    rows: Option<usize>,
    /// Leading N x N block of the (N+1)-point DFT, N odd
    #[arg(long, value_name = "N")]
    instability: Option<usize>,
    /// F'_N, the N-point DFT with nodes shifted by ∓1/4, N odd
    #[arg(long, value_name = "N")]
    figure1: Option<usize>,
    /// Matrix JSON as written by `build`
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    /// Full decomposition up to the crossover size, iterative beyond
    Auto,
    Full,
    Iterative,
}

#[derive(Debug, Args)]
struct SpectralArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    method: MethodChoice,
    /// Size above which `auto` switches to the iterative path
    #[arg(long)]
    crossover: Option<usize>,
    /// Convergence tolerance of the iterative path
    #[arg(long, value_parser = parse_finite)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// dft_frequency (t3), perturbed_frame, weyl_frequency, weyl_node,
    /// vandermonde_node, well_separated or clumped
    #[arg(long)]
    theorem: String,
    #[arg(long, value_name = "M")]
    m: Option<String>,
    #[arg(long, value_parser = parse_finite)]
    ell: Option<f64>,
    #[arg(long)]
    rank_one: bool,
    /// Lower frame constant of the unperturbed system
    #[arg(long, value_parser = parse_finite)]
    a: Option<f64>,
    /// Upper frame constant of the unperturbed system
    #[arg(long, value_parser = parse_finite)]
    b: Option<f64>,
    /// Dimension
    #[arg(long)]
    d: Option<usize>,
    #[arg(long = "sigma-n", value_parser = parse_finite)]
    sigma_n: Option<f64>,
    #[arg(long = "sigma-1", value_parser = parse_finite)]
    sigma_1: Option<f64>,
    #[arg(long = "sigma-r", value_parser = parse_finite)]
    sigma_r: Option<f64>,
    #[arg(long = "L")]
    rows: Option<usize>,
    #[arg(long = "N")]
    cols: Option<usize>,
    /// p of the perturbation norm; `inf` allowed
    #[arg(long, value_parser = parse_real, default_value = "inf")]
    norm: f64,
    #[arg(long, value_parser = parse_finite)]
    eps: Option<f64>,
    /// Frequencies for weyl_node
    #[arg(long)]
    omega: Option<String>,
    /// Minimum wrap distance between nodes
    #[arg(long, value_parser = parse_finite)]
    sep: Option<f64>,
    /// Nodes; their separation and count fill --sep and --N
    #[arg(long)]
    nodes: Option<String>,
    #[arg(long, value_parser = parse_finite)]
    alpha: Option<f64>,
    #[arg(long)]
    lambda: Option<usize>,
    #[arg(long, value_parser = parse_finite)]
    c_universal: Option<f64>,
    #[arg(long, value_parser = parse_finite)]
    c_small: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    deltas: String,
    #[arg(long)]
    p: String,
    /// Relative rank tolerance; defaults to max(L, N) times machine epsilon
    #[arg(long, value_parser = parse_finite)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// JSON config naming the experiment and its grid
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Where matrices behind a violated bound are written
    #[arg(long)]
    dump_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
}

/// Why a command did not finish.
enum Failure {
    /// Bad invocation; exit code 2.
    Usage(String),
    /// The computation itself failed; exit code 1.
    Compute(fourstab::Error),
    /// Ran fine but found violations; the report is already written.
    Violations(usize),
}

impl From<fourstab::Error> for Failure {
    fn from(e: fourstab::Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn error_kind(e: &fourstab::Error) -> &'static str {
    use fourstab::Error as E;
    match e {
        E::DimensionMismatch(_) => "dimension_mismatch",
        E::InvalidInput(_) => "invalid_input",
        E::NonFinite { .. } => "non_finite",
        E::NotHermitian { .. } => "not_hermitian",
        E::Unconverged { .. } => "unconverged",
        E::QuadratureMismatch { .. } => "quadrature_mismatch",
        E::Unsatisfiable(_) => "unsatisfiable",
        E::Parse(_) => "parse",
        E::Io(_) => "io",
        E::Context { source, .. } => error_kind(source),
    }
}

/// Runs one invocation and returns the process exit code.
///
/// Results go to `out`. Usage errors print usage text to `err` and return
/// 2; computation failures print a JSON error object to `err` and return 1.
pub fn dispatch<I, A>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Run(args) => run_config(&args.config, out, err),
        command => execute(command, out, err),
    };
    finish(result, err)
}

fn finish(result: Outcome, err: &mut dyn Write) -> i32 {
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nUsage: fourstab <COMMAND> [OPTIONS]; see fourstab --help");
            2
        }
        Err(Failure::Compute(e)) => {
            let obj = json!({"error": error_kind(&e), "message": e.to_string()});
            let _ = writeln!(err, "{obj}");
            1
        }
        Err(Failure::Violations(n)) => {
            let _ = writeln!(err, "{n} violation(s)");
            1
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Build(a) => cmd_build(a, out, err),
        Command::Spectral(a) => cmd_spectral(a, out, err),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Experiment(a) => {
            let cfg = load_config(&a.config)?;
            if cfg.command != "experiment" {
                return Err(usage(format!("config field \"command\": expected \"experiment\", got {:?}", cfg.command)));
            }
            run_experiment(cfg, &a, out)
        }
        Command::Run(_) => unreachable!("handled by dispatch"),
    }
}

fn run_config(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cfg = load_config(path)?;
    if cfg.command == "experiment" {
        let none = ExperimentArgs {
            config: path.to_path_buf(),
            seed: None,
            trials: None,
            out: None,
            format: None,
            dump_dir: None,
        };
        return run_experiment(cfg, &none, out);
    }
    let argv = cfg.to_argv()?;
    let cli = Cli::try_parse_from(&argv).map_err(|e| usage(format!("config {}: {}", path.display(), e.kind())))?;
    match cli.command {
        Command::Run(_) => Err(usage("config field \"command\": run cannot nest")),
        command => execute(command, out, err),
    }
}

fn emit(output: &OutputArgs, json_text: &str, csv_text: &str, out: &mut dyn Write) -> Outcome {
    emit_to(output.out.as_deref(), output.format, json_text, csv_text, out)
}

fn emit_to(path: Option<&Path>, format: Format, json_text: &str, csv_text: &str, out: &mut dyn Write) -> Outcome {
    let mut body = match format {
        Format::Json => json_text.to_string(),
        Format::Csv => csv_text.to_string(),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::Compute(fourstab::Error::Io(format!("{}: {e}", p.display())))),
        None => out
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Compute(fourstab::Error::Io(e.to_string()))),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn flag<T>(value: Option<T>, name: &str, theorem: &str) -> Result<T, Failure> {
    value.ok_or_else(|| usage(format!("--{name} is required for theorem {theorem}")))
}

fn parsed<T>(r: Result<T, String>, name: &str) -> Result<T, Failure> {
    r.map_err(|e| usage(format!("--{name}: {e}")))
}

fn node_set(text: &str) -> Result<NodeSet<f64>, Failure> {
    Ok(NodeSet::new(parsed(parse_points(text), "deltas")?)?)
}

fn offsets(text: &str) -> Result<FrequencySet<f64>, Failure> {
    Ok(FrequencySet::from_integers(parsed(parse_int_points(text), "p")?)?)
}

fn build_matrix(m: &MatrixArgs, err: &mut dyn Write) -> Result<ComplexDense<f64>, Failure> {
    let sources = [
        m.dft.is_some(),
        m.m.is_some(),
        m.deltas.is_some(),
        m.nodes.is_some(),
        m.instability.is_some(),
        m.figure1.is_some(),
        m.input.is_some(),
    ];
    match sources.iter().filter(|&&s| s).count() {
        1 => {}
        0 => return Err(usage("choose a matrix: --dft, --m, --deltas/--p, --nodes/--L, --instability, --figure1 or --input")),
        _ => return Err(usage("give exactly one matrix source")),
    }
    if let Some(sizes) = &m.dft {
        return Ok(build_dft(&parsed(parse_sizes(sizes), "dft")?)?);
    }
    if let Some(sizes) = &m.m {
        let sizes = parsed(parse_sizes(sizes), "m")?;
        let mut rng = trial_rng(m.seed, 0, 0);
        let eps = random_frequency_perturbation(&mut rng, &sizes, m.ell.unwrap_or(0.0), m.rank_one)?;
        return Ok(build_perturbed_dft_freq(&sizes, &eps, None)?);
    }
    if let (Some(d), Some(p)) = (&m.deltas, &m.p) {
        return Ok(build_gamma(&node_set(d)?, &offsets(p)?)?);
    }
    if let (Some(nodes), Some(rows)) = (&m.nodes, m.rows) {
        let v = build_vandermonde(rows, &parsed(parse_reals(nodes), "nodes")?)?;
        for w in &v.warnings {
            let _ = writeln!(err, "warning: {w}");
        }
        return Ok(v.matrix);
    }
    if let Some(n) = m.instability {
        return Ok(build_instability_submatrix(n)?);
    }
    if let Some(n) = m.figure1 {
        return Ok(build_figure1(n)?);
    }
    let path = m.input.as_ref().expect("one source is set");
    Ok(ComplexDense::read_json(path)?)
}

fn cmd_build(a: BuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let matrix = build_matrix(&a.matrix, err)?;
    emit(&a.output, &matrix.to_json_string(), &matrix.to_csv_string(), out)
}

fn spectral_csv(s: &SpectralSummary<f64>) -> String {
    let mut csv = String::from("index,sigma\n");
    for (i, v) in s.singular_values.iter().enumerate() {
        csv.push_str(&format!("{i},{v:e}\n"));
    }
    csv
}

fn cmd_spectral(a: SpectralArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let matrix = build_matrix(&a.matrix, err)?;
    let mut opts = SpectralOptions::<f64>::default();
    if let Some(c) = a.crossover {
        opts.crossover = c;
    }
    if let Some(t) = a.tol {
        opts.tol = t;
    }
    let summary = match a.method {
        MethodChoice::Auto => summarize(&matrix, &opts)?,
        MethodChoice::Full => svd_values(&matrix)?,
        MethodChoice::Iterative => {
            let ex = extreme_singular_values(&matrix, opts.tol, opts.max_iter)?;
            let singular_values = if matrix.rows().min(matrix.cols()) == 1 {
                vec![ex.sigma_max]
            } else {
                vec![ex.sigma_max, ex.sigma_min]
            };
            let condition = if ex.sigma_min > 0.0 { ex.sigma_max / ex.sigma_min } else { f64::INFINITY };
            SpectralSummary {
                singular_values,
                sigma_max: ex.sigma_max,
                sigma_min: ex.sigma_min,
                condition,
                method: ex.method,
                residual: ex.residual,
            }
        }
    };
    emit(&a.output, &to_json(&summary), &spectral_csv(&summary), out)
}

fn theorem_report(a: &BoundsArgs) -> Result<BoundReport, Failure> {
    let name = a.theorem.trim().to_ascii_lowercase().replace('-', "_");
    let t = name.as_str();
    let sizes = || -> Result<Vec<usize>, Failure> { parsed(parse_sizes(&flag(a.m.clone(), "m", t)?), "m") };
    let node_info = || -> Result<Option<(f64, usize)>, Failure> {
        match &a.nodes {
            None => Ok(None),
            Some(text) => {
                let nodes = parsed(parse_reals(text), "nodes")?;
                Ok(Some((separation(&nodes)?, nodes.len())))
            }
        }
    };
    let report = match t {
        "t3" | "dft_frequency" => bounds::dft_freq_bounds(&sizes()?, flag(a.ell, "ell", t)?, a.rank_one)?,
        "perturbed_frame" => bounds::perturbed_frame_bounds(
            flag(a.a, "a", t)?,
            flag(a.b, "b", t)?,
            flag(a.ell, "ell", t)?,
            a.d.unwrap_or(1),
            a.rank_one,
        )?,
        "weyl_frequency" => bounds::weyl_freq_bounds(
            flag(a.sigma_n, "sigma-n", t)?,
            flag(a.sigma_1, "sigma-1", t)?,
            flag(a.rows, "L", t)?,
            flag(a.cols, "N", t)?,
            a.d.unwrap_or(1),
            a.norm,
            flag(a.eps, "eps", t)?,
        )?,
        "weyl_node" => {
            let omega = FrequencySet::new(parsed(parse_points(&flag(a.omega.clone(), "omega", t)?), "omega")?)?;
            bounds::weyl_node_bounds(
                flag(a.sigma_n, "sigma-n", t)?,
                flag(a.sigma_1, "sigma-1", t)?,
                &omega,
                flag(a.cols, "N", t)?,
                a.norm,
                flag(a.eps, "eps", t)?,
            )?
        }
        "vandermonde_node" => bounds::vandermonde_node_bounds(
            flag(a.sigma_r, "sigma-r", t)?,
            flag(a.sigma_1, "sigma-1", t)?,
            flag(a.ell, "ell", t)?,
        )?,
        "well_separated" | "wellsep" => {
            let sep = match (a.sep, node_info()?) {
                (Some(s), _) => s,
                (None, Some((s, _))) => s,
                (None, None) => return Err(usage(format!("--sep or --nodes is required for theorem {t}"))),
            };
            bounds::wellsep_bounds(flag(a.rows, "L", t)?, sep)?
        }
        "clumped" | "clump" => {
            let n = match (a.cols, node_info()?) {
                (Some(n), _) => n,
                (None, Some((_, n))) => n,
                (None, None) => return Err(usage(format!("--N or --nodes is required for theorem {t}"))),
            };
            let mut k = ClumpConstants::default();
            if let Some(c) = a.c_universal {
                k.c_universal = c;
            }
            if let Some(c) = a.c_small {
                k.c_small = c;
            }
            bounds::clump_bounds(flag(a.rows, "L", t)?, n, flag(a.alpha, "alpha", t)?, flag(a.lambda, "lambda", t)?, k)?
        }
        other => {
            return Err(usage(format!(
                "unknown theorem {other:?}; expected dft_frequency (t3), perturbed_frame, weyl_frequency, \
                 weyl_node, vandermonde_node, well_separated or clumped"
            )))
        }
    };
    Ok(report)
}

fn bounds_csv(r: &BoundReport) -> String {
    let theorem = serde_json::to_value(r.theorem).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    format!(
        "theorem,applicable,sigma_lower,sigma_upper,reason\n{},{},{},{},{}\n",
        theorem,
        r.applicable,
        opt_num(r.lower_sigma()),
        opt_num(r.upper_sigma()),
        csv_field(r.reason.as_deref().unwrap_or(""))
    )
}

fn cmd_bounds(a: BoundsArgs, out: &mut dyn Write) -> Outcome {
    let report = theorem_report(&a)?;
    emit(&a.output, &to_json(&report), &bounds_csv(&report), out)
}

fn cmd_classify(a: ClassifyArgs, out: &mut dyn Write) -> Outcome {
    let spec = ExponentialSystemSpec::new(node_set(&a.deltas)?, offsets(&a.p)?)?;
    let tol = a
        .tol
        .unwrap_or_else(|| default_rank_tol::<f64>(spec.shift_count(), spec.cube_count()));
    let c = classify_system(&spec, tol)?;
    let kind = serde_json::to_value(c.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let csv = format!(
        "kind,lower_constant,upper_constant,rank,tol\n{kind},{:e},{:e},{},{:e}\n",
        c.lower_constant, c.upper_constant, c.rank, c.tol
    );
    emit(&a.output, &to_json(&c), &csv, out)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let report = run_verify(a.suite, a.seed, a.trials)?;
    let mut csv = String::from("name,passed,detail\n");
    for c in &report.checks {
        csv.push_str(&format!("{},{},{}\n", csv_field(&c.name), c.passed, csv_field(&c.detail)));
    }
    emit(&a.output, &to_json(&report), &csv, out)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Violations(report.violations))
    }
}

/// Replaces strings such as "1/8" by their numeric value.
fn numeric_fractions(v: &mut Value) {
    match v {
        Value::String(s) => {
            if let Some(n) = parse_finite(s).ok().and_then(serde_json::Number::from_f64) {
                *v = Value::Number(n);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(numeric_fractions),
        _ => {}
    }
}

/// Keys of an experiment config that belong to the shared sweep settings.
const SWEEP_KEYS: [&str; 4] = ["trials", "crossover", "tol", "dump_dir"];

fn run_experiment(cfg: CliConfig, a: &ExperimentArgs, out: &mut dyn Write) -> Outcome {
    let mut request = serde_json::Map::new();
    let mut shared = serde_json::Map::new();
    for (k, v) in cfg.params {
        if SWEEP_KEYS.contains(&k.as_str()) {
            shared.insert(k, v);
        } else {
            request.insert(k, v);
        }
    }
    shared.insert("seed".into(), Value::from(a.seed.unwrap_or(cfg.seed)));
    if let Some(t) = a.trials {
        shared.insert("trials".into(), Value::from(t));
    }
    if let Some(d) = &a.dump_dir {
        shared.insert("dump_dir".into(), Value::from(d.display().to_string()));
    }
    for (k, v) in request.iter_mut() {
        if k != "experiment" {
            numeric_fractions(v);
        }
    }
    if !request.contains_key("experiment") {
        return Err(usage("config field \"experiment\": missing"));
    }
    let sweep: SweepConfig =
        serde_json::from_value(Value::Object(shared)).map_err(|e| usage(format!("config: {e}")))?;
    let request: ExperimentRequest =
        serde_json::from_value(Value::Object(request)).map_err(|e| usage(format!("config: {e}")))?;
    let report = request.run(&sweep)?;
    let path = a.out.clone().or(cfg.out);
    let format = a.format.unwrap_or(cfg.format);
    emit_to(path.as_deref(), format, &report.to_json_string(), &report.to_csv_string(), out)
}
