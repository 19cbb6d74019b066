//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::entropy::{relative_entropy, tsallis, EntropyParam};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, MatrixFile};
use crate::means::{mean, MeanKind, RepresentingMeasure, WeightParam};
use crate::radius::{numerical_radius, radius_with_bounds};
use crate::sectorial::{sample_class, EnsembleSpec, MatrixClass, Sample};
use crate::verify::{replay, run_suite, InequalityReport, SuiteConfig};

/// Environment variable that replaces the default suite seed.
pub const SEED_ENV: &str = "ACCRETIVE_LAB_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "accretive-lab",
    version,
    about = "Matrix means, numerical-radius bounds and operator entropy for accretive matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random matrix (or pair) and write it as matrix JSON.
    Gen(GenArgs),
    /// Evaluate a matrix quantity.
    #[command(subcommand)]
    Compute(ComputeCommand),
    /// Numerical radius, optionally with its upper bounds.
    Radius(RadiusArgs),
    /// Tsallis relative operator entropy.
    Entropy(EntropyArgs),
    /// Run the randomized inequality suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClassArg {
    PositiveDefinite,
    Accretive,
    Sectorial,
    LoewnerPair,
    PositivePair,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub class: ClassArg,
    /// Sector half-angle, required for `sectorial`.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Second matrix of a pair class.
    #[arg(long)]
    pub out_b: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ComputeCommand {
    /// Weighted mean of two accretive matrices.
    Mean(MeanArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Arith,
    Geom,
    Harm,
    Measure,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Exponent of the power-density measure, used with `--kind measure`.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long = "A")]
    pub a: PathBuf,
    #[arg(long = "B")]
    pub b: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    #[arg(long = "A")]
    pub a: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    /// Also print the Kittaneh, power and refined bounds.
    #[arg(long)]
    pub bounds: bool,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long = "A")]
    pub a: PathBuf,
    #[arg(long = "B")]
    pub b: PathBuf,
    #[arg(long)]
    pub t: f64,
    /// Also print the relative operator entropy S(A|B).
    #[arg(long)]
    pub s: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Args)]
pub struct VerifyArgs {
    /// TOML or JSON suite configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `all` or a comma-separated list of case ids.
    #[arg(long = "case", value_delimiter = ',')]
    pub cases: Option<Vec<String>>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Dimension range `min..max`, or a single dimension.
    #[arg(long)]
    pub dim: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub s: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-run one trial, given as `seed:index`, for each selected case.
    #[arg(long)]
    pub replay: Option<String>,
}

fn parse_dims(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidParameter(format!("dimension range `{s}` is not `min..max`"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?)),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn parse_replay(s: &str) -> Result<(u64, usize)> {
    let bad = || Error::InvalidParameter(format!("replay target `{s}` is not `seed:index`"));
    let (seed, index) = s.split_once(':').ok_or_else(bad)?;
    Ok((seed.trim().parse().map_err(|_| bad())?, index.trim().parse().map_err(|_| bad())?))
}

/// Reads a config file and reports whether it sets the seed explicitly.
fn load_config_file(path: &Path) -> Result<(SuiteConfig, bool)> {
    let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?;
        let has_seed = value.get("seed").is_some();
        Ok((SuiteConfig::from_json(&text)?, has_seed))
    } else {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Malformed(e.to_string()))?;
        Ok((SuiteConfig::from_toml(&text)?, table.contains_key("seed")))
    }
}

/// Builds the suite configuration. Precedence: flag, then config file, then
/// the seed environment variable, then built-in defaults.
pub fn parse_config(args: &VerifyArgs, env_seed: Option<&str>) -> Result<SuiteConfig> {
    let (mut cfg, file_seed) = match &args.config {
        Some(path) => load_config_file(path)?,
        None => (SuiteConfig::default(), false),
    };
    if !file_seed {
        if let Some(s) = env_seed {
            cfg.seed = s
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{SEED_ENV} = `{s}` is not an unsigned integer")))?;
        }
    }
    if let Some(cases) = &args.cases {
        cfg.cases = cases.clone();
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(dim) = &args.dim {
        (cfg.dim_min, cfg.dim_max) = parse_dims(dim)?;
    }
    for (flag, grid) in [
        (&args.alpha, &mut cfg.alpha_grid),
        (&args.t, &mut cfg.t_grid),
        (&args.p, &mut cfg.p_grid),
        (&args.s, &mut cfg.s_grid),
    ] {
        if let Some(values) = flag {
            *grid = values.clone();
        }
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = args.tol {
        cfg.tol = tol;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes the reports as a JSON array (when `out` is given) and a one-line
/// summary per case to `summary`. Returns whether every case passed.
pub fn emit_report(reports: &[InequalityReport], out: Option<&Path>, summary: &mut dyn Write) -> io::Result<bool> {
    if let Some(path) = out {
        let json = serde_json::to_string_pretty(reports).map_err(io::Error::other)?;
        fs::write(path, json + "\n")?;
    }
    for r in reports {
        let min = r.min_margin.map_or_else(|| "-".to_string(), |m| format!("{m:+.3e}"));
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        writeln!(summary, "{:<26} trials={:<5} min_margin={:<11} {}", r.case.id(), r.trials, min, verdict)?;
        for f in r.failures.iter().take(5) {
            match (&f.margin, &f.error) {
                (_, Some(e)) => writeln!(summary, "    replay {}:{}  error: {e}", f.seed, f.trial)?,
                (Some(m), None) => writeln!(summary, "    replay {}:{}  margin {m:+.3e}", f.seed, f.trial)?,
                (None, None) => {}
            }
        }
    }
    Ok(reports.iter().all(|r| r.pass))
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    ComplexMatrix::from_json(&text)
}

fn write_text(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    let io_err = |e: io::Error| Error::Malformed(format!("write failed: {e}"));
    match path {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(io_err),
        None => writeln!(stdout, "{text}").map_err(io_err),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Malformed(e.to_string()))
}

fn run_gen(args: &GenArgs) -> Result<()> {
    let class = match args.class {
        ClassArg::PositiveDefinite => MatrixClass::PositiveDefinite,
        ClassArg::Accretive => MatrixClass::Accretive,
        ClassArg::Sectorial => MatrixClass::Sectorial {
            alpha: args.alpha.ok_or_else(|| Error::InvalidParameter("--alpha is required for sectorial".into()))?,
        },
        ClassArg::LoewnerPair => MatrixClass::LoewnerPair,
        ClassArg::PositivePair => MatrixClass::PositivePair,
    };
    let spec = EnsembleSpec { scale: args.scale, ..EnsembleSpec::new(args.dim, class, args.seed) };
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sink = &mut io::sink();
    match sample_class(&mut rng, class, spec.dim, spec.scale)? {
        Sample::Single(a) => write_text(Some(&args.out), &a.to_json(), sink),
        Sample::Pair(a, b) => {
            let out_b = args
                .out_b
                .as_deref()
                .ok_or_else(|| Error::InvalidParameter("--out-b is required for pair classes".into()))?;
            write_text(Some(&args.out), &a.to_json(), sink)?;
            write_text(Some(out_b), &b.to_json(), sink)
        }
    }
}

fn run_mean(args: &MeanArgs, stdout: &mut dyn Write) -> Result<()> {
    let a = read_matrix(&args.a)?;
    let b = read_matrix(&args.b)?;
    let w = WeightParam::new(args.t)?;
    let kind = match args.kind {
        KindArg::Arith => MeanKind::Arithmetic,
        KindArg::Geom => MeanKind::Geometric,
        KindArg::Harm => MeanKind::Harmonic,
        KindArg::Measure => MeanKind::Measure(RepresentingMeasure::PowerDensity(
            args.alpha.ok_or_else(|| Error::InvalidParameter("--alpha is required for --kind measure".into()))?,
        )),
    };
    let m = mean(&kind, &a, &b, w)?;
    write_text(args.out.as_deref(), &m.to_json(), stdout)
}

fn run_radius(args: &RadiusArgs, stdout: &mut dyn Write) -> Result<()> {
    let a = read_matrix(&args.a)?;
    let text = if args.bounds {
        to_json(&radius_with_bounds(&a, args.p, WeightParam::new(args.t)?)?)?
    } else {
        to_json(&numerical_radius(&a))?
    };
    write_text(None, &text, stdout)
}

fn run_entropy(args: &EntropyArgs, stdout: &mut dyn Write) -> Result<()> {
    let a = read_matrix(&args.a)?;
    let b = read_matrix(&args.b)?;
    let tt = tsallis(&a, &b, EntropyParam::new(args.t)?)?;
    let text = if args.s {
        let s = relative_entropy(&a, &b)?;
        to_json(&serde_json::json!({
            "tsallis": MatrixFile::from(tt.as_complex()),
            "relative_entropy": MatrixFile::from(s.as_complex()),
        }))?
    } else {
        tt.to_json()
    };
    write_text(args.out.as_deref(), &text, stdout)
}

fn run_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<bool> {
    let env_seed = std::env::var(SEED_ENV).ok();
    let cfg = parse_config(args, env_seed.as_deref())?;
    let io_err = |e: io::Error| Error::Malformed(format!("write failed: {e}"));
    if let Some(target) = &args.replay {
        let (seed, trial) = parse_replay(target)?;
        let mut pass = true;
        for case in cfg.selected_cases()? {
            let margin = replay(case, &cfg, seed, trial);
            let ok = matches!(margin, Ok(m) if m >= -cfg.tolerance_for(case));
            pass &= ok;
            let shown = match margin {
                Ok(m) => format!("{m:+.6e}"),
                Err(e) => format!("error: {e}"),
            };
            writeln!(
                stdout,
                "{:<26} replay {seed}:{trial} margin={shown} {}",
                case.id(),
                if ok { "PASS" } else { "FAIL" }
            )
            .map_err(io_err)?;
        }
        return Ok(pass);
    }
    let reports = run_suite(&cfg)?;
    emit_report(&reports, cfg.out.as_deref(), stdout).map_err(io_err)
}

/// Exit status for a finished run.
pub fn exit_code(all_pass: bool) -> i32 {
    if all_pass {
        0
    } else {
        1
    }
}

/// Status returned for usage, validation and input errors.
pub const USAGE_ERROR: i32 = 2;

/// Parses `argv`, runs the command and returns the process exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Gen(args) => run_gen(args).map(|_| true),
        Command::Compute(ComputeCommand::Mean(args)) => run_mean(args, stdout).map(|_| true),
        Command::Radius(args) => run_radius(args, stdout).map(|_| true),
        Command::Entropy(args) => run_entropy(args, stdout).map(|_| true),
        Command::Verify(args) => run_verify(args, stdout),
    };
    match outcome {
        Ok(pass) => exit_code(pass),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            USAGE_ERROR
        }
    }
}
