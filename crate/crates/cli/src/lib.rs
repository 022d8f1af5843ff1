//! Command-line front end for the decoherence experiments.
//!
//! [`run`] is the whole program minus process plumbing: it parses arguments,
//! looks the subcommand up in the experiment registry, and writes CSV or JSON
//! to the requested sink. Exit codes: 0 on success, 2 for argument or
//! configuration errors, 1 for invariant violations and I/O failures.

pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use decolab::experiments::{ExperimentError, ExperimentRegistry, NSweep, Scenario, ScenarioConfig};
use decolab::{selftest, C64};

use output::OutputEnvelope;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const TOOL_VERSION: &str = concat!("decolab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(name = "decolab", version, about = "Decoherence experiments: pointer overlaps, reduced density matrices, Born sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spin measured by an N-particle apparatus
    Qubit(RunArgs),
    /// Object at x1/x2 decohered by an N-particle environment
    Macro(RunArgs),
    /// Overlap, off-diagonal and purity over n-min..=n-max
    Curve(RunArgs),
    /// Seeded outcome sampling with probabilities |c+|^2, |c-|^2
    Sample(RunArgs),
    /// Run the randomized invariant suite
    Selftest(SelftestArgs),
    /// Re-run the configuration echoed in a JSON envelope
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SinkArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Number of apparatus/environment particles
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Branch-conditional rotation per particle, radians in [0, pi]
    #[arg(long, allow_hyphen_values = true, conflicts_with = "cos_theta")]
    theta: Option<f64>,
    /// Per-particle overlap cos(theta) in [-1, 1], as an alternative to --theta
    #[arg(long, allow_hyphen_values = true)]
    cos_theta: Option<f64>,
    /// Amplitude of the + / x1 branch as `re,im`
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0.7071067811865476,0")]
    c_plus: C64,
    /// Amplitude of the - / x2 branch as `re,im`
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0.7071067811865476,0")]
    c_minus: C64,
    /// First N of a curve
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    /// Last N of a curve
    #[arg(long, default_value_t = 20)]
    n_max: usize,
    /// Sampling trials
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Sampling seed
    #[arg(long, env = "DECOLAB_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    sink: SinkArgs,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, env = "DECOLAB_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    /// JSON envelope written by an earlier run
    envelope: PathBuf,
    #[command(flatten)]
    sink: SinkArgs,
}

fn parse_complex(text: &str) -> Result<C64, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re,im`, got `{text}`")),
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invariant(String),
    Io(io::Error),
}

impl From<ExperimentError> for Failure {
    fn from(err: ExperimentError) -> Self {
        match err {
            ExperimentError::InvalidConfig(_) | ExperimentError::UnknownExperiment(_) => {
                Failure::Usage(err.to_string())
            }
            other => Failure::Invariant(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::Io(err)
    }
}

impl RunArgs {
    fn config(&self, name: &str) -> Result<ScenarioConfig, Failure> {
        let theta = match (self.theta, self.cos_theta) {
            (_, Some(cos)) if !(-1.0..=1.0).contains(&cos) => {
                return Err(Failure::Usage(format!("--cos-theta must lie in [-1, 1], got {cos}")));
            }
            (_, Some(cos)) => cos.acos(),
            (Some(theta), None) => theta,
            (None, None) => std::f64::consts::FRAC_PI_2,
        };
        let scenario = match name {
            "macro" => Scenario::MacroscopicSuperposition,
            _ => Scenario::QubitMeasurement,
        };
        let config = ScenarioConfig {
            scenario,
            n_particles: self.n,
            theta,
            c_plus: self.c_plus,
            c_minus: self.c_minus,
            n_sweep: (name == "curve").then_some(NSweep { n_min: self.n_min, n_max: self.n_max }),
            trials: self.trials,
            seed: self.seed,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Timestamp for the envelope: `SOURCE_DATE_EPOCH` when set, otherwise now.
fn generated_at() -> String {
    let fixed = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0));
    fixed
        .unwrap_or_else(chrono::Utc::now)
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn open_sink(path: &Option<PathBuf>, stdout: &mut dyn Write, body: &[u8]) -> Result<(), Failure> {
    match path {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            file.write_all(body)?;
            file.flush()?;
        }
        None => {
            stdout.write_all(body)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn emit(
    experiment: &str,
    config: &ScenarioConfig,
    sink: &SinkArgs,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let registry = ExperimentRegistry::builtin();
    let payload = registry.run(experiment, config)?;
    let mut body = Vec::new();
    match sink.format {
        Format::Csv => output::write_payload_csv(&payload, &mut body)?,
        Format::Json => {
            let envelope = OutputEnvelope {
                tool_version: TOOL_VERSION.to_string(),
                experiment: experiment.to_string(),
                config_echo: config.clone(),
                seed: config.seed,
                generated_at: generated_at(),
                rows_or_report: payload,
            };
            output::write_json(&envelope, &mut body)?;
        }
    }
    open_sink(&sink.out, stdout, &body)
}

fn selftest_cmd(args: &SelftestArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let outcomes = selftest::run_all(args.seed);
    let mut failed = 0;
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        writeln!(stdout, "{tag} {}: {}", o.name, o.detail)?;
        failed += usize::from(!o.passed);
    }
    if failed > 0 {
        return Err(Failure::Invariant(format!("{failed} of {} checks failed", outcomes.len())));
    }
    Ok(())
}

fn replay_cmd(args: &ReplayArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.envelope)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.envelope.display())))?;
    let envelope: OutputEnvelope = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{} is not an output envelope: {e}", args.envelope.display())))?;
    envelope.config_echo.validate()?;
    emit(&envelope.experiment, &envelope.config_echo, &args.sink, stdout)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            let code = err.exit_code();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{rendered}");
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };

    let result = match &cli.command {
        Command::Qubit(a) => a.config("qubit").and_then(|c| emit("qubit", &c, &a.sink, stdout)),
        Command::Macro(a) => a.config("macro").and_then(|c| emit("macro", &c, &a.sink, stdout)),
        Command::Curve(a) => a.config("curve").and_then(|c| emit("curve", &c, &a.sink, stdout)),
        Command::Sample(a) => a.config("sample").and_then(|c| emit("sample", &c, &a.sink, stdout)),
        Command::Selftest(a) => selftest_cmd(a, stdout),
        Command::Replay(a) => replay_cmd(a, stdout),
    };

    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Invariant(msg)) => {
            let _ = writeln!(stderr, "invariant violation: {msg}");
            EXIT_INVARIANT
        }
        Err(Failure::Io(err)) => {
            let _ = writeln!(stderr, "I/O error: {err}");
            EXIT_INVARIANT
        }
    }
}
