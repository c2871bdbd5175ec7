use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kstab_core::error::Error;

mod check;
mod commands;
mod instance;
mod output;

use output::Format;

#[derive(Parser)]
#[command(name = "kstab", version, about = "Exact K-stability invariants of toric pairs")]
struct Cli {
    #[command(flatten)]
    config: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Sup-norm radius of the candidate valuations.
    #[arg(long, global = true, default_value_t = 3)]
    radius: u32,
    /// Degrees m for S_m and delta_m, strictly increasing.
    #[arg(long, global = true, value_delimiter = ',', default_value = "4,8,16,24")]
    m_schedule: Vec<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Gauss-Legendre nodes per chamber for floating cross-checks.
    #[arg(long, global = true, default_value_t = 64)]
    quad_nodes: usize,
    /// Bisection resolution 1/N for the a-invariant.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    a_denominator_cap: u64,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct ValuationArg {
    /// Index of a fan ray.
    #[arg(long)]
    ray: Option<usize>,
    /// Integer vector, comma separated, e.g. `1,1` or `-1,2`.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Volume of a named divisor (`-K`, `-K-Delta`, or one from the instance).
    Volume {
        instance: String,
        #[arg(allow_hyphen_values = true, default_value = "-K")]
        divisor: String,
    },
    /// A, S by both routes, tau, and the S_m table of one valuation.
    S {
        instance: String,
        #[command(flatten)]
        valuation: ValuationArg,
    },
    /// S_m along the m-schedule with its distance to S.
    Sm {
        instance: String,
        #[command(flatten)]
        valuation: ValuationArg,
    },
    /// Upper bound for delta over the candidate set, with witness.
    Delta { instance: String },
    /// Upper bounds for delta_m and the basis-type divisors.
    DeltaM { instance: String },
    /// The constant a(X,Delta) and the assumption gate.
    A { instance: String },
    /// Anticanonical model, decomposition identities, and the constant min A_Z/ord_B.
    Model { instance: String },
    /// S(A) against 1/(n+1) for a named ample divisor.
    Lemma26 {
        instance: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-K-Delta")]
        divisor: String,
    },
    /// Closed forms of the threefold example.
    Example38 {
        #[arg(long, allow_hyphen_values = true)]
        h2: String,
        #[arg(long, allow_hyphen_values = true)]
        hk: String,
        /// Write samples of t -> vol(-K_X - tY) here.
        #[arg(long)]
        curve_csv: Option<PathBuf>,
    },
    /// Run every invariant over the bundled library and the threefold grid.
    Check {
        /// Extra instance files whose expected values are verified too.
        instances: Vec<String>,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    CurveBreakpoint,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub format: Format,
    pub radius: u32,
    pub schedule: Vec<u64>,
    pub out: Option<PathBuf>,
    pub quad_nodes: usize,
    pub a_cap: u64,
}

impl TryFrom<GlobalArgs> for Config {
    type Error = CliError;

    fn try_from(g: GlobalArgs) -> Result<Self, CliError> {
        if g.radius == 0 {
            return Err(CliError::User(
                "no-candidates: --radius must be at least 1".into(),
            ));
        }
        if g.m_schedule.is_empty()
            || g.m_schedule[0] == 0
            || g.m_schedule.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(CliError::User(
                "--m-schedule must be positive and strictly increasing".into(),
            ));
        }
        if g.quad_nodes == 0 || g.a_denominator_cap == 0 {
            return Err(CliError::User(
                "--quad-nodes and --a-denominator-cap must be positive".into(),
            ));
        }
        Ok(Config {
            format: g.format,
            radius: g.radius,
            schedule: g.m_schedule,
            out: g.out,
            quad_nodes: g.quad_nodes,
            a_cap: g.a_denominator_cap,
        })
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit 2.
    User(String),
    /// A checked inequality failed; exit 1.
    Check(String),
    /// Two routes disagree or an internal assertion broke; exit 3.
    Inconsistent(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::User(_) => 2,
            CliError::Inconsistent(_) | CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::User(m) => write!(f, "error: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
            CliError::Inconsistent(m) => write!(f, "internal-inconsistency: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(m) => CliError::Inconsistent(m),
            other => CliError::User(other.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = Config::try_from(cli.config)?;
    let report = match cli.command {
        Command::Volume { instance, divisor } => commands::volume(&instance, &divisor)?,
        Command::S { instance, valuation } => {
            commands::s(&instance, valuation.ray, valuation.v.as_deref(), &config)?
        }
        Command::Sm { instance, valuation } => {
            commands::sm(&instance, valuation.ray, valuation.v.as_deref(), &config)?
        }
        Command::Delta { instance } => commands::delta(&instance, &config)?,
        Command::DeltaM { instance } => commands::delta_m(&instance, &config)?,
        Command::A { instance } => commands::a(&instance, &config)?,
        Command::Model { instance } => commands::model(&instance, &config)?,
        Command::Lemma26 { instance, divisor } => commands::lemma26(&instance, &divisor)?,
        Command::Example38 { h2, hk, curve_csv } => {
            commands::example38(&h2, &hk, curve_csv.as_deref(), &config)?
        }
        Command::Check { instances, inject_fault } => {
            let (report, failures) = check::run(&config, &instances, inject_fault)?;
            output::emit(&report.render(config.format)?, config.out.as_deref())?;
            return match failures {
                0 => Ok(()),
                n => Err(CliError::Check(format!("{n} invariant(s) failed"))),
            };
        }
    };
    let (report, status) = report;
    output::emit(&report.render(config.format)?, config.out.as_deref())?;
    status
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
