//! `qginv`: generalized inverses of quantum channels from the command line.
//!
//! Exit codes: 0 ok, 1 theorem suite failed, 2 malformed input or bad
//! parameters, 3 dimension mismatch, 4 group inverse does not exist,
//! 5 axiom residual above tolerance, 6 channel is not trace preserving.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qginv::Tolerances;

use commands::{CliError, Rendered};

#[derive(Parser, Debug)]
#[command(name = "qginv", version, about = "Generalized inverses of quantum channels")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true, default_value_t = Tolerances::default().rank_rtol)]
    rank_rtol: f64,

    /// Absolute Frobenius tolerance for axiom and equality checks.
    #[arg(long, global = true, default_value_t = Tolerances::default().residual_atol)]
    atol: f64,

    /// Eigenvalue floor for positive semidefiniteness.
    #[arg(long, global = true, default_value_t = Tolerances::default().psd_atol)]
    psd_atol: f64,

    #[arg(long, global = true, default_value_t = qginv::theorems::DEFAULT_SEED)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report CP, TP and unital verdicts with their residuals.
    Check { channel: PathBuf },

    /// Compute a generalized inverse and its axiom residuals.
    Inverse {
        channel: PathBuf,
        #[arg(long, value_enum)]
        kind: commands::Kind,
    },

    /// Run the theorem suite; exits 1 unless every check comes out as expected.
    Theorems {
        /// Instances per randomized family.
        #[arg(long, default_value_t = qginv::theorems::DEFAULT_INSTANCES)]
        count: usize,
    },

    /// Undo n applications of a channel with its Drazin inverse and compare expectation values.
    Mitigate {
        channel: PathBuf,
        /// Density matrix as a JSON matrix of [re, im] pairs.
        state: PathBuf,
        /// Hermitian observable as a JSON matrix of [re, im] pairs.
        observable: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        n: u32,
    },

    /// Generate a random channel file.
    Random {
        #[command(subcommand)]
        kind: RandomKind,
    },
}

#[derive(Subcommand, Debug)]
enum RandomKind {
    /// Stinespring dilation of a Haar isometry.
    Cptp {
        #[arg(long)]
        d: usize,
        /// Output dimension (defaults to d).
        #[arg(long)]
        d_out: Option<usize>,
        /// Environment dimension; 1 gives a unitary or isometric conjugation.
        #[arg(long, default_value_t = 2)]
        env: usize,
    },
    /// Mixed-unitary channel with Dirichlet-uniform weights.
    Ucptp {
        #[arg(long)]
        d: usize,
        /// Number of Haar unitaries.
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
}

fn run(cli: Cli) -> Result<Rendered, CliError> {
    let g = &cli.global;
    let tol = Tolerances::new(g.rank_rtol, g.atol, g.psd_atol).map_err(CliError::from)?;
    match cli.command {
        Command::Check { channel } => commands::check(&channel, &tol),
        Command::Inverse { channel, kind } => commands::inverse(&channel, kind, &tol),
        Command::Theorems { count } => commands::theorems(g.seed, count, &tol),
        Command::Mitigate {
            channel,
            state,
            observable,
            n,
        } => commands::mitigate(&channel, &state, &observable, n, &tol),
        Command::Random { kind } => match kind {
            RandomKind::Cptp { d, d_out, env } => {
                commands::random_cptp(d, d_out.unwrap_or(d), env, g.seed)
            }
            RandomKind::Ucptp { d, m } => commands::random_ucptp(d, m, g.seed),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.global.output;
    match run(cli) {
        Ok(out) => {
            let body = match format {
                OutputFormat::Json => out.json_string() + "\n",
                OutputFormat::Text => out.text.clone(),
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
