//! `conemod` command-line entrypoint.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use conemod_core::report::{emit, error_exit_code, run, Command, RunConfig};
use conemod_core::{Error, Rate, Window};

#[derive(Debug, Parser)]
#[command(name = "conemod", version)]
#[command(
    about = "Critical rates, Fredholm indices, P^2 cohomology and virtual dimensions for conical instanton moduli"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Virtual and obstruction dimensions of a moduli problem
    Dim(Flags),
    /// Critical rates, kernel dimensions and index profile of a cone operator
    Rates(Flags),
    /// Cohomology of a bundle expression on P^2
    Cohomology(Flags),
    /// Run the built-in property suites
    Verify(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// Built-in operator: fubini-study or scalar-laplacian-s5.
    #[arg(long)]
    preset: Option<String>,

    /// JSON config document.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Open rate window (lower upper).
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
    window: Option<Vec<String>>,

    /// Bundle expression, e.g. "End(T)(-1)".
    #[arg(long)]
    expr: Option<String>,

    /// Number of singular points.
    #[arg(long)]
    points: Option<usize>,

    /// Decay rate mu, e.g. -0.5 or -1/2.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Tolerance for numerical checks.
    #[arg(long)]
    tol: Option<f64>,

    /// Assume the kernel at the symmetric weight vanishes (enables the obstruction count).
    #[arg(long)]
    ker_hypothesis: bool,
}

fn build(command: Command, flags: Flags) -> Result<RunConfig, Error> {
    let window = match flags.window {
        Some(bounds) => Some(Window::open(
            bounds[0].parse::<Rate>()?,
            bounds[1].parse::<Rate>()?,
        )?),
        None => None,
    };
    let mu = flags.mu.as_deref().map(str::parse::<Rate>).transpose()?;
    let mut config = RunConfig::new(command);
    config.preset = flags.preset;
    config.config = flags.config;
    config.window = window;
    config.expr = flags.expr;
    config.points = flags.points;
    config.mu = mu;
    config.out = flags.out;
    config.tol = flags.tol;
    config.ker_hypothesis = flags.ker_hypothesis;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Cmd::Dim(f) => (Command::Dim, f),
        Cmd::Rates(f) => (Command::Rates, f),
        Cmd::Cohomology(f) => (Command::Cohomology, f),
        Cmd::Verify(f) => (Command::Verify, f),
    };
    let result = build(command, flags)
        .and_then(|c| run(&c))
        .and_then(|report| {
            let code = report.exit_code();
            if let Some(failure) = &report.failure {
                eprintln!("verification failed: {failure}");
            }
            emit(&report).map(|text| (code, text))
        });
    match result {
        Ok((code, text)) => {
            if let Some(text) = text {
                let _ = writeln!(std::io::stdout().lock(), "{text}");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
