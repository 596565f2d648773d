use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod error;
mod report;

use error::CliError;
use report::{render_csv, render_json, write_atomic, Meta, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Monogamy relations for correlation Bell inequalities in qubit networks.
///
/// Exit codes: 0 ok, 2 bad input, 3 proven impossible, 4 inconclusive,
/// 5 numerical failure. BML_THREADS caps the worker pool.
#[derive(Debug, Parser)]
#[command(name = "bml", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find and verify an anti-commuting clique cover for a relation.
    Certify {
        #[arg(long)]
        preset: Option<String>,
        /// Relation as JSON.
        #[arg(long)]
        input: Option<String>,
        /// Node budget of the exhaustive search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Seesaw over a grid of hyperspherical weights.
    Scan {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        input: Option<String>,
        /// Points per angle.
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// Maximum of a linear objective over the no-signaling polytope.
    Nsbound {
        #[arg(long)]
        preset: Option<String>,
        /// Objective as JSON.
        #[arg(long)]
        input: Option<String>,
        /// Solve in exact rational arithmetic.
        #[arg(long)]
        exact: bool,
    },
    /// Classical, bilocal and quantum values of an inequality family.
    Family {
        #[arg(value_parser = ["chain", "svetlichny"])]
        kind: String,
        /// Number of parties (svetlichny only).
        #[arg(long)]
        n: Option<usize>,
        /// Inputs per party; repeat or separate with commas.
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4])]
        m: Vec<usize>,
    },
    /// Bound on the adversary's guessing probability.
    Pguess {
        /// Observed values as JSON, or - for stdin.
        #[arg(long)]
        input: Option<String>,
        /// Mermin value as PARTIES:VALUE; repeatable.
        #[arg(long, value_parser = commands::parse_mermin)]
        mermin: Vec<(usize, f64)>,
        #[arg(long, allow_negative_numbers = true)]
        chsh: Option<f64>,
    },
    /// Check that two distinct boxes reach the weighted CHSH maximum.
    Flatregion {
        /// Evenly spaced angles over [0, π/2] instead of the default four.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Bilinear maximum over the ladder operator set and a seesaw on the network.
    Ladder {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
    },
    /// Check the sum-of-squares identity for the chain trade-off.
    Sos {
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4])]
        m: Vec<usize>,
        /// Angles in radians.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.0, std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_4])]
        theta: Vec<f64>,
        /// Random observable draws per check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("BML_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::BadInput(format!("BML_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::BadInput(format!("thread pool: {e}")))
}

fn dispatch(cli: &Cli) -> (Meta, Result<Outcome, CliError>) {
    let meta = |command, preset: &Option<String>, input: &Option<String>| Meta {
        command,
        preset: preset.clone(),
        input: input.clone(),
        seed: cli.seed,
    };
    let none = None;
    match &cli.command {
        Command::Certify { preset, input, budget } => {
            (meta("certify", preset, input), commands::certify(preset.as_deref(), input.as_deref(), *budget))
        }
        Command::Scan { preset, input, grid, restarts } => (
            meta("scan", preset, input),
            commands::scan(preset.as_deref(), input.as_deref(), *grid, *restarts, cli.seed),
        ),
        Command::Nsbound { preset, input, exact } => {
            (meta("nsbound", preset, input), commands::nsbound(preset.as_deref(), input.as_deref(), *exact))
        }
        Command::Family { kind, n, m } => (meta("family", &Some(kind.clone()), &none), commands::family(kind, *n, m)),
        Command::Pguess { input, mermin, chsh } => (meta("pguess", &none, input), commands::pguess_cmd(input.as_deref(), mermin, *chsh)),
        Command::Flatregion { grid } => (meta("flatregion", &none, &none), commands::flatregion(*grid)),
        Command::Ladder { n, restarts } => {
            (meta("ladder", &none, &none), commands::ladder(*n, *restarts, cli.seed))
        }
        Command::Sos { m, theta, samples } => (meta("sos", &none, &none), commands::sos(m, theta, *samples, cli.seed)),
    }
}

fn emit(cli: &Cli, bytes: &[u8]) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => write_atomic(path, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            Ok(out.flush()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit() as u8);
    }
    let (meta, res) = dispatch(&cli);
    let outcome = match res {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit() as u8);
        }
    };
    let rendered = match cli.format {
        Format::Json => render_json(&meta, &outcome),
        Format::Csv => render_csv(&meta, &outcome),
    };
    if let Err(e) = rendered.and_then(|b| emit(&cli, &b)) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit() as u8);
    }
    ExitCode::from(outcome.exit as u8)
}
