use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lueq_cli::commands::{self, CommandError, EquivOptions, RandomKind, SEPARABILITY_TOL};
use lueq_cli::output::render_table;
use lueq_cli::verify::run_verify_suite;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// Local-unitary equivalence, canonical forms and correlation measures for
/// bipartite and Schmidt-correlated states.
#[derive(Debug, Parser)]
#[command(name = "lueq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Comparison tolerance (each command has its own default).
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Restarts for the direct local-unitary search.
    #[arg(long, global = true, default_value_t = 8)]
    restarts: usize,

    /// Logarithm base for entropies.
    #[arg(long, global = true, default_value_t = 2.0)]
    log_base: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Standard form of an SC state and the local unitaries reaching it.
    Canon { file: String },
    /// Decide whether two states are LU equivalent.
    Equiv { a: String, b: String },
    /// Spectra, Schmidt data and I_alpha invariants.
    Invariants { file: String },
    /// Correlation measures of a two-qubit SC state, direct and closed form.
    Correlations {
        file: String,
        /// Separable states sampled for the relative-entropy bound.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Separability test.
    Separable { file: String },
    /// Write a seeded random state file.
    Random {
        #[arg(value_enum)]
        kind: RandomKind,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 2)]
        parties: usize,
        /// Local dimensions as `M,N`.
        #[arg(long, value_parser = parse_dims, default_value = "2,2")]
        dims: [usize; 2],
        #[arg(long)]
        label: Option<String>,
    },
    /// Run the full check suite and report every claim against its oracle.
    Verify,
}

fn parse_dims(s: &str) -> Result<[usize; 2], String> {
    match s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(v) if v.len() == 2 => Ok([v[0], v[1]]),
        _ => Err(format!("expected two comma-separated dimensions, got {s:?}")),
    }
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("values serialize") + "\n",
        Format::Table => render_table(value),
    }
}

/// Rendered output and whether every property held.
fn run(cli: &Cli) -> Result<(String, bool), CommandError> {
    let load = |p: &str| commands::load_state(p).map(|s| s.state);
    let value = match &cli.command {
        Command::Canon { file } => commands::canon(&load(file)?)?,
        Command::Equiv { a, b } => {
            let opts = EquivOptions {
                tol: cli.tol,
                restarts: cli.restarts,
                seed: cli.seed,
            };
            commands::equiv(&load(a)?, &load(b)?, &opts)?
        }
        Command::Invariants { file } => commands::invariants(&load(file)?)?,
        Command::Correlations { file, samples } => {
            commands::correlations(&load(file)?, cli.log_base, *samples, cli.seed)?
        }
        Command::Separable { file } => commands::separable(&load(file)?, cli.tol.unwrap_or(SEPARABILITY_TOL))?,
        Command::Random {
            kind,
            levels,
            parties,
            dims,
            label,
        } => {
            let file = commands::random(*kind, cli.seed, *levels, *parties, *dims, label.clone())?;
            return Ok((file.to_json() + "\n", true));
        }
        Command::Verify => {
            let report = run_verify_suite(cli.seed);
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Table => report.to_table(),
            };
            return Ok((text, report.passed()));
        }
    };
    Ok((render(&value, cli.format), true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, ok) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
