//! `fairnav`: generate cities, plan, audit and compare tours, or run the
//! HTTP service.

mod commands;
mod render;

use clap::{Parser, Subcommand};
use fairnav_core::{Error, ErrorKind, Preset};
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fairnav", version, about = "Fairness-aware budgeted tour planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic city file from a preset.
    GenCity {
        #[arg(long)]
        preset: Preset,
        #[arg(long, num_args = 2, value_names = ["W", "H"])]
        size: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute an efficiency/unfairness Pareto front.
    Plan {
        #[arg(long)]
        city: PathBuf,
        /// Fairness spec as JSON, or @FILE.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Show demographics of one solution next to the city-wide ones.
    Audit {
        #[arg(long)]
        city: PathBuf,
        #[arg(long)]
        front: PathBuf,
        #[arg(long)]
        solution: usize,
    },
    /// Exact front by exhaustive search (small instances only).
    Oracle {
        #[arg(long)]
        city: PathBuf,
        #[arg(long)]
        budget: usize,
        /// Defaults to demographic parity on the first attribute.
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Hypervolume and dominance of two fronts (or solution files).
    Compare {
        #[arg(long)]
        city: PathBuf,
        #[arg(long = "front", num_args = 1, required = true)]
        fronts: Vec<PathBuf>,
    },
    /// Single tour from the additive surrogate planner.
    Surrogate {
        #[arg(long)]
        city: PathBuf,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        weight: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the HTTP service.
    Serve {
        /// Overrides FAIRNAV_PORT.
        #[arg(long)]
        port: Option<u16>,
    },
}

/// Failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Validation => 1,
            ErrorKind::Infeasible => 2,
            ErrorKind::Internal => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Keep every error on one line.
        write!(f, "{}", self.message.replace('\n', " "))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::GenCity { preset, size, seed, out } => commands::gen_city(preset, size[0], size[1], seed, &out),
        Command::Plan {
            city,
            spec,
            budget,
            seed,
            out,
        } => commands::plan(&city, &spec, budget, seed, &out),
        Command::Audit { city, front, solution } => commands::audit(&city, &front, solution),
        Command::Oracle { city, budget, spec, out } => commands::oracle(&city, budget, spec.as_deref(), &out),
        Command::Compare { city, fronts } => commands::compare(&city, &fronts),
        Command::Surrogate {
            city,
            spec,
            budget,
            weight,
            out,
        } => commands::surrogate(&city, &spec, budget, weight, &out),
        Command::Serve { port } => commands::serve(port),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", line.trim());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
