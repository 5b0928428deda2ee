use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use godpuzzle::commands::{self, Outcome, SolveMethod};
use godpuzzle::service;
use godpuzzle::RandomMode;

#[derive(Parser)]
#[command(name = "godpuzzle", version, about = "Solve and check puzzles about truthful, lying and random gods")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Escaping,
    Reliable,
}

impl From<Mode> for RandomMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Escaping => RandomMode::Escaping,
            Mode::Reliable => RandomMode::Reliable,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    Worst,
    Expected,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an (n, m, k) puzzle can be solved.
    Solvable { n: usize, m: usize, k: usize },
    /// Print a strategy file solving an (n, m, k) puzzle.
    Solve {
        n: usize,
        m: usize,
        k: usize,
        /// Search for a strategy optimal in the worst case or in expectation.
        #[arg(long, value_enum, conflicts_with = "constructive")]
        optimal: Option<Objective>,
        /// Use the general constructive solver (the default).
        #[arg(long)]
        constructive: bool,
    },
    /// Verify a strategy file exhaustively.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "escaping")]
        mode: Mode,
    },
    /// Play a strategy file against randomly drawn worlds.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        episodes: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "escaping")]
        mode: Mode,
    },
    /// Check the self-referential question template case by case.
    TemplateCheck,
    /// Print a built-in strategy as a strategy file.
    Export { name: String },
    /// Serve the JSON session API.
    Serve {
        /// Defaults to $GODPUZZLE_PORT, then 8717.
        #[arg(long)]
        port: Option<u16>,
    },
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn serve(port: Option<u16>) -> anyhow::Result<()> {
    let port = match port {
        Some(p) => p,
        None => match std::env::var(service::PORT_ENV) {
            Ok(v) => v.parse().with_context(|| format!("{} is not a port", service::PORT_ENV))?,
            Err(_) => service::DEFAULT_PORT,
        },
    };
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    eprintln!("listening on http://{addr}");
    tokio::runtime::Runtime::new()?.block_on(service::serve(addr))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: godpuzzle::Result<Outcome> = match cli.command {
        Command::Solvable { n, m, k } => commands::cmd_solvable(n, m, k),
        Command::Solve { n, m, k, optimal, .. } => {
            let method = match optimal {
                Some(Objective::Worst) => SolveMethod::OptimalWorst,
                Some(Objective::Expected) => SolveMethod::OptimalExpected,
                None => SolveMethod::Constructive,
            };
            commands::cmd_solve(n, m, k, method)
        }
        Command::Verify { file, mode } => match read(&file) {
            Ok(text) => commands::cmd_verify(&text, mode.into()),
            Err(e) => return usage(e),
        },
        Command::Simulate {
            file,
            episodes,
            seed,
            mode,
        } => match read(&file) {
            Ok(text) => commands::cmd_simulate(&text, episodes, seed, mode.into()),
            Err(e) => return usage(e),
        },
        Command::TemplateCheck => Ok(commands::cmd_template_check()),
        Command::Export { name } => commands::cmd_export(&name),
        Command::Serve { port } => {
            return match serve(port) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage(e),
            }
        }
    };
    let code = commands::exit_code(&result);
    match result {
        Ok(outcome) => print!("{}", outcome.text),
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(code as u8)
}

fn usage(e: anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    ExitCode::from(2)
}
