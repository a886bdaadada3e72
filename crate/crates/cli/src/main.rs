use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use juniper_cli::commands::{self, ServeOptions, StrategyKind};
use juniper_cli::engine::EngineConfig;

const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "juniper", version, about = "Solve, classify and play the Juniper Green divisor game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify n = 1..=max-n and compare with the published table.
    Table {
        #[arg(long)]
        max_n: u32,
        /// Re-prove every piece of evidence.
        #[arg(long)]
        verified: bool,
        /// One JSON record per line instead of aligned text.
        #[arg(long)]
        json: bool,
    },
    /// Solve the game on 1..=n exactly.
    Solve {
        #[arg(long)]
        n: u32,
        /// Allow an odd first move.
        #[arg(long)]
        no_even_rule: bool,
        /// Stop after this many expanded nodes.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        stats: bool,
    },
    /// Show, validate and prove pairing certificates.
    Pairing {
        #[arg(long, conflicts_with = "corpus")]
        n: Option<u32>,
        /// Certificate file in the corpus text format.
        #[arg(long, env = "JUNIPER_CORPUS")]
        corpus: Option<PathBuf>,
        /// Prove the pair-response strategy as well.
        #[arg(long)]
        simulate: bool,
        /// State budget of each proof by search.
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
    },
    /// Describe and prove a constructive first-player strategy.
    Strategy {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        kind: Option<StrategyKind>,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
    },
    /// Prime counting checks.
    Primes {
        #[command(subcommand)]
        action: PrimesAction,
    },
    /// Export the divisor graph, optionally after some moves.
    Graph {
        #[arg(long)]
        n: u32,
        /// Moves already played, comma separated.
        #[arg(long, value_delimiter = ',')]
        moves: Vec<u32>,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// JSON document (the default).
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP play service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Append each game's moves to a log in this directory.
        #[arg(long)]
        history_dir: Option<PathBuf>,
        /// Sessions kept in memory.
        #[arg(long, default_value_t = 1024)]
        capacity: usize,
        #[arg(long, default_value_t = 300)]
        max_n: u32,
        /// Largest n whose engine moves are checked by exact search.
        #[arg(long, default_value_t = 48)]
        exact_threshold: u32,
    },
}

#[derive(Subcommand)]
enum PrimesAction {
    /// Check the prime-existence bounds the strategies rely on.
    CheckBounds,
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Table { max_n, verified, json } => commands::table(max_n, verified, json),
        Command::Solve { n, no_even_rule, budget, stats } => commands::solve(n, !no_even_rule, budget, stats),
        Command::Pairing { n: Some(n), simulate, budget, .. } => commands::pairing_for(n, simulate, budget),
        Command::Pairing { corpus: Some(path), simulate, budget, .. } => commands::pairing_corpus(&path, simulate, budget),
        Command::Pairing { .. } => Cli::command()
            .error(clap::error::ErrorKind::MissingRequiredArgument, "pairing needs --n or --corpus (or JUNIPER_CORPUS)")
            .exit(),
        Command::Strategy { n, kind, budget } => commands::strategy(n, kind, budget),
        Command::Primes { action: PrimesAction::CheckBounds } => commands::check_bounds(),
        Command::Graph { n, moves, dot, .. } => commands::graph(n, &moves, dot),
        Command::Serve { port, host, history_dir, capacity, max_n, exact_threshold } => commands::serve(ServeOptions {
            host,
            port,
            history_dir,
            capacity,
            engine: EngineConfig { max_n, exact_threshold, ..EngineConfig::default() },
        }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
