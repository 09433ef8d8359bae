use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Parser, Subcommand};
use cocoa::commands::{self, GenerateArgs, Outcome};
use cocoa_core::query::QueryConfig;

#[derive(Parser)]
#[command(
    name = "cocoa",
    version,
    about = "Conditional flight-booking benchmark generator and evaluator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a JSONL dataset plus a manifest.
    Generate {
        /// Cells as KxM:N (slots x minterms : unique queries), comma separated, or `reference`.
        #[arg(long)]
        grid: String,
        /// Master seed; every random draw derives from it
        #[arg(long, env = "COCOA_SEED")]
        seed: u64,
        /// Dataset path; the manifest goes next to it as <out>.manifest.json
        #[arg(long)]
        out: PathBuf,
        /// Flight records to build route pools from instead of synthesizing.
        #[arg(long)]
        flights: Option<PathBuf>,
        /// Shell command that reads a requirement on stdin and prints a paraphrase.
        #[arg(long)]
        paraphrase_cmd: Option<String>,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Flights per synthesized route.
        #[arg(long)]
        pool_size: Option<usize>,
        /// Cap on samples (option subsets) per unique query
        #[arg(long, default_value_t = QueryConfig::DEFAULT_MAX_SUBSETS)]
        max_subsets: usize,
        /// Travel dates are drawn after this date (YYYY-MM-DD).
        #[arg(long, default_value = "2024-01-01")]
        epoch: NaiveDate,
    },
    /// Re-check every sample: oracle answer, invariants, metric round trips.
    Validate {
        dataset: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Per-configuration sample counts, query lengths and vocabulary.
    Stats {
        dataset: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Per-sample complexity and entropy as CSV.
    Analyze { dataset: PathBuf },
    /// Score an answer file (JSON object or CSV sample_id,letter).
    Score {
        dataset: PathBuf,
        /// JSON object {sample_id: letter} or CSV rows sample_id,letter
        #[arg(long)]
        answers: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<Outcome, commands::CommandError> {
    match cli.command {
        Command::Generate {
            grid,
            seed,
            out,
            flights,
            paraphrase_cmd,
            jobs,
            pool_size,
            max_subsets,
            epoch,
        } => commands::cmd_generate(&GenerateArgs {
            grid,
            seed,
            out,
            flights,
            paraphrase_cmd,
            jobs,
            pool_size,
            max_subsets,
            epoch,
        }),
        Command::Validate { dataset, json } => commands::cmd_validate(&dataset, json),
        Command::Stats { dataset, json } => commands::cmd_stats(&dataset, json),
        Command::Analyze { dataset } => commands::cmd_analyze(&dataset),
        Command::Score {
            dataset,
            answers,
            json,
        } => commands::cmd_score(&dataset, &answers, json),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(outcome.stdout.as_bytes())
                .and_then(|()| stdout.flush())
                .is_err()
            {
                return ExitCode::from(commands::EXIT_RUNTIME as u8);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
