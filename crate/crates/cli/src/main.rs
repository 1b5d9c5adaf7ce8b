//! `confcarbon` command-line front end.

mod commands;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "confcarbon", version, about = "Air-travel CO2 of conference editions and alternative venues")]
struct Cli {
    #[command(flatten)]
    inputs: InputArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct InputArgs {
    /// airports.csv (defaults to the bundled dataset)
    #[arg(long, global = true)]
    pub airports: Option<PathBuf>,

    /// capitals.csv (defaults to the bundled dataset)
    #[arg(long, global = true)]
    pub capitals: Option<PathBuf>,

    /// cities.csv (defaults to the bundled dataset)
    #[arg(long, global = true)]
    pub cities: Option<PathBuf>,

    /// Emission model JSON (defaults to the built-in model)
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,

    /// Let nearest-airport search return airports not flagged international
    #[arg(long, global = true)]
    pub include_all_airports: bool,

    /// Comma-separated country codes allowed as BOC venues
    #[arg(long, global = true, value_delimiter = ',')]
    pub candidates: Option<Vec<String>>,

    /// Evaluate on a single thread
    #[arg(long, global = true)]
    pub serial: bool,
}

impl InputArgs {
    pub fn candidate_set(&self) -> Option<BTreeSet<String>> {
        self.candidates
            .as_ref()
            .map(|c| c.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate editions and write results tables
    Footprint {
        /// Output directory
        #[arg(long, default_value = "results")]
        out: PathBuf,

        /// Edition JSON files
        #[arg(required = true)]
        editions: Vec<PathBuf>,
    },
    /// Print the BOC and BPS venue selections for one edition
    Optimize { edition: PathBuf },
    /// Parse and check all inputs without computing emissions
    Validate {
        #[arg(required = true)]
        editions: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Footprint { out, editions } => commands::footprint(&cli.inputs, &editions, &out),
        Command::Optimize { edition } => commands::optimize(&cli.inputs, &edition),
        Command::Validate { editions } => commands::validate(&cli.inputs, &editions),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            for e in &failure.errors {
                eprintln!("error: {e}");
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
