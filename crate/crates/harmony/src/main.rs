//! Command-line entry point.
//!
//! Exit codes are a stable contract: 0 success, 1 validation findings,
//! 2 usage/config/extraction errors, 3 analysis failures. Diagnostics go to
//! standard error; data and summaries to standard output.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use harmony::analyses::Registry;
use harmony::engine::StudyConfig;
use harmony::extract::{extract_git, ExtractorSpec};
use harmony::persist::{self, PersistError};
use harmony::study;

#[derive(Parser)]
#[command(name = "harmony", version, about = "Mining-software-repositories platform")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a git repository into a canonical model file.
    Extract {
        /// Path of the git repository (work tree or bare).
        #[arg(long)]
        repo: PathBuf,
        /// Source name recorded in the model.
        #[arg(long)]
        name: String,
        /// Output model file (conventionally *.harmony.json).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a full study from a configuration file.
    Run {
        /// Study configuration (JSON).
        #[arg(long)]
        config: PathBuf,
    },
    /// Load a model file and report every integrity violation.
    Validate {
        /// Model file to check.
        #[arg(long)]
        model: PathBuf,
    },
    /// List the registered analysis kinds.
    ListAnalyses,
}

const EXIT_OK: u8 = 0;
const EXIT_FINDINGS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ANALYSIS_FAILED: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Extract { repo, name, out } => cmd_extract(repo, name, out),
        Command::Run { config } => cmd_run(config),
        Command::Validate { model } => cmd_validate(model),
        Command::ListAnalyses => cmd_list_analyses(),
    };
    ExitCode::from(code)
}

fn cmd_extract(repo: PathBuf, name: String, out: PathBuf) -> u8 {
    let spec = ExtractorSpec::git(repo, name);
    let model = match extract_git(&spec) {
        Ok(model) => model,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = persist::save_model(&model, &out) {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    println!(
        "events={} items={} authors={}",
        model.events().len(),
        model.items().len(),
        model.authors().len()
    );
    EXIT_OK
}

fn cmd_run(config_path: PathBuf) -> u8 {
    let registry = Registry::builtin();
    let config = match StudyConfig::from_file(&config_path) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match study::run_study(&config, &registry) {
        Ok(outcome) => {
            print!("{}", outcome.report.render());
            if outcome.report.all_ok() {
                EXIT_OK
            } else {
                EXIT_ANALYSIS_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn cmd_validate(model_path: PathBuf) -> u8 {
    match persist::load_model(&model_path) {
        Ok(model) => {
            // Loading re-validates; report the (clean) result explicitly.
            let report = model.validate();
            println!("{report}");
            if report.ok() {
                EXIT_OK
            } else {
                EXIT_FINDINGS
            }
        }
        Err(PersistError::InvalidModel(report)) => {
            println!("{report}");
            EXIT_FINDINGS
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn cmd_list_analyses() -> u8 {
    for kind in Registry::builtin().kinds() {
        println!("{kind}");
    }
    EXIT_OK
}
