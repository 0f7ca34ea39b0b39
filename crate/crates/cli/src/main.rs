use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phasefkg_cli::config::Kind;
use phasefkg_cli::{load_config, run, validate, CliError};

#[derive(Parser)]
#[command(name = "phasefkg", version, about = "Run phase-conditioned FKG experiments from TOML configs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its output bundle.
    Run {
        config: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: the config's output_dir, else output/<kind>-<seed>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
    /// List experiment kinds and the run keys each accepts.
    ListExperiments,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PHASEFKG_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| CliError::Invalid(format!("PHASEFKG_THREADS must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(CliError::Invalid("PHASEFKG_THREADS must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Internal(e.to_string()))
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, seed, out } => {
            init_threads()?;
            let cfg = load_config(&config)?;
            let bundle = run(cfg, seed, out.as_deref())?;
            if bundle.summary["approximate"].as_bool() == Some(true) {
                eprintln!("note: results are APPROXIMATE ({})", bundle.summary["approximate_labels"]);
            }
            println!("{}", bundle.dir.display());
        }
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            let diags = validate::validate(&cfg);
            if !diags.is_empty() {
                return Err(CliError::Validation(diags));
            }
            println!("ok");
        }
        Command::ListExperiments => {
            for k in Kind::ALL {
                println!("{:<14} {}", k.name(), k.description());
                println!("{:<14} run keys: {}", "", k.run_keys().join(", "));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
