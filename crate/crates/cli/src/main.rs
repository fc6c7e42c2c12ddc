use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Periodic shadowing experiments driven by config files.
#[derive(Parser)]
#[command(name = "shadowlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    ///
    /// Exit status is 0 on success, 1 on any error and 2 when a scan
    /// finds no Lipschitz constant that fits. SHADOWLAB_OUT_DIR overrides
    /// the output directory.
    Run { config: PathBuf },
    /// Print the parameter schema of a system kind
    /// (toral, perturbed-toral, jordan, linear).
    Describe { kind: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => match shadowlab_cli::run_file(&config) {
            Ok(outcome) => {
                println!("{}", outcome.summary);
                if outcome.diverging {
                    ExitCode::from(2)
                } else {
                    ExitCode::SUCCESS
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Describe { kind } => match shadowlab_cli::describe(&kind) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
