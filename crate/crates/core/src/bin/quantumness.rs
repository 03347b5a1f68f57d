use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quantumness::cli::{cmd_bmap_demo, cmd_measures, cmd_quantumness, cmd_validate, CliError, QuantumnessArgs};
use quantumness::quantumness::{DEFAULT_RESTARTS, DEFAULT_TERMS};
use quantumness::OptimizerConfig;

/// Correlation measures, measurement maps and quantumness bounds for two-qubit states.
#[derive(Parser)]
#[command(name = "quantumness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutual information, discord, classical correlation and deficits of a state file.
    Measures {
        path: PathBuf,
        /// Polar grid points (the azimuthal grid has twice as many).
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Nelder–Mead iterations after the grid scan.
        #[arg(long, default_value_t = 200)]
        refine: usize,
        /// Negative values within this distance of zero are reported as 0.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// B map of the worked extension example and its action on p|0⟩⟨0| + (1−p)|+⟩⟨+|.
    BmapDemo {
        #[arg(default_value_t = 0.5, allow_negative_numbers = true)]
        p: f64,
        #[arg(long)]
        json: bool,
    },
    /// Upper bound on the quantumness of a two-qubit state file.
    Quantumness {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Checks that a state file holds a density matrix.
    Validate {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Measures {
            path,
            grid,
            refine,
            tol,
            json,
        } => {
            let cfg = OptimizerConfig {
                grid_resolution: grid,
                refine_iterations: refine,
                tolerance: tol,
            };
            let report = cmd_measures(&path, &cfg)?;
            Ok(if json { report.to_json() } else { report.to_text() })
        }
        Command::BmapDemo { p, json } => {
            let report = cmd_bmap_demo(p)?;
            Ok(if json { report.to_json() } else { report.to_text() })
        }
        Command::Quantumness {
            path,
            terms,
            restarts,
            seed,
            json,
        } => {
            let report = cmd_quantumness(&path, &QuantumnessArgs { terms, restarts, seed })?;
            Ok(if json { report.to_json() } else { report.to_text() })
        }
        Command::Validate { path, json } => {
            let summary = cmd_validate(&path)?;
            Ok(if json {
                serde_json::to_string_pretty(&summary).expect("plain data serializes")
            } else {
                summary.to_text()
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            println!("{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
