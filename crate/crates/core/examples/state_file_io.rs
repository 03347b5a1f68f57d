//! Writes a state file, reads it back and prints the measures report in both
//! output formats.

use quantumness::cli::{cmd_measures, cmd_validate, StateFile};
use quantumness::{random_density, OptimizerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rho = random_density(&[2, 2], 42)?;
    let path = std::env::temp_dir().join("quantumness_example_state.json");
    std::fs::write(&path, StateFile::from_density(&rho).to_json())?;

    println!("{}", cmd_validate(&path)?.to_text());
    let report = cmd_measures(&path, &OptimizerConfig::default())?;
    println!("{}", report.to_text());
    println!("{}", report.to_json());

    std::fs::remove_file(&path)?;
    Ok(())
}
