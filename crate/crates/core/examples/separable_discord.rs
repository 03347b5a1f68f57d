//! A separable state can still carry discord.
//!
//! `p|00⟩⟨00| + (1−p)|++⟩⟨++|` is a mixture of product states, so it holds no
//! entanglement, yet no measurement on A leaves it undisturbed unless p is 0 or 1.

use quantumness::{
    classical_correlation_hv, example_separable, mutual_information, oneway_deficit, quantum_deficit,
    quantum_discord, OptimizerConfig,
};

fn main() -> quantumness::Result<()> {
    let cfg = OptimizerConfig::default();
    println!("   p   S(A:B)    discord   classical  one-way   quantum-deficit");
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let rho = example_separable(p)?;
        let discord = quantum_discord(&rho, &cfg)?;
        let classical = classical_correlation_hv(&rho, &cfg)?;
        println!(
            "{p:5.1} {:9.6} {:9.6} {:9.6} {:9.6} {:9.6}",
            mutual_information(&rho)?,
            discord.value,
            classical.value,
            oneway_deficit(&rho, &cfg)?.value,
            quantum_deficit(&rho)?.value,
        );
    }
    Ok(())
}
