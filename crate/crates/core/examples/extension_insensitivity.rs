//! Measuring the ancilla-extended state with product projectors leaves it
//! unchanged, so the residual two-qubit state is separable with zero
//! quantumness, while the discord of the same state is nonzero.

use quantumness::measurement::extension_projectors;
use quantumness::{example_extension, separable_decomposition, verify_example_insensitivity};

fn main() -> quantumness::Result<()> {
    println!("   p   ‖Δρ_A'AB‖   ‖Δρ_AB‖    S(ρ‖ρ^R)");
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let r = verify_example_insensitivity(p)?;
        println!(
            "{p:5.1} {:10.1e} {:10.1e} {:10.1e}",
            r.residual_tripartite, r.residual_bipartite, r.relative_entropy
        );
    }

    let ensemble = separable_decomposition(&example_extension(0.5)?, &extension_projectors())?;
    println!("\nresidual state at p = 0.5 as {} product terms:", ensemble.len());
    for ((w, a), b) in ensemble.weights().iter().zip(ensemble.a_states()).zip(ensemble.b_states()) {
        let diag = |m: &quantumness::DensityMatrix| {
            let x = m.matrix();
            format!("[{:.2} {:.2}; {:.2} {:.2}]", x[(0, 0)].re, x[(0, 1)].re, x[(1, 0)].re, x[(1, 1)].re)
        };
        println!("  {w:.3} × {} ⊗ {}", diag(a), diag(b));
    }
    Ok(())
}
