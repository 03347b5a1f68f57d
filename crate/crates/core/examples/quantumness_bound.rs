//! Upper bounds on the quantumness from explicit separable witnesses.

use quantumness::states::qubit;
use quantumness::{bell_state, example_separable, quantumness_upper_bound, random_density, validate_density, DensityMatrix};

fn werner(v: f64) -> quantumness::Result<DensityMatrix> {
    let noise = quantumness::ComplexMatrix::identity(4).scale_real((1.0 - v) / 4.0);
    let m = &bell_state().matrix().scale_real(v) + &noise;
    validate_density(&m, &[2, 2])
}

fn main() -> quantumness::Result<()> {
    let product = DensityMatrix::maximally_mixed(&[2])?.tensor(&validate_density(&qubit::plus(), &[2])?);
    let states = [
        ("Bell", bell_state()),
        ("Werner v=0.6", werner(0.6)?),
        ("separable p=0.5", example_separable(0.5)?),
        ("product", product),
        ("random", random_density(&[2, 2], 7)?),
    ];
    for (name, rho) in &states {
        let est = quantumness_upper_bound(rho, 8, 4, 0)?;
        println!(
            "{name:16} bound {:.6} bits from {:?} ({} terms, marginal residual {:.1e})",
            est.upper_bound,
            est.source,
            est.witness.len(),
            est.marginal_residual
        );
    }
    Ok(())
}
