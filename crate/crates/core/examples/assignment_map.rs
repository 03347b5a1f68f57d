//! Assignment map of a qubit onto ancilla⊗qubit, its dual operators and the
//! intermediate quantities behind the B map.

use quantumness::maps::{example_system_state, measure_assigned};
use quantumness::measurement::extension_projectors;
use quantumness::{apply_amap, assignment_apply, build_measurement_maps, AssignmentMap, ComplexMatrix};

fn show(m: &ComplexMatrix) -> String {
    let rows: Vec<String> = m
        .rows()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|z| format!("{:+.2}{:+.2}i", z.re, z.im)).collect();
            cells.join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

fn main() -> quantumness::Result<()> {
    let am = AssignmentMap::example();
    for (k, ((p, q), tau)) in am.basis().iter().zip(am.duals()).zip(am.assigned()).enumerate() {
        println!("P{} = {}", k + 1, show(p));
        println!("Q{} = {}", k + 1, show(q));
        println!("τ{} = {}", k + 1, show(tau));
    }

    let p = 0.3;
    let rho = example_system_state(p);
    println!("\nextended state for p = {p}:");
    println!("{}", show(&assignment_apply(&am, &rho)?));

    let maps = build_measurement_maps(&am, &extension_projectors())?;
    println!("\noverlaps Tr[Π_i (τ_α⊗P_α)] by α:");
    for alpha in 0..4 {
        let column: Vec<f64> = maps.overlaps.iter().map(|row| row[alpha]).collect();
        println!("  α = {}: {column:?}", alpha + 1);
    }
    for (alpha, eta) in maps.images.iter().enumerate() {
        println!("image of P{} = {}", alpha + 1, show(eta));
    }

    let reference = measure_assigned(&am, &extension_projectors(), &rho)?;
    let via_map = apply_amap(&maps.a, &rho)?;
    println!("\nmap route vs measuring the extended state: {:.1e}", via_map.max_abs_diff(&reference));
    Ok(())
}
