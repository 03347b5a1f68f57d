//! The B map induced by measuring the ancilla-extended qubit is not
//! completely positive, although it sends every state of the example family
//! to itself.

use quantumness::maps::example_system_state;
use quantumness::measurement::extension_projectors;
use quantumness::{apply_amap, build_measurement_maps, classify, spectral_decompose, AssignmentMap, ComplexMatrix};

fn print_matrix(label: &str, m: &ComplexMatrix) {
    println!("{label}");
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|z| format!("{:6.3}", z.re)).collect();
        println!("  [{}]", cells.join(" "));
    }
}

fn main() -> quantumness::Result<()> {
    let maps = build_measurement_maps(&AssignmentMap::example(), &extension_projectors())?;
    print_matrix("B map", maps.b.tensor());
    print_matrix("A map", maps.a.tensor());

    let class = classify(&maps.b)?;
    let kraus = spectral_decompose(&maps.b)?;
    println!("eigenvalues {:?}", kraus.weights);
    println!("verdict {} (smallest eigenvalue {:.3})", class.verdict, class.min_eigenvalue);

    for p in [0.0, 0.25, 0.5, 1.0] {
        let rho = example_system_state(p);
        let out = apply_amap(&maps.a, &rho)?;
        println!("p = {p:4.2}: output differs from input by {:.1e}", out.max_abs_diff(&rho));
    }
    Ok(())
}
