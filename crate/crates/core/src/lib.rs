//! Quantumness of correlations for small multi-qubit states.
//!
//! The crate computes the information-theoretic correlation measures of a
//! bipartite density matrix (mutual information, quantum discord, classical
//! correlation, one-way and quantum deficits), builds the A and B forms of
//! the map induced by a projective measurement on a system extended by an
//! ancilla, and bounds the generalized quantumness from above.
//!
//! Runnable examples live in `examples/`:
//!
//! | example | shows |
//! |---|---|
//! | `bell_state_measures` | every correlation measure of a Bell state |
//! | `separable_discord` | nonzero discord of a separable state |
//! | `ncp_bmap` | a B map with a negative eigenvalue |
//! | `assignment_map` | assignment map, duals and intermediates |
//! | `extension_insensitivity` | extended-state measurement that changes nothing |
//! | `quantumness_bound` | separable-witness upper bound |
//! | `state_file_io` | reading and reporting a state file |
//!
//! ```
//! use quantumness::{bell_state, mutual_information};
//! let mi = mutual_information(&bell_state()).unwrap();
//! assert!((mi - 2.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod maps;
pub mod measurement;
pub mod measures;
mod optimize;
pub mod quantumness;
pub mod states;

pub use entropy::{
    mutual_information, relative_entropy, shannon_entropy, shannon_mutual_information, von_neumann_entropy,
    ProbabilityTable,
};
pub use error::{Error, Result};
pub use linalg::{hermitian_eig, partial_trace, realign, tensor_product, ComplexMatrix, HermitianEigenSystem};
pub use maps::{
    apply_amap, assignment_apply, build_measurement_maps, check_amap_conditions, classify, dual_q,
    qubit_basis_p, spectral_decompose, AMap, AssignmentMap, BMap, KrausDecomposition, MapClass, Verdict,
};
pub use measurement::{bloch_projectors, measure_subsystem, pinch, ProjectiveMeasurement};
pub use measures::{
    classical_correlation_hv, discord_relative_entropy_decomposition, measure_report, measured_mutual_information,
    oneway_deficit, quantum_deficit, quantum_discord, MeasureReport, OptimizedMeasure, OptimizerConfig, Warning,
};
pub use quantumness::{
    quantumness_upper_bound, residual_state, separable_decomposition, verify_example_insensitivity,
    QuantumnessEstimate, SeparableEnsemble,
};
pub use states::{
    bell_state, classical_correlated, example_extension, example_separable, random_density, validate_density,
    DensityMatrix, Ket,
};
