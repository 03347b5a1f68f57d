//! Correlation measures of bipartite states.
//!
//! Everything here is in bits. The optimized measures (discord, classical
//! correlation, one-way deficit) search over rank-1 projective measurements
//! on a qubit `A`, parametrized by Bloch angles.

use std::fmt;

use crate::entropy::{mutual_information, relative_entropy_matrices, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_trace, tensor_product};
use crate::measurement::{bloch_projectors, leading_block, measure_subsystem, pinch, ProjectiveMeasurement};
use crate::optimize::minimize_on_sphere;
use crate::states::DensityMatrix;

/// Marginal eigenvalue gap below which the quantum deficit basis is ambiguous.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Settings for the Bloch-angle search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Polar grid points; the azimuthal grid has twice as many.
    pub grid_resolution: usize,
    /// Nelder–Mead iterations after the grid scan.
    pub refine_iterations: usize,
    /// Negative values no further below zero than this are reported as 0.
    pub tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_resolution: 64,
            refine_iterations: 200,
            tolerance: 1e-9,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_resolution < 8 {
            return Err(Error::InvalidConfig(format!(
                "grid resolution must be at least 8, got {}",
                self.grid_resolution
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Result of an optimization over qubit measurements.
#[derive(Clone, Debug)]
pub struct OptimizedMeasure {
    /// Reported value, with sub-tolerance negative dust clipped to 0.
    pub value: f64,
    pub raw_value: f64,
    pub theta: f64,
    pub phi: f64,
    pub measurement: ProjectiveMeasurement,
    pub evaluations: usize,
}

fn clip(raw: f64, tolerance: f64) -> f64 {
    if raw < 0.0 && raw >= -tolerance {
        0.0
    } else {
        raw
    }
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::UnsupportedDimension(rho.dims().to_vec()));
    }
    Ok(())
}

/// State of the subsystems after the leading `block_dim` block.
fn remainder(rho: &DensityMatrix, block_dim: usize) -> Result<DensityMatrix> {
    let k = leading_block(rho.dims(), block_dim)?;
    if k == rho.dims().len() {
        return Err(Error::DimensionMismatch(
            "measurement acts on the whole system; nothing remains".into(),
        ));
    }
    rho.reduced(&(k..rho.dims().len()).collect::<Vec<_>>())
}

/// `S(ρ_B) − Σ_α p_α S(ρ_{B|α})` for a measurement on the leading block.
pub fn measured_mutual_information(rho: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<f64> {
    let rest = remainder(rho, m.block_dim())?;
    Ok(von_neumann_entropy(&rest) - conditional_entropy(rho, m)?)
}

/// `Σ_α p_α S(ρ_{B|α})`.
fn conditional_entropy(rho: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<f64> {
    let outcome = measure_subsystem(rho, m)?;
    Ok(outcome
        .probabilities
        .iter()
        .zip(&outcome.conditional_states)
        .filter_map(|(p, s)| s.as_ref().map(|s| p * von_neumann_entropy(s)))
        .sum())
}

/// The optimum shared by discord and classical correlation.
struct CorrelationOptimum {
    mutual_information: f64,
    classical: f64,
    theta: f64,
    phi: f64,
    evaluations: usize,
}

fn optimize_correlation(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<CorrelationOptimum> {
    cfg.validate()?;
    require_two_qubits(rho)?;
    let entropy_b = von_neumann_entropy(&rho.reduced(&[1])?);
    let opt = minimize_on_sphere(cfg, |theta, phi| {
        conditional_entropy(rho, &bloch_projectors(theta, phi)).expect("two-qubit shapes are consistent")
    });
    Ok(CorrelationOptimum {
        mutual_information: mutual_information(rho)?,
        classical: entropy_b - opt.value,
        theta: opt.theta,
        phi: opt.phi,
        evaluations: opt.evaluations,
    })
}

impl CorrelationOptimum {
    fn classical(&self, cfg: &OptimizerConfig) -> OptimizedMeasure {
        self.measure(self.classical, cfg)
    }

    fn discord(&self, cfg: &OptimizerConfig) -> OptimizedMeasure {
        self.measure(self.mutual_information - self.classical, cfg)
    }

    fn measure(&self, raw: f64, cfg: &OptimizerConfig) -> OptimizedMeasure {
        OptimizedMeasure {
            value: clip(raw, cfg.tolerance),
            raw_value: raw,
            theta: self.theta,
            phi: self.phi,
            measurement: bloch_projectors(self.theta, self.phi),
            evaluations: self.evaluations,
        }
    }
}

/// Mutual information minus the best measured mutual information.
pub fn quantum_discord(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<OptimizedMeasure> {
    Ok(optimize_correlation(rho, cfg)?.discord(cfg))
}

/// Largest reduction of `S(ρ_B)` obtainable by measuring `A`.
///
/// Runs the same deterministic search as [`quantum_discord`], so the two
/// add up to the mutual information at the same measurement.
pub fn classical_correlation_hv(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<OptimizedMeasure> {
    Ok(optimize_correlation(rho, cfg)?.classical(cfg))
}

/// Smallest entropy increase `S(Σ Π ρ Π) − S(ρ)` over measurements on `A`.
pub fn oneway_deficit(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<OptimizedMeasure> {
    cfg.validate()?;
    require_two_qubits(rho)?;
    let entropy = von_neumann_entropy(rho);
    let opt = minimize_on_sphere(cfg, |theta, phi| {
        let pinched = pinch(rho, &bloch_projectors(theta, phi)).expect("two-qubit shapes are consistent");
        von_neumann_entropy(&pinched)
    });
    let raw = opt.value - entropy;
    Ok(OptimizedMeasure {
        value: clip(raw, cfg.tolerance),
        raw_value: raw,
        theta: opt.theta,
        phi: opt.phi,
        measurement: bloch_projectors(opt.theta, opt.phi),
        evaluations: opt.evaluations,
    })
}

/// Non-fatal conditions attached to a result.
#[derive(Clone, Debug, PartialEq)]
pub enum Warning {
    /// A marginal has nearly equal eigenvalues, so its eigenbasis (and the
    /// quantum deficit built on it) depends on solver ordering.
    DegenerateMarginal { subsystem: usize, gap: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::DegenerateMarginal { subsystem, gap } => write!(
                f,
                "marginal {subsystem} is degenerate (eigenvalue gap {gap:.3e}); quantum deficit uses the solver's eigenbasis"
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuantumDeficit {
    pub value: f64,
    pub raw_value: f64,
    /// `Σ P(a,b) Π_a⊗Π_b` in the marginal eigenbases.
    pub decohered: DensityMatrix,
    pub warnings: Vec<Warning>,
}

/// `S(ρ‖ρ^(d))` where `ρ^(d)` keeps only the diagonal of `ρ` in the product
/// of the marginal eigenbases. No optimization is involved.
pub fn quantum_deficit(rho: &DensityMatrix) -> Result<QuantumDeficit> {
    if rho.dims().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a bipartite signature, got {:?}",
            rho.dims()
        )));
    }
    let mut warnings = Vec::new();
    let mut bases = Vec::with_capacity(2);
    for subsystem in 0..2 {
        let marginal = partial_trace(rho.matrix(), rho.dims(), &[subsystem])?;
        let eig = hermitian_eig(&marginal, f64::INFINITY)?;
        let gap = eig
            .eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if gap < DEGENERACY_GAP {
            warnings.push(Warning::DegenerateMarginal { subsystem, gap });
        }
        bases.push((0..eig.dim()).map(|k| eig.projector(k)).collect::<Vec<_>>());
    }
    let product = ProjectiveMeasurement::from_trusted(
        bases[0]
            .iter()
            .flat_map(|pa| bases[1].iter().map(move |pb| tensor_product(pa, pb)))
            .collect(),
    );
    let decohered = pinch(rho, &product)?;
    let raw = relative_entropy_matrices(rho.matrix(), decohered.matrix());
    Ok(QuantumDeficit {
        value: raw,
        raw_value: raw,
        decohered,
        warnings,
    })
}

/// Two evaluations of the discord integrand at a fixed measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscordDecomposition {
    /// `S(A:B) − J(m)`.
    pub direct: f64,
    /// `S(ρ‖ρ^D) − S(ρ_A‖ρ_A^D)`, with `^D` the pinching by `m`.
    pub via_relent: f64,
}

pub fn discord_relative_entropy_decomposition(
    rho: &DensityMatrix,
    m: &ProjectiveMeasurement,
) -> Result<DiscordDecomposition> {
    if rho.dims() != [2, 2] || m.block_dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "needs a two-qubit state and a qubit measurement, got {:?} and block {}",
            rho.dims(),
            m.block_dim()
        )));
    }
    if !m.is_rank_one() {
        return Err(Error::InvalidMeasurement("projectors must be rank 1".into()));
    }
    let direct = mutual_information(rho)? - measured_mutual_information(rho, m)?;
    let rho_a = rho.reduced(&[0])?;
    let global = relative_entropy_matrices(rho.matrix(), pinch(rho, m)?.matrix());
    let local = relative_entropy_matrices(rho_a.matrix(), pinch(&rho_a, m)?.matrix());
    Ok(DiscordDecomposition {
        direct,
        via_relent: global - local,
    })
}

/// Solver statistics and unclipped values behind a [`MeasureReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureDiagnostics {
    pub evaluations: usize,
    pub raw_discord: f64,
    pub raw_classical_correlation: f64,
    pub raw_oneway_deficit: f64,
    pub raw_quantum_deficit: f64,
    /// `|δ + C_A − S(A:B)|`.
    pub additivity_residual: f64,
}

/// All correlation measures of a two-qubit state.
#[derive(Clone, Debug)]
pub struct MeasureReport {
    pub mutual_information: f64,
    pub discord: f64,
    pub classical_correlation: f64,
    pub oneway_deficit: f64,
    pub quantum_deficit: f64,
    /// Measurement attaining the discord and the classical correlation.
    pub optimal_measurement: ProjectiveMeasurement,
    pub theta: f64,
    pub phi: f64,
    pub diagnostics: MeasureDiagnostics,
    pub warnings: Vec<Warning>,
}

pub fn measure_report(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<MeasureReport> {
    let opt = optimize_correlation(rho, cfg)?;
    let discord = opt.discord(cfg);
    let classical = opt.classical(cfg);
    let deficit = oneway_deficit(rho, cfg)?;
    let quantum = quantum_deficit(rho)?;
    Ok(MeasureReport {
        mutual_information: opt.mutual_information,
        discord: discord.value,
        classical_correlation: classical.value,
        oneway_deficit: deficit.value,
        quantum_deficit: quantum.value,
        optimal_measurement: discord.measurement,
        theta: opt.theta,
        phi: opt.phi,
        diagnostics: MeasureDiagnostics {
            evaluations: opt.evaluations + deficit.evaluations,
            raw_discord: discord.raw_value,
            raw_classical_correlation: classical.raw_value,
            raw_oneway_deficit: deficit.raw_value,
            raw_quantum_deficit: quantum.raw_value,
            additivity_residual: (discord.value + classical.value - opt.mutual_information).abs(),
        },
        warnings: quantum.warnings,
    })
}
