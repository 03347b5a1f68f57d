//! Projective and operator-form measurements on a leading block of subsystems.
//!
//! A measurement acts on the first few subsystems of a state's signature
//! whose dimensions multiply to the measurement's block dimension, e.g. `A`
//! of `A⊗B` or the composite `A'A` of `A'⊗A⊗B`.

use crate::error::{Error, Result};
use crate::linalg::{c, tensor_product, ComplexMatrix};
use crate::states::{qubit, DensityMatrix};

/// Tolerance on the projector algebra (idempotency, orthogonality, completeness).
pub const PROJECTOR_TOL: f64 = 1e-10;

/// Outcomes with probability below this are treated as absent.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Complete set of mutually orthogonal Hermitian projectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveMeasurement {
    block_dim: usize,
    projectors: Vec<ComplexMatrix>,
}

impl ProjectiveMeasurement {
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = projectors.first() else {
            return Err(Error::InvalidMeasurement("no projectors".into()));
        };
        let d = first.dim();
        if projectors.iter().any(|p| p.dim() != d) {
            return Err(Error::InvalidMeasurement("projectors differ in dimension".into()));
        }
        let mut sum = ComplexMatrix::zeros(d);
        for (i, p) in projectors.iter().enumerate() {
            let herm = p.hermiticity_residual();
            if herm > PROJECTOR_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {i} not Hermitian ({herm:.3e})"
                )));
            }
            let idem = (p * p).max_abs_diff(p);
            if idem > PROJECTOR_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {i} not idempotent ({idem:.3e})"
                )));
            }
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                let overlap = (p * q).max_abs();
                if overlap > PROJECTOR_TOL {
                    return Err(Error::InvalidMeasurement(format!(
                        "projectors {i} and {j} not orthogonal ({overlap:.3e})"
                    )));
                }
            }
            sum = &sum + p;
        }
        let completeness = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if completeness > PROJECTOR_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "projectors do not sum to the identity ({completeness:.3e})"
            )));
        }
        Ok(Self {
            block_dim: d,
            projectors,
        })
    }

    pub(crate) fn from_trusted(projectors: Vec<ComplexMatrix>) -> Self {
        Self {
            block_dim: projectors[0].dim(),
            projectors,
        }
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self::from_trusted(vec![ComplexMatrix::identity(dim)])
    }

    /// Rank-1 projectors onto the computational basis.
    pub fn computational(dim: usize) -> Self {
        Self::from_trusted(
            (0..dim)
                .map(|k| {
                    let mut p = ComplexMatrix::zeros(dim);
                    p[(k, k)] = c(1.0, 0.0);
                    p
                })
                .collect(),
        )
    }

    /// Rank-1 projectors onto the columns of a unitary.
    pub fn from_basis(unitary: &ComplexMatrix) -> Result<Self> {
        let n = unitary.dim();
        let projectors = (0..n)
            .map(|k| {
                let col: Vec<_> = (0..n).map(|i| unitary[(i, k)]).collect();
                ComplexMatrix::outer(&col, &col)
            })
            .collect();
        Self::new(projectors)
    }

    #[inline]
    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    #[inline]
    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    /// Tr Π_i, which is the rank of a projector.
    pub fn rank(&self, i: usize) -> f64 {
        self.projectors[i].trace().re
    }

    pub fn is_rank_one(&self) -> bool {
        (0..self.len()).all(|i| (self.rank(i) - 1.0).abs() < PROJECTOR_TOL)
    }
}

/// Projectors onto `|n̂±⟩` for the Bloch direction `(sinθ cosφ, sinθ sinφ, cosθ)`.
///
/// `Π₊ + Π₋ = I` holds exactly in floating point.
pub fn bloch_projectors(theta: f64, phi: f64) -> ProjectiveMeasurement {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let (nx, ny, nz) = (st * cp, st * sp, ct);
    // The larger diagonal is computed first; 1 − d is then exact.
    let d00 = 0.5 * (1.0 + nz);
    let (d00, d11) = if d00 >= 0.5 {
        (d00, 1.0 - d00)
    } else {
        let d11 = 0.5 * (1.0 - nz);
        (1.0 - d11, d11)
    };
    let off = c(0.5 * nx, -0.5 * ny);
    let plus = ComplexMatrix::from_vec(2, vec![c(d00, 0.0), off, off.conj(), c(d11, 0.0)]).unwrap();
    let minus =
        ComplexMatrix::from_vec(2, vec![c(d11, 0.0), -off, -off.conj(), c(d00, 0.0)]).unwrap();
    ProjectiveMeasurement::from_trusted(vec![plus, minus])
}

/// The four rank-1 projectors `|0,+⟩, |0,−⟩, |1,0⟩, |1,1⟩` on an ancilla–qubit pair.
///
/// Together with [`crate::states::example_extension`] they form the worked
/// example of a measurement that leaves a discordant separable state untouched.
pub fn extension_projectors() -> ProjectiveMeasurement {
    ProjectiveMeasurement::from_trusted(vec![
        tensor_product(&qubit::zero(), &qubit::plus()),
        tensor_product(&qubit::zero(), &qubit::minus()),
        tensor_product(&qubit::one(), &qubit::zero()),
        tensor_product(&qubit::one(), &qubit::one()),
    ])
}

/// Number of leading subsystems whose dimensions multiply to `block_dim`.
pub(crate) fn leading_block(dims: &[usize], block_dim: usize) -> Result<usize> {
    let mut product = 1;
    for (k, &d) in dims.iter().enumerate() {
        product *= d;
        if product == block_dim {
            return Ok(k + 1);
        }
        if product > block_dim {
            break;
        }
    }
    Err(Error::DimensionMismatch(format!(
        "no leading block of {dims:?} has dimension {block_dim}"
    )))
}

/// Operator `op ⊗ I` on a state with signature `dims`, plus the remainder signature.
fn lift(op: &ComplexMatrix, dims: &[usize]) -> Result<(ComplexMatrix, Vec<usize>)> {
    let k = leading_block(dims, op.dim())?;
    let rest: Vec<usize> = if k == dims.len() { vec![1] } else { dims[k..].to_vec() };
    let rest_dim: usize = rest.iter().product();
    Ok((tensor_product(op, &ComplexMatrix::identity(rest_dim)), rest))
}

/// Reduces `x` (on `block ⊗ rest`) to the remainder subsystems.
fn trace_block(x: &ComplexMatrix, block_dim: usize, rest_dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rest_dim, |i, j| {
        (0..block_dim)
            .map(|a| x[(a * rest_dim + i, a * rest_dim + j)])
            .sum()
    })
}

/// Outcome statistics of a projective measurement.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub probabilities: Vec<f64>,
    /// Post-measurement state of the unmeasured subsystems for each outcome;
    /// `None` for outcomes with probability below [`ZERO_PROBABILITY`].
    pub conditional_states: Vec<Option<DensityMatrix>>,
    /// `Σ_α (Π_α⊗I) ρ (Π_α⊗I)`.
    pub pinched_state: DensityMatrix,
}

pub fn measure_subsystem(rho: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<MeasurementOutcome> {
    let mut probabilities = Vec::with_capacity(m.len());
    let mut conditional_states = Vec::with_capacity(m.len());
    let mut pinched = ComplexMatrix::zeros(rho.dim());
    let rest_dim = rho.dim() / m.block_dim();
    for proj in m.projectors() {
        let (lifted, rest) = lift(proj, rho.dims())?;
        let x = &(&lifted * rho.matrix()) * &lifted;
        let p = x.trace().re;
        probabilities.push(p);
        conditional_states.push((p >= ZERO_PROBABILITY).then(|| {
            let b = trace_block(&x, m.block_dim(), rest_dim).scale_real(1.0 / p);
            DensityMatrix::from_trusted(b, rest)
        }));
        pinched = &pinched + &x;
    }
    Ok(MeasurementOutcome {
        probabilities,
        conditional_states,
        pinched_state: DensityMatrix::from_trusted(pinched.hermitian_part(), rho.dims().to_vec()),
    })
}

/// Pinching `ρ ↦ Σ_α (Π_α⊗I) ρ (Π_α⊗I)`.
pub fn pinch(rho: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<DensityMatrix> {
    let mut acc = ComplexMatrix::zeros(rho.dim());
    for proj in m.projectors() {
        let (lifted, _) = lift(proj, rho.dims())?;
        acc = &acc + &(&(&lifted * rho.matrix()) * &lifted);
    }
    Ok(DensityMatrix::from_trusted(acc.hermitian_part(), rho.dims().to_vec()))
}

/// Ensemble produced by measurement operators `{V_i}`.
#[derive(Clone, Debug)]
pub struct PovmEnsemble {
    pub probabilities: Vec<f64>,
    /// Normalized remainder states; `None` for outcomes below [`ZERO_PROBABILITY`].
    pub states: Vec<Option<DensityMatrix>>,
}

/// Applies operators `V_i` (with `Σ V_i†V_i = I`) to the leading block of `rho`.
pub fn apply_povm_elements(rho: &DensityMatrix, elements: &[ComplexMatrix]) -> Result<PovmEnsemble> {
    let Some(first) = elements.first() else {
        return Err(Error::NotResolutionOfIdentity(1.0));
    };
    let d = first.dim();
    if elements.iter().any(|v| v.dim() != d) {
        return Err(Error::DimensionMismatch("measurement operators differ in dimension".into()));
    }
    let mut sum = ComplexMatrix::zeros(d);
    for v in elements {
        sum = &sum + &(&v.adjoint() * v);
    }
    let residual = sum.max_abs_diff(&ComplexMatrix::identity(d));
    if residual > PROJECTOR_TOL {
        return Err(Error::NotResolutionOfIdentity(residual));
    }

    let rest_dim = rho.dim() / d;
    let mut probabilities = Vec::with_capacity(elements.len());
    let mut states = Vec::with_capacity(elements.len());
    for v in elements {
        let (lifted, rest) = lift(v, rho.dims())?;
        let x = &(&lifted * rho.matrix()) * &lifted.adjoint();
        let q = x.trace().re;
        probabilities.push(q);
        states.push((q >= ZERO_PROBABILITY).then(|| {
            DensityMatrix::from_trusted(trace_block(&x, d, rest_dim).scale_real(1.0 / q), rest)
        }));
    }
    Ok(PovmEnsemble {
        probabilities,
        states,
    })
}

/// Whether pinching leaves `rho` unchanged within `tol` (Frobenius); also
/// returns the residual.
pub fn is_insensitive(rho: &DensityMatrix, m: &ProjectiveMeasurement, tol: f64) -> Result<(bool, f64)> {
    let residual = pinch(rho, m)?.distance(rho);
    Ok((residual <= tol, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_state, example_extension, random_density};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn bloch_poles_and_equator() {
        let z = bloch_projectors(0.0, 0.0);
        assert_eq!(z.projectors()[0], qubit::zero());
        assert_eq!(z.projectors()[1], qubit::one());
        let x = bloch_projectors(FRAC_PI_2, 0.0);
        assert!(x.projectors()[0].distance(&qubit::plus()) < 1e-15);
        assert!(x.projectors()[1].distance(&qubit::minus()) < 1e-15);
    }

    #[test]
    fn bloch_completeness_is_exact() {
        for i in 0..50 {
            for j in 0..50 {
                let (t, p) = (i as f64 * PI / 49.0, j as f64 * 2.0 * PI / 50.0);
                let m = bloch_projectors(t, p);
                let sum = &m.projectors()[0] + &m.projectors()[1];
                assert_eq!(sum, ComplexMatrix::identity(2));
                ProjectiveMeasurement::new(m.projectors().to_vec()).unwrap();
            }
        }
    }

    #[test]
    fn rejects_invalid_projector_sets() {
        assert!(ProjectiveMeasurement::new(vec![]).is_err());
        assert!(ProjectiveMeasurement::new(vec![qubit::zero()]).is_err());
        assert!(ProjectiveMeasurement::new(vec![qubit::zero(), qubit::plus()]).is_err());
        let not_idempotent = ComplexMatrix::diag(&[0.5, 0.5]);
        assert!(ProjectiveMeasurement::new(vec![not_idempotent.clone(), not_idempotent]).is_err());
        ProjectiveMeasurement::new(extension_projectors().projectors().to_vec()).unwrap();
    }

    #[test]
    fn z_measurement_on_product_basis_state() {
        let rho = DensityMatrix::from_trusted(ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.0]), vec![2, 2]);
        let out = measure_subsystem(&rho, &ProjectiveMeasurement::computational(2)).unwrap();
        assert_eq!(out.probabilities, vec![1.0, 0.0]);
        assert_eq!(out.conditional_states[0].as_ref().unwrap().matrix(), &qubit::zero());
        assert!(out.conditional_states[1].is_none());
    }

    #[test]
    fn x_measurement_on_bell_state() {
        let out = measure_subsystem(&bell_state(), &bloch_projectors(FRAC_PI_2, 0.0)).unwrap();
        assert!((out.probabilities[0] - 0.5).abs() < 1e-15);
        assert!((out.probabilities[1] - 0.5).abs() < 1e-15);
        let plus = out.conditional_states[0].as_ref().unwrap();
        let minus = out.conditional_states[1].as_ref().unwrap();
        assert!(plus.matrix().distance(&qubit::plus()) < 1e-15);
        assert!(minus.matrix().distance(&qubit::minus()) < 1e-15);
    }

    #[test]
    fn z_pinch_of_bell_state() {
        let pinched = pinch(&bell_state(), &ProjectiveMeasurement::computational(2)).unwrap();
        assert_eq!(pinched.matrix(), &ComplexMatrix::diag(&[0.5, 0.0, 0.0, 0.5]));
    }

    #[test]
    fn pinch_is_idempotent_and_matches_outcome() {
        for seed in 0..20 {
            let rho = random_density(&[2, 2], seed).unwrap();
            let m = bloch_projectors(0.3 * seed as f64, 1.1 * seed as f64);
            let once = pinch(&rho, &m).unwrap();
            let twice = pinch(&once, &m).unwrap();
            assert!(once.distance(&twice) < 1e-14);
            let out = measure_subsystem(&rho, &m).unwrap();
            assert!(out.pinched_state.distance(&once) < 1e-15);
            assert!((out.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn extension_projectors_leave_extension_unchanged() {
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let rho = example_extension(p).unwrap();
            let (ok, residual) = is_insensitive(&rho, &extension_projectors(), 1e-13).unwrap();
            assert!(ok, "p={p} residual={residual}");
        }
    }

    #[test]
    fn bell_state_is_sensitive_to_every_qubit_measurement() {
        for (t, p) in [(0.0, 0.0), (FRAC_PI_2, 0.0), (1.0, 2.0), (2.5, 4.0)] {
            let (ok, residual) = is_insensitive(&bell_state(), &bloch_projectors(t, p), 1e-10).unwrap();
            assert!(!ok && residual > 0.1);
        }
        let (ok, residual) = is_insensitive(&bell_state(), &ProjectiveMeasurement::trivial(2), 0.0).unwrap();
        assert!(ok && residual == 0.0);
    }

    #[test]
    fn povm_specializes_to_projective() {
        let rho = random_density(&[2, 2], 3).unwrap();
        let m = bloch_projectors(0.7, 2.1);
        let povm = apply_povm_elements(&rho, m.projectors()).unwrap();
        let proj = measure_subsystem(&rho, &m).unwrap();
        for k in 0..2 {
            assert!((povm.probabilities[k] - proj.probabilities[k]).abs() < 1e-12);
            let a = povm.states[k].as_ref().unwrap();
            let b = proj.conditional_states[k].as_ref().unwrap();
            assert!(a.distance(b) < 1e-12);
        }
    }

    #[test]
    fn povm_scaled_identity_on_product_state() {
        let ra = random_density(&[2], 1).unwrap();
        let rb = random_density(&[2], 2).unwrap();
        let rho = ra.tensor(&rb);
        let v = ComplexMatrix::identity(2).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        let out = apply_povm_elements(&rho, &[v.clone(), v]).unwrap();
        for s in &out.states {
            assert!(s.as_ref().unwrap().distance(&rb) < 1e-14);
        }
    }

    #[test]
    fn trine_povm_is_uniform_on_maximally_mixed_qubit() {
        let rb = random_density(&[2], 5).unwrap();
        let rho = DensityMatrix::maximally_mixed(&[2]).unwrap().tensor(&rb);
        let scale = (2.0f64 / 3.0).sqrt();
        let elements: Vec<ComplexMatrix> = (0..3)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / 3.0;
                let v = [c(a.cos(), 0.0), c(a.sin(), 0.0)];
                ComplexMatrix::outer(&v, &v).scale_real(scale)
            })
            .collect();
        let out = apply_povm_elements(&rho, &elements).unwrap();
        for q in out.probabilities {
            assert!((q - 1.0 / 3.0).abs() < 1e-14);
        }
        assert!(matches!(
            apply_povm_elements(&rho, &elements[..2]),
            Err(Error::NotResolutionOfIdentity(_))
        ));
    }
}
