//! Density matrices, kets, and the state builders used throughout the crate.
//!
//! Multi-qubit states use the row-major composite index with subsystems in
//! signature order, so `|1,0,0⟩` of an `A'⊗A⊗B` register is basis index 4.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, c, hermitian_eig, tensor_all, tensor_product, ComplexMatrix, ONE, ZERO};
use crate::measurement::ProjectiveMeasurement;

/// Tolerance for Hermiticity, positivity and trace when validating a state.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Largest total Hilbert-space dimension the random builders accept.
pub const MAX_DIM: usize = 8;

/// Exact single-qubit projectors.
pub mod qubit {
    use crate::linalg::ComplexMatrix;

    /// |0⟩⟨0|
    pub fn zero() -> ComplexMatrix {
        ComplexMatrix::diag(&[1.0, 0.0])
    }

    /// |1⟩⟨1|
    pub fn one() -> ComplexMatrix {
        ComplexMatrix::diag(&[0.0, 1.0])
    }

    /// |+⟩⟨+|
    pub fn plus() -> ComplexMatrix {
        ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]])
    }

    /// |−⟩⟨−|
    pub fn minus() -> ComplexMatrix {
        ComplexMatrix::from_real(&[&[0.5, -0.5], &[-0.5, 0.5]])
    }

    /// I/2
    pub fn maximally_mixed() -> ComplexMatrix {
        ComplexMatrix::diag(&[0.5, 0.5])
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix with a subsystem signature.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix already known to be a state (up to rounding).
    pub(crate) fn from_trusted(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.dim());
        Self { dims, matrix }
    }

    pub fn from_ket(ket: &Ket, dims: &[usize]) -> Result<Self> {
        linalg::check_dims(dims, ket.dim())?;
        Ok(Self::from_trusted(ket.projector(), dims.to_vec()))
    }

    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        let n: usize = dims.iter().product();
        linalg::check_dims(dims, n)?;
        Ok(Self::from_trusted(
            ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
            dims.to_vec(),
        ))
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Reduced state on the subsystems in `keep`.
    pub fn reduced(&self, keep: &[usize]) -> Result<Self> {
        let m = linalg::partial_trace(&self.matrix, &self.dims, keep)?;
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        Ok(Self::from_trusted(m, dims))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_trusted(tensor_product(&self.matrix, &other.matrix), dims)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.matrix, f64::INFINITY)
            .expect("unchecked eigensolve cannot fail")
            .eigenvalues
    }

    /// Frobenius distance between the underlying matrices.
    pub fn distance(&self, other: &Self) -> f64 {
        self.matrix.distance(&other.matrix)
    }
}

/// Validates `m` as a density matrix with signature `dims`.
///
/// Eigenvalues in `(−1e-10, 0)` are clipped to zero and the result is
/// renormalized to unit trace.
pub fn validate_density(m: &ComplexMatrix, dims: &[usize]) -> Result<DensityMatrix> {
    linalg::check_dims(dims, m.dim())?;
    let herm = m.hermiticity_residual();
    if herm > VALIDATION_TOL {
        return Err(Error::NotDensity(format!(
            "not Hermitian: max |m - m†| entry {herm:.3e}"
        )));
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > VALIDATION_TOL {
        return Err(Error::NotDensity(format!("trace is {trace:.12}, expected 1")));
    }
    let eig = hermitian_eig(m, VALIDATION_TOL)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -VALIDATION_TOL {
        return Err(Error::NotDensity(format!("negative eigenvalue {min:.6e}")));
    }

    let matrix = if min < 0.0 {
        let total: f64 = eig.eigenvalues.iter().map(|l| l.max(0.0)).sum();
        eig.map_spectrum(|l| l.max(0.0) / total)
    } else if trace != 1.0 {
        m.hermitian_part().scale_real(1.0 / trace)
    } else {
        m.hermitian_part()
    };
    Ok(DensityMatrix::from_trusted(matrix, dims.to_vec()))
}

/// Unit-norm state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
}

impl Ket {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if amplitudes.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange(format!("ket norm {norm}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[k] = ONE;
        Self { amplitudes }
    }

    pub fn zero() -> Self {
        Self::basis(2, 0)
    }

    pub fn one() -> Self {
        Self::basis(2, 1)
    }

    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amplitudes: vec![c(s, 0.0), c(s, 0.0)],
        }
    }

    pub fn minus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amplitudes: vec![c(s, 0.0), c(-s, 0.0)],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ket { amplitudes }
    }

    /// |ψ⟩⟨ψ|
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

fn check_unit_interval(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} is outside [0, 1]")));
    }
    Ok(())
}

/// Two-qubit separable state `p|00⟩⟨00| + (1−p)|++⟩⟨++|`.
pub fn example_separable(p: f64) -> Result<DensityMatrix> {
    check_unit_interval(p)?;
    let first = tensor_product(&qubit::zero(), &qubit::zero()).scale_real(p);
    let second = tensor_product(&qubit::plus(), &qubit::plus()).scale_real(1.0 - p);
    Ok(DensityMatrix::from_trusted(&first + &second, vec![2, 2]))
}

/// Three-qubit extension `p|1,0,0⟩⟨1,0,0| + (1−p)|0,+,+⟩⟨0,+,+|` on `A'⊗A⊗B`.
///
/// Tracing out `A'` recovers [`example_separable`].
pub fn example_extension(p: f64) -> Result<DensityMatrix> {
    check_unit_interval(p)?;
    let first = tensor_all([&qubit::one(), &qubit::zero(), &qubit::zero()]).scale_real(p);
    let second = tensor_all([&qubit::zero(), &qubit::plus(), &qubit::plus()]).scale_real(1.0 - p);
    Ok(DensityMatrix::from_trusted(&first + &second, vec![2, 2, 2]))
}

/// Bell state (|00⟩ + |11⟩)/√2.
pub fn bell_state() -> DensityMatrix {
    let m = ComplexMatrix::from_real(&[
        &[0.5, 0.0, 0.0, 0.5],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.5, 0.0, 0.0, 0.5],
    ]);
    DensityMatrix::from_trusted(m, vec![2, 2])
}

pub(crate) fn check_probability(weights: &[f64], tol: f64) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::NotProbability("empty weight vector".into()));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < -tol) {
        return Err(Error::NotProbability(format!("weight {w} is negative")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::NotProbability(format!("weights sum to {total}")));
    }
    Ok(())
}

/// Classically correlated state `Σ_α q_α Π_α ⊗ τ_α`.
///
/// The projectors act on the leading block; zero-weight terms are skipped.
pub fn classical_correlated(
    weights: &[f64],
    projectors: &ProjectiveMeasurement,
    states: &[DensityMatrix],
) -> Result<DensityMatrix> {
    if weights.len() != projectors.len() || weights.len() != states.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights, {} projectors, {} states",
            weights.len(),
            projectors.len(),
            states.len()
        )));
    }
    check_probability(weights, 1e-12)?;
    let tail = states[0].dims().to_vec();
    if states.iter().any(|s| s.dims() != tail.as_slice()) {
        return Err(Error::DimensionMismatch("conditional states differ in signature".into()));
    }
    let mut dims = vec![projectors.block_dim()];
    dims.extend_from_slice(&tail);
    let total: usize = dims.iter().product();

    let mut acc = ComplexMatrix::zeros(total);
    for ((&q, proj), tau) in weights.iter().zip(projectors.projectors()).zip(states) {
        if q == 0.0 {
            continue;
        }
        acc = &acc + &tensor_product(proj, tau.matrix()).scale_real(q);
    }
    Ok(DensityMatrix::from_trusted(acc, dims))
}

fn total_dim(dims: &[usize]) -> Result<usize> {
    let n: usize = dims.iter().product();
    linalg::check_dims(dims, n)?;
    if n > MAX_DIM {
        return Err(Error::DimensionMismatch(format!(
            "total dimension {n} exceeds {MAX_DIM}"
        )));
    }
    Ok(n)
}

fn gaussian_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    })
}

/// Seeded random state `G·G†/Tr(G·G†)` with complex Gaussian `G`.
pub fn random_density(dims: &[usize], seed: u64) -> Result<DensityMatrix> {
    let n = total_dim(dims)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(n, &mut rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    Ok(DensityMatrix::from_trusted(w.hermitian_part().scale_real(1.0 / tr), dims.to_vec()))
}

/// Seeded random unitary: the eigenvector matrix of a random Hermitian matrix.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let g = gaussian_matrix(dim, &mut rng);
    let h = (&g + &g.adjoint()).scale_real(0.5);
    hermitian_eig(&h, f64::INFINITY)
        .expect("unchecked eigensolve cannot fail")
        .eigenvectors
}
