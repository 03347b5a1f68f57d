//! Shannon and von Neumann entropies, relative entropy, and mutual information.
//!
//! All logarithms are base 2, so every quantity is in bits.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, SUPPORT_CUTOFF};
use crate::states::{check_probability, DensityMatrix};

/// Weight of `ρ` outside `supp(σ)` above which `S(ρ‖σ)` is infinite.
pub const SUPPORT_WEIGHT_TOL: f64 = 1e-8;

/// `−x log₂ x` with the `0 log 0 = 0` convention; negative dust counts as zero.
#[inline]
pub(crate) fn entropy_term(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    check_probability(p, 1e-12)?;
    Ok(p.iter().copied().map(entropy_term).sum())
}

/// Joint distribution `P(a, b)` over a finite grid of outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityTable {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl ProbabilityTable {
    pub fn new(values: &[Vec<f64>]) -> Result<Self> {
        let rows = values.len();
        let cols = values.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || values.iter().any(|r| r.len() != cols) {
            return Err(Error::NotProbability("table must be a non-empty rectangle".into()));
        }
        let flat: Vec<f64> = values.iter().flatten().copied().collect();
        check_probability(&flat, 1e-12)?;
        Ok(Self {
            rows,
            cols,
            values: flat,
        })
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.cols + b]
    }

    pub fn marginal_a(&self) -> Vec<f64> {
        (0..self.rows).map(|a| (0..self.cols).map(|b| self.get(a, b)).sum()).collect()
    }

    pub fn marginal_b(&self) -> Vec<f64> {
        (0..self.cols).map(|b| (0..self.rows).map(|a| self.get(a, b)).sum()).collect()
    }
}

/// `H(A) + H(B) − H(A,B)`.
pub fn shannon_mutual_information(p: &ProbabilityTable) -> f64 {
    let h = |xs: &[f64]| xs.iter().copied().map(entropy_term).sum::<f64>();
    h(&p.marginal_a()) + h(&p.marginal_b()) - h(&p.values)
}

pub(crate) fn spectrum(m: &ComplexMatrix) -> Vec<f64> {
    hermitian_eig(m, f64::INFINITY)
        .expect("unchecked eigensolve cannot fail")
        .eigenvalues
}

/// von Neumann entropy of a Hermitian PSD matrix (no validation).
pub(crate) fn matrix_entropy(m: &ComplexMatrix) -> f64 {
    spectrum(m).into_iter().map(entropy_term).sum()
}

/// `S(ρ) = −Tr[ρ log₂ ρ]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    matrix_entropy(rho.matrix())
}

/// `S(ρ‖σ) = Tr[ρ log₂ ρ] − Tr[ρ log₂ σ]`, evaluated on the support of σ.
///
/// Returns `f64::INFINITY` when ρ puts more than [`SUPPORT_WEIGHT_TOL`] of
/// its weight outside `supp(σ)`. Rounding dust below zero is clamped.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(relative_entropy_matrices(rho.matrix(), sigma.matrix()))
}

pub(crate) fn relative_entropy_matrices(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    (cross_entropy_matrices(rho, sigma) - matrix_entropy(rho)).max(0.0)
}

/// `−Tr[ρ log₂ σ]` over the support of σ; infinite when ρ leaks out of it.
pub(crate) fn cross_entropy_matrices(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let sig = hermitian_eig(sigma, f64::INFINITY).expect("unchecked eigensolve cannot fail");
    let mut outside = 0.0;
    let mut cross = 0.0;
    for k in 0..sig.dim() {
        let v = sig.eigenvector(k);
        let rv = rho.apply(&v);
        let weight: f64 = v.iter().zip(&rv).map(|(a, b)| (a.conj() * b).re).sum();
        let mu = sig.eigenvalues[k];
        if mu > SUPPORT_CUTOFF {
            cross -= weight * mu.log2();
        } else {
            outside += weight;
        }
    }
    if outside > SUPPORT_WEIGHT_TOL {
        f64::INFINITY
    } else {
        cross
    }
}

fn bipartite(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a bipartite signature, got {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// `S(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    bipartite(rho_ab)?;
    let sa = von_neumann_entropy(&rho_ab.reduced(&[0])?);
    let sb = von_neumann_entropy(&rho_ab.reduced(&[1])?);
    Ok(sa + sb - von_neumann_entropy(rho_ab))
}

/// `S(ρ_AB ‖ ρ_A ⊗ ρ_B)`, the relative-entropy form of the mutual information.
pub fn mutual_information_relative(rho_ab: &DensityMatrix) -> Result<f64> {
    bipartite(rho_ab)?;
    let product = rho_ab.reduced(&[0])?.tensor(&rho_ab.reduced(&[1])?);
    relative_entropy(rho_ab, &product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_state, example_separable, random_density};

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&[0.5, 0.5]).unwrap(), 1.0);
        let expected = 2.0 - 0.75 * 3f64.log2();
        assert!((shannon_entropy(&[0.25, 0.75]).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.8113).abs() < 1e-4);
        assert!(shannon_entropy(&[0.5, 0.6]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn shannon_mutual_information_examples() {
        let product = ProbabilityTable::new(&[vec![0.12, 0.28], vec![0.18, 0.42]]).unwrap();
        assert!(shannon_mutual_information(&product).abs() < 1e-15);
        let correlated = ProbabilityTable::new(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!((shannon_mutual_information(&correlated) - 1.0).abs() < 1e-15);
        let t = ProbabilityTable::new(&[vec![0.4, 0.1], vec![0.1, 0.4]]).unwrap();
        // H(A) = H(B) = 1; H(A,B) = −0.8 log 0.4 − 0.2 log 0.1.
        let expected = 2.0 + 0.8 * 0.4f64.log2() + 0.2 * 0.1f64.log2();
        assert!((shannon_mutual_information(&t) - expected).abs() < 1e-14);
        assert!((expected - 0.2781).abs() < 1e-4);
        assert!(ProbabilityTable::new(&[vec![0.5], vec![0.4]]).is_err());
    }

    #[test]
    fn von_neumann_examples() {
        assert!(von_neumann_entropy(&bell_state()).abs() < 1e-14);
        let mixed = DensityMatrix::maximally_mixed(&[2, 2]).unwrap();
        assert!((von_neumann_entropy(&mixed) - 2.0).abs() < 1e-14);
        // Mixture of two pure states with overlap ¼: λ± = ½(1 ± √(1 − 4p(1−p)·¾)).
        let p: f64 = 0.5;
        let disc = (1.0 - 4.0 * p * (1.0 - p) * 0.75).sqrt();
        let expected = entropy_term(0.5 * (1.0 + disc)) + entropy_term(0.5 * (1.0 - disc));
        let got = von_neumann_entropy(&example_separable(p).unwrap());
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = random_density(&[2, 2], 11).unwrap();
        assert!(relative_entropy(&rho, &rho).unwrap() < 1e-12);

        let zero = DensityMatrix::from_trusted(ComplexMatrix::diag(&[1.0, 0.0]), vec![2]);
        let one = DensityMatrix::from_trusted(ComplexMatrix::diag(&[0.0, 1.0]), vec![2]);
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);

        let half = DensityMatrix::maximally_mixed(&[2]).unwrap();
        let sigma = DensityMatrix::from_trusted(ComplexMatrix::diag(&[0.25, 0.75]), vec![2]);
        let expected = -1.0 + 0.5 * (2.0 + (4.0f64 / 3.0).log2());
        assert!((relative_entropy(&half, &sigma).unwrap() - expected).abs() < 1e-14);

        assert!(relative_entropy(&half, &rho).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let product = random_density(&[2], 1).unwrap().tensor(&random_density(&[2], 2).unwrap());
        assert!(mutual_information(&product).unwrap().abs() < 1e-13);
        assert!((mutual_information(&bell_state()).unwrap() - 2.0).abs() < 1e-13);
        for seed in 0..10 {
            let rho = random_density(&[2, 2], seed).unwrap();
            let a = mutual_information(&rho).unwrap();
            let b = mutual_information_relative(&rho).unwrap();
            assert!((a - b).abs() < 1e-9);
        }
        assert!(mutual_information(&random_density(&[2, 2, 2], 0).unwrap()).is_err());
    }
}
