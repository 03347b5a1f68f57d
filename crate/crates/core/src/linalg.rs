//! Dense complex matrices sized for a handful of qubits.
//!
//! Everything here is row-major and allocation-light: the largest matrix the
//! crate ever touches is 8×8 (three qubits), so no effort goes into blocking
//! or cache layout. The Hermitian eigensolver is a cyclic two-sided Jacobi
//! scheme with complex rotations.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm (relative to `max(1, ‖m‖_F)`) at which Jacobi
/// sweeps stop.
pub const JACOBI_TOL: f64 = 1e-13;

/// Default eigenvalue cutoff below which a direction is outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from a flat row-major vector of length `dim²`.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries cannot fill a {dim}x{dim} matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "row {r} has {} entries, expected {dim}",
                row.len()
            )));
        }
        Ok(Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Real-valued square matrix. Panics if the rows are ragged; meant for literals.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "ragged real matrix literal");
        Self {
            dim,
            data: rows.iter().flat_map(|r| r.iter().map(|&x| c(x, 0.0))).collect(),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v, 0.0);
        }
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(Complex64::conj).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance ‖self − other‖_F.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "distance between different dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "difference between different dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |m_ij − conj(m_ji)|.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// ½(m + m†). Exactly Hermitian inputs come back bit-identical.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            if i == j {
                c(self[(i, i)].re, 0.0)
            } else {
                (self[(i, j)] + self[(j, i)].conj()) * 0.5
            }
        })
    }

    /// Tr[self · other] without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn kron(&self, other: &Self) -> Self {
        tensor_product(self, other)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "adding matrices of different dimension");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "subtracting matrices of different dimension");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "multiplying matrices of different dimension");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim.max(1)) {
            write!(f, " ")?;
            for z in row {
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product: entry `(i·db + k, j·db + l)` is `a_ij · b_kl`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let n = da * db;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..da {
        for j in 0..da {
            let aij = a.data[i * da + j];
            if aij == ZERO {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out.data[(i * db + k) * n + j * db + l] = aij * b.data[k * db + l];
                }
            }
        }
    }
    out
}

/// Kronecker product of a sequence of factors, left to right.
pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, m| tensor_product(&acc, m))
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues ascend. Each eigenvector column is phase-fixed so that its
/// first significant component is real and positive; within a group of tied
/// eigenvalues the columns are ordered by the position of that component.
#[derive(Clone, Debug)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `k` of the eigenvector matrix.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// V · diag(f(λ)) · V†.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .filter(|&k| weights[k] != 0.0)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * weights[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }

    /// Rank-1 projector onto eigenvector `k`.
    pub fn projector(&self, k: usize) -> ComplexMatrix {
        let v = self.eigenvector(k);
        ComplexMatrix::outer(&v, &v)
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Fails with `NotHermitian` when any entry of `m − m†` exceeds `tol`.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigenSystem> {
    let residual = m.hermiticity_residual();
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_TOL * a.frobenius_norm().max(1.0);

    let mut polish = false;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off == 0.0 || polish {
            break;
        }
        // One extra sweep once under the threshold takes the residual to rounding level.
        polish = off <= threshold;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let raw: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    Ok(canonical_order(raw, v))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `V = diag(1, e^{-iφ}) · R(θ)` acting
/// on the (p, q) plane, where `φ = arg a[p][q]`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let g = a[(p, q)];
    let abs_g = g.norm();
    if abs_g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Negligible coupling relative to both diagonal entries.
    if app.abs() + 1e2 * abs_g == app.abs() && aqq.abs() + 1e2 * abs_g == aqq.abs() {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = g / abs_g;
    let theta = (aqq - app) / (2.0 * abs_g);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    let ph_conj = phase.conj();

    // A ← A·V on columns p, q.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cs - akq * ph_conj * sn;
        a[(k, q)] = akp * sn + akq * ph_conj * cs;
    }
    // A ← V†·A on rows p, q.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cs - aqk * phase * sn;
        a[(q, k)] = apk * sn + aqk * phase * cs;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cs - vkq * ph_conj * sn;
        v[(k, q)] = vkp * sn + vkq * ph_conj * cs;
    }
}

fn canonical_order(values: Vec<f64>, v: ComplexMatrix) -> HermitianEigenSystem {
    let n = values.len();
    let scale = values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tie = 1e-12 * scale;

    let mut columns: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<Complex64> = (0..n).map(|i| v[(i, k)]).collect();
            if let Some(lead) = col.iter().find(|z| z.norm() > 1e-10).copied() {
                let fix = lead.conj() / lead.norm();
                col.iter_mut().for_each(|z| *z *= fix);
            }
            (values[k], col)
        })
        .collect();
    columns.sort_by(|x, y| x.0.total_cmp(&y.0));

    let lead_index = |col: &[Complex64]| col.iter().position(|z| z.norm() > 1e-10).unwrap_or(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && columns[end].0 - columns[end - 1].0 <= tie {
            end += 1;
        }
        columns[start..end].sort_by_key(|(_, col)| lead_index(col));
        start = end;
    }

    let eigenvalues = columns.iter().map(|(l, _)| *l).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| columns[k].1[i]);
    HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    }
}

/// Base-2 logarithm restricted to the support of a PSD matrix.
///
/// Eigenvalues at or below `cutoff` contribute zero.
pub fn matrix_log_on_support(m: &ComplexMatrix, cutoff: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m, cutoff)?;
    if let Some(&low) = eig.eigenvalues.first() {
        if low < -cutoff {
            return Err(Error::NegativeEigenvalue(low));
        }
    }
    Ok(eig.map_spectrum(|l| if l > cutoff { l.log2() } else { 0.0 }))
}

/// Checks a subsystem signature against a total dimension.
pub fn check_dims(dims: &[usize], total: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!("invalid dimension signature {dims:?}")));
    }
    let product: usize = dims.iter().product();
    if product != total {
        return Err(Error::DimensionMismatch(format!(
            "signature {dims:?} has product {product}, matrix dimension is {total}"
        )));
    }
    Ok(())
}

/// Partial trace keeping the subsystems listed in `keep` (in signature order).
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(dims, m.dim())?;
    if keep.is_empty() {
        return Err(Error::DimensionMismatch("must keep at least one subsystem".into()));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() || kept[k] {
            return Err(Error::DimensionMismatch(format!(
                "invalid keep set {keep:?} for signature {dims:?}"
            )));
        }
        kept[k] = true;
    }
    if kept.iter().all(|&k| k) {
        return Ok(m.clone());
    }

    let n = m.dim();
    let out_dim: usize = dims.iter().zip(&kept).filter(|(_, &k)| k).map(|(d, _)| d).product();
    let digits = |mut idx: usize| {
        let mut ds = vec![0usize; dims.len()];
        for s in (0..dims.len()).rev() {
            ds[s] = idx % dims[s];
            idx /= dims[s];
        }
        ds
    };
    let split = |ds: &[usize]| {
        let (mut kept_idx, mut traced_idx) = (0usize, 0usize);
        for (s, &d) in ds.iter().enumerate() {
            if kept[s] {
                kept_idx = kept_idx * dims[s] + d;
            } else {
                traced_idx = traced_idx * dims[s] + d;
            }
        }
        (kept_idx, traced_idx)
    };
    let indices: Vec<(usize, usize)> = (0..n).map(|i| split(&digits(i))).collect();

    let mut out = ComplexMatrix::zeros(out_dim);
    for (r, &(kr, tr)) in indices.iter().enumerate() {
        for (col, &(kc, tc)) in indices.iter().enumerate() {
            if tr == tc {
                out[(kr, kc)] += m[(r, col)];
            }
        }
    }
    Ok(out)
}

/// Integer square root of a realigned matrix dimension.
pub(crate) fn pair_dim(n: usize) -> Result<usize> {
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::DimensionMismatch(format!(
            "dimension {n} is not a perfect square"
        )));
    }
    Ok(d)
}

/// Index realignment `R(X)_{(i,k),(j,l)} = X_{(i,j),(k,l)}`; an involution.
pub fn realign(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = pair_dim(m.dim())?;
    let mut out = ComplexMatrix::zeros(m.dim());
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    out[(i * d + k, j * d + l)] = m[(i * d + j, k * d + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli(k: usize) -> ComplexMatrix {
    match k {
        1 => ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]),
        2 => ComplexMatrix::from_vec(2, vec![ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]).unwrap(),
        3 => ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]),
        _ => panic!("pauli index must be 1, 2 or 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hermitian_from_seed(n: usize, seed: u64) -> ComplexMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = ComplexMatrix::from_fn(n, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&g + &g.adjoint()).scale_real(0.5)
    }

    #[test]
    fn kron_identity_and_projectors() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2), ComplexMatrix::identity(4));
        let p0 = ComplexMatrix::diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diag(&[0.0, 1.0]);
        assert_eq!(tensor_product(&p0, &p1), ComplexMatrix::diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_sigma1_sigma3_hand_expansion() {
        // σ₁ ⊗ σ₃ = [[0, σ₃], [σ₃, 0]]
        let expected = ComplexMatrix::from_real(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
        ]);
        assert_eq!(tensor_product(&pauli(1), &pauli(3)), expected);
    }

    #[test]
    fn eig_diagonal_and_projector() {
        let e = hermitian_eig(&ComplexMatrix::diag(&[3.0, 1.0]), 1e-12).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 3.0]);
        let half = ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let e = hermitian_eig(&half, 1e-12).unwrap();
        assert!((e.eigenvalues[0]).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(hermitian_eig(&m, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_complex_entries() {
        // σ₂ has eigenvalues ±1 with complex eigenvectors.
        let e = hermitian_eig(&pauli(2), 1e-12).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert!(e.reconstruct().distance(&pauli(2)) < 1e-14);
        // Leading components are real positive after phase fixing.
        for k in 0..2 {
            let v = e.eigenvector(k);
            assert!(v[0].im.abs() < 1e-15 && v[0].re > 0.0);
        }
    }

    #[test]
    fn eig_reconstruction_and_unitarity_random() {
        for n in 1..=8 {
            for seed in 0..20 {
                let m = hermitian_from_seed(n, seed);
                let e = hermitian_eig(&m, 1e-12).unwrap();
                assert!(e.reconstruct().distance(&m) < 1e-12, "n={n} seed={seed}");
                let v = &e.eigenvectors;
                let vv = &v.adjoint() * v;
                assert!(vv.distance(&ComplexMatrix::identity(n)) < 1e-12);
                let tr: f64 = e.eigenvalues.iter().sum();
                assert!((tr - m.trace().re).abs() < 1e-10);
                assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn eig_is_deterministic_and_orders_ties() {
        let e = hermitian_eig(&ComplexMatrix::identity(3), 1e-12).unwrap();
        assert_eq!(e.eigenvectors, ComplexMatrix::identity(3));
        let m = hermitian_from_seed(6, 42);
        let a = hermitian_eig(&m, 1e-12).unwrap();
        let b = hermitian_eig(&m, 1e-12).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn log_on_support_examples() {
        let l = matrix_log_on_support(&ComplexMatrix::identity(2), SUPPORT_CUTOFF).unwrap();
        assert!(l.max_abs() < 1e-15);
        let l = matrix_log_on_support(&ComplexMatrix::diag(&[0.5, 0.5]), SUPPORT_CUTOFF).unwrap();
        assert!(l.distance(&ComplexMatrix::diag(&[-1.0, -1.0])) < 1e-15);
        let l = matrix_log_on_support(&ComplexMatrix::diag(&[0.25, 0.75]), SUPPORT_CUTOFF).unwrap();
        assert!(l.distance(&ComplexMatrix::diag(&[-2.0, 0.75f64.log2()])) < 1e-15);
        // Zero eigenvalue is outside the support.
        let l = matrix_log_on_support(&ComplexMatrix::diag(&[1.0, 0.0]), SUPPORT_CUTOFF).unwrap();
        assert!(l.max_abs() < 1e-15);
        assert!(matches!(
            matrix_log_on_support(&ComplexMatrix::diag(&[1.0, -0.1]), SUPPORT_CUTOFF),
            Err(Error::NegativeEigenvalue(_))
        ));
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let ra = ComplexMatrix::from_real(&[&[0.7, 0.2], &[0.2, 0.3]]);
        let rb = ComplexMatrix::from_real(&[&[0.4, 0.1], &[0.1, 0.6]]);
        let ab = tensor_product(&ra, &rb);
        assert!(partial_trace(&ab, &[2, 2], &[0]).unwrap().distance(&ra) < 1e-15);
        assert!(partial_trace(&ab, &[2, 2], &[1]).unwrap().distance(&rb) < 1e-15);
        assert_eq!(partial_trace(&ab, &[2, 2], &[0, 1]).unwrap(), ab);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(s, 0.0), ZERO, ZERO, c(s, 0.0)];
        let rho = ComplexMatrix::outer(&bell, &bell);
        let rb = partial_trace(&rho, &[2, 2], &[1]).unwrap();
        assert!(rb.distance(&ComplexMatrix::diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let m = ComplexMatrix::identity(4);
        assert!(partial_trace(&m, &[2, 3], &[0]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[2]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[0, 0]).is_err());
    }

    #[test]
    fn realign_identity_map_is_rank_one() {
        // A_{ij;kl} = δ_ik δ_jl is the 4x4 identity; realigned it is vec(I)vec(I)†.
        let b = realign(&ComplexMatrix::identity(4)).unwrap();
        let vec_i = [ONE, ZERO, ZERO, ONE];
        assert_eq!(b, ComplexMatrix::outer(&vec_i, &vec_i));
        assert!(realign(&ComplexMatrix::identity(3)).is_err());
    }
}
