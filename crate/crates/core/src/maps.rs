//! A and B forms of linear maps on `d×d` matrices, assignment maps, and the
//! maps induced by projective measurements on an ancilla-extended system.
//!
//! A pair `(a, b)` of system indices is flattened to `a·d + b` everywhere, so
//! for a qubit the rows and columns read `00, 01, 10, 11`.
//!
//! * A form: `ρ'_{ij} = Σ_{kl} A_{(i,j),(k,l)} ρ_{kl}`.
//! * B form: `B_{(i,k),(j,l)} = A_{(i,j),(k,l)}`. B is Hermitian whenever the
//!   map preserves Hermiticity, and its spectrum decides complete positivity.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, pair_dim, partial_trace, pauli, realign, tensor_product, ComplexMatrix, ONE, ZERO};
use crate::measurement::ProjectiveMeasurement;
use crate::states::{qubit, validate_density};

/// Residual allowed in the map invariants.
pub const MAP_TOL: f64 = 1e-10;

/// Completeness residual allowed in assignment duals, per unit of the largest
/// dual entry.
pub const DUAL_TOL: f64 = 1e-12;

/// Pivot magnitude below which a basis is treated as linearly dependent.
const PIVOT_TOL: f64 = 1e-12;

/// Map in A form; `tensor` is `d²×d²` with rows indexing outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct AMap {
    d: usize,
    tensor: ComplexMatrix,
}

/// Map in B form, the realignment of [`AMap`].
#[derive(Clone, Debug, PartialEq)]
pub struct BMap {
    d: usize,
    tensor: ComplexMatrix,
}

impl AMap {
    pub fn new(tensor: ComplexMatrix) -> Result<Self> {
        Ok(Self {
            d: pair_dim(tensor.dim())?,
            tensor,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d,
            tensor: ComplexMatrix::identity(d * d),
        }
    }

    /// Tabulates a linear map from its action on the matrix units `|k⟩⟨l|`.
    pub fn from_linear_map(d: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let mut tensor = ComplexMatrix::zeros(d * d);
        for k in 0..d {
            for l in 0..d {
                let mut unit = ComplexMatrix::zeros(d);
                unit[(k, l)] = ONE;
                let image = f(&unit);
                for i in 0..d {
                    for j in 0..d {
                        tensor[(i * d + j, k * d + l)] = image[(i, j)];
                    }
                }
            }
        }
        Self { d, tensor }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn tensor(&self) -> &ComplexMatrix {
        &self.tensor
    }

    pub fn to_b(&self) -> BMap {
        realign_a_to_b(self)
    }
}

impl BMap {
    pub fn new(tensor: ComplexMatrix) -> Result<Self> {
        Ok(Self {
            d: pair_dim(tensor.dim())?,
            tensor,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn tensor(&self) -> &ComplexMatrix {
        &self.tensor
    }

    pub fn to_a(&self) -> AMap {
        realign_b_to_a(self)
    }
}

pub fn realign_a_to_b(a: &AMap) -> BMap {
    BMap {
        d: a.d,
        tensor: realign(&a.tensor).expect("square pair dimension"),
    }
}

pub fn realign_b_to_a(b: &BMap) -> AMap {
    AMap {
        d: b.d,
        tensor: realign(&b.tensor).expect("square pair dimension"),
    }
}

pub fn apply_amap(a: &AMap, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != a.d {
        return Err(Error::DimensionMismatch(format!(
            "map acts on dimension {}, input has dimension {}",
            a.d,
            rho.dim()
        )));
    }
    let out = a.tensor.apply(rho.entries());
    ComplexMatrix::from_vec(a.d, out)
}

/// Max-abs violations of the Hermiticity and trace conditions of an A map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmapConditions {
    /// `max |A_{(i,j),(k,l)} − A*_{(j,i),(l,k)}|`.
    pub hermiticity_residual: f64,
    /// `max |Σ_i A_{(i,i),(k,l)} − δ_{kl}|`.
    pub trace_residual: f64,
}

impl AmapConditions {
    pub fn holds(&self, tol: f64) -> bool {
        self.hermiticity_residual <= tol && self.trace_residual <= tol
    }
}

pub fn check_amap_conditions(a: &AMap) -> AmapConditions {
    let d = a.d;
    let t = &a.tensor;
    let mut hermiticity_residual: f64 = 0.0;
    let mut trace_residual: f64 = 0.0;
    for k in 0..d {
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let diff = t[(i * d + j, k * d + l)] - t[(j * d + i, l * d + k)].conj();
                    hermiticity_residual = hermiticity_residual.max(diff.norm());
                }
            }
            let traced: Complex64 = (0..d).map(|i| t[(i * d + i, k * d + l)]).sum();
            let target = if k == l { ONE } else { ZERO };
            trace_residual = trace_residual.max((traced - target).norm());
        }
    }
    AmapConditions {
        hermiticity_residual,
        trace_residual,
    }
}

/// Operator-sum form `ρ ↦ Σ_α λ_α M_α ρ M_α†` read off the B spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausDecomposition {
    /// Eigenvalues of B, ascending.
    pub weights: Vec<f64>,
    pub operators: Vec<ComplexMatrix>,
}

impl KrausDecomposition {
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.dim());
        for (w, m) in self.weights.iter().zip(&self.operators) {
            out = &out + &(&(m * rho) * &m.adjoint()).scale_real(*w);
        }
        out
    }
}

fn require_hermitian(b: &BMap) -> Result<()> {
    let residual = b.tensor.hermiticity_residual();
    if residual > MAP_TOL {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// Eigenvectors of B reshaped row-major into `d×d` operators.
pub fn spectral_decompose(b: &BMap) -> Result<KrausDecomposition> {
    require_hermitian(b)?;
    let eig = hermitian_eig(&b.tensor.hermitian_part(), MAP_TOL)?;
    let operators = (0..eig.dim())
        .map(|k| ComplexMatrix::from_vec(b.d, eig.eigenvector(k)).expect("eigenvector has d² entries"))
        .collect();
    Ok(KrausDecomposition {
        weights: eig.eigenvalues,
        operators,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Completely positive.
    Cp,
    /// Not completely positive.
    Ncp,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Cp => "CP",
            Verdict::Ncp => "NCP",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapClass {
    pub verdict: Verdict,
    pub min_eigenvalue: f64,
}

pub fn classify(b: &BMap) -> Result<MapClass> {
    require_hermitian(b)?;
    let eig = hermitian_eig(&b.tensor.hermitian_part(), MAP_TOL)?;
    let min_eigenvalue = eig.eigenvalues[0];
    Ok(MapClass {
        verdict: if min_eigenvalue >= -MAP_TOL { Verdict::Cp } else { Verdict::Ncp },
        min_eigenvalue,
    })
}

/// `½(I+σ₁)`, `½(I+σ₂)`, `½(I+σ₃)`, `½(I−σ₁)`: a basis of qubit operators
/// made of pure states.
pub fn qubit_basis_p() -> Vec<ComplexMatrix> {
    let id = ComplexMatrix::identity(2);
    vec![
        (&id + &pauli(1)).scale_real(0.5),
        (&id + &pauli(2)).scale_real(0.5),
        (&id + &pauli(3)).scale_real(0.5),
        (&id - &pauli(1)).scale_real(0.5),
    ]
}

/// Solves `G X = I` by Gaussian elimination with partial pivoting.
fn invert(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = g.dim();
    let mut a = g.clone();
    let mut inv = ComplexMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[(r, col)].norm().total_cmp(&a[(s, col)].norm()))
            .expect("non-empty range");
        let magnitude = a[(pivot, col)].norm();
        if magnitude < PIVOT_TOL {
            return Err(Error::SingularBasis(magnitude));
        }
        if pivot != col {
            for k in 0..n {
                let (x, y) = (a[(col, k)], a[(pivot, k)]);
                a[(col, k)] = y;
                a[(pivot, k)] = x;
                let (x, y) = (inv[(col, k)], inv[(pivot, k)]);
                inv[(col, k)] = y;
                inv[(pivot, k)] = x;
            }
        }
        let scale = a[(col, col)].inv();
        for k in 0..n {
            a[(col, k)] *= scale;
            inv[(col, k)] *= scale;
        }
        for r in (0..n).filter(|&r| r != col) {
            let factor = a[(r, col)];
            if factor == ZERO {
                continue;
            }
            for k in 0..n {
                let (ak, ik) = (a[(col, k)], inv[(col, k)]);
                a[(r, k)] -= factor * ak;
                inv[(r, k)] -= factor * ik;
            }
        }
    }
    Ok(inv)
}

/// Operators `Q_β` with `Tr[P_α Q_β] = δ_{αβ}` and `Σ_β Q_β = I`.
///
/// The second condition only holds when every `P_α` has unit trace; a basis
/// that violates it is rejected rather than renormalized.
pub fn dual_q(basis: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let d = basis.first().map_or(0, ComplexMatrix::dim);
    if d == 0 || basis.len() != d * d || basis.iter().any(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch(format!(
            "a basis of {d}×{d} operators needs {} elements of equal size, got {}",
            d * d,
            basis.len()
        )));
    }
    // Row α of G pairs with vec(Q): Tr[P Q] = Σ_{kl} P_{lk} Q_{kl}.
    let g = ComplexMatrix::from_fn(d * d, |alpha, kl| basis[alpha][(kl % d, kl / d)]);
    let inv = invert(&g)?;
    let duals: Vec<ComplexMatrix> = (0..d * d)
        .map(|beta| ComplexMatrix::from_fn(d, |k, l| inv[(k * d + l, beta)]))
        .collect();

    let mut sum = ComplexMatrix::zeros(d);
    for q in &duals {
        sum = &sum + q;
    }
    let residual = sum.max_abs_diff(&ComplexMatrix::identity(d));
    let scale = duals.iter().map(ComplexMatrix::max_abs).fold(1.0, f64::max);
    if residual > DUAL_TOL * scale {
        return Err(Error::DualsDoNotResolveIdentity(residual));
    }
    Ok(duals)
}

/// Linear extension `ρ ↦ Σ_α Tr[ρ Q_α] τ_α ⊗ P_α` of the assignment
/// `P_α ↦ τ_α ⊗ P_α` (ancilla first).
#[derive(Clone, Debug, PartialEq)]
pub struct AssignmentMap {
    basis: Vec<ComplexMatrix>,
    duals: Vec<ComplexMatrix>,
    assigned: Vec<ComplexMatrix>,
}

impl AssignmentMap {
    pub fn new(basis: Vec<ComplexMatrix>, assigned: Vec<ComplexMatrix>) -> Result<Self> {
        if assigned.len() != basis.len() {
            return Err(Error::InvalidAssignment(format!(
                "{} basis elements but {} ancilla states",
                basis.len(),
                assigned.len()
            )));
        }
        let ancilla_dim = assigned[0].dim();
        for (alpha, tau) in assigned.iter().enumerate() {
            if tau.dim() != ancilla_dim {
                return Err(Error::InvalidAssignment("ancilla states differ in dimension".into()));
            }
            validate_density(tau, &[ancilla_dim])
                .map_err(|e| Error::InvalidAssignment(format!("ancilla state {}: {e}", alpha + 1)))?;
        }
        let duals = dual_q(&basis)?;
        Ok(Self {
            basis,
            duals,
            assigned,
        })
    }

    /// Qubit basis from [`qubit_basis_p`] with ancilla states
    /// `|0⟩, |1⟩, |1⟩, |0⟩`, under which the extension of
    /// `p|0⟩⟨0| + (1−p)|+⟩⟨+|` is `p|1,0⟩⟨1,0| + (1−p)|0,+⟩⟨0,+|`.
    pub fn example() -> Self {
        let assigned = vec![qubit::zero(), qubit::one(), qubit::one(), qubit::zero()];
        Self::new(qubit_basis_p(), assigned).expect("example basis is valid")
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn duals(&self) -> &[ComplexMatrix] {
        &self.duals
    }

    pub fn assigned(&self) -> &[ComplexMatrix] {
        &self.assigned
    }

    pub fn system_dim(&self) -> usize {
        self.basis[0].dim()
    }

    pub fn ancilla_dim(&self) -> usize {
        self.assigned[0].dim()
    }
}

/// Ancilla-extended image of `rho` under the assignment map.
pub fn assignment_apply(am: &AssignmentMap, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != am.system_dim() {
        return Err(Error::DimensionMismatch(format!(
            "assignment map acts on dimension {}, input has dimension {}",
            am.system_dim(),
            rho.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(am.ancilla_dim() * am.system_dim());
    for ((p, q), tau) in am.basis.iter().zip(&am.duals).zip(&am.assigned) {
        let weight = rho.trace_product(q);
        out = &out + &tensor_product(tau, p).scale(weight);
    }
    Ok(out)
}

/// Output of [`build_measurement_maps`].
#[derive(Clone, Debug)]
pub struct MeasurementMaps {
    pub a: AMap,
    pub b: BMap,
    /// `Tr_{A'}[Π_i]` for each projector on ancilla⊗system.
    pub system_states: Vec<ComplexMatrix>,
    /// `overlaps[i][α] = Tr[Π_i (τ_α ⊗ P_α)]`.
    pub overlaps: Vec<Vec<f64>>,
    /// `η_α = Tr_{A'}[Σ_i Π_i (τ_α⊗P_α) Π_i]`, the image of `P_α`.
    pub images: Vec<ComplexMatrix>,
}

fn check_measurement(am: &AssignmentMap, m: &ProjectiveMeasurement) -> Result<[usize; 2]> {
    let dims = [am.ancilla_dim(), am.system_dim()];
    if m.block_dim() != dims[0] * dims[1] {
        return Err(Error::DimensionMismatch(format!(
            "measurement acts on dimension {}, ancilla⊗system has dimension {}",
            m.block_dim(),
            dims[0] * dims[1]
        )));
    }
    Ok(dims)
}

fn measure_and_discard_ancilla(m: &ProjectiveMeasurement, x: &ComplexMatrix, dims: &[usize; 2]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(x.dim());
    for proj in m.projectors() {
        acc = &acc + &(&(proj * x) * proj);
    }
    partial_trace(&acc, dims, &[1]).expect("dimensions checked")
}

/// A and B maps of `ρ ↦ Tr_{A'}[Σ_i Π_i Ã(ρ) Π_i]` with `Ã` the assignment map.
///
/// B is assembled as `Σ_α η_α ⊗ Q_αᵀ`. For rank-1 projectors
/// `η_α = Σ_i q_{iα} Tr_{A'}[Π_i]`; the images are computed directly so that
/// higher-rank projectors are handled too.
pub fn build_measurement_maps(am: &AssignmentMap, m: &ProjectiveMeasurement) -> Result<MeasurementMaps> {
    let dims = check_measurement(am, m)?;
    let system_states = m
        .projectors()
        .iter()
        .map(|proj| partial_trace(proj, &dims, &[1]))
        .collect::<Result<Vec<_>>>()?;
    let extended: Vec<ComplexMatrix> = am
        .assigned
        .iter()
        .zip(&am.basis)
        .map(|(tau, p)| tensor_product(tau, p))
        .collect();
    let overlaps = m
        .projectors()
        .iter()
        .map(|proj| extended.iter().map(|x| proj.trace_product(x).re).collect())
        .collect();
    let images: Vec<ComplexMatrix> = extended
        .iter()
        .map(|x| measure_and_discard_ancilla(m, x, &dims))
        .collect();

    let d = am.system_dim();
    let mut b = ComplexMatrix::zeros(d * d);
    for (eta, q) in images.iter().zip(&am.duals) {
        b = &b + &tensor_product(eta, &q.transpose());
    }
    let b = BMap { d, tensor: b };
    Ok(MeasurementMaps {
        a: realign_b_to_a(&b),
        b,
        system_states,
        overlaps,
        images,
    })
}

/// Reference route for the measurement map: extend `rho` with the assignment
/// map, measure, and discard the ancilla.
pub fn measure_assigned(am: &AssignmentMap, m: &ProjectiveMeasurement, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dims = check_measurement(am, m)?;
    let extended = assignment_apply(am, rho)?;
    Ok(measure_and_discard_ancilla(m, &extended, &dims))
}

/// `p|0⟩⟨0| + (1−p)|+⟩⟨+|`, the qubit state left unchanged by the example map.
pub fn example_system_state(p: f64) -> ComplexMatrix {
    &qubit::zero().scale_real(p) + &qubit::plus().scale_real(1.0 - p)
}
