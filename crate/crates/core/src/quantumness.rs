//! Residual states of ancilla-extended measurements and an upper bound on
//! the quantumness of correlations.
//!
//! The quantumness of `ρ_AB` is the smallest relative entropy from `ρ_AB` to
//! a separable state with the same `B` marginal. Computing it exactly is as
//! hard as the relative entropy of entanglement, so this module reports an
//! explicit separable witness and the relative entropy to it. The number is
//! always an upper bound and is named as one.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::entropy::{cross_entropy_matrices, matrix_entropy, relative_entropy, relative_entropy_matrices};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, partial_trace, tensor_product, ComplexMatrix, SUPPORT_CUTOFF};
use crate::measurement::{
    bloch_projectors, extension_projectors, measure_subsystem, pinch, ProjectiveMeasurement, ZERO_PROBABILITY,
};
use crate::measures::{oneway_deficit, OptimizerConfig};
use crate::states::{check_probability, example_extension, example_separable, DensityMatrix};

/// Marginal residual a witness must reach before its bound is accepted.
pub const FEASIBILITY_THRESHOLD: f64 = 1e-4;

/// Default number of product terms in a searched witness.
pub const DEFAULT_TERMS: usize = 8;

/// Default number of local-search restarts.
pub const DEFAULT_RESTARTS: usize = 8;

/// Convex mixture `Σ_i p_i ρᴬ_i ⊗ ρᴮ_i`.
#[derive(Clone, Debug)]
pub struct SeparableEnsemble {
    weights: Vec<f64>,
    a_states: Vec<DensityMatrix>,
    b_states: Vec<DensityMatrix>,
}

impl SeparableEnsemble {
    pub fn new(weights: Vec<f64>, a_states: Vec<DensityMatrix>, b_states: Vec<DensityMatrix>) -> Result<Self> {
        if weights.len() != a_states.len() || weights.len() != b_states.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights, {} A states, {} B states",
                weights.len(),
                a_states.len(),
                b_states.len()
            )));
        }
        check_probability(&weights, 1e-10)?;
        let (da, db) = (a_states[0].dim(), b_states[0].dim());
        if a_states.iter().any(|s| s.dim() != da) || b_states.iter().any(|s| s.dim() != db) {
            return Err(Error::DimensionMismatch("ensemble members differ in dimension".into()));
        }
        Ok(Self {
            weights,
            a_states,
            b_states,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn a_states(&self) -> &[DensityMatrix] {
        &self.a_states
    }

    pub fn b_states(&self) -> &[DensityMatrix] {
        &self.b_states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn assemble(&self) -> DensityMatrix {
        let (da, db) = (self.a_states[0].dim(), self.b_states[0].dim());
        let mut acc = ComplexMatrix::zeros(da * db);
        for ((w, a), b) in self.weights.iter().zip(&self.a_states).zip(&self.b_states) {
            acc = &acc + &tensor_product(a.matrix(), b.matrix()).scale_real(*w);
        }
        DensityMatrix::from_trusted(acc.hermitian_part(), vec![da, db])
    }
}

/// Splits `[A', A, B…]` for a measurement on the leading `A'A` block.
fn extension_dims(rho_ext: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<[usize; 3]> {
    let dims = rho_ext.dims();
    if dims.len() != 3 || m.block_dim() != dims[0] * dims[1] {
        return Err(Error::DimensionMismatch(format!(
            "expected an [ancilla, A, B] state measured on ancilla⊗A, got {dims:?} with block {}",
            m.block_dim()
        )));
    }
    Ok([dims[0], dims[1], dims[2]])
}

/// `Tr_{A'}[Σ_i (Π_i⊗I) ρ (Π_i⊗I)]`: the `AB` state left after measuring the
/// ancilla-extended `A'A` block.
pub fn residual_state(rho_ext: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<DensityMatrix> {
    extension_dims(rho_ext, m)?;
    pinch(rho_ext, m)?.reduced(&[1, 2])
}

/// `{p_i, Tr_{A'}Π_i, ρᴮ_i}` for rank-1 projectors on `A'A`; outcomes with
/// probability below `1e-12` are dropped.
pub fn separable_decomposition(rho_ext: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<SeparableEnsemble> {
    let [da_ext, da, _] = extension_dims(rho_ext, m)?;
    if let Some(index) = (0..m.len()).find(|&i| (m.rank(i) - 1.0).abs() > 1e-10) {
        return Err(Error::NotRankOne {
            index,
            rank: m.rank(index),
        });
    }
    let outcome = measure_subsystem(rho_ext, m)?;
    let mut weights = Vec::new();
    let mut a_states = Vec::new();
    let mut b_states = Vec::new();
    for ((p, b), proj) in outcome
        .probabilities
        .iter()
        .zip(outcome.conditional_states)
        .zip(m.projectors())
    {
        let Some(b) = b else { continue };
        if *p < ZERO_PROBABILITY {
            continue;
        }
        let a = partial_trace(proj, &[da_ext, da], &[1])?;
        weights.push(*p);
        a_states.push(DensityMatrix::from_trusted(a, vec![da]));
        b_states.push(b);
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    SeparableEnsemble::new(weights, a_states, b_states)
}

/// Outcome of [`verify_example_insensitivity`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InsensitivityReport {
    /// `‖ρ^R_{A'AB} − ρ_{A'AB}‖_F`.
    pub residual_tripartite: f64,
    /// `‖ρ^R_{AB} − ρ_AB‖_F`.
    pub residual_bipartite: f64,
    /// `S(ρ_AB ‖ ρ^R_AB)`.
    pub relative_entropy: f64,
    pub quantumness_zero: bool,
}

/// Measures the three-qubit extension of `p|00⟩⟨00| + (1−p)|++⟩⟨++|` with
/// the four product projectors on `A'A` and checks nothing changes.
pub fn verify_example_insensitivity(p: f64) -> Result<InsensitivityReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} is outside [0, 1]")));
    }
    let ext = example_extension(p)?;
    let m = extension_projectors();
    let residual_tripartite = pinch(&ext, &m)?.distance(&ext);
    let rho_ab = example_separable(p)?;
    let residual = residual_state(&ext, &m)?;
    let relative_entropy = relative_entropy(&rho_ab, &residual)?;
    Ok(InsensitivityReport {
        residual_tripartite,
        residual_bipartite: residual.distance(&rho_ab),
        relative_entropy,
        quantumness_zero: relative_entropy < 1e-10,
    })
}

/// Where the winning witness of [`quantumness_upper_bound`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSource {
    /// The caller-supplied ensemble.
    Hint,
    /// An exact product decomposition of the state's own range.
    RangeProducts,
    /// The state pinched in a basis of `A`, which keeps `ρ_B` fixed.
    Pinched,
    /// Local search from the given restart.
    Restart(usize),
}

#[derive(Clone, Debug)]
pub struct QuantumnessEstimate {
    /// `S(ρ‖σ)` for the witness σ; an upper bound on the quantumness.
    pub upper_bound: f64,
    pub witness: SeparableEnsemble,
    /// `‖Tr_A σ − ρ_B‖_F`.
    pub marginal_residual: f64,
    pub restarts_used: usize,
    pub source: WitnessSource,
}

/// Upper bound on the quantumness of a two-qubit state.
///
/// Candidates are scored by `S(ρ‖σ)` and the smallest wins, ties going to
/// the earlier candidate:
///
/// 1. an exact decomposition of `ρ` into product vectors of its range (rank
///    1 and 2 only), which pins separable inputs to zero;
/// 2. `ρ` pinched in its optimal one-way-deficit basis and in the eigenbasis
///    of `ρ_A`;
/// 3. `restarts` runs of a penalized coordinate search over mixtures of
///    `terms` pure product states. Restart 0 starts from the better pinched
///    candidate, the others from seeded random points.
///
/// A searched witness is accepted once its marginal residual is below
/// [`FEASIBILITY_THRESHOLD`]; its marginal is then made exact by mixing in a
/// small `ρ_A ⊗ X` term.
pub fn quantumness_upper_bound(rho: &DensityMatrix, terms: usize, restarts: usize, seed: u64) -> Result<QuantumnessEstimate> {
    quantumness_upper_bound_with_hint(rho, terms, restarts, seed, None)
}

/// [`quantumness_upper_bound`] with an extra caller-supplied candidate, for
/// example the ensemble returned by [`separable_decomposition`].
pub fn quantumness_upper_bound_with_hint(
    rho: &DensityMatrix,
    terms: usize,
    restarts: usize,
    seed: u64,
    hint: Option<&SeparableEnsemble>,
) -> Result<QuantumnessEstimate> {
    if rho.dims() != [2, 2] {
        return Err(Error::UnsupportedDimension(rho.dims().to_vec()));
    }
    if terms < 4 {
        return Err(Error::OutOfRange(format!("at least 4 product terms are needed, got {terms}")));
    }
    if let Some(h) = hint {
        if h.a_states()[0].dim() != 2 || h.b_states()[0].dim() != 2 {
            return Err(Error::DimensionMismatch("hint ensemble is not two-qubit".into()));
        }
    }

    let problem = Problem::new(rho)?;
    let mut best: Option<Candidate> = None;
    let mut best_residual = f64::INFINITY;
    let mut consider = |ensemble: SeparableEnsemble, source: WitnessSource| {
        let residual = problem.marginal_residual(&ensemble.assemble());
        best_residual = best_residual.min(residual);
        if residual >= FEASIBILITY_THRESHOLD {
            return;
        }
        let ensemble = problem.repair_marginal(ensemble);
        let sigma = ensemble.assemble();
        let bound = relative_entropy_matrices(rho.matrix(), sigma.matrix());
        if !bound.is_finite() {
            return;
        }
        if best.as_ref().is_none_or(|b| bound < b.bound) {
            best = Some(Candidate {
                bound,
                residual: problem.marginal_residual(&sigma),
                ensemble,
                source,
            });
        }
    };

    if let Some(h) = hint {
        consider(h.clone(), WitnessSource::Hint);
    }
    if let Some(ensemble) = range_product_decomposition(rho) {
        consider(ensemble, WitnessSource::RangeProducts);
    }
    let pinched_seeds = problem.pinched_seeds(terms)?;
    for params in &pinched_seeds {
        consider(problem.ensemble(params), WitnessSource::Pinched);
    }

    for r in 0..restarts {
        let start = if r == 0 {
            pinched_seeds
                .iter()
                .min_by(|a, b| problem.penalized(a, 0.0).total_cmp(&problem.penalized(b, 0.0)))
                .expect("two pinched seeds")
                .clone()
        } else {
            random_params(terms, seed, r as u64)
        };
        let params = problem.search(start);
        consider(problem.ensemble(&params), WitnessSource::Restart(r));
    }

    let best = best.ok_or(Error::NoFeasibleWitness {
        threshold: FEASIBILITY_THRESHOLD,
        best: best_residual,
    })?;
    Ok(QuantumnessEstimate {
        upper_bound: best.bound,
        witness: best.ensemble,
        marginal_residual: best.residual,
        restarts_used: restarts,
        source: best.source,
    })
}

struct Candidate {
    bound: f64,
    residual: f64,
    ensemble: SeparableEnsemble,
    source: WitnessSource,
}

/// Parameters per product term: Bloch angles of the `A` and `B` vectors and
/// an unnormalized log-weight.
const TERM_PARAMS: usize = 5;

/// Log-weight for unused terms; `e^{-30}` is below every tolerance in use.
const UNUSED_LOGIT: f64 = -30.0;

/// Penalty weights tried in turn, each warm-started from the previous optimum.
const PENALTIES: [f64; 4] = [1e2, 1e3, 1e4, 1e5];

const INITIAL_STEP: f64 = 0.25;
const MIN_STEP: f64 = 1e-7;
const MAX_SWEEPS: usize = 400;

fn ket(theta: f64, phi: f64) -> [Complex64; 2] {
    let (s, co) = (0.5 * theta).sin_cos();
    [c(co, 0.0), Complex64::from_polar(s, phi)]
}

fn pure(theta: f64, phi: f64) -> ComplexMatrix {
    let v = ket(theta, phi);
    ComplexMatrix::outer(&v, &v)
}

/// Bloch angles of a normalized qubit vector.
fn angles(v: &[Complex64]) -> (f64, f64) {
    let theta = 2.0 * v[1].norm().atan2(v[0].norm());
    let phi = if v[0].norm() > 0.0 && v[1].norm() > 0.0 {
        v[1].arg() - v[0].arg()
    } else {
        0.0
    };
    (theta, phi)
}

fn softmax(logits: impl Iterator<Item = f64> + Clone) -> Vec<f64> {
    let top = logits.clone().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = logits.map(|l| (l - top).exp()).collect();
    let total: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / total).collect()
}

fn random_params(terms: usize, seed: u64, restart: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart);
    let mut params = Vec::with_capacity(terms * TERM_PARAMS);
    for _ in 0..terms {
        for _ in 0..2 {
            params.push(rng.random_range(-1.0f64..1.0).acos());
            params.push(rng.random_range(0.0..std::f64::consts::TAU));
        }
        params.push(rng.sample::<f64, _>(StandardNormal));
    }
    params
}

/// The fixed data of one bound computation.
struct Problem<'a> {
    rho: &'a DensityMatrix,
    rho_a: ComplexMatrix,
    rho_b: ComplexMatrix,
    entropy: f64,
}

impl<'a> Problem<'a> {
    fn new(rho: &'a DensityMatrix) -> Result<Self> {
        Ok(Self {
            rho,
            rho_a: rho.reduced(&[0])?.into_matrix(),
            rho_b: rho.reduced(&[1])?.into_matrix(),
            entropy: matrix_entropy(rho.matrix()),
        })
    }

    fn marginal_residual(&self, sigma: &DensityMatrix) -> f64 {
        let sigma_b = partial_trace(sigma.matrix(), &[2, 2], &[1]).expect("two-qubit witness");
        sigma_b.distance(&self.rho_b)
    }

    fn sigma(&self, params: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
        let weights = softmax(params.chunks(TERM_PARAMS).map(|t| t[4]));
        let mut sigma = ComplexMatrix::zeros(4);
        let mut sigma_b = ComplexMatrix::zeros(2);
        for (t, w) in params.chunks(TERM_PARAMS).zip(weights) {
            let b = pure(t[2], t[3]);
            sigma = &sigma + &tensor_product(&pure(t[0], t[1]), &b).scale_real(w);
            sigma_b = &sigma_b + &b.scale_real(w);
        }
        (sigma, sigma_b)
    }

    /// Witness for `params`, without terms whose weight is negligible.
    fn ensemble(&self, params: &[f64]) -> SeparableEnsemble {
        let weights = softmax(params.chunks(TERM_PARAMS).map(|t| t[4]));
        let kept: Vec<(f64, &[f64])> = weights
            .into_iter()
            .zip(params.chunks(TERM_PARAMS))
            .filter(|(w, _)| *w > 1e-12)
            .collect();
        let total: f64 = kept.iter().map(|(w, _)| w).sum();
        let weights = kept.iter().map(|(w, _)| w / total).collect();
        let (a_states, b_states) = kept
            .iter()
            .map(|(_, t)| {
                (
                    DensityMatrix::from_trusted(pure(t[0], t[1]), vec![2]),
                    DensityMatrix::from_trusted(pure(t[2], t[3]), vec![2]),
                )
            })
            .unzip();
        SeparableEnsemble::new(weights, a_states, b_states).expect("softmax weights are a distribution")
    }

    /// `S(ρ‖σ) + μ‖σ_B − ρ_B‖²_F`.
    fn penalized(&self, params: &[f64], mu: f64) -> f64 {
        let (sigma, sigma_b) = self.sigma(params);
        let relent = cross_entropy_matrices(self.rho.matrix(), &sigma) - self.entropy;
        let gap = sigma_b.distance(&self.rho_b);
        relent + mu * gap * gap
    }

    /// Pinched states `Σ_a |a⟩⟨a| ⊗ ⟨a|ρ|a⟩` as product-term parameters, for
    /// the best one-way-deficit basis and for the eigenbasis of `ρ_A`.
    fn pinched_seeds(&self, terms: usize) -> Result<Vec<Vec<f64>>> {
        let deficit = oneway_deficit(self.rho, &OptimizerConfig::default())?;
        let eig = hermitian_eig(&self.rho_a, f64::INFINITY)?;
        let (theta, phi) = angles(&eig.eigenvector(1));
        [(deficit.theta, deficit.phi), (theta, phi)]
            .into_iter()
            .map(|(t, p)| self.pinched_params(&bloch_projectors(t, p), terms))
            .collect()
    }

    fn pinched_params(&self, basis: &ProjectiveMeasurement, terms: usize) -> Result<Vec<f64>> {
        let outcome = measure_subsystem(self.rho, basis)?;
        let mut params = Vec::with_capacity(terms * TERM_PARAMS);
        for ((p, cond), proj) in outcome
            .probabilities
            .iter()
            .zip(&outcome.conditional_states)
            .zip(basis.projectors())
        {
            let a_eig = hermitian_eig(proj, f64::INFINITY)?;
            let (ta, pa) = angles(&a_eig.eigenvector(1));
            let b_eig = match cond {
                Some(b) => Some(hermitian_eig(b.matrix(), f64::INFINITY)?),
                None => None,
            };
            for k in 0..2 {
                let (weight, (tb, pb)) = match &b_eig {
                    Some(e) => (p * e.eigenvalues[k], angles(&e.eigenvector(k))),
                    None => (0.0, (0.0, 0.0)),
                };
                let logit = if weight > SUPPORT_CUTOFF * 1e-3 { weight.ln() } else { UNUSED_LOGIT };
                params.extend_from_slice(&[ta, pa, tb, pb, logit]);
            }
        }
        params.resize(terms * TERM_PARAMS, 0.0);
        for t in params.chunks_mut(TERM_PARAMS).skip(4) {
            t[4] = UNUSED_LOGIT;
        }
        Ok(params)
    }

    /// Coordinate pattern search under an increasing marginal penalty.
    fn search(&self, mut params: Vec<f64>) -> Vec<f64> {
        for (round, &mu) in PENALTIES.iter().enumerate() {
            let mut value = self.penalized(&params, mu);
            let mut step = if round == 0 { INITIAL_STEP } else { INITIAL_STEP * 0.1 };
            let mut sweeps = 0;
            while step > MIN_STEP && sweeps < MAX_SWEEPS {
                sweeps += 1;
                let mut improved = false;
                for k in 0..params.len() {
                    for delta in [step, -step] {
                        let old = params[k];
                        params[k] = old + delta;
                        let trial = self.penalized(&params, mu);
                        if trial < value {
                            value = trial;
                            improved = true;
                            break;
                        }
                        params[k] = old;
                    }
                }
                if !improved {
                    step *= 0.5;
                }
            }
        }
        params
    }

    /// Mixes in `ρ_A ⊗ X` with the smallest weight `t` for which
    /// `X = (ρ_B − (1−t)σ_B)/t` is a state, making the `B` marginal exact.
    fn repair_marginal(&self, ensemble: SeparableEnsemble) -> SeparableEnsemble {
        let sigma = ensemble.assemble();
        let sigma_b = partial_trace(sigma.matrix(), &[2, 2], &[1]).expect("two-qubit witness");
        if sigma_b.max_abs_diff(&self.rho_b) == 0.0 {
            return ensemble;
        }
        let correction = |t: f64| (&self.rho_b - &sigma_b.scale_real(1.0 - t)).scale_real(1.0 / t);
        let is_state = |x: &ComplexMatrix| {
            hermitian_eig(&x.hermitian_part(), f64::INFINITY)
                .map(|e| e.eigenvalues[0] >= 0.0)
                .unwrap_or(false)
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if is_state(&correction(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let t = hi;
        let x = correction(t).hermitian_part();
        let x = x.scale_real(1.0 / x.trace().re);
        let SeparableEnsemble {
            mut weights,
            mut a_states,
            mut b_states,
        } = ensemble;
        weights.iter_mut().for_each(|w| *w *= 1.0 - t);
        weights.push(t);
        a_states.push(DensityMatrix::from_trusted(self.rho_a.clone(), vec![2]));
        b_states.push(DensityMatrix::from_trusted(x, vec![2]));
        SeparableEnsemble {
            weights,
            a_states,
            b_states,
        }
    }
}

/// Writes a two-qubit state of rank 1 or 2 as a mixture of product vectors
/// from its range, when such a decomposition exists.
fn range_product_decomposition(rho: &DensityMatrix) -> Option<SeparableEnsemble> {
    const TOL: f64 = 1e-10;
    let eig = hermitian_eig(rho.matrix(), f64::INFINITY).ok()?;
    let support: Vec<Vec<Complex64>> = (0..4)
        .filter(|&k| eig.eigenvalues[k] > SUPPORT_CUTOFF)
        .map(|k| eig.eigenvector(k))
        .collect();
    let vectors = match support.len() {
        1 => vec![support[0].clone()],
        2 => product_vectors_in_span(&support[0], &support[1])?,
        _ => return None,
    };
    let factors: Vec<([Complex64; 2], [Complex64; 2])> = vectors.iter().map(|v| factorize(v)).collect::<Option<_>>()?;
    let projectors: Vec<ComplexMatrix> = vectors.iter().map(|v| ComplexMatrix::outer(v, v)).collect();

    // Least-squares weights: Gram[i][j] = |⟨w_i|w_j⟩|², rhs_i = ⟨w_i|ρ|w_i⟩.
    let n = projectors.len();
    let gram = |i: usize, j: usize| projectors[i].trace_product(&projectors[j]).re;
    let rhs: Vec<f64> = projectors.iter().map(|p| p.trace_product(rho.matrix()).re).collect();
    let weights = if n == 1 {
        vec![rhs[0] / gram(0, 0)]
    } else {
        let det = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
        if det.abs() < TOL {
            return None;
        }
        vec![
            (gram(1, 1) * rhs[0] - gram(0, 1) * rhs[1]) / det,
            (gram(0, 0) * rhs[1] - gram(1, 0) * rhs[0]) / det,
        ]
    };
    if weights.iter().any(|&w| w < -TOL) {
        return None;
    }
    let mut sigma = ComplexMatrix::zeros(4);
    for (w, p) in weights.iter().zip(&projectors) {
        sigma = &sigma + &p.scale_real(*w);
    }
    if sigma.distance(rho.matrix()) > TOL {
        return None;
    }
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    let weights = weights.iter().map(|w| w.max(0.0) / total).collect();
    let (a_states, b_states) = factors
        .iter()
        .map(|(a, b)| {
            (
                DensityMatrix::from_trusted(ComplexMatrix::outer(a, a), vec![2]),
                DensityMatrix::from_trusted(ComplexMatrix::outer(b, b), vec![2]),
            )
        })
        .unzip();
    SeparableEnsemble::new(weights, a_states, b_states).ok()
}

/// The (generically two) product vectors in `span{u, v}`: roots of
/// `det(x·U + y·V) = 0` with `U`, `V` the 2×2 reshapes of `u`, `v`.
fn product_vectors_in_span(u: &[Complex64], v: &[Complex64]) -> Option<Vec<Vec<Complex64>>> {
    let det = |m: &[Complex64]| m[0] * m[3] - m[1] * m[2];
    let (du, dv) = (det(u), det(v));
    let mixed = u[0] * v[3] + v[0] * u[3] - u[1] * v[2] - v[1] * u[2];
    // Solve a·z² + b·z + c = 0 in whichever chart has the larger leading term.
    let (a, cc, u_leads) = if du.norm() >= dv.norm() { (du, dv, true) } else { (dv, du, false) };
    if a.norm() < 1e-12 {
        return None;
    }
    let disc = (mixed * mixed - a * cc * 4.0).sqrt();
    if disc.norm() < 1e-8 {
        return None;
    }
    let roots = [(-mixed + disc) / (a * 2.0), (-mixed - disc) / (a * 2.0)];
    Some(
        roots
            .iter()
            .map(|&z| {
                let w: Vec<Complex64> = if u_leads {
                    (0..4).map(|k| u[k] * z + v[k]).collect()
                } else {
                    (0..4).map(|k| u[k] + v[k] * z).collect()
                };
                let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                w.into_iter().map(|x| x / norm).collect()
            })
            .collect(),
    )
}

/// Splits a two-qubit vector as `a ⊗ b` if it is a product.
fn factorize(v: &[Complex64]) -> Option<([Complex64; 2], [Complex64; 2])> {
    let row = |r: usize| [v[2 * r], v[2 * r + 1]];
    let norm = |x: &[Complex64; 2]| (x[0].norm_sqr() + x[1].norm_sqr()).sqrt();
    let lead = if norm(&row(0)) >= norm(&row(1)) { row(0) } else { row(1) };
    let n = norm(&lead);
    let b = [lead[0] / n, lead[1] / n];
    let a = [
        v[0] * b[0].conj() + v[1] * b[1].conj(),
        v[2] * b[0].conj() + v[3] * b[1].conj(),
    ];
    let residual: f64 = (0..4).map(|k| (v[k] - a[k / 2] * b[k % 2]).norm_sqr()).sum::<f64>().sqrt();
    (residual < 1e-9).then_some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::relative_entropy;
    use crate::states::{bell_state, classical_correlated, qubit, random_density, random_unitary};

    #[test]
    fn residual_state_examples() {
        let m = extension_projectors();
        for p in [0.0, 0.3, 0.5, 0.9, 1.0] {
            let r = residual_state(&example_extension(p).unwrap(), &m).unwrap();
            assert!(r.distance(&example_separable(p).unwrap()) < 1e-13);
        }
        let tau = random_density(&[2], 1).unwrap();
        let rho = random_density(&[2, 2], 2).unwrap();
        let ext = tau.tensor(&rho);
        let ext = DensityMatrix::from_trusted(ext.into_matrix(), vec![2, 2, 2]);
        let r = residual_state(&ext, &ProjectiveMeasurement::trivial(4)).unwrap();
        assert!(r.distance(&rho) < 1e-14);
        assert!(residual_state(&rho, &m).is_err());
    }

    #[test]
    fn decomposition_matches_residual() {
        let m = extension_projectors();
        let ext = example_extension(0.5).unwrap();
        let ens = separable_decomposition(&ext, &m).unwrap();
        // Only |0,+⟩ and |1,0⟩ are populated on A'A.
        assert_eq!(ens.len(), 2);
        assert!(ens.assemble().distance(&residual_state(&ext, &m).unwrap()) < 1e-13);
        assert!((ens.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);

        let ens = separable_decomposition(&example_extension(1.0).unwrap(), &m).unwrap();
        assert_eq!(ens.len(), 1);

        for seed in 0..5 {
            let ext = random_density(&[2, 2, 2], seed).unwrap();
            let basis = ProjectiveMeasurement::from_basis(&random_unitary(4, seed)).unwrap();
            let ens = separable_decomposition(&ext, &basis).unwrap();
            assert!(ens.assemble().distance(&residual_state(&ext, &basis).unwrap()) < 1e-12);
        }

        let coarse = ProjectiveMeasurement::new(vec![
            tensor_product(&qubit::zero(), &ComplexMatrix::identity(2)),
            tensor_product(&qubit::one(), &ComplexMatrix::identity(2)),
        ])
        .unwrap();
        assert!(matches!(
            separable_decomposition(&ext, &coarse),
            Err(Error::NotRankOne { index: 0, .. })
        ));
    }

    #[test]
    fn example_insensitivity() {
        for p in [0.0, 0.5, 0.9] {
            let r = verify_example_insensitivity(p).unwrap();
            assert!(r.residual_tripartite < 1e-13 && r.residual_bipartite < 1e-13);
            assert!(r.quantumness_zero);
        }
        assert!(matches!(verify_example_insensitivity(1.5), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn range_products_of_separable_example() {
        let rho = example_separable(0.5).unwrap();
        let ens = range_product_decomposition(&rho).unwrap();
        assert_eq!(ens.len(), 2);
        assert!(ens.assemble().distance(&rho) < 1e-12);
        assert!(range_product_decomposition(&bell_state()).is_none());
    }

    #[test]
    fn bound_on_separable_example_is_zero() {
        let rho = example_separable(0.5).unwrap();
        let est = quantumness_upper_bound(&rho, DEFAULT_TERMS, 2, 7).unwrap();
        assert!(est.upper_bound <= 1e-3);
        assert_eq!(est.source, WitnessSource::RangeProducts);
        let sigma = est.witness.assemble();
        assert!((relative_entropy(&rho, &sigma).unwrap() - est.upper_bound).abs() < 1e-10);
    }

    #[test]
    fn bound_on_bell_state() {
        let est = quantumness_upper_bound(&bell_state(), DEFAULT_TERMS, 2, 3).unwrap();
        assert!((est.upper_bound - 1.0).abs() < 0.05, "{}", est.upper_bound);
        assert!(est.marginal_residual < FEASIBILITY_THRESHOLD);
    }

    #[test]
    fn bound_on_product_and_classical_states() {
        let product = random_density(&[2], 5).unwrap().tensor(&random_density(&[2], 6).unwrap());
        let est = quantumness_upper_bound(&product, DEFAULT_TERMS, 0, 0).unwrap();
        assert!(est.upper_bound < 1e-10);

        let basis = ProjectiveMeasurement::from_basis(&random_unitary(2, 8)).unwrap();
        let taus = [random_density(&[2], 9).unwrap(), random_density(&[2], 10).unwrap()];
        let classical = classical_correlated(&[0.35, 0.65], &basis, &taus).unwrap();
        let est = quantumness_upper_bound(&classical, DEFAULT_TERMS, 0, 0).unwrap();
        assert!(est.upper_bound < 1e-10, "{}", est.upper_bound);
    }

    #[test]
    fn bound_is_deterministic_and_monotone() {
        let rho = random_density(&[2, 2], 21).unwrap();
        let a = quantumness_upper_bound(&rho, DEFAULT_TERMS, 2, 11).unwrap();
        let b = quantumness_upper_bound(&rho, DEFAULT_TERMS, 2, 11).unwrap();
        assert_eq!(a.upper_bound, b.upper_bound);
        let more = quantumness_upper_bound(&rho, DEFAULT_TERMS, 3, 11).unwrap();
        assert!(more.upper_bound <= a.upper_bound);
        assert!(a.upper_bound >= 0.0);
        assert!(a.marginal_residual < 1e-10);
    }

    #[test]
    fn hint_is_used() {
        let ext = example_extension(0.3).unwrap();
        let m = extension_projectors();
        let ens = separable_decomposition(&ext, &m).unwrap();
        let rho = residual_state(&ext, &m).unwrap();
        let est = quantumness_upper_bound_with_hint(&rho, DEFAULT_TERMS, 0, 0, Some(&ens)).unwrap();
        assert!(est.upper_bound < 1e-10);
        assert_eq!(est.source, WitnessSource::Hint);
    }

    #[test]
    fn argument_errors() {
        let rho = random_density(&[2, 2], 0).unwrap();
        assert!(matches!(quantumness_upper_bound(&rho, 3, 1, 0), Err(Error::OutOfRange(_))));
        let big = random_density(&[2, 3], 0).unwrap();
        assert!(matches!(
            quantumness_upper_bound(&big, 8, 1, 0),
            Err(Error::UnsupportedDimension(_))
        ));
    }
}
