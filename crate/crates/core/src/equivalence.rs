//! LU-equivalence decisions for general bipartite mixed states.
//!
//! Three routes are offered:
//! - [`separating_invariant`]: cheap necessary conditions (spectra, purities,
//!   reduced spectra). A violation proves non-equivalence.
//! - [`nondegenerate_lu_test`]: for non-degenerate spectra, searches the phase
//!   torus for `θ` such that `X D(θ) Y†` is a product of local unitaries.
//!   The search is a semi-decision procedure: failure is `Inconclusive`.
//! - [`brute_force_lu_search`]: direct minimisation of the conjugation
//!   residual over `U(M) × U(N)`; used as the oracle for everything else.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{dim_mismatch, Error, Result};
use crate::invariants::DEGENERACY_GAP;
use crate::linalg::{
    self, eigh, eigvalsh, expm_i_hermitian, identity, kron, nearest_unitary, realign, singular_values, svd,
    unitarity_deviation, BipartiteDims, ComplexMatrix, Subsystem,
};
use crate::optim::{levenberg_marquardt, nelder_mead_restarted, LmOptions, NelderMeadOptions, ResidualModel};
use crate::states::{haar_unitary_with, DensityMatrix};

pub const DECOMPOSABILITY_TOL: f64 = 1e-7;
pub const VERIFICATION_TOL: f64 = 1e-7;
pub const SPECTRAL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Equivalent,
    NotEquivalent,
    Inconclusive,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictStatus::Equivalent => "Equivalent",
            VerdictStatus::NotEquivalent => "NotEquivalent",
            VerdictStatus::Inconclusive => "Inconclusive",
        })
    }
}

/// Outcome of an equivalence test. Constructed only through the associated
/// functions, which keep the status consistent with the evidence carried.
#[derive(Debug, Clone)]
pub struct EquivalenceVerdict {
    status: VerdictStatus,
    witness: Option<(ComplexMatrix, ComplexMatrix)>,
    residual: Option<f64>,
    certificate: Option<String>,
    note: Option<String>,
}

impl EquivalenceVerdict {
    /// `(U₁⊗U₂) ρ (U₁⊗U₂)† = ρ'` up to `residual`.
    pub fn equivalent(u1: ComplexMatrix, u2: ComplexMatrix, residual: f64) -> Self {
        Self {
            status: VerdictStatus::Equivalent,
            witness: Some((u1, u2)),
            residual: Some(residual),
            certificate: None,
            note: None,
        }
    }

    pub fn not_equivalent(certificate: impl Into<String>) -> Self {
        Self {
            status: VerdictStatus::NotEquivalent,
            witness: None,
            residual: None,
            certificate: Some(certificate.into()),
            note: None,
        }
    }

    pub fn inconclusive(residual: Option<f64>, note: impl Into<String>) -> Self {
        Self {
            status: VerdictStatus::Inconclusive,
            witness: None,
            residual,
            certificate: None,
            note: Some(note.into()),
        }
    }

    pub fn status(&self) -> VerdictStatus {
        self.status
    }

    pub fn witness(&self) -> Option<(&ComplexMatrix, &ComplexMatrix)> {
        self.witness.as_ref().map(|(a, b)| (a, b))
    }

    /// Best conjugation residual achieved, when a search ran.
    pub fn residual(&self) -> Option<f64> {
        self.residual
    }

    pub fn certificate(&self) -> Option<&str> {
        self.certificate.as_deref()
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }
}

/// Phases `θ₁ … θ_MN` of `D = diag(e^{iθ_j})`, wrapped into `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    thetas: Vec<f64>,
}

impl PhaseVector {
    pub fn new(thetas: Vec<f64>) -> Self {
        Self {
            thetas: thetas.into_iter().map(|t| t.rem_euclid(TAU)).collect(),
        }
    }

    /// Phase vector with the first phase pinned to zero.
    pub fn pinned(free: &[f64]) -> Self {
        Self::new(std::iter::once(0.0).chain(free.iter().copied()).collect())
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn diag(&self) -> ComplexMatrix {
        let n = self.thetas.len();
        let mut d = ComplexMatrix::zeros(n, n);
        for (i, &t) in self.thetas.iter().enumerate() {
            d[(i, i)] = Complex64::from_polar(1.0, t);
        }
        d
    }
}

/// `V = U₁ ⊗ U₂` with both factors unitary; `k` is the scale of the raw
/// leading singular pair, `U₁U₁† = k⁻¹ I` before normalisation.
#[derive(Debug, Clone)]
pub struct TensorFactors {
    pub u1: ComplexMatrix,
    pub u2: ComplexMatrix,
    pub k: f64,
}

/// Recovers unitary `U₁, U₂` with `U₁ ⊗ U₂ = v` from the leading singular pair
/// of the realigned matrix. The phase gauge makes the first non-negligible
/// entry (row-major) of `U₁` real positive.
pub fn extract_tensor_factors(v: &ComplexMatrix, dims: BipartiteDims, tol: f64) -> Result<TensorFactors> {
    let (m, n) = (dims.dim_a, dims.dim_b);
    if v.nrows() != dims.total() || v.ncols() != dims.total() {
        return Err(dim_mismatch(
            format!("{0}x{0}", dims.total()),
            format!("{}x{}", v.nrows(), v.ncols()),
        ));
    }
    let deviation = unitarity_deviation(v);
    if deviation > tol {
        return Err(Error::NotUnitary { deviation });
    }
    let s = svd(&realign(v, dims)?);
    let (s1, s2) = (s.singular_values[0], s.singular_values.get(1).copied().unwrap_or(0.0));
    let ratio = s2 / s1;
    if ratio >= tol {
        return Err(Error::NotDecomposable { ratio });
    }
    let root = Complex64::new(s1.sqrt(), 0.0);
    let a_vec: Vec<Complex64> = s.u.column(0).iter().map(|z| z * root).collect();
    let b_vec: Vec<Complex64> = s.v_adjoint.row(0).iter().map(|z| z * root).collect();
    let a_raw = linalg::unvec_row_major(&a_vec, m, m);
    let b_raw = linalg::unvec_row_major(&b_vec, n, n);
    // U₁U₁† = k⁻¹ I for the raw factor
    let k = m as f64 / a_raw.norm_squared();

    let mut u1 = nearest_unitary(&a_raw);
    let mut u2 = nearest_unitary(&b_raw);
    // restore the relative phase lost by projecting each factor separately
    let overlap: Complex64 = kron(&u1, &u2).iter().zip(v.iter()).map(|(w, x)| w.conj() * x).sum();
    if overlap.norm() > 0.0 {
        u2 *= overlap / overlap.norm();
    }
    // row-major scan; nalgebra iterates column-major
    let first = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| u1[(i, j)])
        .find(|z| z.norm() > 1e-8);
    if let Some(z) = first {
        let phase = z / z.norm();
        u1 *= phase.conj();
        u2 *= phase;
    }
    let residual = (kron(&u1, &u2) - v).norm();
    let bound = 10.0 * tol;
    if residual >= bound {
        return Err(Error::ReconstructionFailed { residual, bound });
    }
    Ok(TensorFactors { u1, u2, k })
}

fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Looks for an LU invariant that differs between the two states: purity
/// `tr ρ²`, the spectrum, or the reduced spectra. Returns a human-readable
/// certificate naming the violated condition.
pub fn separating_invariant(rho: &DensityMatrix, rho2: &DensityMatrix, tol: f64) -> Result<Option<String>> {
    let dims = rho.bipartite_dims()?;
    let dims2 = rho2.bipartite_dims()?;
    if dims != dims2 {
        return Err(dim_mismatch(format!("{dims:?}"), format!("{dims2:?}")));
    }
    let (p1, p2) = (rho.purity_moment(2), rho2.purity_moment(2));
    if (p1 - p2).abs() > tol {
        return Ok(Some(format!("purity tr(rho^2) differs: {p1:.12} vs {p2:.12}")));
    }
    let gap = sup_gap(&rho.eigenvalues(), &rho2.eigenvalues());
    if gap > tol {
        return Ok(Some(format!("spectra differ (sup gap {gap:.3e})")));
    }
    for (which, label) in [(Subsystem::B, "A"), (Subsystem::A, "B")] {
        let r1 = eigvalsh(&linalg::partial_trace(rho.mat(), dims, which)?);
        let r2 = eigvalsh(&linalg::partial_trace(rho2.mat(), dims, which)?);
        let gap = sup_gap(&r1, &r2);
        if gap > tol {
            return Ok(Some(format!("reduced spectra on {label} differ (sup gap {gap:.3e})")));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy)]
pub struct PhaseSearchOptions {
    pub spectral_tol: f64,
    pub degeneracy_gap: f64,
    pub decomposability_tol: f64,
    pub verification_tol: f64,
    /// Number of seeded starting points on the torus.
    pub grid_seeds: usize,
    /// Nelder–Mead restarts per starting point.
    pub restarts_per_seed: usize,
    pub seed: u64,
}

impl Default for PhaseSearchOptions {
    fn default() -> Self {
        Self {
            spectral_tol: SPECTRAL_TOL,
            degeneracy_gap: DEGENERACY_GAP,
            decomposability_tol: DECOMPOSABILITY_TOL,
            verification_tol: VERIFICATION_TOL,
            grid_seeds: 32,
            restarts_per_seed: 3,
            seed: 0,
        }
    }
}

/// `σ₂(realign(X D(θ) Y†))` together with the phase torus it lives on.
struct PhaseObjective<'a> {
    x: &'a ComplexMatrix,
    y_adj: ComplexMatrix,
    dims: BipartiteDims,
}

impl PhaseObjective<'_> {
    fn operator(&self, phases: &PhaseVector) -> ComplexMatrix {
        self.x * phases.diag() * &self.y_adj
    }

    fn value(&self, free: &[f64]) -> f64 {
        let v = self.operator(&PhaseVector::pinned(free));
        let sv = singular_values(&realign(&v, self.dims).expect("square by construction"));
        sv.get(1).copied().unwrap_or(0.0)
    }

    /// Alternating refinement: best product approximation of the current
    /// operator, then the phases maximising overlap with it.
    fn polish(&self, free: &[f64], iterations: usize) -> (Vec<f64>, f64) {
        let (m, n) = (self.dims.dim_a, self.dims.dim_b);
        let mut current = free.to_vec();
        let mut value = self.value(&current);
        for _ in 0..iterations {
            if value < 1e-14 {
                break;
            }
            let v = self.operator(&PhaseVector::pinned(&current));
            let s = svd(&realign(&v, self.dims).expect("square by construction"));
            let root = Complex64::new(s.singular_values[0].sqrt(), 0.0);
            let a: Vec<Complex64> = s.u.column(0).iter().map(|z| z * root).collect();
            let b: Vec<Complex64> = s.v_adjoint.row(0).iter().map(|z| z * root).collect();
            let w = kron(&linalg::unvec_row_major(&a, m, m), &linalg::unvec_row_major(&b, n, n));
            let g = self.y_adj.clone() * w.adjoint() * self.x;
            let raw: Vec<f64> = (0..g.nrows()).map(|j| -g[(j, j)].arg()).collect();
            let next: Vec<f64> = raw[1..].iter().map(|t| t - raw[0]).collect();
            let next_value = self.value(&next);
            if next_value >= value {
                break;
            }
            current = next;
            value = next_value;
        }
        (current, value)
    }
}

/// Decides LU equivalence of two states with non-degenerate spectra by
/// searching phases `θ` for which `X D(θ) Y†` is a product of unitaries.
pub fn nondegenerate_lu_test(
    rho: &DensityMatrix,
    rho2: &DensityMatrix,
    opts: &PhaseSearchOptions,
) -> Result<EquivalenceVerdict> {
    let dims = rho.bipartite_dims()?;
    let dims2 = rho2.bipartite_dims()?;
    if dims != dims2 {
        return Err(dim_mismatch(format!("{dims:?}"), format!("{dims2:?}")));
    }
    let e1 = eigh(rho.mat());
    let e2 = eigh(rho2.mat());
    let gap = sup_gap(&e1.values, &e2.values);
    if gap > opts.spectral_tol {
        return Ok(EquivalenceVerdict::not_equivalent(format!(
            "spectra differ (sup gap {gap:.3e})"
        )));
    }
    if let Some(cert) = separating_invariant(rho, rho2, opts.spectral_tol)? {
        return Ok(EquivalenceVerdict::not_equivalent(cert));
    }
    if e1.values.windows(2).any(|w| w[0] - w[1] < opts.degeneracy_gap) {
        return Ok(EquivalenceVerdict::inconclusive(None, "degenerate spectrum"));
    }

    let objective = PhaseObjective {
        x: &e1.vectors,
        y_adj: e2.vectors.adjoint(),
        dims,
    };
    let free_dim = dims.total() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let nm = NelderMeadOptions {
        max_evals: 3000,
        initial_step: 0.6,
        target: 1e-4,
        ..Default::default()
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..opts.grid_seeds.max(1) {
        let start: Vec<f64> = (0..free_dim).map(|_| rng.random::<f64>() * TAU).collect();
        let found = nelder_mead_restarted(&mut |p: &[f64]| objective.value(p), &start, &nm, opts.restarts_per_seed);
        let (phases, value) = objective.polish(&found.x, 500);
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((phases, value));
        }
        if value < opts.decomposability_tol * 1e-3 {
            break;
        }
    }
    let (phases, value) = best.expect("at least one start");
    let best_operator = objective.operator(&PhaseVector::pinned(&phases));
    if value >= opts.decomposability_tol {
        return Ok(EquivalenceVerdict::inconclusive(
            Some(value),
            format!("phase search reached sigma_2 = {value:.3e}; the search cannot certify non-equivalence"),
        ));
    }
    let factors = match extract_tensor_factors(&best_operator, dims, opts.decomposability_tol) {
        Ok(f) => f,
        Err(e) => {
            return Ok(EquivalenceVerdict::inconclusive(
                Some(value),
                format!("factor extraction failed: {e}"),
            ))
        }
    };
    // X D Y† maps ρ' to ρ, so the witness for ρ -> ρ' is its adjoint
    let u1 = factors.u1.adjoint();
    let u2 = factors.u2.adjoint();
    let residual = conjugation_residual(rho.mat(), rho2.mat(), &u1, &u2);
    if residual < opts.verification_tol {
        Ok(EquivalenceVerdict::equivalent(u1, u2, residual))
    } else {
        Ok(EquivalenceVerdict::inconclusive(
            Some(residual),
            "decomposable operator found but conjugation residual exceeds tolerance",
        ))
    }
}

/// `‖(U₁⊗U₂) ρ (U₁⊗U₂)† − ρ'‖_F`.
pub fn conjugation_residual(rho: &ComplexMatrix, rho2: &ComplexMatrix, u1: &ComplexMatrix, u2: &ComplexMatrix) -> f64 {
    let w = kron(u1, u2);
    (&w * rho * w.adjoint() - rho2).norm()
}

/// Orthogonal basis of traceless Hermitian `d x d` matrices.
fn traceless_hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut s = ComplexMatrix::zeros(d, d);
            s[(j, k)] = Complex64::new(1.0, 0.0);
            s[(k, j)] = Complex64::new(1.0, 0.0);
            basis.push(s);
            let mut a = ComplexMatrix::zeros(d, d);
            a[(j, k)] = Complex64::new(0.0, -1.0);
            a[(k, j)] = Complex64::new(0.0, 1.0);
            basis.push(a);
        }
    }
    for l in 1..d {
        let norm = ((l * (l + 1)) as f64 / 2.0).sqrt();
        let mut diag = vec![0.0; d];
        diag.iter_mut().take(l).for_each(|x| *x = 1.0 / norm);
        diag[l] = -(l as f64) / norm;
        basis.push(linalg::diag_real(&diag));
    }
    basis
}

struct OrbitModel<'a> {
    rho: &'a ComplexMatrix,
    target: &'a ComplexMatrix,
    u1: ComplexMatrix,
    u2: ComplexMatrix,
    basis_a: &'a [ComplexMatrix],
    basis_b: &'a [ComplexMatrix],
}

impl OrbitModel<'_> {
    fn generator(basis: &[ComplexMatrix], x: &[f64], d: usize) -> ComplexMatrix {
        basis.iter().zip(x).fold(ComplexMatrix::zeros(d, d), |acc, (b, &t)| {
            acc + b * Complex64::new(t, 0.0)
        })
    }

    fn unitaries(&self, x: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
        let (m, n) = (self.u1.nrows(), self.u2.nrows());
        let na = self.basis_a.len();
        let h1 = Self::generator(self.basis_a, &x[..na], m);
        let h2 = Self::generator(self.basis_b, &x[na..], n);
        (&self.u1 * expm_i_hermitian(&h1), &self.u2 * expm_i_hermitian(&h2))
    }
}

impl ResidualModel for OrbitModel<'_> {
    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let (u1, u2) = self.unitaries(x);
        let w = kron(&u1, &u2);
        let e = &w * self.rho * w.adjoint() - self.target;
        let d = e.nrows();
        let mut r = Vec::with_capacity(d * d);
        let s2 = std::f64::consts::SQRT_2;
        for i in 0..d {
            r.push(e[(i, i)].re);
            for j in (i + 1)..d {
                // average of the (i,j) and conj (j,i) entries keeps the norm equal to ‖E‖_F
                let z = (e[(i, j)] + e[(j, i)].conj()) * 0.5;
                r.push(s2 * z.re);
                r.push(s2 * z.im);
            }
        }
        r
    }

    fn accept(&mut self, x: &[f64]) -> Vec<f64> {
        let (u1, u2) = self.unitaries(x);
        self.u1 = u1;
        self.u2 = u2;
        vec![0.0; x.len()]
    }
}

/// Best local-unitary fit found by [`brute_force_lu_search`].
#[derive(Debug, Clone)]
pub struct LuSearchResult {
    pub residual: f64,
    pub u1: ComplexMatrix,
    pub u2: ComplexMatrix,
    /// Index of the restart that produced the minimum.
    pub restart: usize,
}

/// Minimises `‖(U₁⊗U₂) ρ (U₁⊗U₂)† − ρ'‖_F` over local unitaries.
///
/// Restart 0 starts at the identity; restart `r > 0` starts at a Haar pair
/// drawn from stream `r` of a ChaCha generator seeded with `seed`. Restarts
/// run in parallel; the result is the minimum over the fixed restart list
/// (ties to the lowest index), so it does not depend on scheduling.
pub fn brute_force_lu_search(
    rho: &DensityMatrix,
    rho2: &DensityMatrix,
    restarts: usize,
    seed: u64,
) -> Result<LuSearchResult> {
    let dims = rho.bipartite_dims()?;
    let dims2 = rho2.bipartite_dims()?;
    if dims != dims2 {
        return Err(dim_mismatch(format!("{dims:?}"), format!("{dims2:?}")));
    }
    let basis_a = traceless_hermitian_basis(dims.dim_a);
    let basis_b = traceless_hermitian_basis(dims.dim_b);
    let n_params = basis_a.len() + basis_b.len();
    let lm = LmOptions {
        max_iters: 300,
        ..Default::default()
    };

    let run = |restart: usize| -> LuSearchResult {
        let (u1, u2) = if restart == 0 {
            (identity(dims.dim_a), identity(dims.dim_b))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(restart as u64);
            (
                haar_unitary_with(&mut rng, dims.dim_a),
                haar_unitary_with(&mut rng, dims.dim_b),
            )
        };
        let mut model = OrbitModel {
            rho: rho.mat(),
            target: rho2.mat(),
            u1,
            u2,
            basis_a: &basis_a,
            basis_b: &basis_b,
        };
        let (x, _) = levenberg_marquardt(&mut model, &vec![0.0; n_params], &lm);
        let (u1, u2) = model.unitaries(&x);
        let residual = conjugation_residual(rho.mat(), rho2.mat(), &u1, &u2);
        LuSearchResult {
            residual,
            u1,
            u2,
            restart,
        }
    };

    let results: Vec<LuSearchResult> = (0..restarts.max(1)).into_par_iter().map(run).collect();
    Ok(results
        .into_iter()
        .min_by(|a, b| {
            a.residual
                .partial_cmp(&b.residual)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.restart.cmp(&b.restart))
        })
        .expect("at least one restart"))
}
