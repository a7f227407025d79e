//! Pure-state LU invariants and the Schmidt/spectral representation of mixed
//! states.

use num_complex::Complex64;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{complete_basis, eigh, svd, ComplexMatrix};
use crate::states::{DensityMatrix, PureState};

/// Schmidt coefficients below this are dropped.
pub const SCHMIDT_ZERO: f64 = 1e-10;
/// Spectral gaps below this mark a representation as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;
/// Eigenvalues below this are dropped from a representation.
pub const EIGENVALUE_ZERO: f64 = 1e-10;

/// `|ψ⟩ = Σ μ_j a_j ⊗ b_j`.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    /// Non-increasing, strictly positive.
    pub coefficients: Vec<f64>,
    /// `M x k` orthonormal columns `a_j`.
    pub left_basis: ComplexMatrix,
    /// `N x k` orthonormal columns `b_j`.
    pub right_basis: ComplexMatrix,
}

impl SchmidtData {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Coefficient matrix `Σ μ_j a_j b_jᵀ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.left_basis.nrows(), self.right_basis.nrows());
        let mut a = ComplexMatrix::zeros(m, n);
        for (j, &mu) in self.coefficients.iter().enumerate() {
            a += self.left_basis.column(j) * self.right_basis.column(j).transpose() * Complex64::new(mu, 0.0);
        }
        a
    }
}

/// Schmidt decomposition from the SVD `A = U Σ V†`: `a_j = U e_j`,
/// `b_j = conj(V e_j)`.
pub fn schmidt_decompose(psi: &PureState) -> SchmidtData {
    let s = svd(psi.coeffs());
    let k = s.singular_values.iter().filter(|&&x| x >= SCHMIDT_ZERO).count();
    let left = s.u.columns(0, k).into_owned();
    let right = s.v_adjoint.rows(0, k).transpose();
    SchmidtData {
        coefficients: s.singular_values[..k].to_vec(),
        left_basis: left,
        right_basis: right,
    }
}

/// Full (zero-padded) Schmidt spectrum, length `min(M, N)`, non-increasing.
pub fn schmidt_spectrum(psi: &PureState) -> Vec<f64> {
    crate::linalg::singular_values(psi.coeffs())
}

/// `I_α = tr((AA†)^α)` for `α = 1..=max_alpha`.
pub fn invariants_i(psi: &PureState, max_alpha: usize) -> Vec<f64> {
    let a = psi.coeffs();
    let gram = a * a.adjoint();
    let mut power = gram.clone();
    let mut out = Vec::with_capacity(max_alpha);
    for alpha in 1..=max_alpha {
        if alpha > 1 {
            power = &power * &gram;
        }
        out.push(crate::linalg::trace(&power).re);
    }
    out
}

/// Both pure-state criteria side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct PureLuComparison {
    pub spectrum_gap: f64,
    pub invariant_gap: f64,
    pub by_spectrum: bool,
    pub by_invariants: bool,
}

/// Compares sorted Schmidt spectra and the invariants `I_1..I_min(M,N)`.
pub fn compare_pure(psi: &PureState, phi: &PureState, tol: f64) -> Result<PureLuComparison> {
    if psi.dims() != phi.dims() {
        return Err(dim_mismatch(format!("{:?}", psi.dims()), format!("{:?}", phi.dims())));
    }
    let spectrum_gap = schmidt_spectrum(psi)
        .iter()
        .zip(schmidt_spectrum(phi))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let d = psi.dims();
    let alphas = d.dim_a.min(d.dim_b);
    let invariant_gap = invariants_i(psi, alphas)
        .iter()
        .zip(invariants_i(phi, alphas))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(PureLuComparison {
        spectrum_gap,
        invariant_gap,
        by_spectrum: spectrum_gap < tol,
        by_invariants: invariant_gap < tol,
    })
}

/// LU equivalence of bipartite pure states by Schmidt spectrum, cross-checked
/// against the `I_α` invariants; a disagreement is reported as an error.
pub fn pure_lu_equivalent(psi: &PureState, phi: &PureState, tol: f64) -> Result<bool> {
    let cmp = compare_pure(psi, phi, tol)?;
    if cmp.by_spectrum != cmp.by_invariants {
        return Err(Error::CriteriaDisagree {
            spectrum_gap: cmp.spectrum_gap,
            invariant_gap: cmp.invariant_gap,
        });
    }
    Ok(cmp.by_spectrum)
}

/// One eigenvector's entry `r(ρ)_i = (λ_i, μ_i, X_i, Y_i)`.
#[derive(Debug, Clone)]
pub struct RepresentationRecord {
    pub eigenvalue: f64,
    pub eigenvector: Vec<Complex64>,
    pub schmidt: SchmidtData,
    /// `M x k_i`, with `(a^i_1 … a^i_k) = (a_1 … a_M) X_i`.
    pub x: ComplexMatrix,
    /// `N x k_i`, with `(b^i_1 … b^i_k) = (b_1 … b_N) Y_i`.
    pub y: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct Representation {
    pub records: Vec<RepresentationRecord>,
    /// Reference basis of the first factor, columns `a_1 … a_M`.
    pub basis_a: ComplexMatrix,
    /// Reference basis of the second factor, columns `b_1 … b_N`.
    pub basis_b: ComplexMatrix,
    pub degenerate: bool,
}

impl Representation {
    /// `Σ λ_i |e_i⟩⟨e_i|` with each `|e_i⟩` rebuilt from `(μ, X_i, Y_i)` and the
    /// reference bases.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.basis_a.nrows(), self.basis_b.nrows());
        let mut rho = ComplexMatrix::zeros(m * n, m * n);
        for r in &self.records {
            let a_cols = &self.basis_a * &r.x;
            let b_cols = &self.basis_b * &r.y;
            let rebuilt = SchmidtData {
                coefficients: r.schmidt.coefficients.clone(),
                left_basis: a_cols,
                right_basis: b_cols,
            }
            .reconstruct();
            let v = crate::linalg::vec_row_major(&rebuilt);
            rho += &v * v.adjoint() * Complex64::new(r.eigenvalue, 0.0);
        }
        rho
    }
}

/// Spectral decomposition of `ρ` with each eigenvector Schmidt-decomposed and
/// expressed in reference bases built from the first eigenvector.
pub fn representation_of(rho: &DensityMatrix) -> Result<Representation> {
    let dims = rho.bipartite_dims()?;
    let eig = eigh(rho.mat());
    let degenerate = eig.values.windows(2).any(|w| (w[0] - w[1]).abs() < DEGENERACY_GAP);

    let mut records = Vec::new();
    for (i, &lambda) in eig.values.iter().enumerate() {
        if lambda < EIGENVALUE_ZERO {
            continue;
        }
        let v: Vec<Complex64> = eig.vectors.column(i).iter().copied().collect();
        let psi = PureState::normalized(crate::linalg::unvec_row_major(&v, dims.dim_a, dims.dim_b))?;
        records.push((lambda, v, schmidt_decompose(&psi)));
    }
    let first = &records
        .first()
        .ok_or_else(|| Error::InvalidInput("state has no nonzero eigenvalue".into()))?
        .2;
    let basis_a = complete_basis(&first.left_basis);
    let basis_b = complete_basis(&first.right_basis);
    let records = records
        .into_iter()
        .map(|(eigenvalue, eigenvector, schmidt)| RepresentationRecord {
            x: basis_a.adjoint() * &schmidt.left_basis,
            y: basis_b.adjoint() * &schmidt.right_basis,
            eigenvalue,
            eigenvector,
            schmidt,
        })
        .collect();
    Ok(Representation {
        records,
        basis_a,
        basis_b,
        degenerate,
    })
}
