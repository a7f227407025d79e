//! Validated state types, Schmidt-correlated embeddings and seeded sampling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{
    self, eigvalsh, ensure_finite, gram_schmidt, hermitian_deviation, kron_all, trace, unitarity_deviation,
    BipartiteDims, ComplexMatrix,
};

/// Tolerance for Hermiticity, positivity and unit trace of density matrices.
pub const DENSITY_TOL: f64 = 1e-9;
/// Tolerance for pure-state and local-unitary normalisation.
pub const NORM_TOL: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace matrix over a product of
/// local spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, dims: &[usize]) -> Result<Self> {
        validate_density(mat, dims)
    }

    pub fn bipartite(mat: ComplexMatrix, dims: BipartiteDims) -> Result<Self> {
        validate_density(mat, &[dims.dim_a, dims.dim_b])
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Bipartite dimensions, or an error for states with more than two parties.
    pub fn bipartite_dims(&self) -> Result<BipartiteDims> {
        match self.dims[..] {
            [a, b] => BipartiteDims::new(a, b),
            _ => Err(dim_mismatch("2 parties", format!("{} parties", self.dims.len()))),
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.mat)
    }

    /// `tr ρ^k`.
    pub fn purity_moment(&self, k: u32) -> f64 {
        self.eigenvalues().iter().map(|l| l.max(0.0).powi(k as i32)).sum()
    }

    pub fn reduced(&self, traced_out: linalg::Subsystem) -> Result<DensityMatrix> {
        let dims = self.bipartite_dims()?;
        let m = linalg::partial_trace(&self.mat, dims, traced_out)?;
        let kept = match traced_out {
            linalg::Subsystem::A => dims.dim_b,
            linalg::Subsystem::B => dims.dim_a,
        };
        DensityMatrix::new(m, &[kept])
    }
}

/// Checks Hermiticity, unit trace and positivity, naming the first violated
/// invariant together with its magnitude.
pub fn validate_density(mat: ComplexMatrix, dims: &[usize]) -> Result<DensityMatrix> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidInput(format!("invalid local dimensions {dims:?}")));
    }
    let n: usize = dims.iter().product();
    if mat.nrows() != n || mat.ncols() != n {
        return Err(dim_mismatch(
            format!("{n}x{n}"),
            format!("{}x{}", mat.nrows(), mat.ncols()),
        ));
    }
    ensure_finite(&mat)?;
    let deviation = hermitian_deviation(&mat);
    if deviation > DENSITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let tr = trace(&mat).re;
    if (tr - 1.0).abs() > DENSITY_TOL {
        return Err(Error::TraceNotOne { trace: tr });
    }
    let min_eigenvalue = eigvalsh(&mat).last().copied().unwrap_or(0.0);
    if min_eigenvalue < -DENSITY_TOL {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(DensityMatrix {
        mat,
        dims: dims.to_vec(),
    })
}

/// Bipartite pure state `Σ a_ij |i⟩|j⟩` stored as its coefficient matrix `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    coeffs: ComplexMatrix,
}

impl PureState {
    pub fn new(coeffs: ComplexMatrix) -> Result<Self> {
        ensure_finite(&coeffs)?;
        let norm = coeffs.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { coeffs })
    }

    /// From amplitudes in the composite basis `|i⟩|j⟩ -> i * N + j`.
    pub fn from_amplitudes(amps: &[Complex64], dims: BipartiteDims) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(dim_mismatch(dims.total(), amps.len()));
        }
        Self::new(linalg::unvec_row_major(amps, dims.dim_a, dims.dim_b))
    }

    /// Rescales arbitrary nonzero coefficients to unit norm.
    pub fn normalized(coeffs: ComplexMatrix) -> Result<Self> {
        let norm = coeffs.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(coeffs.unscale(norm))
    }

    pub fn coeffs(&self) -> &ComplexMatrix {
        &self.coeffs
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims {
            dim_a: self.coeffs.nrows(),
            dim_b: self.coeffs.ncols(),
        }
    }

    pub fn amplitudes(&self) -> Vec<Complex64> {
        linalg::vec_row_major(&self.coeffs).iter().copied().collect()
    }

    pub fn density(&self) -> DensityMatrix {
        let v = linalg::vec_row_major(&self.coeffs);
        let mat = &v * v.adjoint();
        let d = self.dims();
        DensityMatrix {
            mat,
            dims: vec![d.dim_a, d.dim_b],
        }
    }

    /// `(U₁⊗U₂)|ψ⟩`, i.e. `A -> U₁ A U₂ᵀ`.
    pub fn apply_locals(&self, u1: &ComplexMatrix, u2: &ComplexMatrix) -> Result<PureState> {
        let d = self.dims();
        check_unitary(u1, d.dim_a)?;
        check_unitary(u2, d.dim_b)?;
        PureState::new(u1 * &self.coeffs * u2.transpose())
    }
}

/// Coefficient matrix `c_mn` of `Σ c_mn |m⋯m⟩⟨n⋯n|` on `parties` copies of
/// a `levels`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct SCCoefficients {
    c: ComplexMatrix,
    parties: usize,
}

impl SCCoefficients {
    pub fn new(c: ComplexMatrix, parties: usize) -> Result<Self> {
        if !c.is_square() || c.nrows() < 2 {
            return Err(Error::InvalidInput(format!(
                "coefficient matrix must be square with at least 2 levels, got {}x{}",
                c.nrows(),
                c.ncols()
            )));
        }
        if parties < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 parties, got {parties}")));
        }
        ensure_finite(&c)?;
        let deviation = hermitian_deviation(&c);
        if deviation > DENSITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = trace(&c).re;
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::TraceNotOne { trace: tr });
        }
        let min_eigenvalue = eigvalsh(&c).last().copied().unwrap_or(0.0);
        if min_eigenvalue < -DENSITY_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self { c, parties })
    }

    /// Two-qubit SC state `c₁|00⟩⟨00| + c₂|00⟩⟨11| + c₂*|11⟩⟨00| + c₄|11⟩⟨11|`.
    pub fn two_qubit(c1: f64, c2: Complex64, c4: f64) -> Result<Self> {
        let c = ComplexMatrix::from_row_slice(2, 2, &[linalg::cr(c1), c2, c2.conj(), linalg::cr(c4)]);
        Self::new(c, 2)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn levels(&self) -> usize {
        self.c.nrows()
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn is_two_qubit(&self) -> bool {
        self.levels() == 2 && self.parties == 2
    }

    pub fn require_two_qubit(&self) -> Result<()> {
        if self.is_two_qubit() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "expected a two-qubit SC state, got {} levels on {} parties",
                self.levels(),
                self.parties
            )))
        }
    }

    pub fn c1(&self) -> f64 {
        self.c[(0, 0)].re
    }

    /// Coefficient of `|00⟩⟨11|`.
    pub fn c2(&self) -> Complex64 {
        self.c[(0, 1)]
    }

    pub fn c4(&self) -> f64 {
        self.c[(1, 1)].re
    }

    pub fn embed(&self) -> DensityMatrix {
        sc_embed(self)
    }
}

/// Composite index of `|m m ⋯ m⟩` on `parties` copies of a `levels`-dim space.
pub fn repeated_index(m: usize, levels: usize, parties: usize) -> usize {
    (0..parties).fold(0, |acc, _| acc * levels + m)
}

/// Embeds SC coefficients into the full `levels^parties` density matrix.
pub fn sc_embed(sc: &SCCoefficients) -> DensityMatrix {
    let (n, p) = (sc.levels(), sc.parties());
    let dim = n.pow(p as u32);
    let mut mat = ComplexMatrix::zeros(dim, dim);
    for m in 0..n {
        for k in 0..n {
            mat[(repeated_index(m, n, p), repeated_index(k, n, p))] = sc.c[(m, k)];
        }
    }
    DensityMatrix { mat, dims: vec![n; p] }
}

/// A pair of 2×2 unitaries of the form `[[a₁, −a₂], [a₂*, a₁*]]`,
/// `[[b₁, −b₂], [b₂*, b₁*]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUnitary2 {
    pub a1: Complex64,
    pub a2: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
}

impl LocalUnitary2 {
    pub fn new(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> Result<Self> {
        for norm in [
            (a1.norm_sqr() + a2.norm_sqr()).sqrt(),
            (b1.norm_sqr() + b2.norm_sqr()).sqrt(),
        ] {
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized { norm });
            }
        }
        Ok(Self { a1, a2, b1, b2 })
    }

    pub fn identity() -> Self {
        let (one, zero) = (linalg::cr(1.0), linalg::cr(0.0));
        Self {
            a1: one,
            a2: zero,
            b1: one,
            b2: zero,
        }
    }

    /// Uniform (Haar on SU(2)) draw for both factors.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut unit4 = || {
            let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            (Complex64::new(v[0] / n, v[1] / n), Complex64::new(v[2] / n, v[3] / n))
        };
        let (a1, a2) = unit4();
        let (b1, b2) = unit4();
        Self { a1, a2, b1, b2 }
    }

    pub fn u1(&self) -> ComplexMatrix {
        su2(self.a1, self.a2)
    }

    pub fn u2(&self) -> ComplexMatrix {
        su2(self.b1, self.b2)
    }

    pub fn factors(&self) -> [ComplexMatrix; 2] {
        [self.u1(), self.u2()]
    }
}

fn su2(x1: Complex64, x2: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[x1, -x2, x2.conj(), x1.conj()])
}

fn check_unitary(u: &ComplexMatrix, dim: usize) -> Result<()> {
    if u.nrows() != dim || u.ncols() != dim {
        return Err(dim_mismatch(
            format!("{dim}x{dim}"),
            format!("{}x{}", u.nrows(), u.ncols()),
        ));
    }
    let deviation = unitarity_deviation(u);
    if deviation > DENSITY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// `(U₁⊗⋯⊗U_n) ρ (U₁⊗⋯⊗U_n)†`, one unitary per party.
pub fn conjugate_by_locals(rho: &DensityMatrix, unitaries: &[ComplexMatrix]) -> Result<DensityMatrix> {
    if unitaries.len() != rho.dims.len() {
        return Err(dim_mismatch(
            format!("{} local unitaries", rho.dims.len()),
            unitaries.len(),
        ));
    }
    for (u, &d) in unitaries.iter().zip(&rho.dims) {
        check_unitary(u, d)?;
    }
    let w = kron_all(unitaries);
    let mat = &w * &rho.mat * w.adjoint();
    // conjugation by a unitary preserves every density invariant; only
    // restore exact Hermiticity lost to rounding
    let mat = (&mat + mat.adjoint()).scale(0.5);
    Ok(DensityMatrix {
        mat,
        dims: rho.dims.clone(),
    })
}

pub fn conjugate_by_local2(rho: &DensityMatrix, u: &LocalUnitary2) -> Result<DensityMatrix> {
    conjugate_by_locals(rho, &u.factors())
}

/// Haar-random unitary from a caller-owned generator: Gram–Schmidt on a
/// complex Ginibre matrix, which yields the phase-fixed (`R_ii > 0`) QR factor.
pub fn haar_unitary_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    assert!(dim >= 1, "unitary dimension must be positive");
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = ComplexMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    gram_schmidt(&z).0
}

/// Haar-random `dim x dim` unitary, bit-for-bit reproducible for a seed.
pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_unitary_with(&mut ChaCha8Rng::seed_from_u64(seed), dim)
}

/// Random SC coefficients as a normalised Gram matrix of complex Gaussian vectors.
pub fn random_sc_with<R: Rng + ?Sized>(rng: &mut R, n_levels: usize, parties: usize) -> Result<SCCoefficients> {
    if n_levels < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 levels, got {n_levels}")));
    }
    let g = ComplexMatrix::from_fn(n_levels, n_levels, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gram = &g * g.adjoint();
    let tr = trace(&gram).re;
    let mut c = gram.unscale(tr);
    // exact Hermitian symmetry and real diagonal
    for i in 0..n_levels {
        c[(i, i)].im = 0.0;
        for j in 0..i {
            c[(i, j)] = c[(j, i)].conj();
        }
    }
    SCCoefficients::new(c, parties)
}

pub fn random_sc(seed: u64, n_levels: usize, parties: usize) -> Result<SCCoefficients> {
    random_sc_with(&mut ChaCha8Rng::seed_from_u64(seed), n_levels, parties)
}

/// Random pure state with Haar-distributed amplitudes.
pub fn random_pure_with<R: Rng + ?Sized>(rng: &mut R, dims: BipartiteDims) -> PureState {
    let u = haar_unitary_with(rng, dims.total());
    let amps: Vec<Complex64> = u.column(0).iter().copied().collect();
    PureState::from_amplitudes(&amps, dims).expect("unitary column has unit norm")
}

/// Random full-rank mixed state `G G† / tr(G G†)`.
pub fn random_density_with<R: Rng + ?Sized>(rng: &mut R, dims: BipartiteDims) -> DensityMatrix {
    let n = dims.total();
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gram = &g * g.adjoint();
    let mat = gram.unscale(trace(&gram).re);
    let mat = (&mat + mat.adjoint()).scale(0.5);
    DensityMatrix::bipartite(mat, dims).expect("Gram matrices are valid states")
}
