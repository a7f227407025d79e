//! Dense complex linear algebra for small bipartite systems.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`; indices are always logical
//! `(row, col)`, and every composite index of a bipartite space follows the
//! row-major convention `(i, k) -> i * N + k` with `i` on the first factor.
//! The same row-major convention is used for `vec`, so that
//! `realign(kron(A, B)) == vec(A) * vec(B)^T`.

use faer::{Mat, Side};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{dim_mismatch, Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Eigenvalues / singular values below this fraction of the largest one are
/// treated as zero.
pub const RELATIVE_ZERO: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Local dimensions `(M, N)` of a bipartite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl BipartiteDims {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::InvalidInput(format!(
                "local dimensions must be positive, got ({dim_a}, {dim_b})"
            )));
        }
        Ok(Self { dim_a, dim_b })
    }

    pub const fn qubits() -> Self {
        Self { dim_a: 2, dim_b: 2 }
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    fn check_square(&self, m: &ComplexMatrix) -> Result<()> {
        let n = self.total();
        if m.nrows() != n || m.ncols() != n {
            return Err(dim_mismatch(format!("{n}x{n}"), format!("{}x{}", m.nrows(), m.ncols())));
        }
        Ok(())
    }
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn diag_real(values: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(values.len(), values.len());
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = cr(v);
    }
    m
}

/// Builds a matrix from rows given in row-major order.
pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<ComplexMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(dim_mismatch(
            format!("{ncols} columns"),
            format!("{} columns", bad.len()),
        ));
    }
    let m = ComplexMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    ensure_finite(&m)?;
    Ok(m)
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Kronecker product; `(a⊗b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors.iter().fold(identity(1), |acc, f| kron(&acc, f))
}

/// Row-major vectorisation as an `(rows*cols) x 1` column.
pub fn vec_row_major(m: &ComplexMatrix) -> ComplexMatrix {
    let (r, c) = m.shape();
    ComplexMatrix::from_fn(r * c, 1, |idx, _| m[(idx / c, idx % c)])
}

/// Inverse of [`vec_row_major`].
pub fn unvec_row_major(v: &[Complex64], rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// Realignment (reshuffling) of an `MN x MN` operator into an `M² x N²` matrix.
///
/// Row `(i, j)` of the result is the row-major vec of the `(i, j)` block of `v`,
/// hence the result has rank one exactly when `v` is a tensor product.
pub fn realign(v: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    dims.check_square(v)?;
    let (m, n) = (dims.dim_a, dims.dim_b);
    Ok(ComplexMatrix::from_fn(m * m, n * n, |row, col| {
        let (i, j) = (row / m, row % m);
        let (k, l) = (col / n, col % n);
        v[(i * n + k, j * n + l)]
    }))
}

/// Traces out subsystem `which`. Tracing `A` leaves an `N x N` matrix,
/// tracing `B` leaves `M x M`.
pub fn partial_trace(rho: &ComplexMatrix, dims: BipartiteDims, which: Subsystem) -> Result<ComplexMatrix> {
    dims.check_square(rho)?;
    let (m, n) = (dims.dim_a, dims.dim_b);
    Ok(match which {
        Subsystem::A => ComplexMatrix::from_fn(n, n, |k, l| (0..m).map(|i| rho[(i * n + k, i * n + l)]).sum()),
        Subsystem::B => ComplexMatrix::from_fn(m, m, |i, j| (0..n).map(|k| rho[(i * n + k, j * n + k)]).sum()),
    })
}

/// Transposes the `which` tensor factor in place of the composite index.
pub fn partial_transpose(rho: &ComplexMatrix, dims: BipartiteDims, which: Subsystem) -> Result<ComplexMatrix> {
    dims.check_square(rho)?;
    let n = dims.dim_b;
    let total = dims.total();
    Ok(ComplexMatrix::from_fn(total, total, |row, col| {
        let (i, k) = (row / n, row % n);
        let (j, l) = (col / n, col % n);
        match which {
            Subsystem::A => rho[(j * n + k, i * n + l)],
            Subsystem::B => rho[(i * n + l, j * n + k)],
        }
    }))
}

/// `max |m - m†|` over entries.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `‖U U† − I‖_F`, or infinity for non-square input.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    (u * u.adjoint() - identity(u.nrows())).norm()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

// nalgebra's complex SVD occasionally returns a decomposition that does not
// reconstruct rank-deficient inputs; faer handles those reliably.
fn to_faer(m: &ComplexMatrix) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `Q Λ Q†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.vectors * diag_real(&self.values) * self.vectors.adjoint()
    }

    /// Applies a scalar function to the spectrum: `Q f(Λ) Q†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let mut d = ComplexMatrix::zeros(n, n);
        for (i, &v) in self.values.iter().enumerate() {
            d[(i, i)] = f(v);
        }
        &self.vectors * d * self.vectors.adjoint()
    }
}

/// Phase of the first entry of `v` whose modulus exceeds `tiny`.
fn leading_phase(v: impl Iterator<Item = Complex64>, tiny: f64) -> Option<Complex64> {
    v.into_iter().find(|z| z.norm() > tiny).map(|z| z / z.norm())
}

/// First-nonzero-amplitude real part, used to break eigenvalue ties.
fn tie_key(v: &[Complex64]) -> f64 {
    v.iter().find(|z| z.norm() > 1e-12).map_or(0.0, |z| z.re)
}

/// Hermitian eigendecomposition; eigenvalues descending, each eigenvector's
/// first non-negligible amplitude made real positive.
pub fn eigh(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.nrows();
    // symmetrise so tiny non-Hermitian noise cannot leak into the solver
    let h = to_faer(&(m + m.adjoint()).scale(0.5));
    let eig = h
        .self_adjoint_eigen(Side::Lower)
        .expect("Hermitian eigensolver converged");
    let (vecs, vals) = (eig.U(), eig.S().column_vector());
    let mut cols: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|j| {
            let mut col: Vec<Complex64> = (0..n).map(|i| vecs[(i, j)]).collect();
            if let Some(ph) = leading_phase(col.iter().copied(), 1e-10) {
                let inv = ph.conj();
                col.iter_mut().for_each(|z| *z *= inv);
            }
            (vals[j].re, col)
        })
        .collect();
    cols.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| {
                tie_key(&b.1)
                    .partial_cmp(&tie_key(&a.1))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    let values = cols.iter().map(|(v, _)| *v).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| cols[j].1[i]);
    HermitianEigen { values, vectors }
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eigvalsh(m: &ComplexMatrix) -> Vec<f64> {
    let h = to_faer(&(m + m.adjoint()).scale(0.5));
    let mut v: Vec<f64> = h
        .self_adjoint_eigenvalues(Side::Lower)
        .expect("Hermitian eigensolver converged");
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// Thin singular value decomposition, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v_adjoint: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Svd {
    let s = to_faer(m).thin_svd().expect("SVD converged");
    let (u, v, sv) = (s.U(), s.V(), s.S().column_vector());
    let k = sv.nrows();
    Svd {
        u: ComplexMatrix::from_fn(u.nrows(), k, |i, j| u[(i, j)]),
        singular_values: (0..k).map(|j| sv[j].re).collect(),
        v_adjoint: ComplexMatrix::from_fn(k, v.nrows(), |i, j| v[(j, i)].conj()),
    }
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    to_faer(m).singular_values().expect("SVD converged")
}

/// Number of singular values above `RELATIVE_ZERO` times the largest.
pub fn numerical_rank(m: &ComplexMatrix) -> usize {
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RELATIVE_ZERO * top).count()
}

/// `exp(iH)` for Hermitian `H`.
pub fn expm_i_hermitian(h: &ComplexMatrix) -> ComplexMatrix {
    eigh(h).map(|x| Complex64::from_polar(1.0, x))
}

/// Closest unitary in Frobenius norm (polar factor), via SVD.
pub fn nearest_unitary(m: &ComplexMatrix) -> ComplexMatrix {
    let s = svd(m);
    &s.u * &s.v_adjoint
}

/// Modified Gram–Schmidt with one re-orthogonalisation pass. Returns the
/// orthonormalised columns and the diagonal of `R` (real, positive).
pub(crate) fn gram_schmidt(columns: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>) {
    let (n, k) = columns.shape();
    let mut q = columns.clone();
    let mut diag = Vec::with_capacity(k);
    for j in 0..k {
        for _pass in 0..2 {
            for p in 0..j {
                let proj: Complex64 = (0..n).map(|i| q[(i, p)].conj() * q[(i, j)]).sum();
                for i in 0..n {
                    let qp = q[(i, p)];
                    q[(i, j)] -= proj * qp;
                }
            }
        }
        let norm = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        diag.push(norm);
        if norm > 0.0 {
            for i in 0..n {
                q[(i, j)] /= norm;
            }
        }
    }
    (q, diag)
}

/// Extends orthonormal columns to a full orthonormal basis of `C^n` by
/// Gram–Schmidt against the standard basis vectors, in index order.
pub fn complete_basis(columns: &ComplexMatrix) -> ComplexMatrix {
    let n = columns.nrows();
    let mut basis: Vec<Vec<Complex64>> = (0..columns.ncols())
        .map(|j| columns.column(j).iter().copied().collect())
        .collect();
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[e] = cr(1.0);
        for _pass in 0..2 {
            for b in &basis {
                let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                v.iter_mut().zip(b).for_each(|(y, x)| *y -= proj * x);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|z| *z /= norm);
            basis.push(v);
        }
    }
    ComplexMatrix::from_fn(n, basis.len(), |i, j| basis[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::haar_unitary;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, c, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    fn bell() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = cr(0.5);
        }
        m
    }

    #[test]
    fn kron_of_diag_and_identity() {
        let k = kron(&diag_real(&[1.0, 2.0]), &identity(2));
        assert_eq!(k, diag_real(&[1.0, 1.0, 2.0, 2.0]));
    }

    #[test]
    fn kron_identity_left_is_block_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 2, 2);
        let k = kron(&identity(2), &a);
        assert_eq!(k.view((0, 0), (2, 2)), a.view((0, 0), (2, 2)));
        assert_eq!(k.view((2, 2), (2, 2)), a.view((0, 0), (2, 2)));
        assert!(k.view((0, 2), (2, 2)).iter().all(|z| z.norm() == 0.0));
        assert!(k.view((2, 0), (2, 2)).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn realign_of_identity_has_rank_one() {
        let r = realign(&identity(4), BipartiteDims::qubits()).unwrap();
        assert_eq!(numerical_rank(&r), 1);
    }

    #[test]
    fn realign_of_cnot_has_rank_two() {
        let mut cnot = ComplexMatrix::zeros(4, 4);
        for &(i, j) in &[(0, 0), (1, 1), (2, 3), (3, 2)] {
            cnot[(i, j)] = cr(1.0);
        }
        let r = realign(&cnot, BipartiteDims::qubits()).unwrap();
        assert_eq!(numerical_rank(&r), 2);
    }

    #[test]
    fn realign_of_haar_product_has_rank_one() {
        for seed in 0..20 {
            let u1 = haar_unitary(2, seed);
            let u2 = haar_unitary(3, seed + 1000);
            let r = realign(&kron(&u1, &u2), BipartiteDims::new(2, 3).unwrap()).unwrap();
            assert_eq!(numerical_rank(&r), 1);
        }
    }

    #[test]
    fn realign_rejects_wrong_size() {
        assert!(matches!(
            realign(&identity(5), BipartiteDims::qubits()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let dims = BipartiteDims::qubits();
        let expected = diag_real(&[0.5, 0.5]);
        assert!((partial_trace(&bell(), dims, Subsystem::B).unwrap() - &expected).norm() < 1e-15);
        assert!((partial_trace(&bell(), dims, Subsystem::A).unwrap() - &expected).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 3, 3);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let p = kron(&a, &b);
        let tb = partial_trace(&p, dims, Subsystem::B).unwrap();
        assert!((tb - a.scale(1.0) * trace(&b)).norm() < 1e-14);
        let ta = partial_trace(&p, dims, Subsystem::A).unwrap();
        assert!((ta - b * trace(&a)).norm() < 1e-14);
    }

    #[test]
    fn partial_trace_of_sc_state() {
        // SC(c1, c2, c4) has rho_{00,00} = c1, rho_{00,11} = c2, rho_{11,11} = c4
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = cr(0.7);
        m[(0, 3)] = c(0.1, 0.15);
        m[(3, 0)] = c(0.1, -0.15);
        m[(3, 3)] = cr(0.3);
        let ta = partial_trace(&m, BipartiteDims::qubits(), Subsystem::A).unwrap();
        assert!((ta - diag_real(&[0.7, 0.3])).norm() < 1e-15);
    }

    #[test]
    fn partial_transpose_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 3, 3);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let pt = partial_transpose(&kron(&a, &b), dims, Subsystem::B).unwrap();
        assert!((pt - kron(&a, &b.transpose())).norm() < 1e-15);
        let pt = partial_transpose(&kron(&a, &b), dims, Subsystem::A).unwrap();
        assert!((pt - kron(&a.transpose(), &b)).norm() < 1e-15);
    }

    #[test]
    fn partial_transpose_spectra() {
        let pt = partial_transpose(&bell(), BipartiteDims::qubits(), Subsystem::B).unwrap();
        let ev = eigvalsh(&pt);
        assert!((ev[3] + 0.5).abs() < 1e-14);

        let c2 = Complex64::from_polar(0.2, 0.9);
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = cr(0.6);
        m[(0, 3)] = c2;
        m[(3, 0)] = c2.conj();
        m[(3, 3)] = cr(0.4);
        let ev = eigvalsh(&partial_transpose(&m, BipartiteDims::qubits(), Subsystem::B).unwrap());
        let expected = [0.6, 0.4, 0.2, -0.2];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14, "{ev:?}");
        }
    }

    #[test]
    fn eigh_residual_up_to_dim_16() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=16 {
            for _ in 0..10 {
                let a = random_matrix(&mut rng, n, n);
                let h = &a + a.adjoint();
                let e = eigh(&h);
                assert!((e.reconstruct() - &h).norm() < 1e-11);
                assert!(unitarity_deviation(&e.vectors) < 1e-11);
                assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn svd_is_sorted_and_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_matrix(&mut rng, 4, 9);
        let s = svd(&a);
        assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let rec = &s.u * diag_real(&s.singular_values) * &s.v_adjoint;
        assert!((rec - a).norm() < 1e-12);
    }

    #[test]
    fn svd_reconstructs_rank_one_realignments() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        for seed in 0..2000 {
            let r = realign(&kron(&haar_unitary(2, seed), &haar_unitary(3, seed + 500)), dims).unwrap();
            let s = svd(&r);
            let rec = &s.u * diag_real(&s.singular_values) * &s.v_adjoint;
            assert!((rec - &r).norm() < 1e-12, "seed {seed}");
            assert!((s.singular_values[0] - 6f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn complete_basis_extends_to_unitary() {
        let u = haar_unitary(4, 77);
        let partial = u.columns(0, 2).into_owned();
        let full = complete_basis(&partial);
        assert_eq!(full.ncols(), 4);
        assert!(unitarity_deviation(&full) < 1e-12);
        assert!((full.columns(0, 2) - partial).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn realign_kron_is_outer_product_of_vecs(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, m, m);
            let b = random_matrix(&mut rng, n, n);
            let r = realign(&kron(&a, &b), BipartiteDims::new(m, n).unwrap()).unwrap();
            let outer = vec_row_major(&a) * vec_row_major(&b).transpose();
            prop_assert!((r - outer).norm() < 1e-12);
        }

        #[test]
        fn partial_transpose_is_involution(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dims = BipartiteDims::new(m, n).unwrap();
            let x = random_matrix(&mut rng, m * n, m * n);
            for which in [Subsystem::A, Subsystem::B] {
                let twice = partial_transpose(&partial_transpose(&x, dims, which).unwrap(), dims, which).unwrap();
                prop_assert_eq!(&twice, &x);
            }
        }

        #[test]
        fn partial_trace_preserves_trace(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dims = BipartiteDims::new(m, n).unwrap();
            let x = random_matrix(&mut rng, m * n, m * n);
            let t = trace(&x);
            for which in [Subsystem::A, Subsystem::B] {
                prop_assert!((trace(&partial_trace(&x, dims, which).unwrap()) - t).norm() < 1e-13);
            }
        }
    }
}
