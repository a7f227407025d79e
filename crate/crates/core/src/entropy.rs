//! Von Neumann and relative entropy on eigenspaces.

use crate::error::{dim_mismatch, Result};
use crate::linalg::{eigh, eigvalsh, RELATIVE_ZERO};
use crate::states::DensityMatrix;

/// Default logarithm base (bits).
pub const DEFAULT_LOG_BASE: f64 = 2.0;

/// `-x log x` in the given base, with `0 log 0 := 0`.
pub fn neg_xlogx(x: f64, log_base: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln() / log_base.ln()
    }
}

/// Shannon entropy of a probability vector (non-positive entries ignored).
pub fn shannon_entropy(probs: &[f64], log_base: f64) -> f64 {
    probs.iter().map(|&p| neg_xlogx(p, log_base)).sum()
}

/// `h(p) = -p log p - (1-p) log(1-p)`.
pub fn binary_entropy(p: f64, log_base: f64) -> f64 {
    neg_xlogx(p, log_base) + neg_xlogx(1.0 - p, log_base)
}

pub fn von_neumann_entropy(rho: &DensityMatrix, log_base: f64) -> f64 {
    shannon_entropy(&eigvalsh(rho.mat()), log_base).max(0.0)
}

/// `S(ρ‖σ) = tr ρ log ρ − tr ρ log σ`, or `+∞` when the support of `ρ` is
/// not contained in the support of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, log_base: f64) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(dim_mismatch(rho.dim(), sigma.dim()));
    }
    let ln_base = log_base.ln();
    let neg_entropy = -shannon_entropy(&eigvalsh(rho.mat()), log_base);

    let sig = eigh(sigma.mat());
    let top = sig.values.first().copied().unwrap_or(0.0).max(0.0);
    let threshold = RELATIVE_ZERO * top.max(f64::MIN_POSITIVE);
    let rho_mat = rho.mat();
    let mut cross = 0.0;
    for (j, &s) in sig.values.iter().enumerate() {
        let f = sig.vectors.column(j);
        // ⟨f|ρ|f⟩
        let weight = (f.adjoint() * rho_mat * f)[(0, 0)].re;
        if s <= threshold {
            if weight > RELATIVE_ZERO {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * s.ln() / ln_base;
    }
    Ok((neg_entropy - cross).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, diag_real, ComplexMatrix};
    use crate::states::{conjugate_by_locals, haar_unitary_with, random_density_with, random_sc, SCCoefficients};
    use crate::BipartiteDims;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubit(values: &[f64]) -> DensityMatrix {
        DensityMatrix::new(diag_real(values), &[values.len()]).unwrap()
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let sc = SCCoefficients::two_qubit(0.5, cr(0.5), 0.5).unwrap();
        assert!(von_neumann_entropy(&sc.embed(), 2.0) < 1e-14);
    }

    #[test]
    fn maximally_mixed_qubit_is_one_bit() {
        assert!((von_neumann_entropy(&qubit(&[0.5, 0.5]), 2.0) - 1.0).abs() < 1e-15);
        assert!((von_neumann_entropy(&qubit(&[0.5, 0.5]), std::f64::consts::E) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn sc_entropy_matches_closed_eigenvalues() {
        // eigenvalues (1 ± sqrt(0.32)) / 2 computed independently
        let sc = SCCoefficients::two_qubit(0.7, cr(0.2), 0.3).unwrap();
        let l = (1.0 + 0.32f64.sqrt()) / 2.0;
        let expected = -(l * l.log2() + (1.0 - l) * (1.0 - l).log2());
        let s = von_neumann_entropy(&sc.embed(), 2.0);
        assert!((s - expected).abs() < 1e-12);
        assert!((s - 0.755).abs() < 1e-3);
    }

    #[test]
    fn relative_entropy_with_itself_is_zero() {
        let rho = random_sc(3, 2, 2).unwrap().embed();
        assert!(relative_entropy(&rho, &rho, 2.0).unwrap() < 1e-12);
    }

    #[test]
    fn disjoint_supports_give_infinity() {
        let r = relative_entropy(&qubit(&[1.0, 0.0]), &qubit(&[0.0, 1.0]), 2.0).unwrap();
        assert!(r.is_infinite());
    }

    #[test]
    fn bell_against_dephased_is_one_bit() {
        let bell = SCCoefficients::two_qubit(0.5, cr(0.5), 0.5).unwrap().embed();
        let chi = DensityMatrix::new(diag_real(&[0.5, 0.0, 0.0, 0.5]), &[2, 2]).unwrap();
        assert!((relative_entropy(&bell, &chi, 2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_dimension_mismatch() {
        assert!(relative_entropy(&qubit(&[1.0, 0.0]), &qubit(&[0.5, 0.25, 0.25]), 2.0).is_err());
    }

    #[test]
    fn entropy_is_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let dims = BipartiteDims::new(2, 3).unwrap();
        for _ in 0..50 {
            let rho = random_density_with(&mut rng, dims);
            let u1 = haar_unitary_with(&mut rng, 2);
            let u2 = haar_unitary_with(&mut rng, 3);
            let moved = conjugate_by_locals(&rho, &[u1, u2]).unwrap();
            assert!((von_neumann_entropy(&rho, 2.0) - von_neumann_entropy(&moved, 2.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn klein_inequality_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let dims = BipartiteDims::qubits();
        for _ in 0..200 {
            let rho = random_density_with(&mut rng, dims);
            let sigma = random_density_with(&mut rng, dims);
            let d = relative_entropy(&rho, &sigma, 2.0).unwrap();
            let dist = (rho.mat() - sigma.mat()).norm();
            assert!(d >= 0.0);
            // Pinsker: S ≥ ‖ρ−σ‖₁² / (2 ln 2) ≥ ‖ρ−σ‖_F² / (2 ln 2)
            assert!(d >= dist * dist / (2.0 * 2f64.ln()) - 1e-12, "{d} vs {dist}");
        }
        let rho = random_density_with(&mut rng, dims);
        let same = DensityMatrix::new(rho.mat().clone() + ComplexMatrix::zeros(4, 4), &[2, 2]).unwrap();
        assert!(relative_entropy(&rho, &same, 2.0).unwrap() < 1e-12);
    }
}
