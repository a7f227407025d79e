//! Exact LU classification of Schmidt-correlated states.
//!
//! Two-qubit SC states `c₁|00⟩⟨00| + c₂|00⟩⟨11| + c₂*|11⟩⟨00| + c₄|11⟩⟨11|`
//! reduce to the real form `(λ₁, λ₂, λ₄)` with `λ₁ ≥ λ₄`, and two states are
//! LU equivalent exactly when their forms coincide. For more levels or
//! parties the diagonal gauge removes only difference-form phases, so the
//! general form reports the remaining phases as invariants.

use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, identity, partial_transpose, BipartiteDims, ComplexMatrix, Subsystem};
use crate::states::{conjugate_by_locals, SCCoefficients};

/// Default tolerance for comparing canonical coefficients.
pub const COMPARISON_TOL: f64 = 1e-8;
/// Off-diagonal coefficients at or below this modulus count as zero.
pub const SUPPORT_TOL: f64 = 1e-10;

/// `(λ₁, λ₂, λ₄)` together with the local unitaries taking the input to it.
#[derive(Debug, Clone)]
pub struct StandardForm2Q {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda4: f64,
    /// `[U_A, U_B]` with `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)† = ρ_std`.
    pub witness: [ComplexMatrix; 2],
}

impl StandardForm2Q {
    pub fn coefficients(&self) -> SCCoefficients {
        SCCoefficients::two_qubit(self.lambda1, Complex64::new(self.lambda2, 0.0), self.lambda4)
            .expect("standard form of a valid state is valid")
    }

    pub fn triple(&self) -> [f64; 3] {
        [self.lambda1, self.lambda2, self.lambda4]
    }
}

pub fn standard_form_2q(sc: &SCCoefficients) -> Result<StandardForm2Q> {
    sc.require_two_qubit()?;
    let (c1, c2, c4) = (sc.c1(), sc.c2(), sc.c4());
    let lambda2 = c2.norm();
    let theta = if lambda2 == 0.0 { 0.0 } else { c2.arg() };
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // c₁ = c₄ takes the first branch
    if c1 >= c4 {
        let u = ComplexMatrix::from_row_slice(2, 2, &[Complex64::from_polar(1.0, -theta), zero, zero, one]);
        Ok(StandardForm2Q {
            lambda1: c1,
            lambda2,
            lambda4: c4,
            witness: [u, identity(2)],
        })
    } else {
        let u = ComplexMatrix::from_row_slice(2, 2, &[zero, one, Complex64::from_polar(1.0, -theta / 2.0), zero]);
        Ok(StandardForm2Q {
            lambda1: c4,
            lambda2,
            lambda4: c1,
            witness: [u.clone(), u],
        })
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "tolerance must be finite and non-negative, got {tol}"
        )))
    }
}

/// Two-qubit SC states are LU equivalent iff their standard forms coincide.
pub fn sc_lu_equivalent(a: &SCCoefficients, b: &SCCoefficients, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    let fa = standard_form_2q(a)?.triple();
    let fb = standard_form_2q(b)?.triple();
    Ok(fa.iter().zip(&fb).all(|(x, y)| (x - y).abs() <= tol))
}

/// Membership of `candidate` in the family `(c₁, c₂e^{iδ}, c₄)` or
/// `(c₄, c₂e^{iδ}, c₁)` generated by `rho`.
pub fn in_lu_family(rho: &SCCoefficients, candidate: &SCCoefficients, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    rho.require_two_qubit()?;
    candidate.require_two_qubit()?;
    let close = |x: f64, y: f64| (x - y).abs() <= tol;
    let diag_same = close(rho.c1(), candidate.c1()) && close(rho.c4(), candidate.c4());
    let diag_swapped = close(rho.c1(), candidate.c4()) && close(rho.c4(), candidate.c1());
    Ok((diag_same || diag_swapped) && close(rho.c2().norm(), candidate.c2().norm()))
}

/// A gauge-invariant phase `φ_mn` of the canonical coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPhase {
    pub m: usize,
    pub n: usize,
    /// In `(−π, π]`.
    pub phi: f64,
}

#[derive(Debug, Clone)]
pub struct GeneralSCForm {
    pub canonical: SCCoefficients,
    /// `φ_mn` for `1 ≤ m < n` with `c_mn ≠ 0`, read off the canonical matrix.
    pub residual_phases: Vec<ResidualPhase>,
    /// `permutation[a]` is the input level placed at canonical position `a`.
    pub permutation: Vec<usize>,
    /// Gauge phases `ψ_a` applied on the first party, canonical order.
    pub gauge_phases: Vec<f64>,
    /// One unitary per party; conjugating the embedded input by their tensor
    /// product gives the embedded canonical form.
    pub witness: Vec<ComplexMatrix>,
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

fn arg_or_zero(z: Complex64) -> f64 {
    if z.norm() <= SUPPORT_TOL {
        0.0
    } else {
        z.arg()
    }
}

pub fn standard_form_general(sc: &SCCoefficients) -> Result<GeneralSCForm> {
    let c = sc.matrix();
    let n = sc.levels();
    let diag: Vec<f64> = (0..n).map(|i| c[(i, i)].re).collect();

    // head: the largest diagonal entry, lowest index on ties
    let head = (0..n).fold(0, |best, i| if diag[i] > diag[best] { i } else { best });
    let mut permutation: Vec<usize> = (0..n).collect();
    permutation.sort_by(|&a, &b| {
        diag[b]
            .total_cmp(&diag[a])
            .then_with(|| c[(head, b)].norm().total_cmp(&c[(head, a)].norm()))
            .then_with(|| arg_or_zero(c[(head, a)]).total_cmp(&arg_or_zero(c[(head, b)])))
            .then_with(|| a.cmp(&b))
    });
    let permuted = ComplexMatrix::from_fn(n, n, |a, b| c[(permutation[a], permutation[b])]);

    // BFS spanning forest of the support graph, each root pinned to zero phase
    let mut psi = vec![0.0; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(p) = queue.pop_front() {
            for q in 0..n {
                if !seen[q] && permuted[(p, q)].norm() > SUPPORT_TOL {
                    seen[q] = true;
                    psi[q] = psi[p] + permuted[(p, q)].arg();
                    queue.push_back(q);
                }
            }
        }
    }
    let gauge_phases: Vec<f64> = psi.iter().map(|&x| wrap_phase(x)).collect();

    let mut canonical = ComplexMatrix::from_fn(n, n, |a, b| {
        permuted[(a, b)] * Complex64::from_polar(1.0, gauge_phases[a] - gauge_phases[b])
    });
    // diagonal exactly real, tree edges exactly real
    for a in 0..n {
        canonical[(a, a)] = Complex64::new(canonical[(a, a)].re, 0.0);
        for b in (a + 1)..n {
            canonical[(b, a)] = canonical[(a, b)].conj();
        }
    }
    for b in 1..n {
        let z = canonical[(0, b)];
        if z.norm() > SUPPORT_TOL && z.im.abs() < 1e-12 * z.norm().max(1.0) {
            canonical[(0, b)] = Complex64::new(z.norm(), 0.0);
            canonical[(b, 0)] = Complex64::new(z.norm(), 0.0);
        }
    }

    let mut residual_phases = Vec::new();
    for m in 1..n {
        for k in (m + 1)..n {
            let z = canonical[(m, k)];
            if z.norm() > SUPPORT_TOL {
                residual_phases.push(ResidualPhase {
                    m,
                    n: k,
                    phi: wrap_phase(z.arg()),
                });
            }
        }
    }

    let mut perm_matrix = ComplexMatrix::zeros(n, n);
    for (a, &src) in permutation.iter().enumerate() {
        perm_matrix[(a, src)] = Complex64::new(1.0, 0.0);
    }
    let mut phase_matrix = ComplexMatrix::zeros(n, n);
    for (a, &t) in gauge_phases.iter().enumerate() {
        phase_matrix[(a, a)] = Complex64::from_polar(1.0, t);
    }
    let mut witness = vec![perm_matrix.clone(); sc.parties()];
    witness[0] = &phase_matrix * &perm_matrix;

    Ok(GeneralSCForm {
        canonical: SCCoefficients::new(canonical, sc.parties())?,
        residual_phases,
        permutation,
        gauge_phases,
        witness,
    })
}

/// Sufficient condition for LU equivalence of general SC states: equal
/// canonical coefficient matrices (moduli and residual phases).
pub fn general_forms_match(a: &SCCoefficients, b: &SCCoefficients, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    if a.levels() != b.levels() || a.parties() != b.parties() {
        return Ok(false);
    }
    let fa = standard_form_general(a)?;
    let fb = standard_form_general(b)?;
    Ok(fa
        .canonical
        .matrix()
        .iter()
        .zip(fb.canonical.matrix().iter())
        .all(|(x, y)| (x - y).norm() <= tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilityReport {
    pub separable: bool,
    pub max_offdiag: f64,
    /// Smallest eigenvalue of the partial transpose on the first party.
    pub pt_min_eigenvalue: f64,
}

/// An SC state is separable iff it is PPT, iff its coefficient matrix is diagonal.
pub fn sc_separability(sc: &SCCoefficients, tol: f64) -> Result<SeparabilityReport> {
    check_tol(tol)?;
    let c = sc.matrix();
    let n = sc.levels();
    let max_offdiag = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| c[(i, j)].norm())
        .fold(0.0, f64::max);
    let rho = sc.embed();
    let rest = rho.dim() / n;
    let pt = partial_transpose(rho.mat(), BipartiteDims::new(n, rest)?, Subsystem::A)?;
    let pt_min_eigenvalue = eigvalsh(&pt).last().copied().unwrap_or(0.0);
    Ok(SeparabilityReport {
        separable: max_offdiag <= tol,
        max_offdiag,
        pt_min_eigenvalue,
    })
}

pub fn sc_separable(sc: &SCCoefficients) -> bool {
    sc_separability(sc, SUPPORT_TOL).map(|r| r.separable).unwrap_or(false)
}

/// Pure two-qubit states `a₀|00⟩ + a₁|11⟩` (Schmidt form, sorted) are LU
/// equivalent iff their coefficients agree.
pub fn pure_sc_equivalent(a0: f64, a1: f64, b0: f64, b1: f64, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    for (x0, x1) in [(a0, a1), (b0, b1)] {
        if !(x0.is_finite() && x1.is_finite()) {
            return Err(Error::NonFinite);
        }
        if x1 < 0.0 || x0 < x1 {
            return Err(Error::InvalidInput(format!(
                "Schmidt pair must be sorted descending and non-negative, got ({x0}, {x1})"
            )));
        }
        let norm = x0 * x0 + x1 * x1;
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
    }
    Ok((a0 - b0).abs() < tol && (a1 - b1).abs() < tol)
}

/// Entries of `(U₁⊗U₂) ρ (U₁⊗U₂)†` for a two-qubit SC state, expanded by
/// hand in the parameters of `U₁ = [[a₁, −a₂], [a₂*, a₁*]]` and
/// `U₂ = [[b₁, −b₂], [b₂*, b₁*]]`. Row `i` is `p_i (·) + q_i (·)` with the
/// row prefactors below.
pub fn sc_conjugation_entries(sc: &SCCoefficients, u: &crate::states::LocalUnitary2) -> Result<[[Complex64; 4]; 4]> {
    sc.require_two_qubit()?;
    let (c1, c2, c4) = (Complex64::new(sc.c1(), 0.0), sc.c2(), Complex64::new(sc.c4(), 0.0));
    let (a1, a2, b1, b2) = (u.a1, u.a2, u.b1, u.b2);
    let (a1s, a2s, b1s, b2s, c2s) = (a1.conj(), a2.conj(), b1.conj(), b2.conj(), c2.conj());
    let prefactors = [
        (c1 * a1 * b1 + c2s * a2 * b2, c2 * a1 * b1 + c4 * a2 * b2),
        (c1 * a1 * b2s - c2s * a2 * b1s, c2 * a1 * b2s - c4 * a2 * b1s),
        (c1 * a2s * b1 - c2s * a1s * b2, c2 * a2s * b1 - c4 * a1s * b2),
        (c1 * a2s * b2s + c2s * a1s * b1s, c2 * a2s * b2s + c4 * a1s * b1s),
    ];
    Ok(prefactors.map(|(p, q)| {
        [
            p * a1s * b1s + q * a2s * b2s,
            p * a1s * b2 - q * a2s * b1,
            p * a2 * b1s - q * a1 * b2s,
            p * a2 * b2 + q * a1 * b1,
        ]
    }))
}

/// Conjugates the embedded input by the witness of its standard form.
pub fn apply_standard_witness(sc: &SCCoefficients) -> Result<crate::states::DensityMatrix> {
    let form = standard_form_2q(sc)?;
    conjugate_by_locals(&sc.embed(), &form.witness)
}
