//! Hand-expanded entries of `(U₁⊗U₂) ρ (U₁⊗U₂)†` for a two-qubit SC state,
//! with `U₁ = [[a₁, −a₂], [a₂*, a₁*]]` and `U₂ = [[b₁, −b₂], [b₂*, b₁*]]`,
//! compared against the numerical conjugation.

use lueq::states::{conjugate_by_local2, random_sc_with, LocalUnitary2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;

/// Entries `(i, j)`, 1-based, written out term by term.
fn expanded(c1: C, c2: C, c4: C, a1: C, a2: C, b1: C, b2: C) -> [[C; 4]; 4] {
    let (a1s, a2s, b1s, b2s, c2s) = (a1.conj(), a2.conj(), b1.conj(), b2.conj(), c2.conj());
    // row prefactors (left factor times ρ), one pair per row
    let r1 = (c1 * a1 * b1 + c2s * a2 * b2, c2 * a1 * b1 + c4 * a2 * b2);
    let r2 = (c1 * a1 * b2s - c2s * a2 * b1s, c2 * a1 * b2s - c4 * a2 * b1s);
    let r3 = (c1 * a2s * b1 - c2s * a1s * b2, c2 * a2s * b1 - c4 * a1s * b2);
    let r4 = (c1 * a2s * b2s + c2s * a1s * b1s, c2 * a2s * b2s + c4 * a1s * b1s);
    let row = |(p, q): (C, C)| {
        [
            p * a1s * b1s + q * a2s * b2s,
            p * a1s * b2 - q * a2s * b1,
            p * a2 * b1s - q * a1 * b2s,
            p * a2 * b2 + q * a1 * b1,
        ]
    };
    [row(r1), row(r2), row(r3), row(r4)]
}

fn random_pair(rng: &mut ChaCha8Rng) -> (lueq::SCCoefficients, LocalUnitary2) {
    (random_sc_with(rng, 2, 2).unwrap(), LocalUnitary2::random(rng))
}

#[test]
fn all_sixteen_entries_match_numerical_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let (sc, u) = random_pair(&mut rng);
        let f = expanded(
            C::new(sc.c1(), 0.0),
            sc.c2(),
            C::new(sc.c4(), 0.0),
            u.a1,
            u.a2,
            u.b1,
            u.b2,
        );
        let moved = conjugate_by_local2(&sc.embed(), &u).unwrap();
        for (i, row) in f.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                assert!((entry - moved.mat()[(i, j)]).norm() < 1e-14, "({i},{j})");
            }
        }
    }
}

/// The seven independent conditions for `ρ'` to stay SC.
fn vanishing_relations(c1: C, c2: C, c4: C, a1: C, a2: C, b1: C, b2: C) -> [C; 7] {
    let (a1s, a2s, b1s, b2s, c2s) = (a1.conj(), a2.conj(), b1.conj(), b2.conj(), c2.conj());
    let n = |z: C| C::new(z.norm_sqr(), 0.0);
    [
        c1 * n(a1) * b1 * b2 + c2s * a1s * a2 * b2 * b2 - c2 * a1 * a2s * b1 * b1 - c4 * n(a2) * b1 * b2,
        c1 * a1 * a2 * n(b1) + c2s * a2 * a2 * b1s * b2 - c2 * a1 * a1 * b1 * b2s - c4 * a1 * a2 * n(b2),
        c1 * n(a1) * n(b2) - c2s * a1s * a2 * b1s * b2 - c2 * a1 * a2s * b1 * b2s + c4 * n(a2) * n(b1),
        c1 * a1 * a2 * b1s * b2s - c2s * a2 * a2 * b1s * b1s - c2 * a1 * a1 * b2s * b2s + c4 * a1 * a2 * b1s * b2s,
        c1 * a1 * a2 * n(b2) - c2s * a2 * a2 * b1s * b2 + c2 * a1 * a1 * b1 * b2s - c4 * a1 * a2 * n(b1),
        c1 * n(a2) * n(b1) - c2s * a1s * a2 * b1s * b2 - c2 * a1 * a2s * b1 * b2s + c4 * n(a1) * n(b2),
        c1 * n(a2) * b1 * b2 - c2s * a1s * a2 * b2 * b2 + c2 * a1 * a2s * b1 * b1 - c4 * n(a1) * b1 * b2,
    ]
}

#[test]
fn relations_vanish_for_diagonal_and_antidiagonal_locals() {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    for k in 0..400 {
        let sc = random_sc_with(&mut rng, 2, 2).unwrap();
        let phases: Vec<C> = (0..2).map(|_| C::from_polar(1.0, rng.random::<f64>() * 6.3)).collect();
        let zero = C::new(0.0, 0.0);
        let (a1, a2, b1, b2) = if k % 2 == 0 {
            (phases[0], zero, phases[1], zero)
        } else {
            (zero, phases[0], zero, phases[1])
        };
        let u = LocalUnitary2::new(a1, a2, b1, b2).unwrap();
        let (c1, c2, c4) = (C::new(sc.c1(), 0.0), sc.c2(), C::new(sc.c4(), 0.0));
        for r in vanishing_relations(c1, c2, c4, a1, a2, b1, b2) {
            assert!(r.norm() < 1e-14);
        }
        let moved = conjugate_by_local2(&sc.embed(), &u).unwrap();
        let m = moved.mat();
        // still SC; the modulus of the coherence is preserved
        for (i, j) in [(0, 1), (0, 2), (1, 1), (1, 2), (2, 2), (1, 3), (2, 3)] {
            assert!(m[(i, j)].norm() < 1e-14);
        }
        assert!((m[(0, 3)].norm() - sc.c2().norm()).abs() < 1e-14);
    }
}

#[test]
fn relations_detect_leaving_the_sc_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    for _ in 0..200 {
        let (sc, u) = random_pair(&mut rng);
        let (c1, c2, c4) = (C::new(sc.c1(), 0.0), sc.c2(), C::new(sc.c4(), 0.0));
        let rel = vanishing_relations(c1, c2, c4, u.a1, u.a2, u.b1, u.b2);
        let moved = conjugate_by_local2(&sc.embed(), &u).unwrap();
        let off: f64 = [(0, 1), (0, 2), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3)]
            .iter()
            .map(|&(i, j)| moved.mat()[(i, j)].norm())
            .fold(0.0, f64::max);
        let worst = rel.iter().map(|r| r.norm()).fold(0.0, f64::max);
        // a generic local unitary moves the state out of the SC set, and the relations see it
        assert_eq!(off > 1e-8, worst > 1e-8);
    }
}
