//! The `verify` suite: every closed-form claim checked against an
//! independent computation, plus the known disagreements reported with
//! their measured size.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};
use std::fmt;

use lueq::canonical::{
    apply_standard_witness, general_forms_match, in_lu_family, sc_conjugation_entries, sc_lu_equivalent, sc_separable,
    standard_form_2q, COMPARISON_TOL,
};
use lueq::correlations::{
    classical_correlation_measured, classical_correlation_relative, conditional_state_mismatch,
    discord_relative_entropy, entropy_via_delta, er_equals_dr_check, sample_separable_state, sc_closed_forms,
    MeasurementParams, MeasurementSearchOptions,
};
use lueq::entropy::von_neumann_entropy;
use lueq::equivalence::{
    brute_force_lu_search, extract_tensor_factors, nondegenerate_lu_test, separating_invariant, PhaseSearchOptions,
    VerdictStatus, DECOMPOSABILITY_TOL,
};
use lueq::invariants::{invariants_i, pure_lu_equivalent};
use lueq::linalg::{eigvalsh, kron, partial_transpose};
use lueq::states::{
    conjugate_by_local2, conjugate_by_locals, haar_unitary_with, random_density_with, random_pure_with, random_sc_with,
};
use lueq::{BipartiteDims, ComplexMatrix, LocalUnitary2, SCCoefficients, Subsystem};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::output::Num;

/// Allowed distance between a measured disagreement and its expected size.
pub const RECONCILIATION_TOL: f64 = 1e-4;
/// Restarts for the direct local-unitary search on equivalent pairs.
pub const SEARCH_RESTARTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Match,
    Mismatch,
    PropertyPass,
    PropertyFail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Match => "MATCH",
            CheckStatus::Mismatch => "MISMATCH",
            CheckStatus::PropertyPass => "PROPERTY_PASS",
            CheckStatus::PropertyFail => "PROPERTY_FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub criterion: u32,
    /// The statement being checked.
    pub claim_ref: String,
    pub claimed_value: Option<Num>,
    pub oracle_value: Option<Num>,
    pub delta: Option<Num>,
    pub tolerance: Num,
    pub expected_mismatch: bool,
    pub expected_delta: Option<Num>,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    /// Whether this record is consistent with a passing suite.
    pub fn acceptable(&self) -> bool {
        match self.status {
            CheckStatus::PropertyPass => true,
            CheckStatus::PropertyFail => false,
            CheckStatus::Match => !self.expected_mismatch,
            CheckStatus::Mismatch => self.expected_mismatch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub matches: usize,
    pub mismatches: usize,
    pub expected_mismatches: usize,
    pub property_pass: usize,
    pub property_fail: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tool_version: String,
    pub seed: u64,
    pub summary: Summary,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let fmt_num = |x: Option<Num>| x.map(|n| format!("{:.6e}", n.get())).unwrap_or_else(|| "-".into());
        let header = [
            "status",
            "crit",
            "name",
            "claimed",
            "oracle",
            "delta",
            "tolerance",
            "expected",
        ];
        let mut rows: Vec<[String; 8]> = vec![header.map(String::from)];
        for c in &self.checks {
            rows.push([
                c.status.to_string(),
                c.criterion.to_string(),
                c.name.clone(),
                fmt_num(c.claimed_value),
                fmt_num(c.oracle_value),
                fmt_num(c.delta),
                fmt_num(Some(c.tolerance)),
                if c.expected_mismatch {
                    fmt_num(c.expected_delta)
                } else {
                    String::new()
                },
            ]);
        }
        let widths: Vec<usize> = (0..8)
            .map(|k| rows.iter().map(|r| r[k].len()).max().unwrap_or(0))
            .collect();
        let mut out = format!("lueq verify {} (seed {})\n", self.tool_version, self.seed);
        for r in &rows {
            let line: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} checks: {} match, {} mismatch ({} expected), {} property pass, {} property fail -> {}\n",
            s.total,
            s.matches,
            s.mismatches,
            s.expected_mismatches,
            s.property_pass,
            s.property_fail,
            if s.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}

struct Suite {
    seed: u64,
    checks: Vec<Check>,
}

impl Suite {
    fn rng(&self, criterion: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(criterion);
        rng
    }

    /// A property with a measured value; passes when `pass` holds.
    #[allow(clippy::too_many_arguments)]
    fn property(
        &mut self,
        criterion: u32,
        name: &str,
        claim: &str,
        value: f64,
        tolerance: f64,
        pass: bool,
        detail: String,
    ) {
        self.checks.push(Check {
            name: name.into(),
            criterion,
            claim_ref: claim.into(),
            claimed_value: None,
            oracle_value: Some(value.into()),
            delta: None,
            tolerance: tolerance.into(),
            expected_mismatch: false,
            expected_delta: None,
            status: if pass {
                CheckStatus::PropertyPass
            } else {
                CheckStatus::PropertyFail
            },
            detail,
        });
    }

    /// A claimed value against an oracle; `MATCH` iff the gap is below tolerance.
    #[allow(clippy::too_many_arguments)]
    fn compare(
        &mut self,
        criterion: u32,
        name: &str,
        claim: &str,
        claimed: Option<f64>,
        oracle: Option<f64>,
        delta: f64,
        tolerance: f64,
        detail: String,
    ) {
        let delta = Num::new(delta);
        let tolerance = Num::new(tolerance);
        self.checks.push(Check {
            name: name.into(),
            criterion,
            claim_ref: claim.into(),
            claimed_value: claimed.map(Num::new),
            oracle_value: oracle.map(Num::new),
            delta: Some(delta),
            tolerance,
            expected_mismatch: false,
            expected_delta: None,
            status: if delta.get() < tolerance.get() {
                CheckStatus::Match
            } else {
                CheckStatus::Mismatch
            },
            detail,
        });
    }

    fn compare_values(&mut self, criterion: u32, name: &str, claim: &str, claimed: f64, oracle: f64, tolerance: f64) {
        self.compare(
            criterion,
            name,
            claim,
            Some(claimed),
            Some(oracle),
            (claimed - oracle).abs(),
            tolerance,
            String::new(),
        );
    }

    /// A known disagreement; it must be reproduced at its expected size.
    fn reconcile(&mut self, name: &str, claim: &str, claimed: f64, oracle: f64, expected_delta: f64, detail: String) {
        let delta = Num::new((claimed - oracle).abs());
        let tolerance = Num::new(RECONCILIATION_TOL);
        let status = if delta.get() < tolerance.get() {
            CheckStatus::Match
        } else if (delta.get() - expected_delta).abs() <= RECONCILIATION_TOL {
            CheckStatus::Mismatch
        } else {
            CheckStatus::PropertyFail
        };
        self.checks.push(Check {
            name: name.into(),
            criterion: 10,
            claim_ref: claim.into(),
            claimed_value: Some(claimed.into()),
            oracle_value: Some(oracle.into()),
            delta: Some(delta),
            tolerance,
            expected_mismatch: true,
            expected_delta: Some(expected_delta.into()),
            status,
            detail,
        });
    }

    fn finish(self) -> VerifyReport {
        let count = |s: CheckStatus| self.checks.iter().filter(|c| c.status == s).count();
        let summary = Summary {
            total: self.checks.len(),
            matches: count(CheckStatus::Match),
            mismatches: count(CheckStatus::Mismatch),
            expected_mismatches: self
                .checks
                .iter()
                .filter(|c| c.status == CheckStatus::Mismatch && c.expected_mismatch)
                .count(),
            property_pass: count(CheckStatus::PropertyPass),
            property_fail: count(CheckStatus::PropertyFail),
            passed: self.checks.iter().all(Check::acceptable),
        };
        VerifyReport {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed: self.seed,
            summary,
            checks: self.checks,
        }
    }
}

fn bell() -> SCCoefficients {
    SCCoefficients::two_qubit(0.5, Complex64::new(0.5, 0.0), 0.5).expect("valid")
}

fn classical(c1: f64) -> SCCoefficients {
    SCCoefficients::two_qubit(c1, Complex64::new(0.0, 0.0), 1.0 - c1).expect("valid")
}

/// `−(p log₂ p + (1−p) log₂(1−p))`, written out.
fn h2(p: f64) -> f64 {
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// A random element of the LU family of `sc`: coherence phase rotated,
/// diagonal optionally swapped.
pub fn family_member<R: Rng + ?Sized>(rng: &mut R, sc: &SCCoefficients) -> SCCoefficients {
    let c2 = sc.c2() * Complex64::from_polar(1.0, rng.random::<f64>() * TAU);
    let (c1, c4) = if rng.random::<bool>() {
        (sc.c4(), sc.c1())
    } else {
        (sc.c1(), sc.c4())
    };
    SCCoefficients::two_qubit(c1, c2, c4).expect("family members are states")
}

fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn criterion_1(s: &mut Suite) {
    let mut rng = s.rng(1);
    let n = 1000;
    let (mut agree, mut form_gap, mut witness) = (0, 0.0f64, 0.0f64);
    for _ in 0..n {
        let a = random_sc_with(&mut rng, 2, 2).expect("valid");
        let b = family_member(&mut rng, &a);
        if sc_lu_equivalent(&a, &b, COMPARISON_TOL).unwrap_or(false) {
            agree += 1;
        }
        let (fa, fb) = (standard_form_2q(&a).expect("2q"), standard_form_2q(&b).expect("2q"));
        form_gap = fa
            .triple()
            .iter()
            .zip(fb.triple())
            .map(|(x, y)| (x - y).abs())
            .fold(form_gap, f64::max);
        for sc in [&a, &b] {
            let moved = apply_standard_witness(sc).expect("2q");
            let target = standard_form_2q(sc).expect("2q").coefficients().embed();
            witness = witness.max(max_abs_diff(moved.mat(), target.mat()));
        }
    }
    s.property(
        1,
        "standard_form.family_equivalent",
        "SC states related by a coherence phase or diagonal swap are LU equivalent",
        agree as f64,
        0.0,
        agree == n,
        format!("{agree}/{n} family pairs decided equivalent"),
    );
    s.compare(
        1,
        "standard_form.family_form_gap",
        "standard forms agree across an LU family",
        None,
        None,
        form_gap,
        1e-8,
        format!("{n} pairs"),
    );
    s.compare(
        1,
        "standard_form.witness_residual",
        "the witness unitaries conjugate the state to its standard form",
        None,
        None,
        witness,
        1e-12,
        format!("{} states", 2 * n),
    );

    let sc = SCCoefficients::two_qubit(0.3, Complex64::from_polar(0.2, PI / 3.0), 0.7).expect("valid");
    let f = standard_form_2q(&sc).expect("2q");
    let expected = [0.7, 0.2, 0.3];
    let gap = f
        .triple()
        .iter()
        .zip(expected)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    s.compare(
        1,
        "standard_form.swap_example",
        "(0.3, 0.2e^{i pi/3}, 0.7) has standard form (0.7, 0.2, 0.3)",
        None,
        None,
        gap,
        1e-12,
        format!("{:?}", f.triple()),
    );

    // multipartite: permute levels and rephase, the general form must not move
    let trials = 100;
    let mut matched = 0;
    for k in 0..trials {
        let (levels, parties) = [(3, 2), (3, 3), (4, 2)][k % 3];
        let sc = random_sc_with(&mut rng, levels, parties).expect("valid");
        let mut perm: Vec<usize> = (0..levels).collect();
        for i in (1..levels).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let psi: Vec<f64> = (0..levels).map(|_| rng.random::<f64>() * TAU).collect();
        let c = sc.matrix();
        let moved = ComplexMatrix::from_fn(levels, levels, |m, n| {
            c[(perm[m], perm[n])] * Complex64::from_polar(1.0, psi[m] - psi[n])
        });
        let moved = SCCoefficients::new(moved, parties).expect("valid");
        if general_forms_match(&sc, &moved, COMPARISON_TOL).unwrap_or(false) {
            matched += 1;
        }
    }
    s.property(
        1,
        "standard_form.general_invariance",
        "level permutations and diagonal phases leave the general SC form unchanged",
        matched as f64,
        0.0,
        matched == trials,
        format!("{matched}/{trials} relabelled states matched"),
    );
}

fn criterion_2(s: &mut Suite) {
    let mut rng = s.rng(2);
    let n = 200;
    let (mut agree, mut equivalent, mut separated, mut inequivalent) = (0, 0, 0, 0);
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let a = random_sc_with(&mut rng, 2, 2).expect("valid");
        let b = if k % 2 == 0 {
            family_member(&mut rng, &a)
        } else {
            random_sc_with(&mut rng, 2, 2).expect("valid")
        };
        let verdict = sc_lu_equivalent(&a, &b, COMPARISON_TOL).expect("valid tol");
        if in_lu_family(&a, &b, COMPARISON_TOL).expect("valid tol") == verdict {
            agree += 1;
        }
        if verdict {
            equivalent += 1;
            let search = brute_force_lu_search(&a.embed(), &b.embed(), SEARCH_RESTARTS, k as u64).expect("same dims");
            worst = worst.max(search.residual);
        } else {
            inequivalent += 1;
            if separating_invariant(&a.embed(), &b.embed(), 1e-9)
                .expect("same dims")
                .is_some()
            {
                separated += 1;
            }
        }
    }
    s.property(
        2,
        "family.verdict_agreement",
        "membership in the LU family decides LU equivalence of two-qubit SC states",
        agree as f64,
        0.0,
        agree == n,
        format!("{agree}/{n} pairs"),
    );
    s.property(
        2,
        "family.equivalent_pairs_search",
        "equivalent pairs admit local unitaries found by direct search",
        worst,
        1e-6,
        worst < 1e-6,
        format!("{equivalent} equivalent pairs, worst residual"),
    );
    s.property(
        2,
        "family.inequivalent_pairs_separated",
        "inequivalent pairs are separated by an LU invariant",
        (inequivalent - separated) as f64,
        0.0,
        separated == inequivalent,
        format!("{separated}/{inequivalent} separated"),
    );
}

fn criterion_3(s: &mut Suite) {
    let mut rng = s.rng(3);
    let n = 500;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let sc = random_sc_with(&mut rng, 2, 2).expect("valid");
        let u = LocalUnitary2::random(&mut rng);
        let entries = sc_conjugation_entries(&sc, &u).expect("2q");
        let moved = conjugate_by_local2(&sc.embed(), &u).expect("2q");
        for (i, row) in entries.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                worst = worst.max((z - moved.mat()[(i, j)]).norm());
            }
        }
    }
    s.compare(
        3,
        "entries.expansion",
        "hand-expanded entries of the locally conjugated SC state",
        None,
        None,
        worst,
        1e-12,
        format!("{n} draws, 16 entries each"),
    );

    let mut worst_off: f64 = 0.0;
    for k in 0..n {
        let sc = random_sc_with(&mut rng, 2, 2).expect("valid");
        let p: Vec<Complex64> = (0..2)
            .map(|_| Complex64::from_polar(1.0, rng.random::<f64>() * TAU))
            .collect();
        let z = Complex64::new(0.0, 0.0);
        let u = if k % 2 == 0 {
            LocalUnitary2::new(p[0], z, p[1], z)
        } else {
            LocalUnitary2::new(z, p[0], z, p[1])
        }
        .expect("unitary");
        let e = sc_conjugation_entries(&sc, &u).expect("2q");
        for (i, j) in [(0, 1), (0, 2), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3)] {
            worst_off = worst_off.max(e[i][j].norm());
        }
    }
    s.property(
        3,
        "entries.sc_preserving_locals",
        "diagonal and antidiagonal locals keep the state SC",
        worst_off,
        1e-14,
        worst_off < 1e-14,
        format!("{n} draws"),
    );
}

fn criterion_4(s: &mut Suite) {
    let mut rng = s.rng(4);
    for n in 2..=4 {
        let dims = BipartiteDims::new(n, n).expect("valid");
        let mut drift: f64 = 0.0;
        for _ in 0..50 {
            let psi = random_pure_with(&mut rng, dims);
            let base = invariants_i(&psi, n);
            for _ in 0..5 {
                let phi = psi
                    .apply_locals(&haar_unitary_with(&mut rng, n), &haar_unitary_with(&mut rng, n))
                    .expect("unitary");
                drift = base
                    .iter()
                    .zip(invariants_i(&phi, n))
                    .map(|(a, b)| (a - b).abs())
                    .fold(drift, f64::max);
            }
        }
        s.property(
            4,
            &format!("pure.invariant_orbit_n{n}"),
            "I_alpha is constant on local-unitary orbits",
            drift,
            1e-10,
            drift < 1e-10,
            format!("{n}x{n}, 50 states x 5 orbit points"),
        );
    }
    let pairs = 500;
    let (mut planted_errors, mut distinct_errors) = (0, 0);
    for k in 0..pairs {
        let n = 2 + k % 3;
        let dims = BipartiteDims::new(n, n).expect("valid");
        let psi = random_pure_with(&mut rng, dims);
        let phi = psi
            .apply_locals(&haar_unitary_with(&mut rng, n), &haar_unitary_with(&mut rng, n))
            .expect("unitary");
        if !matches!(pure_lu_equivalent(&psi, &phi, 1e-9), Ok(true)) {
            planted_errors += 1;
        }
        let other = random_pure_with(&mut rng, dims);
        if !matches!(pure_lu_equivalent(&psi, &other, 1e-9), Ok(false)) {
            distinct_errors += 1;
        }
    }
    s.property(
        4,
        "pure.planted_equivalent",
        "pure states on one LU orbit are decided equivalent",
        planted_errors as f64,
        0.0,
        planted_errors == 0,
        format!("{pairs} pairs, errors"),
    );
    s.property(
        4,
        "pure.spectrum_distinct",
        "pure states with different Schmidt spectra are decided inequivalent",
        distinct_errors as f64,
        0.0,
        distinct_errors == 0,
        format!("{pairs} pairs, errors"),
    );
}

fn criterion_5(s: &mut Suite) {
    let mut rng = s.rng(5);
    let n = 1000;
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for k in 0..n {
        let (m, d) = [(2, 2), (2, 3), (3, 2), (3, 3)][k % 4];
        let dims = BipartiteDims::new(m, d).expect("valid");
        let v = kron(&haar_unitary_with(&mut rng, m), &haar_unitary_with(&mut rng, d));
        match extract_tensor_factors(&v, dims, DECOMPOSABILITY_TOL) {
            Ok(f) => worst = worst.max((kron(&f.u1, &f.u2) - &v).norm()),
            Err(_) => failures += 1,
        }
    }
    s.property(
        5,
        "realign.product_reconstruction",
        "a product of unitaries is recovered from its realignment",
        worst,
        1e-10,
        failures == 0 && worst < 1e-10,
        format!("{n} products, {failures} extraction failures"),
    );
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let perm = |p: [usize; 4]| ComplexMatrix::from_fn(4, 4, |i, j| if p[i] == j { one } else { zero });
    for (name, gate) in [("cnot", perm([0, 1, 3, 2])), ("swap", perm([0, 2, 1, 3]))] {
        let res = extract_tensor_factors(&gate, BipartiteDims::qubits(), DECOMPOSABILITY_TOL);
        let rejected = matches!(res, Err(lueq::Error::NotDecomposable { .. }));
        s.property(
            5,
            &format!("realign.rejects_{name}"),
            "entangling gates are not products",
            if rejected { 1.0 } else { 0.0 },
            0.0,
            rejected,
            format!("{:?}", res.err().map(|e| e.to_string())),
        );
    }
    let instances = 200;
    let mut recovered = 0;
    for k in 0..instances {
        let dims = BipartiteDims::qubits();
        let rho = random_density_with(&mut rng, dims);
        let rho2 = conjugate_by_locals(&rho, &[haar_unitary_with(&mut rng, 2), haar_unitary_with(&mut rng, 2)])
            .expect("unitary");
        let opts = PhaseSearchOptions {
            seed: k as u64,
            ..Default::default()
        };
        if let Ok(v) = nondegenerate_lu_test(&rho, &rho2, &opts) {
            if v.status() == VerdictStatus::Equivalent {
                recovered += 1;
            }
        }
    }
    let rate = recovered as f64 / instances as f64;
    s.property(
        5,
        "realign.planted_recovery",
        "the phase search recovers planted local unitaries for non-degenerate spectra",
        rate,
        0.99,
        rate >= 0.99,
        format!("{recovered}/{instances} recovered"),
    );
}

fn criterion_6(s: &mut Suite) {
    let mut rng = s.rng(6);
    let n = 1000;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let sc = random_sc_with(&mut rng, 2, 2).expect("valid");
        let closed = entropy_via_delta(&sc, 2.0).expect("2q");
        worst = worst.max((closed - von_neumann_entropy(&sc.embed(), 2.0)).abs());
    }
    s.compare(
        6,
        "entropy.delta_formula",
        "S(rho) from the discriminant of the coefficient matrix",
        None,
        None,
        worst,
        1e-12,
        format!("{n} states"),
    );
    let bell_s = entropy_via_delta(&bell(), 2.0).expect("2q");
    s.compare_values(6, "entropy.bell", "the Bell state has zero entropy", 0.0, bell_s, 1e-15);
}

fn criterion_7(s: &mut Suite) {
    let mut rng = s.rng(7);
    let n = 1000;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let sc = random_sc_with(&mut rng, 2, 2).expect("valid");
        let d = discord_relative_entropy(&sc, 2.0).expect("2q");
        worst = worst.max((d.closed_form - d.direct).abs());
    }
    s.compare(
        7,
        "relative_discord.closed_form",
        "D_R = -(c1 log c1 + c4 log c4) - S(rho) equals S(rho||chi0)",
        None,
        None,
        worst,
        1e-10,
        format!("{n} states"),
    );
    let b = discord_relative_entropy(&bell(), 2.0).expect("2q");
    s.compare_values(
        7,
        "relative_discord.bell",
        "D_R of the Bell state is one bit",
        1.0,
        b.direct,
        1e-10,
    );
    let mut sep: f64 = 0.0;
    for _ in 0..100 {
        let d = discord_relative_entropy(&classical(rng.random()), 2.0).expect("2q");
        sep = sep.max(d.direct.abs()).max(d.closed_form.abs());
    }
    s.compare(
        7,
        "relative_discord.separable",
        "separable SC states have zero D_R",
        Some(0.0),
        Some(sep),
        sep,
        1e-10,
        "100 states, largest value".into(),
    );
}

fn criterion_8(s: &mut Suite) {
    let mut rng = s.rng(8);
    let n = 1000;
    let (mut disagree, mut coherent, mut coherent_entangled) = (0, 0, 0);
    for k in 0..n {
        let sc = if k % 10 == 0 {
            classical(rng.random())
        } else {
            random_sc_with(&mut rng, 2, 2).expect("valid")
        };
        let pt = partial_transpose(sc.embed().mat(), BipartiteDims::qubits(), Subsystem::B).expect("2x2");
        let min = eigvalsh(&pt).last().copied().unwrap_or(0.0);
        let ppt = min >= -1e-10;
        if sc_separable(&sc) != ppt {
            disagree += 1;
        }
        if sc.c2().norm() > 1e-10 {
            coherent += 1;
            if !sc_separable(&sc) && !ppt {
                coherent_entangled += 1;
            }
        }
    }
    s.property(
        8,
        "ppt.agreement",
        "an SC state is separable iff its partial transpose is positive",
        disagree as f64,
        0.0,
        disagree == 0,
        format!("{n} states, disagreements"),
    );
    s.property(
        8,
        "ppt.coherence_entangles",
        "any nonzero coherence makes an SC state entangled",
        (coherent - coherent_entangled) as f64,
        0.0,
        coherent == coherent_entangled,
        format!("{coherent_entangled}/{coherent} coherent states entangled"),
    );
}

fn measured(sc: &SCCoefficients) -> lueq::correlations::MeasuredCorrelation {
    classical_correlation_measured(&sc.embed(), &MeasurementSearchOptions::default()).expect("2q")
}

fn criterion_9(s: &mut Suite) {
    let mut rng = s.rng(9);
    let n = 200;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        worst = worst.max(measured(&classical(rng.random())).d_m.abs());
    }
    s.property(
        9,
        "discord.classical_states",
        "classical SC states carry no discord",
        worst,
        1e-6,
        worst < 1e-6,
        format!("{n} states, largest |D_M|"),
    );
    let b = measured(&bell());
    s.compare_values(
        9,
        "discord.bell_d_m",
        "measured discord of the Bell state",
        1.0,
        b.d_m,
        1e-4,
    );
    s.compare_values(
        9,
        "discord.bell_c_m",
        "measured classical correlation of the Bell state",
        1.0,
        b.c_m,
        1e-4,
    );
}

fn criterion_10(s: &mut Suite) {
    let c = classical(0.3);
    let cm = measured(&c);
    let closed = sc_closed_forms(&c, 2.0).expect("2q");
    s.reconcile(
        "reconcile.classical_c_m",
        "C_M vanishes for two-qubit SC states",
        closed.c_m,
        cm.c_m,
        h2(0.3),
        "c = (0.3, 0, 0.7); a z measurement gives I(rho) = h(0.3)".into(),
    );
    s.reconcile(
        "reconcile.classical_d_m",
        "D_M = 2S(rho_A) - S(rho)",
        closed.d_m,
        cm.d_m,
        h2(0.3),
        "c = (0.3, 0, 0.7); the state is classical".into(),
    );
    let b = bell();
    let bm = measured(&b);
    let bc = sc_closed_forms(&b, 2.0).expect("2q");
    s.reconcile(
        "reconcile.bell_c_m",
        "C_M vanishes for two-qubit SC states",
        bc.c_m,
        bm.c_m,
        1.0,
        "Bell state".into(),
    );
    s.reconcile(
        "reconcile.bell_d_m",
        "D_M = 2S(rho_A) - S(rho)",
        bc.d_m,
        bm.d_m,
        1.0,
        "Bell state".into(),
    );
    let br = classical_correlation_relative(&b, 2.0).expect("2q");
    s.reconcile(
        "reconcile.bell_c_r",
        "C_R = -2(c1^2 log c1 + c4^2 log c4) - S(rho)",
        br.c_r_closed_form,
        br.c_r_direct,
        1.0,
        "Bell state; direct value is S(rho||pi0)".into(),
    );
    let mixed = SCCoefficients::two_qubit(0.5, Complex64::new(0.0, 0.0), 0.5).expect("valid");
    let mr = classical_correlation_relative(&mixed, 2.0).expect("2q");
    s.reconcile(
        "reconcile.mixed_c_r",
        "C_R = -2(c1^2 log c1 + c4^2 log c4) - S(rho)",
        mr.c_r_closed_form,
        mr.c_r_direct,
        1.0,
        "c = (1/2, 0, 1/2)".into(),
    );
    let x_basis = MeasurementParams::from_bloch_angles(FRAC_PI_2, 0.0);
    let mismatch = conditional_state_mismatch(&b, &x_basis).expect("2q");
    s.reconcile(
        "reconcile.bell_conditional_state",
        "the conditional states are (I + a_k sigma_3)/2 on A",
        0.0,
        mismatch,
        FRAC_1_SQRT_2,
        "Bell state measured along x; largest Frobenius distance over outcomes".into(),
    );
}

fn criterion_11(s: &mut Suite) {
    let mut rng = s.rng(11);
    let (states, samples) = (50, 10_000);
    let (mut violations, mut margin, mut chi0): (usize, f64, f64) = (0, f64::INFINITY, 0.0);
    for k in 0..states {
        let sc = random_sc_with(&mut rng, 2, 2).expect("valid");
        let r = er_equals_dr_check(&sc, samples, s.seed.wrapping_add(k as u64), 2.0).expect("2q");
        violations += r.violations;
        margin = margin.min(r.margin);
        let closed = discord_relative_entropy(&sc, 2.0).expect("2q").closed_form;
        chi0 = chi0.max((r.chi0_value - closed).abs());
    }
    s.property(
        11,
        "relative_entanglement.sampled_violations",
        "E_R = D_R: no separable state is closer than chi0",
        violations as f64,
        0.0,
        violations == 0,
        format!("{states} states x {samples} samples"),
    );
    s.property(
        11,
        "relative_entanglement.sampled_margin",
        "E_R = D_R: smallest sampled S(rho||sigma) - D_R",
        margin,
        -1e-6,
        margin >= -1e-6,
        format!("{states} states"),
    );
    s.property(
        11,
        "relative_entanglement.chi0_attains",
        "the separable state chi0 attains D_R",
        chi0,
        1e-10,
        chi0 < 1e-10,
        format!("{states} states, largest gap"),
    );
}

fn criterion_12(s: &mut Suite) {
    let same_sample = (0..20).all(|i| sample_separable_state(s.seed, i) == sample_separable_state(s.seed, i));
    let sc = random_sc_with(&mut s.rng(12), 2, 2).expect("valid");
    let other = random_sc_with(&mut s.rng(12), 2, 2).expect("valid");
    let rho = sc.embed();
    let a = brute_force_lu_search(&rho, &other.embed(), 3, s.seed).expect("same dims");
    let b = brute_force_lu_search(&rho, &other.embed(), 3, s.seed).expect("same dims");
    let same_search = a.residual.to_bits() == b.residual.to_bits() && a.u1 == b.u1 && a.u2 == b.u2 && sc == other;
    s.property(
        12,
        "determinism.seeded_streams",
        "seeded samplers and searches repeat exactly",
        if same_sample && same_search { 1.0 } else { 0.0 },
        0.0,
        same_sample && same_search,
        format!("separable sampler repeats: {same_sample}; restart search repeats: {same_search}"),
    );
}

/// Runs every check. The report depends only on `seed`.
pub fn run_verify_suite(seed: u64) -> VerifyReport {
    let mut suite = Suite {
        seed,
        checks: Vec::new(),
    };
    criterion_1(&mut suite);
    criterion_2(&mut suite);
    criterion_3(&mut suite);
    criterion_4(&mut suite);
    criterion_5(&mut suite);
    criterion_6(&mut suite);
    criterion_7(&mut suite);
    criterion_8(&mut suite);
    criterion_9(&mut suite);
    criterion_10(&mut suite);
    criterion_11(&mut suite);
    criterion_12(&mut suite);
    suite.finish()
}
