//! Subcommand bodies. Each returns a JSON value; rendering and exit codes
//! are left to the binary.

use lueq::canonical::{
    general_forms_match, sc_lu_equivalent, sc_separability, standard_form_2q, standard_form_general, COMPARISON_TOL,
};
use lueq::correlations::{correlation_report, CorrelationReportOptions};
use lueq::equivalence::{
    brute_force_lu_search, conjugation_residual, nondegenerate_lu_test, separating_invariant, EquivalenceVerdict,
    PhaseSearchOptions, VerdictStatus, SPECTRAL_TOL, VERIFICATION_TOL,
};
use lueq::invariants::{compare_pure, invariants_i, representation_of, schmidt_spectrum};
use lueq::linalg::{eigvalsh, kron_all, partial_transpose};
use lueq::states::{conjugate_by_locals, random_density_with, random_pure_with, random_sc_with};
use lueq::{BipartiteDims, ComplexMatrix, DensityMatrix, SCCoefficients, Subsystem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::output::{matrix, num, nums};
use crate::state_file::{LabeledState, ParseError, State, StateFile};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    State(#[from] lueq::Error),
}

impl CommandError {
    pub fn input(msg: impl Into<String>) -> Self {
        CommandError::Input(msg.into())
    }
}

pub fn load_state(path: &str) -> Result<LabeledState, CommandError> {
    let bytes = std::fs::read(path).map_err(|e| CommandError::Io(format!("{path}: {e}")))?;
    crate::state_file::parse_state_file(&bytes).map_err(|source| CommandError::Parse {
        path: path.into(),
        source,
    })
}

fn require_sc(state: &State) -> Result<&SCCoefficients, CommandError> {
    match state {
        State::Sc(sc) => Ok(sc),
        other => Err(CommandError::input(format!(
            "expected an SC state (sc2q or sc), got {}",
            other.kind()
        ))),
    }
}

fn witness_json(unitaries: &[ComplexMatrix]) -> Value {
    Value::Array(unitaries.iter().map(matrix).collect())
}

pub fn canon(state: &State) -> Result<Value, CommandError> {
    let sc = require_sc(state)?;
    if sc.is_two_qubit() {
        let f = standard_form_2q(sc)?;
        let moved = conjugate_by_locals(&sc.embed(), &f.witness)?;
        let residual = (moved.mat() - f.coefficients().embed().mat()).norm();
        return Ok(json!({
            "kind": "sc2q",
            "standard_form": nums(&f.triple()),
            "witness": witness_json(&f.witness),
            "witness_residual": num(residual),
        }));
    }
    let g = standard_form_general(sc)?;
    let phases: Vec<Value> = g
        .residual_phases
        .iter()
        .map(|p| json!({"m": p.m, "n": p.n, "phi": num(p.phi)}))
        .collect();
    Ok(json!({
        "kind": "sc",
        "levels": sc.levels(),
        "parties": sc.parties(),
        "canonical": matrix(g.canonical.matrix()),
        "residual_phases": phases,
        "permutation": g.permutation,
        "gauge_phases": nums(&g.gauge_phases),
        "witness": witness_json(&g.witness),
    }))
}

/// Schmidt-spectrum tolerance for pure inputs.
pub const PURE_TOL: f64 = 1e-9;
/// Partial-transpose eigenvalues above `−SEPARABILITY_TOL` count as non-negative.
pub const SEPARABILITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct EquivOptions {
    /// Overrides the route's default tolerance.
    pub tol: Option<f64>,
    pub restarts: usize,
    pub seed: u64,
}

fn verdict_json(route: &str, v: &EquivalenceVerdict) -> Value {
    let mut out = Map::new();
    out.insert("route".into(), json!(route));
    out.insert("status".into(), json!(v.status().to_string()));
    if let Some(r) = v.residual() {
        out.insert("residual".into(), num(r));
    }
    if let Some((u1, u2)) = v.witness() {
        out.insert("witness".into(), witness_json(&[u1.clone(), u2.clone()]));
    }
    if let Some(c) = v.certificate() {
        out.insert("certificate".into(), json!(c));
    }
    if let Some(n) = v.note() {
        out.insert("note".into(), json!(n));
    }
    Value::Object(out)
}

fn sc_route(a: &SCCoefficients, b: &SCCoefficients, tol: f64) -> Result<Value, CommandError> {
    if a.levels() != b.levels() || a.parties() != b.parties() {
        return Err(CommandError::input(format!(
            "SC states on different spaces: {} levels x {} parties vs {} x {}",
            a.levels(),
            a.parties(),
            b.levels(),
            b.parties()
        )));
    }
    let (equivalent, witnesses) = if a.is_two_qubit() {
        let (fa, fb) = (standard_form_2q(a)?, standard_form_2q(b)?);
        let w: Vec<ComplexMatrix> = fa
            .witness
            .iter()
            .zip(&fb.witness)
            .map(|(x, y)| y.adjoint() * x)
            .collect();
        (sc_lu_equivalent(a, b, tol)?, w)
    } else {
        let (ga, gb) = (standard_form_general(a)?, standard_form_general(b)?);
        let w: Vec<ComplexMatrix> = ga
            .witness
            .iter()
            .zip(&gb.witness)
            .map(|(x, y)| y.adjoint() * x)
            .collect();
        (general_forms_match(a, b, tol)?, w)
    };
    if !equivalent {
        return Ok(json!({
            "route": "sc-standard-form",
            "status": VerdictStatus::NotEquivalent.to_string(),
            "certificate": "standard forms differ",
        }));
    }
    let w = kron_all(&witnesses);
    let residual = (&w * a.embed().mat() * w.adjoint() - b.embed().mat()).norm();
    Ok(json!({
        "route": "sc-standard-form",
        "status": VerdictStatus::Equivalent.to_string(),
        "residual": num(residual),
        "witness": witness_json(&witnesses),
    }))
}

pub fn equiv(a: &State, b: &State, opts: &EquivOptions) -> Result<Value, CommandError> {
    match (a, b) {
        (State::Sc(x), State::Sc(y)) => return sc_route(x, y, opts.tol.unwrap_or(COMPARISON_TOL)),
        (State::Pure(x), State::Pure(y)) => {
            let cmp = compare_pure(x, y, opts.tol.unwrap_or(PURE_TOL))?;
            let status = match (cmp.by_spectrum, cmp.by_invariants) {
                (true, true) => VerdictStatus::Equivalent,
                (false, false) => VerdictStatus::NotEquivalent,
                _ => VerdictStatus::Inconclusive,
            };
            return Ok(json!({
                "route": "schmidt-spectrum",
                "status": status.to_string(),
                "spectrum_gap": num(cmp.spectrum_gap),
                "invariant_gap": num(cmp.invariant_gap),
            }));
        }
        _ => {}
    }
    let (rho, rho2) = (a.density(), b.density());
    let (da, db) = (rho.bipartite_dims()?, rho2.bipartite_dims()?);
    if da != db {
        return Err(CommandError::input(format!(
            "states live on different spaces: {da:?} vs {db:?}"
        )));
    }
    let tol = opts.tol.unwrap_or(SPECTRAL_TOL);
    if let Some(cert) = separating_invariant(&rho, &rho2, tol)? {
        return Ok(verdict_json("invariants", &EquivalenceVerdict::not_equivalent(cert)));
    }
    let phase = nondegenerate_lu_test(
        &rho,
        &rho2,
        &PhaseSearchOptions {
            spectral_tol: tol,
            seed: opts.seed,
            ..Default::default()
        },
    )?;
    if phase.status() != VerdictStatus::Inconclusive {
        return Ok(verdict_json("phase-search", &phase));
    }
    let search = brute_force_lu_search(&rho, &rho2, opts.restarts, opts.seed)?;
    let residual = conjugation_residual(rho.mat(), rho2.mat(), &search.u1, &search.u2);
    let verdict = if residual < VERIFICATION_TOL {
        EquivalenceVerdict::equivalent(search.u1, search.u2, residual)
    } else {
        EquivalenceVerdict::inconclusive(
            Some(residual),
            format!(
                "{}; direct search over {} restarts did not reach {VERIFICATION_TOL:e}",
                phase.note().unwrap_or("phase search inconclusive"),
                opts.restarts
            ),
        )
    };
    Ok(verdict_json("direct-search", &verdict))
}

fn density_invariants(rho: &DensityMatrix) -> Result<Value, CommandError> {
    let mut out = Map::new();
    out.insert("eigenvalues".into(), nums(&rho.eigenvalues()));
    out.insert("purity".into(), num(rho.purity_moment(2)));
    if rho.bipartite_dims().is_ok() {
        out.insert(
            "reduced_spectrum_a".into(),
            nums(&rho.reduced(Subsystem::B)?.eigenvalues()),
        );
        out.insert(
            "reduced_spectrum_b".into(),
            nums(&rho.reduced(Subsystem::A)?.eigenvalues()),
        );
        let rep = representation_of(rho)?;
        out.insert("degenerate".into(), json!(rep.degenerate));
        let records: Vec<Value> = rep
            .records
            .iter()
            .map(|r| json!({"eigenvalue": num(r.eigenvalue), "schmidt_coefficients": nums(&r.schmidt.coefficients)}))
            .collect();
        out.insert("representation".into(), Value::Array(records));
    }
    Ok(Value::Object(out))
}

pub fn invariants(state: &State) -> Result<Value, CommandError> {
    match state {
        State::Pure(psi) => {
            let d = psi.dims();
            let spectrum = schmidt_spectrum(psi);
            Ok(json!({
                "kind": "pure",
                "dims": [d.dim_a, d.dim_b],
                "schmidt_coefficients": nums(&spectrum),
                "schmidt_rank": spectrum.iter().filter(|&&m| m >= lueq::invariants::SCHMIDT_ZERO).count(),
                "i_alpha": nums(&invariants_i(psi, d.dim_a.min(d.dim_b))),
            }))
        }
        other => {
            let mut v = density_invariants(&other.density())?;
            v["kind"] = json!(other.kind());
            Ok(v)
        }
    }
}

pub fn correlations(state: &State, log_base: f64, samples: usize, seed: u64) -> Result<Value, CommandError> {
    let sc = require_sc(state)?;
    sc.require_two_qubit()?;
    let r = correlation_report(
        sc,
        &CorrelationReportOptions {
            log_base,
            separable_samples: samples,
            seed,
        },
    )?;
    Ok(json!({
        "log_base": num(r.log_base),
        "mutual_information": num(r.mutual_information),
        "measured": {
            "c_m": num(r.c_m_oracle),
            "d_m": num(r.d_m_oracle),
        },
        "closed_form": {
            "c_m": num(r.c_m_closed_form),
            "d_m": num(r.d_m_closed_form),
            "d_r": num(r.d_r_closed_form),
            "c_r": num(r.c_r_closed_form),
        },
        "direct": {
            "d_r": num(r.d_r),
            "c_r": num(r.c_r_direct),
            "product_minimum": num(r.product_minimum),
            "e_r_sampled_bound": num(r.e_r_bound),
        },
        "delta": {
            "c_m": num(r.delta_c_m),
            "d_m": num(r.delta_d_m),
            "d_r": num(r.delta_d_r),
            "c_r": num(r.delta_c_r),
        },
        "separable_samples": samples,
    }))
}

pub fn separable(state: &State, tol: f64) -> Result<Value, CommandError> {
    match state {
        State::Sc(sc) => {
            let r = sc_separability(sc, tol)?;
            Ok(json!({
                "test": "sc-coherence",
                "separable": r.separable,
                "conclusive": true,
                "max_offdiag": num(r.max_offdiag),
                "pt_min_eigenvalue": num(r.pt_min_eigenvalue),
            }))
        }
        State::Pure(psi) => {
            let rank = schmidt_spectrum(psi)
                .iter()
                .filter(|&&m| m >= lueq::invariants::SCHMIDT_ZERO)
                .count();
            Ok(json!({
                "test": "schmidt-rank",
                "separable": rank == 1,
                "conclusive": true,
                "schmidt_rank": rank,
            }))
        }
        State::Density(rho) => {
            let dims = rho.bipartite_dims()?;
            let pt = partial_transpose(rho.mat(), dims, Subsystem::B)?;
            let min = eigvalsh(&pt).last().copied().unwrap_or(0.0);
            let ppt = min >= -tol;
            // PPT characterises separability only up to 2x3
            let conclusive = dims.total() <= 6 || !ppt;
            Ok(json!({
                "test": "ppt",
                "separable": if conclusive { json!(ppt) } else { Value::Null },
                "conclusive": conclusive,
                "ppt": ppt,
                "pt_min_eigenvalue": num(min),
            }))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RandomKind {
    Sc2q,
    Sc,
    Density,
    Pure,
}

pub fn random(
    kind: RandomKind,
    seed: u64,
    levels: usize,
    parties: usize,
    dims: [usize; 2],
    label: Option<String>,
) -> Result<StateFile, CommandError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bip = || BipartiteDims::new(dims[0], dims[1]);
    let state = match kind {
        RandomKind::Sc2q => State::Sc(random_sc_with(&mut rng, 2, 2)?),
        RandomKind::Sc => State::Sc(random_sc_with(&mut rng, levels, parties)?),
        RandomKind::Density => State::Density(random_density_with(&mut rng, bip()?)),
        RandomKind::Pure => State::Pure(random_pure_with(&mut rng, bip()?)),
    };
    Ok(StateFile::from_state(&state, label))
}
