//! Correlation measures for two-qubit states, with emphasis on SC states.
//!
//! Every closed-form expression here is paired with a direct computation:
//! measurement-based quantities come from an optimiser over the Bloch sphere
//! of party B, relative-entropy quantities from eigendecompositions. The
//! closed forms are evaluated as stated and reported next to the direct
//! values; they are not corrected.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::entropy::{binary_entropy, neg_xlogx, relative_entropy, von_neumann_entropy};
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{
    c, cr, diag_real, eigvalsh, identity, kron, partial_trace, BipartiteDims, ComplexMatrix, Subsystem,
};
use crate::optim::{golden_section_max, nelder_mead_restarted, NelderMeadOptions};
use crate::states::{DensityMatrix, SCCoefficients};

/// Probabilities at or below this are dropped from conditional ensembles.
pub const PROBABILITY_CUTOFF: f64 = 1e-12;

/// `V = tI + i y·σ` with `t² + |y|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementParams {
    pub t: f64,
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl MeasurementParams {
    pub fn new(t: f64, y1: f64, y2: f64, y3: f64) -> Result<Self> {
        if ![t, y1, y2, y3].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = t * t + y1 * y1 + y2 * y2 + y3 * y3;
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { t, y1, y2, y3 })
    }

    /// Measurement whose outcome-0 projector has Bloch vector
    /// `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn from_bloch_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self {
            t: c,
            y1: s * phi.sin(),
            y2: -s * phi.cos(),
            y3: 0.0,
        }
    }

    /// `x = t² + y₃² − y₁² − y₂²`, the z-component of the outcome-0 axis.
    pub fn x(&self) -> f64 {
        self.t * self.t + self.y3 * self.y3 - self.y1 * self.y1 - self.y2 * self.y2
    }

    pub fn unitary(&self) -> ComplexMatrix {
        // tI + i(y₁σ₁ + y₂σ₂ + y₃σ₃)
        ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                c(self.t, self.y3),
                c(self.y2, self.y1),
                c(-self.y2, self.y1),
                c(self.t, -self.y3),
            ],
        )
    }
}

/// `B_k = V Π_k V†` for `k = 0, 1`.
pub fn measurement_projectors(p: &MeasurementParams) -> [ComplexMatrix; 2] {
    let v = p.unitary();
    let pi0 = diag_real(&[1.0, 0.0]);
    let pi1 = diag_real(&[0.0, 1.0]);
    [&v * pi0 * v.adjoint(), &v * pi1 * v.adjoint()]
}

#[derive(Debug, Clone)]
pub struct ConditionalOutcome {
    pub k: usize,
    pub probability: f64,
    pub state: DensityMatrix,
}

fn check_projectors(b: &[ComplexMatrix], dim: usize) -> Result<()> {
    for p in b {
        if p.nrows() != dim || p.ncols() != dim {
            return Err(dim_mismatch(
                format!("{dim}x{dim}"),
                format!("{}x{}", p.nrows(), p.ncols()),
            ));
        }
        if (p * p - p).norm() > 1e-9 || (p - p.adjoint()).norm() > 1e-9 {
            return Err(Error::InvalidInput(
                "measurement operator is not an orthogonal projector".into(),
            ));
        }
    }
    let sum = b.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, p| acc + p);
    if (sum - identity(dim)).norm() > 1e-9 {
        return Err(Error::InvalidInput("projectors do not sum to the identity".into()));
    }
    Ok(())
}

/// `p_k = tr (I⊗B_k) ρ (I⊗B_k)` and `ρ_k = (I⊗B_k) ρ (I⊗B_k) / p_k`,
/// computed from the definition. Outcomes with `p_k ≤ 1e-12` are omitted.
pub fn conditional_ensemble(rho: &DensityMatrix, b: &[ComplexMatrix]) -> Result<Vec<ConditionalOutcome>> {
    let dims = rho.bipartite_dims()?;
    check_projectors(b, dims.dim_b)?;
    let mut out = Vec::with_capacity(b.len());
    for (k, bk) in b.iter().enumerate() {
        let op = kron(&identity(dims.dim_a), bk);
        let unnormalised = &op * rho.mat() * &op;
        let p = crate::linalg::trace(&unnormalised).re;
        if p <= PROBABILITY_CUTOFF {
            continue;
        }
        let m = unnormalised.unscale(p);
        let m = (&m + m.adjoint()).scale(0.5);
        out.push(ConditionalOutcome {
            k,
            probability: p,
            state: DensityMatrix::bipartite(m, dims)?,
        });
    }
    Ok(out)
}

/// `p₀ = (1 + (c₁ − c₄) x) / 2`.
pub fn sc_outcome_probability(sc: &SCCoefficients, x: f64) -> Result<f64> {
    sc.require_two_qubit()?;
    Ok(0.5 * (1.0 + (sc.c1() - sc.c4()) * x))
}

/// The closed-form conditional state
/// `ρ_k = ½(I + a_k σ₃) ⊗ V Π_k V†` with `a₀ = (d + x)/(1 + d x)`,
/// `a₁ = (d − x)/(1 − d x)`, `d = c₁ − c₄`. It carries no `c₂` dependence.
pub fn sc_closed_form_conditional_state(sc: &SCCoefficients, p: &MeasurementParams, k: usize) -> Result<ComplexMatrix> {
    sc.require_two_qubit()?;
    if k > 1 {
        return Err(Error::InvalidInput(format!("outcome index must be 0 or 1, got {k}")));
    }
    let d = sc.c1() - sc.c4();
    let x = p.x();
    let a = if k == 0 {
        (d + x) / (1.0 + d * x)
    } else {
        (d - x) / (1.0 - d * x)
    };
    let part_a = diag_real(&[0.5 * (1.0 + a), 0.5 * (1.0 - a)]);
    Ok(kron(&part_a, &measurement_projectors(p)[k]))
}

/// Largest Frobenius distance between the directly computed conditional
/// states and the closed-form ones, over outcomes with non-negligible weight.
pub fn conditional_state_mismatch(sc: &SCCoefficients, p: &MeasurementParams) -> Result<f64> {
    let outcomes = conditional_ensemble(&sc.embed(), &measurement_projectors(p))?;
    let mut worst: f64 = 0.0;
    for o in outcomes {
        let closed = sc_closed_form_conditional_state(sc, p, o.k)?;
        worst = worst.max((o.state.mat() - closed).norm());
    }
    Ok(worst)
}

/// `I(ρ) = S(ρ_A) + S(ρ_B) − S(ρ)`.
pub fn mutual_information(rho: &DensityMatrix, log_base: f64) -> Result<f64> {
    let dims = rho.bipartite_dims()?;
    let sa = crate::entropy::shannon_entropy(&eigvalsh(&partial_trace(rho.mat(), dims, Subsystem::B)?), log_base);
    let sb = crate::entropy::shannon_entropy(&eigvalsh(&partial_trace(rho.mat(), dims, Subsystem::A)?), log_base);
    Ok((sa + sb - von_neumann_entropy(rho, log_base)).max(0.0))
}

/// Entropy of a 2x2 positive matrix after normalisation.
fn qubit_entropy(m: &ComplexMatrix, log_base: f64) -> f64 {
    let tr = m[(0, 0)].re + m[(1, 1)].re;
    if tr <= 0.0 {
        return 0.0;
    }
    let det = (m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr()) / (tr * tr);
    let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
    binary_entropy(0.5 * (1.0 + disc), log_base)
}

#[derive(Debug, Clone, Copy)]
pub struct MeasurementSearchOptions {
    pub theta_points: usize,
    pub phi_points: usize,
    /// Grid points refined by coordinate golden-section search.
    pub refine_top: usize,
    pub refine_cycles: usize,
    pub log_base: f64,
}

impl Default for MeasurementSearchOptions {
    fn default() -> Self {
        Self {
            theta_points: 24,
            phi_points: 48,
            refine_top: 4,
            refine_cycles: 2,
            log_base: crate::entropy::DEFAULT_LOG_BASE,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MeasuredCorrelation {
    pub c_m: f64,
    pub d_m: f64,
    pub mutual_information: f64,
    pub theta: f64,
    pub phi: f64,
    pub argmax: MeasurementParams,
}

/// `C_M = sup I(ρ|{B_k})` over rank-one projective measurements on B, and
/// `D_M = I(ρ) − C_M`. Two-qubit states only.
pub fn classical_correlation_measured(
    rho: &DensityMatrix,
    opts: &MeasurementSearchOptions,
) -> Result<MeasuredCorrelation> {
    let dims = rho.bipartite_dims()?;
    if dims != BipartiteDims::qubits() {
        return Err(dim_mismatch("2x2 subsystems", format!("{}x{}", dims.dim_a, dims.dim_b)));
    }
    let base = opts.log_base;
    let r = rho.mat();
    let s_a = qubit_entropy(&partial_trace(r, dims, Subsystem::B)?, base);

    let info = |theta: f64, phi: f64| -> f64 {
        // S(ρ_A) − Σ p_k S(ρ_k); the A-part conditioned on |b⟩ is ⟨b|ρ|b⟩_B.
        // The partner of (cos θ/2, e^{iφ} sin θ/2) is (−e^{−iφ} sin θ/2, cos θ/2).
        let (st, ct) = (theta / 2.0).sin_cos();
        let b0 = [cr(ct), Complex64::from_polar(st, phi)];
        let b1 = [Complex64::from_polar(-st, -phi), cr(ct)];
        let mut cond = 0.0;
        for b in [b0, b1] {
            let block = ComplexMatrix::from_fn(2, 2, |i, j| {
                let mut z = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    for l in 0..2 {
                        z += b[k].conj() * r[(2 * i + k, 2 * j + l)] * b[l];
                    }
                }
                z
            });
            let p = block[(0, 0)].re + block[(1, 1)].re;
            if p > PROBABILITY_CUTOFF {
                cond += p * qubit_entropy(&block, base);
            }
        }
        s_a - cond
    };

    let nt = opts.theta_points.max(2);
    let np = opts.phi_points.max(1);
    let dt = std::f64::consts::PI / (nt - 1) as f64;
    let dp = std::f64::consts::TAU / np as f64;
    let mut grid: Vec<(f64, f64, f64)> = (0..nt)
        .flat_map(|i| (0..np).map(move |j| (i as f64 * dt, j as f64 * dp)))
        .map(|(t, p)| (info(t, p), t, p))
        .collect();
    grid.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));

    let mut best = grid[0];
    for &(v0, t0, p0) in grid.iter().take(opts.refine_top.max(1)) {
        let (mut v, mut t, mut p) = (v0, t0, p0);
        let (mut wt, mut wp) = (dt, dp);
        for _ in 0..opts.refine_cycles.max(1) {
            let (lo, hi) = ((t - wt).max(0.0), (t + wt).min(std::f64::consts::PI));
            let (tn, vt) = golden_section_max(&mut |x| info(x, p), lo, hi, 1e-10);
            if vt > v {
                t = tn;
                v = vt;
            }
            let (pn, vp) = golden_section_max(&mut |y| info(t, y), p - wp, p + wp, 1e-10);
            if vp > v {
                p = pn;
                v = vp;
            }
            wt *= 0.5;
            wp *= 0.5;
        }
        if v > best.0 {
            best = (v, t, p);
        }
    }
    let polished = nelder_mead_restarted(
        &mut |x: &[f64]| -info(x[0].clamp(0.0, std::f64::consts::PI), x[1]),
        &[best.1, best.2],
        &NelderMeadOptions {
            initial_step: 0.25 * dt,
            x_tol: 1e-11,
            ..Default::default()
        },
        2,
    );
    if -polished.value > best.0 {
        best = (
            -polished.value,
            polished.x[0].clamp(0.0, std::f64::consts::PI),
            polished.x[1],
        );
    }
    let (c_m, theta, phi) = best;
    let c_m = c_m.max(0.0);
    let mi = mutual_information(rho, base)?;
    Ok(MeasuredCorrelation {
        c_m,
        d_m: mi - c_m,
        mutual_information: mi,
        theta,
        phi: phi.rem_euclid(std::f64::consts::TAU),
        argmax: MeasurementParams::from_bloch_angles(theta, phi),
    })
}

/// `Δ = 1 − 4c₁c₄ + 4|c₂|²`.
pub fn sc_delta(sc: &SCCoefficients) -> Result<f64> {
    sc.require_two_qubit()?;
    Ok(1.0 - 4.0 * sc.c1() * sc.c4() + 4.0 * sc.c2().norm_sqr())
}

/// `S(ρ) = h((1 + √Δ)/2)` for a two-qubit SC state.
pub fn entropy_via_delta(sc: &SCCoefficients, log_base: f64) -> Result<f64> {
    let delta = sc_delta(sc)?;
    if !(-1e-12..=1.0 + 1e-12).contains(&delta) {
        return Err(Error::InvalidInput(format!("delta {delta} outside [0, 1]")));
    }
    let root = delta.clamp(0.0, 1.0).sqrt();
    Ok(binary_entropy(0.5 * (1.0 + root), log_base))
}

/// Closed-form values as stated for two-qubit SC states, evaluated without
/// correction. `S(ρ)` enters through [`entropy_via_delta`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormValues {
    /// Claimed measurement-based classical correlation (always zero).
    pub c_m: f64,
    /// Claimed `inf Σ p_k S(ρ_k) = −(c₁ log c₁ + c₄ log c₄)`.
    pub inf_conditional_entropy: f64,
    /// `−2(c₁ log c₁ + c₄ log c₄) − S(ρ)`.
    pub d_m: f64,
    /// `−(c₁ log c₁ + c₄ log c₄) − S(ρ)`.
    pub d_r: f64,
    /// `−2(c₁² log c₁ + c₄² log c₄) − S(ρ)`.
    pub c_r: f64,
}

pub fn sc_closed_forms(sc: &SCCoefficients, log_base: f64) -> Result<ClosedFormValues> {
    let s = entropy_via_delta(sc, log_base)?;
    let (c1, c4) = (sc.c1(), sc.c4());
    let h = neg_xlogx(c1, log_base) + neg_xlogx(c4, log_base);
    // −c² log c = c · (−c log c)
    let squared = c1 * neg_xlogx(c1, log_base) + c4 * neg_xlogx(c4, log_base);
    Ok(ClosedFormValues {
        c_m: 0.0,
        inf_conditional_entropy: h,
        d_m: 2.0 * h - s,
        d_r: h - s,
        c_r: 2.0 * squared - s,
    })
}

/// `χ₀ = c₁|00⟩⟨00| + c₄|11⟩⟨11|`.
pub fn closest_classical_state(sc: &SCCoefficients) -> Result<DensityMatrix> {
    sc.require_two_qubit()?;
    DensityMatrix::bipartite(diag_real(&[sc.c1(), 0.0, 0.0, sc.c4()]), BipartiteDims::qubits())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeEntropyDiscord {
    pub closed_form: f64,
    /// `S(ρ‖χ₀)` by eigendecomposition.
    pub direct: f64,
}

pub fn discord_relative_entropy(sc: &SCCoefficients, log_base: f64) -> Result<RelativeEntropyDiscord> {
    let chi = closest_classical_state(sc)?;
    Ok(RelativeEntropyDiscord {
        closed_form: sc_closed_forms(sc, log_base)?.d_r,
        direct: relative_entropy(&sc.embed(), &chi, log_base)?,
    })
}

/// `σ = (I + r·σ)/2`.
fn qubit_from_bloch(r: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            cr(0.5 * (1.0 + r[2])),
            c(0.5 * r[0], -0.5 * r[1]),
            c(0.5 * r[0], 0.5 * r[1]),
            cr(0.5 * (1.0 - r[2])),
        ],
    )
}

fn bloch_of(m: &ComplexMatrix) -> [f64; 3] {
    [2.0 * m[(1, 0)].re, 2.0 * m[(1, 0)].im, (m[(0, 0)] - m[(1, 1)]).re]
}

/// Maps an unconstrained vector into the open unit ball.
fn ball(u: &[f64]) -> [f64; 3] {
    let s = (1.0 + u.iter().map(|v| v * v).sum::<f64>()).sqrt();
    [u[0] / s, u[1] / s, u[2] / s]
}

/// `tr ρ log σ` for a qubit `σ` with Bloch vector `r`, given `ρ`'s Bloch vector `a`.
fn qubit_cross_entropy(a: [f64; 3], r: [f64; 3], ln_base: f64) -> f64 {
    let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let proj = if len > 0.0 {
        (a[0] * r[0] + a[1] * r[1] + a[2] * r[2]) / len
    } else {
        0.0
    };
    let lp = (0.5 * (1.0 + len)).ln();
    let lm = (0.5 * (1.0 - len)).ln();
    (0.5 * (1.0 + proj) * lp + 0.5 * (1.0 - proj) * lm) / ln_base
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeClassicalCorrelation {
    /// `S(ρ‖π₀)` with `π₀ = (c₁|0⟩⟨0| + c₄|1⟩⟨1|)^{⊗2}`.
    pub c_r_direct: f64,
    pub c_r_closed_form: f64,
    /// Numerical minimum of `S(ρ‖σ_A⊗σ_B)` over product states.
    pub product_minimum: f64,
    pub argmin_a: [f64; 3],
    pub argmin_b: [f64; 3],
    pub mutual_information: f64,
}

/// Minimises `S(ρ‖σ_A⊗σ_B)` over product states of two qubits; returns the
/// minimum (re-evaluated on the full 4x4 matrices) and the minimising Bloch vectors.
pub fn product_state_minimum(rho: &DensityMatrix, log_base: f64) -> Result<(f64, [f64; 3], [f64; 3])> {
    let dims = rho.bipartite_dims()?;
    if dims != BipartiteDims::qubits() {
        return Err(dim_mismatch("2x2 subsystems", format!("{}x{}", dims.dim_a, dims.dim_b)));
    }
    let ln_base = log_base.ln();
    let a = bloch_of(&partial_trace(rho.mat(), dims, Subsystem::B)?);
    let b = bloch_of(&partial_trace(rho.mat(), dims, Subsystem::A)?);
    let s = von_neumann_entropy(rho, log_base);
    let mut objective = |u: &[f64]| -> f64 {
        -s - qubit_cross_entropy(a, ball(&u[..3]), ln_base) - qubit_cross_entropy(b, ball(&u[3..]), ln_base)
    };
    let opts = NelderMeadOptions {
        max_evals: 6000,
        initial_step: 0.7,
        ..Default::default()
    };
    let starts: [[f64; 6]; 4] = [
        [0.0; 6],
        [0.8, -0.3, 0.5, -0.6, 0.2, 0.4],
        [-0.5, 0.5, -0.9, 0.3, -0.7, -0.2],
        [0.0, 0.0, 2.0, 0.0, 0.0, -2.0],
    ];
    let best = starts
        .iter()
        .map(|x0| nelder_mead_restarted(&mut objective, x0, &opts, 3))
        .min_by(|p, q| p.value.total_cmp(&q.value))
        .expect("non-empty start list");
    let (ra, rb) = (ball(&best.x[..3]), ball(&best.x[3..]));
    let sigma = DensityMatrix::bipartite(kron(&qubit_from_bloch(ra), &qubit_from_bloch(rb)), dims)?;
    Ok((relative_entropy(rho, &sigma, log_base)?, ra, rb))
}

pub fn classical_correlation_relative(sc: &SCCoefficients, log_base: f64) -> Result<RelativeClassicalCorrelation> {
    sc.require_two_qubit()?;
    let rho = sc.embed();
    let local = diag_real(&[sc.c1(), sc.c4()]);
    let pi0 = DensityMatrix::bipartite(kron(&local, &local), BipartiteDims::qubits())?;
    let (product_minimum, argmin_a, argmin_b) = product_state_minimum(&rho, log_base)?;
    Ok(RelativeClassicalCorrelation {
        c_r_direct: relative_entropy(&rho, &pi0, log_base)?,
        c_r_closed_form: sc_closed_forms(sc, log_base)?.c_r,
        product_minimum,
        argmin_a,
        argmin_b,
        mutual_information: mutual_information(&rho, log_base)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparableSamplingCheck {
    pub d_r: f64,
    /// Smallest `S(ρ‖σ)` over the sampled separable `σ`.
    pub sampled_minimum: f64,
    /// `sampled_minimum − d_r`; negative values refute the claim.
    pub margin: f64,
    /// `S(ρ‖χ₀)`, attained by a separable state.
    pub chi0_value: f64,
    /// Samples with `S(ρ‖σ) < d_r − 1e-6`.
    pub violations: usize,
}

fn random_qubit_projector<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let v: Vec<Complex64> = (0..2)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    ComplexMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj() / (norm * norm))
}

/// Sample `i` of the separable family: a mixture of 1–4 products of pure
/// qubit states with flat-Dirichlet weights, drawn from stream `i`.
pub fn sample_separable_state(seed: u64, index: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let terms = rng.random_range(1..=4);
    let weights: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(4, 4);
    for w in weights {
        let p = kron(&random_qubit_projector(&mut rng), &random_qubit_projector(&mut rng));
        m += p * cr(w / total);
    }
    let m = (&m + m.adjoint()).scale(0.5);
    DensityMatrix::bipartite(m, BipartiteDims::qubits()).expect("mixture of product states is a state")
}

/// Monte Carlo falsification test of `E_R = D_R`: no sampled separable
/// state may come closer to `ρ` than `χ₀`. Can refute, cannot prove.
pub fn er_equals_dr_check(
    sc: &SCCoefficients,
    samples: usize,
    seed: u64,
    log_base: f64,
) -> Result<SeparableSamplingCheck> {
    let d = discord_relative_entropy(sc, log_base)?;
    let rho = sc.embed();
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| relative_entropy(&rho, &sample_separable_state(seed, i), log_base).unwrap_or(f64::INFINITY))
        .collect();
    let sampled_minimum = values.iter().copied().fold(f64::INFINITY, f64::min);
    let violations = values.iter().filter(|&&v| v < d.direct - 1e-6).count();
    Ok(SeparableSamplingCheck {
        d_r: d.direct,
        sampled_minimum,
        margin: sampled_minimum - d.direct,
        chi0_value: d.direct,
        violations,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct CorrelationReportOptions {
    pub log_base: f64,
    pub separable_samples: usize,
    pub seed: u64,
}

impl Default for CorrelationReportOptions {
    fn default() -> Self {
        Self {
            log_base: crate::entropy::DEFAULT_LOG_BASE,
            separable_samples: 2000,
            seed: 0,
        }
    }
}

/// Direct values next to closed-form values for one two-qubit SC state.
#[derive(Debug, Clone, Copy)]
pub struct CorrelationReport {
    pub log_base: f64,
    pub mutual_information: f64,
    pub c_m_oracle: f64,
    pub d_m_oracle: f64,
    pub c_m_closed_form: f64,
    pub d_m_closed_form: f64,
    pub d_r: f64,
    pub d_r_closed_form: f64,
    pub c_r_direct: f64,
    pub c_r_closed_form: f64,
    pub product_minimum: f64,
    /// Smallest `S(ρ‖σ)` over the sampled separable `σ` and `χ₀`; an upper bound on `E_R`.
    pub e_r_bound: f64,
    pub delta_c_m: f64,
    pub delta_d_m: f64,
    pub delta_d_r: f64,
    pub delta_c_r: f64,
}

pub fn correlation_report(sc: &SCCoefficients, opts: &CorrelationReportOptions) -> Result<CorrelationReport> {
    let base = opts.log_base;
    let rho = sc.embed();
    let measured = classical_correlation_measured(
        &rho,
        &MeasurementSearchOptions {
            log_base: base,
            ..Default::default()
        },
    )?;
    let closed = sc_closed_forms(sc, base)?;
    let d_r = discord_relative_entropy(sc, base)?;
    let c_r = classical_correlation_relative(sc, base)?;
    let e_r = er_equals_dr_check(sc, opts.separable_samples, opts.seed, base)?;
    Ok(CorrelationReport {
        log_base: base,
        mutual_information: measured.mutual_information,
        c_m_oracle: measured.c_m,
        d_m_oracle: measured.d_m,
        c_m_closed_form: closed.c_m,
        d_m_closed_form: closed.d_m,
        d_r: d_r.direct,
        d_r_closed_form: d_r.closed_form,
        c_r_direct: c_r.c_r_direct,
        c_r_closed_form: c_r.c_r_closed_form,
        product_minimum: c_r.product_minimum,
        e_r_bound: e_r.sampled_minimum.min(e_r.chi0_value),
        delta_c_m: (closed.c_m - measured.c_m).abs(),
        delta_d_m: (closed.d_m - measured.d_m).abs(),
        delta_d_r: (d_r.closed_form - d_r.direct).abs(),
        delta_c_r: (c_r.c_r_closed_form - c_r.c_r_direct).abs(),
    })
}
