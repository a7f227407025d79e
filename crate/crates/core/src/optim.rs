//! Small local optimisers used by the searches and oracles: Nelder–Mead,
//! finite-difference Levenberg–Marquardt, and golden-section search.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when `f_worst - f_best` falls below this.
    pub f_tol: f64,
    /// Stop when the simplex diameter falls below this.
    pub x_tol: f64,
    pub initial_step: f64,
    /// Stop as soon as the best value drops below this.
    pub target: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            f_tol: 1e-15,
            x_tol: 1e-12,
            initial_step: 0.5,
            target: f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Adaptive Nelder–Mead (dimension-dependent coefficients).
pub fn nelder_mead(f: &mut impl FnMut(&[f64]) -> f64, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let n = x0.len();
    if n == 0 {
        let value = f(x0);
        return Minimum {
            x: vec![],
            value,
            evals: 1,
        };
    }
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let sort =
        |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    sort(&mut simplex);

    while evals < opts.max_evals {
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if best < opts.target {
            break;
        }
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (worst - best).abs() <= opts.f_tol || diameter <= opts.x_tol {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / nf)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = along(gamma);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst {
                let xc = along(rho * alpha);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = along(-rho);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < fr.min(worst) {
                simplex[n] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = x_best.iter().zip(&item.0).map(|(b, x)| b + sigma * (x - b)).collect();
                    let v = eval(&x, &mut evals);
                    *item = (x, v);
                }
            }
        }
        sort(&mut simplex);
    }
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evals }
}

/// Restarted Nelder–Mead: each restart rebuilds the simplex around the best
/// point found so far.
pub fn nelder_mead_restarted(
    f: &mut impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &NelderMeadOptions,
    restarts: usize,
) -> Minimum {
    let mut best = nelder_mead(f, x0, opts);
    let mut step = opts.initial_step;
    for _ in 0..restarts {
        if best.value < opts.target {
            break;
        }
        step *= 0.25;
        let o = NelderMeadOptions {
            initial_step: step,
            ..*opts
        };
        let next = nelder_mead(f, &best.x, &o);
        let evals = best.evals + next.evals;
        if next.value <= best.value {
            best = next;
        }
        best.evals = evals;
    }
    best
}

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iters: usize,
    pub fd_step: f64,
    /// Stop once `‖r‖` drops below this.
    pub residual_tol: f64,
    pub step_tol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iters: 200,
            fd_step: 1e-7,
            residual_tol: 1e-13,
            step_tol: 1e-15,
        }
    }
}

/// A least-squares problem whose parametrisation may be re-centred at every
/// accepted point (used for manifold-valued unknowns such as unitaries).
pub trait ResidualModel {
    fn residual(&self, x: &[f64]) -> Vec<f64>;

    /// Called with every accepted point; returns the parameters that represent
    /// the same point after re-centring. The default keeps them as they are.
    fn accept(&mut self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }
}

/// Levenberg–Marquardt with a central-difference Jacobian. Returns the final
/// parameters and residual norm.
pub fn levenberg_marquardt(model: &mut impl ResidualModel, x0: &[f64], opts: &LmOptions) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = DVector::from_vec(model.residual(&x));
    let mut cost = r.norm();
    let mut lambda = 1e-3;
    for _ in 0..opts.max_iters {
        if cost < opts.residual_tol {
            break;
        }
        let m = r.len();
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += opts.fd_step;
            xm[j] -= opts.fd_step;
            let rp = model.residual(&xp);
            let rm = model.residual(&xm);
            for i in 0..m {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * opts.fd_step);
            }
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * &r;
        let mut accepted = None;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for i in 0..n {
                a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
            }
            let Some(step) = a.lu().solve(&(-&g)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let ct = DVector::from_vec(model.residual(&trial)).norm();
            if ct < cost {
                accepted = Some((trial, step.norm(), cost - ct));
                lambda = (lambda * 0.3).max(1e-12);
                break;
            }
            lambda *= 10.0;
        }
        let Some((trial, step_norm, improvement)) = accepted else {
            break;
        };
        x = model.accept(&trial);
        r = DVector::from_vec(model.residual(&x));
        cost = r.norm();
        if step_norm < opts.step_tol || improvement < 1e-16 {
            break;
        }
    }
    (x, cost)
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
pub fn golden_section_max(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
