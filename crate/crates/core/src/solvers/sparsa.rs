use super::{ensure_finite, sq_norm, stop_check, Problem, Recorder, SolverConfig, SolverRun};
use crate::error::{OscarError, Result};
use crate::linalg::DenseMatrix;

/// SpaRSA: shrinkage steps with Barzilai-Borwein step lengths, each accepted only if it
/// strictly decreases the objective (otherwise `alpha` grows by `eta` and the step is retried).
pub fn solve_sparsa(a: &DenseMatrix, y: &[f64], config: &SolverConfig) -> Result<SolverRun> {
    let problem = Problem::new(a, y)?;
    super::solve(super::SolverKind::Sparsa, &problem, config)
}

pub(super) fn run(problem: &Problem<'_>, config: &SolverConfig) -> Result<SolverRun> {
    let opts = config.sparsa;
    let clamp = |alpha: f64| alpha.min(opts.alpha_max).max(opts.alpha_min);
    let n = problem.dim();

    let mut rec = Recorder::new(problem, config.max_iter);
    let mut x = vec![0.0; n];
    let mut ax = vec![0.0; problem.matrix().rows()];
    let mut h = problem.objective_with_ax(&x, &ax, config.params);
    rec.push(&x, h);

    // First step: the exact line-minimizing length of f along the gradient, not re-checked.
    let grad = problem.gradient_from_ax(&ax);
    let a_grad = problem.apply(&grad);
    let gg = sq_norm(&grad);
    let alpha0 = if gg > 0.0 {
        clamp(sq_norm(&a_grad) / gg)
    } else {
        clamp(1.0)
    };
    let x1 = config.prox.apply(
        &super::descend(&x, &grad, 1.0 / alpha0),
        config.params.scaled(1.0 / alpha0),
    );
    ensure_finite(&x1, 1)?;
    let ax1 = problem.apply(&x1);
    h = problem.objective_with_ax(&x1, &ax1, config.params);
    rec.push(&x1, h);
    let mut iterations = 1;
    let mut converged = stop_check(&x1, &x, config.tol);
    let mut x_prev = std::mem::replace(&mut x, x1);
    let mut ax_prev = std::mem::replace(&mut ax, ax1);

    while !converged && iterations < config.max_iter {
        let k = iterations + 1;
        let s: Vec<f64> = x.iter().zip(&x_prev).map(|(a, b)| a - b).collect();
        let ss = sq_norm(&s);
        if ss == 0.0 {
            converged = true;
            break;
        }
        let a_s: Vec<f64> = ax.iter().zip(&ax_prev).map(|(a, b)| a - b).collect();
        let mut alpha = clamp(sq_norm(&a_s) / ss);

        let grad = problem.gradient_from_ax(&ax);
        let (candidate, a_candidate, h_candidate) = loop {
            let step = 1.0 / alpha;
            let c = config
                .prox
                .apply(&super::descend(&x, &grad, step), config.params.scaled(step));
            ensure_finite(&c, k)?;
            let ac = problem.apply(&c);
            let hc = problem.objective_with_ax(&c, &ac, config.params);
            // a step that returns x_k itself means x_k is a fixed point; accept it so the
            // stopping rule fires
            if hc < h || c == x {
                break (c, ac, hc);
            }
            alpha *= opts.eta;
            if alpha > opts.alpha_max {
                return Err(OscarError::Stagnation {
                    iteration: k,
                    last: x,
                });
            }
        };

        rec.push(&candidate, h_candidate);
        iterations = k;
        converged = stop_check(&candidate, &x, config.tol);
        x_prev = std::mem::replace(&mut x, candidate);
        ax_prev = std::mem::replace(&mut ax, a_candidate);
        h = h_candidate;
    }

    Ok(rec.finish(x, iterations, converged))
}
