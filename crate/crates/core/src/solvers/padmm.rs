use super::{ensure_finite, stop_check, Problem, Recorder, SolverConfig, SolverRun};
use crate::error::Result;
use crate::linalg::DenseMatrix;

/// Preconditioned ADMM (first-order primal-dual) with equal primal and dual steps `1 / mu`.
///
/// The dual update uses the conjugate of `f(z) = 0.5 * ||y - z||^2`; its prox has the closed
/// form implemented by [`conjugate_quadratic_prox`].
pub fn solve_padmm(a: &DenseMatrix, y: &[f64], config: &SolverConfig) -> Result<SolverRun> {
    let problem = Problem::new(a, y)?;
    super::solve(super::SolverKind::Padmm, &problem, config)
}

/// `prox_{f*/mu}(q) = (mu q - y) / (mu + 1)` for `f(z) = 0.5 * ||y - z||^2`.
pub fn conjugate_quadratic_prox(q: &[f64], y: &[f64], mu: f64) -> Vec<f64> {
    q.iter()
        .zip(y)
        .map(|(qi, yi)| (mu * qi - yi) / (mu + 1.0))
        .collect()
}

pub(super) fn run(problem: &Problem<'_>, config: &SolverConfig) -> Result<SolverRun> {
    let mu = config.padmm.mu.unwrap_or_else(|| problem.padmm_mu());
    let params = config.params.scaled(1.0 / mu);
    let n = problem.dim();
    let m = problem.matrix().rows();
    let y = problem.observations();

    let mut rec = Recorder::new(problem, config.max_iter);
    // x_0 = d_0 = 0, v_0 = 0
    let mut x = vec![0.0; n];
    let mut ax = vec![0.0; m];
    let mut ad = vec![0.0; m];
    let mut v = vec![0.0; m];
    rec.push(&x, problem.objective_with_ax(&x, &ax, config.params));
    let mut iterations = 0;
    let mut converged = false;

    for k in 1..=config.max_iter {
        let q: Vec<f64> = v.iter().zip(&ad).map(|(vi, adi)| vi + adi / mu).collect();
        v = conjugate_quadratic_prox(&q, y, mu);
        let atv = problem.matrix().matvec_t(&v)?;
        let x_next = config
            .prox
            .apply(&super::descend(&x, &atv, 1.0 / mu), params);
        ensure_finite(&x_next, k)?;
        let ax_next = problem.apply(&x_next);
        // A d_{k+1} = 2 A x_{k+1} - A x_k
        ad = ax_next
            .iter()
            .zip(&ax)
            .map(|(an, ao)| 2.0 * an - ao)
            .collect();

        rec.push(
            &x_next,
            problem.objective_with_ax(&x_next, &ax_next, config.params),
        );
        iterations = k;
        converged = stop_check(&x_next, &x, config.tol);
        x = x_next;
        ax = ax_next;
        if converged {
            break;
        }
    }

    Ok(rec.finish(x, iterations, converged))
}
