use super::{ensure_finite, stop_check, Problem, Recorder, SolverConfig, SolverRun};
use crate::error::Result;
use crate::linalg::DenseMatrix;

/// FISTA with a fixed step `1 / L`.
pub fn solve_fista(a: &DenseMatrix, y: &[f64], config: &SolverConfig) -> Result<SolverRun> {
    let problem = Problem::new(a, y)?;
    super::solve(super::SolverKind::Fista, &problem, config)
}

pub(super) fn run(problem: &Problem<'_>, config: &SolverConfig) -> Result<SolverRun> {
    let n = problem.dim();
    let lipschitz = config
        .fista
        .lipschitz
        .unwrap_or_else(|| problem.lipschitz());
    let step = 1.0 / lipschitz;
    let params = config.params.scaled(step);

    let mut rec = Recorder::new(problem, config.max_iter);
    let mut x_prev = vec![0.0; n];
    let mut ax_prev = vec![0.0; problem.matrix().rows()];
    rec.push(
        &x_prev,
        problem.objective_with_ax(&x_prev, &ax_prev, config.params),
    );

    // u_1 = x_0 = 0, so A u_1 = 0
    let mut u = x_prev.clone();
    let mut au = ax_prev.clone();
    let mut t = 1.0f64;
    let mut converged = false;
    let mut iterations = 0;

    for k in 1..=config.max_iter {
        let grad = problem.gradient_from_ax(&au);
        let v = super::descend(&u, &grad, step);
        let x = config.prox.apply(&v, params);
        ensure_finite(&x, k)?;
        let ax = problem.apply(&x);
        rec.push(&x, problem.objective_with_ax(&x, &ax, config.params));
        iterations = k;

        if stop_check(&x, &x_prev, config.tol) {
            converged = true;
            x_prev = x;
            break;
        }

        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let momentum = (t - 1.0) / t_next;
        u = x
            .iter()
            .zip(&x_prev)
            .map(|(xk, xp)| xk + momentum * (xk - xp))
            .collect();
        au = ax
            .iter()
            .zip(&ax_prev)
            .map(|(ak, ap)| ak + momentum * (ak - ap))
            .collect();
        t = t_next;
        x_prev = x;
        ax_prev = ax;
    }

    Ok(rec.finish(x_prev, iterations, converged))
}
