use super::{ensure_finite, stop_check, Problem, Recorder, SolverConfig, SolverRun};
use crate::error::Result;
use crate::linalg::DenseMatrix;

/// Two-step iterative shrinkage/thresholding.
///
/// `x_{k+1} = (1 - alpha) x_{k-1} + (alpha - beta) x_k + beta * Gamma(x_k)` where `Gamma` is
/// one shrinkage step of length `1 / L`. The first iterate is `Gamma(x_0)`. In monotone mode a
/// two-step candidate that raises the objective is replaced by `Gamma(x_k)`.
pub fn solve_twist(a: &DenseMatrix, y: &[f64], config: &SolverConfig) -> Result<SolverRun> {
    let problem = Problem::new(a, y)?;
    super::solve(super::SolverKind::Twist, &problem, config)
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub(super) fn run(problem: &Problem<'_>, config: &SolverConfig) -> Result<SolverRun> {
    let n = problem.dim();
    let lipschitz = config
        .twist
        .lipschitz
        .unwrap_or_else(|| problem.lipschitz());
    let step = 1.0 / lipschitz;
    let params = config.params.scaled(step);
    let (alpha, beta) = config.twist.resolved();

    let shrink = |x: &[f64], ax: &[f64]| {
        let grad = problem.gradient_from_ax(ax);
        config.prox.apply(&super::descend(x, &grad, step), params)
    };

    let mut rec = Recorder::new(problem, config.max_iter);
    let mut x_old = vec![0.0; n];
    let mut ax_old = vec![0.0; problem.matrix().rows()];
    rec.push(
        &x_old,
        problem.objective_with_ax(&x_old, &ax_old, config.params),
    );

    let mut x = shrink(&x_old, &ax_old);
    ensure_finite(&x, 1)?;
    let mut ax = problem.apply(&x);
    let mut h = problem.objective_with_ax(&x, &ax, config.params);
    rec.push(&x, h);
    let mut iterations = 1;
    let mut converged = stop_check(&x, &x_old, config.tol);

    let mut k = 1;
    while !converged && k < config.max_iter {
        k += 1;
        let gamma = shrink(&x, &ax);
        ensure_finite(&gamma, k)?;
        let a_gamma = problem.apply(&gamma);
        let combine = |older: &[f64], cur: &[f64], new: &[f64]| -> Vec<f64> {
            older
                .iter()
                .zip(cur)
                .zip(new)
                .map(|((o, c), g)| (1.0 - alpha) * o + (alpha - beta) * c + beta * g)
                .collect()
        };
        let mut x_next = combine(&x_old, &x, &gamma);
        let mut ax_next = combine(&ax_old, &ax, &a_gamma);
        let mut h_next = problem.objective_with_ax(&x_next, &ax_next, config.params);
        if config.twist.monotone && !(h_next <= h) {
            h_next = problem.objective_with_ax(&gamma, &a_gamma, config.params);
            x_next = gamma;
            ax_next = a_gamma;
        }
        ensure_finite(&x_next, k)?;
        rec.push(&x_next, h_next);
        iterations = k;
        converged = stop_check(&x_next, &x, config.tol);

        x_old = std::mem::replace(&mut x, x_next);
        ax_old = std::mem::replace(&mut ax, ax_next);
        h = h_next;
    }

    Ok(rec.finish(x, iterations, converged))
}
