//! ADMM and the split Bregman method on the splitting `min f(x) + r(z)` s.t. `x = z`.
//!
//! For this problem class split Bregman with a single inner sweep performs the same updates
//! as scaled-form ADMM. The two loops below are written in their own conventions (scaled dual
//! `d` versus Bregman variable `b`) and must produce the same iterates.

use super::{ensure_finite, stop_check, Problem, Recorder, SolverConfig, SolverRun};
use crate::error::Result;
use crate::linalg::DenseMatrix;

pub fn solve_admm(a: &DenseMatrix, y: &[f64], config: &SolverConfig) -> Result<SolverRun> {
    let problem = Problem::new(a, y)?;
    super::solve(super::SolverKind::Admm, &problem, config)
}

pub fn solve_sbm(a: &DenseMatrix, y: &[f64], config: &SolverConfig) -> Result<SolverRun> {
    let problem = Problem::new(a, y)?;
    super::solve(super::SolverKind::Sbm, &problem, config)
}

pub(super) fn run_admm(problem: &Problem<'_>, config: &SolverConfig) -> Result<SolverRun> {
    let mu = config.admm.mu;
    let gram = problem.gram(mu)?;
    let params = config.params.scaled(1.0 / mu);
    let n = problem.dim();
    let aty = problem.matrix().matvec_t(problem.observations())?;

    let mut rec = Recorder::new(problem, config.max_iter);
    let mut x = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut d = vec![0.0; n];
    rec.push(&x, problem.objective(&x, config.params)?);
    let mut iterations = 0;
    let mut converged = false;

    for k in 1..=config.max_iter {
        // x-update: (A^T A + mu I) x = A^T y + mu (z - d)
        let rhs: Vec<f64> = (0..n).map(|i| aty[i] + mu * (z[i] - d[i])).collect();
        let x_next = gram.solve(&rhs)?;
        ensure_finite(&x_next, k)?;
        // z-update: prox of r / mu at x + d
        let shifted: Vec<f64> = (0..n).map(|i| x_next[i] + d[i]).collect();
        z = config.prox.apply(&shifted, params);
        // scaled dual ascent
        for i in 0..n {
            d[i] += x_next[i] - z[i];
        }

        rec.push(&x_next, problem.objective(&x_next, config.params)?);
        iterations = k;
        converged = stop_check(&x_next, &x, config.tol);
        x = x_next;
        if converged {
            break;
        }
    }

    Ok(rec.finish(x, iterations, converged))
}

pub(super) fn run_sbm(problem: &Problem<'_>, config: &SolverConfig) -> Result<SolverRun> {
    let mu = config.admm.mu;
    let gram = problem.gram(mu)?;
    let params = config.params.scaled(1.0 / mu);
    let n = problem.dim();
    let aty = problem.matrix().matvec_t(problem.observations())?;

    let mut rec = Recorder::new(problem, config.max_iter);
    let mut x = vec![0.0; n];
    // split variable and Bregman vector
    let mut z = vec![0.0; n];
    let mut b = vec![0.0; n];
    rec.push(&x, problem.objective(&x, config.params)?);
    let mut iterations = 0;
    let mut converged = false;

    for k in 1..=config.max_iter {
        // one alternating sweep over the Bregman subproblem
        // min_x f(x) + mu/2 ||x - (z - b)||^2, then min_z r(z) + mu/2 ||z - (x + b)||^2
        let target: Vec<f64> = z.iter().zip(&b).map(|(zi, bi)| zi - bi).collect();
        let rhs: Vec<f64> = aty.iter().zip(&target).map(|(a, t)| a + mu * t).collect();
        let x_next = gram.solve(&rhs)?;
        ensure_finite(&x_next, k)?;
        let anchor: Vec<f64> = x_next.iter().zip(&b).map(|(xi, bi)| xi + bi).collect();
        z = config.prox.apply(&anchor, params);
        // Bregman update: add back the constraint residual
        for ((bi, xi), zi) in b.iter_mut().zip(&x_next).zip(&z) {
            *bi += xi - zi;
        }

        rec.push(&x_next, problem.objective(&x_next, config.params)?);
        iterations = k;
        converged = stop_check(&x_next, &x, config.tol);
        x = x_next;
        if converged {
            break;
        }
    }

    Ok(rec.finish(x, iterations, converged))
}
