//! Proximal splitting solvers for `min_x 0.5 * ||y - A x||^2 + r(x)` with `r` the OSCAR
//! penalty, each parameterized by the proximity step (exact or approximate).

mod admm;
mod config;
mod fista;
mod padmm;
mod sparsa;
mod twist;

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, OscarError, Result};
use crate::linalg::{dot, norm2, spectral_norm_sq, DenseMatrix, GramSolver, LIPSCHITZ_SAFETY};
use crate::prox::{oscar_apo, oscar_gpo, oscar_value, OscarParams};

pub use admm::{solve_admm, solve_sbm};
pub use config::{
    AdmmOptions, FistaOptions, PadmmOptions, SolverConfig, SparsaOptions, TwistOptions,
};
pub use fista::solve_fista;
pub use padmm::{conjugate_quadratic_prox, solve_padmm};
pub use sparsa::solve_sparsa;
pub use twist::solve_twist;

/// Which proximity operator a solver applies at its prox step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProxStepKind {
    Gpo,
    Apo,
}

impl ProxStepKind {
    pub const ALL: [ProxStepKind; 2] = [ProxStepKind::Gpo, ProxStepKind::Apo];

    pub fn apply(self, v: &[f64], params: OscarParams) -> Vec<f64> {
        match self {
            ProxStepKind::Gpo => oscar_gpo(v, params),
            ProxStepKind::Apo => oscar_apo(v, params),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProxStepKind::Gpo => "gpo",
            ProxStepKind::Apo => "apo",
        }
    }
}

impl fmt::Display for ProxStepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProxStepKind {
    type Err = OscarError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gpo" => Ok(ProxStepKind::Gpo),
            "apo" => Ok(ProxStepKind::Apo),
            other => Err(OscarError::InvalidParameter(format!(
                "unknown prox step '{other}', expected gpo or apo"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Fista,
    Twist,
    Sparsa,
    Admm,
    Sbm,
    Padmm,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] = [
        SolverKind::Fista,
        SolverKind::Twist,
        SolverKind::Sparsa,
        SolverKind::Admm,
        SolverKind::Sbm,
        SolverKind::Padmm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Fista => "fista",
            SolverKind::Twist => "twist",
            SolverKind::Sparsa => "sparsa",
            SolverKind::Admm => "admm",
            SolverKind::Sbm => "sbm",
            SolverKind::Padmm => "padmm",
        }
    }

    /// Whether the solver factors `A^T A + mu I`.
    pub fn needs_gram(self) -> bool {
        matches!(self, SolverKind::Admm | SolverKind::Sbm)
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = OscarError;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| OscarError::InvalidParameter(format!("unknown solver '{s}'")))
    }
}

/// Recovery error of one iterate against a known ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub time_s: f64,
    pub mae: f64,
    pub mse: f64,
}

/// Everything a solve produced.
///
/// `objective_trace` and `time_trace` hold one entry per iterate including `x_0`, so their
/// length is `iterations + 1`; `metric_trace` has the same length when a ground truth was
/// supplied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverRun {
    pub x_final: Vec<f64>,
    pub iterations: usize,
    pub wall_time: f64,
    pub objective_trace: Vec<f64>,
    pub time_trace: Vec<f64>,
    pub metric_trace: Option<Vec<MetricSample>>,
    pub converged: bool,
}

/// Mean absolute and mean squared error of `estimate` against `truth`.
pub fn mae_mse(truth: &[f64], estimate: &[f64]) -> (f64, f64) {
    let n = truth.len().max(1) as f64;
    let (abs, sq) = truth
        .iter()
        .zip(estimate)
        .fold((0.0, 0.0), |(a, s), (t, e)| {
            let d = t - e;
            (a + d.abs(), s + d * d)
        });
    (abs / n, sq / n)
}

/// A data-fit instance `(A, y)`, optionally with the ground truth used for metric traces.
///
/// The Lipschitz constant and the Gram factorization are computed on first use and cached,
/// so repeated solves on one instance (e.g. the GPO and APO variants of a solver) share them
/// and their cost is not charged to any solve's wall time.
pub struct Problem<'a> {
    a: &'a DenseMatrix,
    y: &'a [f64],
    truth: Option<&'a [f64]>,
    norm_sq: OnceLock<f64>,
    gram: Mutex<Option<Arc<GramSolver>>>,
}

impl<'a> Problem<'a> {
    pub fn new(a: &'a DenseMatrix, y: &'a [f64]) -> Result<Self> {
        check_len(a.rows(), y.len())?;
        Ok(Self {
            a,
            y,
            truth: None,
            norm_sq: OnceLock::new(),
            gram: Mutex::new(None),
        })
    }

    pub fn with_truth(mut self, truth: &'a [f64]) -> Result<Self> {
        check_len(self.a.cols(), truth.len())?;
        self.truth = Some(truth);
        Ok(self)
    }

    pub fn matrix(&self) -> &DenseMatrix {
        self.a
    }

    pub fn observations(&self) -> &[f64] {
        self.y
    }

    pub fn truth(&self) -> Option<&[f64]> {
        self.truth
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    /// Power-iteration estimate of `||A||_2^2`.
    pub fn spectral_norm_sq(&self) -> f64 {
        *self
            .norm_sq
            .get_or_init(|| spectral_norm_sq(self.a, 1e-10, 5000))
    }

    /// Lipschitz constant of the data-fit gradient: `||A||_2^2` inflated by
    /// [`LIPSCHITZ_SAFETY`].
    pub fn lipschitz(&self) -> f64 {
        self.spectral_norm_sq() * LIPSCHITZ_SAFETY
    }

    /// Default PADMM step parameter `1.02 * ||A||_2`, which keeps `||A||^2 / mu^2 <= 1`.
    pub fn padmm_mu(&self) -> f64 {
        1.02 * self.spectral_norm_sq().sqrt()
    }

    /// Caches one factorization; asking for a different `mu` replaces it.
    pub fn gram(&self, mu: f64) -> Result<Arc<GramSolver>> {
        let mut slot = self.gram.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(g) = slot.as_ref().filter(|g| g.mu() == mu) {
            return Ok(Arc::clone(g));
        }
        let g = Arc::new(GramSolver::new(self.a, mu)?);
        *slot = Some(Arc::clone(&g));
        Ok(g)
    }

    /// `0.5 * ||y - A x||^2 + r(x)`.
    pub fn objective(&self, x: &[f64], params: OscarParams) -> Result<f64> {
        let ax = self.a.matvec(x)?;
        Ok(self.objective_with_ax(x, &ax, params))
    }

    pub(crate) fn objective_with_ax(&self, x: &[f64], ax: &[f64], params: OscarParams) -> f64 {
        let fit: f64 = ax.iter().zip(self.y).map(|(p, o)| (o - p) * (o - p)).sum();
        0.5 * fit + oscar_value(x, params)
    }

    /// `A^T (A x - y)` given `A x`.
    pub(crate) fn gradient_from_ax(&self, ax: &[f64]) -> Vec<f64> {
        let resid: Vec<f64> = ax.iter().zip(self.y).map(|(p, o)| p - o).collect();
        let mut g = vec![0.0; self.a.cols()];
        self.a.matvec_t_into(&resid, &mut g);
        g
    }

    pub(crate) fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.a.rows()];
        self.a.matvec_into(x, &mut out);
        out
    }
}

/// `0.5 * ||y - A x||^2 + r(x)`.
pub fn objective(x: &[f64], a: &DenseMatrix, y: &[f64], params: OscarParams) -> Result<f64> {
    check_len(a.cols(), x.len())?;
    Problem::new(a, y)?.objective(x, params)
}

/// `||x_next - x_prev|| / ||x_next|| <= tol`. When `x_next` is zero the test passes only
/// if `x_prev` is zero too.
pub fn stop_check(x_next: &[f64], x_prev: &[f64], tol: f64) -> bool {
    debug_assert_eq!(x_next.len(), x_prev.len());
    let norm_next = norm2(x_next);
    let diff: f64 = x_next
        .iter()
        .zip(x_prev)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if norm_next == 0.0 {
        return diff == 0.0;
    }
    diff / norm_next <= tol
}

/// Runs `kind` on `problem`.
pub fn solve(kind: SolverKind, problem: &Problem<'_>, config: &SolverConfig) -> Result<SolverRun> {
    config.validate()?;
    match kind {
        SolverKind::Fista => fista::run(problem, config),
        SolverKind::Twist => twist::run(problem, config),
        SolverKind::Sparsa => sparsa::run(problem, config),
        SolverKind::Admm => admm::run_admm(problem, config),
        SolverKind::Sbm => admm::run_sbm(problem, config),
        SolverKind::Padmm => padmm::run(problem, config),
    }
}

/// Collects the per-iterate traces of a run.
struct Recorder<'p, 'a> {
    problem: &'p Problem<'a>,
    start: Instant,
    objective: Vec<f64>,
    times: Vec<f64>,
    metrics: Option<Vec<MetricSample>>,
}

impl<'p, 'a> Recorder<'p, 'a> {
    fn new(problem: &'p Problem<'a>, max_iter: usize) -> Self {
        Self {
            problem,
            start: Instant::now(),
            objective: Vec::with_capacity(max_iter + 1),
            times: Vec::with_capacity(max_iter + 1),
            metrics: problem.truth.map(|_| Vec::with_capacity(max_iter + 1)),
        }
    }

    fn push(&mut self, x: &[f64], objective: f64) {
        let t = self.start.elapsed().as_secs_f64();
        self.objective.push(objective);
        self.times.push(t);
        if let (Some(truth), Some(m)) = (self.problem.truth, self.metrics.as_mut()) {
            let (mae, mse) = mae_mse(truth, x);
            m.push(MetricSample {
                time_s: t,
                mae,
                mse,
            });
        }
    }

    fn finish(self, x_final: Vec<f64>, iterations: usize, converged: bool) -> SolverRun {
        debug_assert_eq!(self.objective.len(), iterations + 1);
        SolverRun {
            x_final,
            iterations,
            wall_time: self.start.elapsed().as_secs_f64(),
            objective_trace: self.objective,
            time_trace: self.times,
            metric_trace: self.metrics,
            converged,
        }
    }
}

fn ensure_finite(x: &[f64], iteration: usize) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(OscarError::Divergence { iteration })
    }
}

/// `x - step * g`.
fn descend(x: &[f64], g: &[f64], step: f64) -> Vec<f64> {
    x.iter().zip(g).map(|(xi, gi)| xi - step * gi).collect()
}

fn sq_norm(x: &[f64]) -> f64 {
    dot(x, x)
}
