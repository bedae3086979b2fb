//! Row types of the files written by the benchmark commands.

use oscar_core::experiments::{GridCell, TrialMetrics};
use oscar_core::{ProxStepKind, SolverKind, SolverRun};
use serde::{Deserialize, Serialize};

pub const BENCH_HEADER: [&str; 7] = [
    "solver",
    "prox",
    "seed",
    "time_s",
    "iterations",
    "mae",
    "mse",
];
pub const TRACE_HEADER: [&str; 5] = ["iter", "time_s", "objective", "mae", "mse"];
pub const SWEEP_HEADER: [&str; 9] = [
    "n",
    "solver",
    "prox",
    "seed",
    "time_s",
    "iterations",
    "mae",
    "mse",
    "converged",
];
pub const PROX_BENCH_HEADER: [&str; 5] = ["k", "n", "apo_time", "gpo_time", "max_abs_diff"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub solver: SolverKind,
    pub prox: ProxStepKind,
    pub seed: u64,
    pub time_s: f64,
    pub iterations: usize,
    pub mae: f64,
    pub mse: f64,
}

impl BenchRow {
    pub fn new(solver: SolverKind, prox: ProxStepKind, seed: u64, m: &TrialMetrics) -> Self {
        Self {
            solver,
            prox,
            seed,
            time_s: m.time_s,
            iterations: m.iterations,
            mae: m.mae,
            mse: m.mse,
        }
    }

    /// Sort key giving the canonical row order: seed, then solver, then prox.
    pub fn key(&self) -> (u64, SolverKind, ProxStepKind) {
        (self.seed, self.solver, self.prox)
    }
}

/// JSON form of one grid cell; failed cells carry `error` instead of metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchEntry {
    pub solver: SolverKind,
    pub prox: ProxStepKind,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<TrialMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl From<&GridCell> for BenchEntry {
    fn from(cell: &GridCell) -> Self {
        let (metrics, converged, error) = match &cell.outcome {
            Ok((m, run)) => (Some(*m), Some(run.converged), None),
            Err(e) => (None, None, Some(e.to_string())),
        };
        Self {
            solver: cell.solver,
            prox: cell.prox,
            seed: cell.seed,
            metrics,
            converged,
            error,
        }
    }
}

/// One iterate of a solver run. `mae`/`mse` are empty when no ground truth was given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub time_s: f64,
    pub objective: f64,
    pub mae: Option<f64>,
    pub mse: Option<f64>,
}

pub fn trace_rows(run: &SolverRun) -> Vec<TraceRow> {
    run.objective_trace
        .iter()
        .zip(&run.time_trace)
        .enumerate()
        .map(|(iter, (&objective, &time_s))| {
            let sample = run.metric_trace.as_ref().map(|m| m[iter]);
            TraceRow {
                iter,
                time_s,
                objective,
                mae: sample.map(|s| s.mae),
                mse: sample.map(|s| s.mse),
            }
        })
        .collect()
}
