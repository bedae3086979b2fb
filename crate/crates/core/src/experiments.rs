//! Synthetic group-sparse recovery instances, recovery metrics, and the benchmark drivers
//! behind the CLI.
//!
//! # Random streams
//!
//! All randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64(seed)`. Each consumer draws from its own stream selected with `set_stream`:
//! [`STREAM_SIGNAL`] for the signal, [`STREAM_SENSING`] for the matrix, [`STREAM_NOISE`] for
//! the observation noise and [`STREAM_PROX_BENCH`] for prox benchmark inputs. A trial is
//! therefore fully determined by its own seed, whatever order trials run in. Gaussian samples
//! use `rand_distr::StandardNormal`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, OscarError, Result};
use crate::linalg::DenseMatrix;
use crate::prox::{oscar_apo, oscar_gpo, OscarParams};
use crate::solvers::{mae_mse, solve, Problem, ProxStepKind, SolverConfig, SolverKind, SolverRun};

pub const STREAM_SIGNAL: u64 = 1;
pub const STREAM_SENSING: u64 = 2;
pub const STREAM_NOISE: u64 = 3;
pub const STREAM_PROX_BENCH: u64 = 4;

/// The generator for stream `stream` of master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generative model of one recovery instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub n: usize,
    pub m: usize,
    pub noise_sigma: f64,
    pub params: OscarParams,
    pub seed: u64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            n: 1000,
            m: 500,
            noise_sigma: 0.4,
            params: OscarParams::new(0.1, 0.001).expect("valid defaults"),
            seed: 0,
        }
    }
}

impl ExperimentSpec {
    /// The canonical setup resized to length `n` with `n / 2` measurements.
    pub fn with_length(n: usize) -> Self {
        Self {
            n,
            m: n / 2,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(OscarError::EmptyInput);
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(OscarError::InvalidParameter(format!(
                "noise sigma must be nonnegative, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }

    /// Bytes taken by the dense sensing matrix plus the `m x m` Gram factor of ADMM/SBM.
    pub fn dense_bytes(&self) -> usize {
        let entries = self.m * self.n + self.m.min(self.n).pow(2);
        entries * std::mem::size_of::<f64>()
    }

    pub fn instance(&self) -> Result<Instance> {
        self.validate()?;
        let x = generate_signal(self)?;
        let a = generate_sensing(self);
        let y = observe(&a, &x, self.noise_sigma, self.seed)?;
        Ok(Instance { x, a, y })
    }
}

/// Ground truth, sensing matrix and observations of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub x: Vec<f64>,
    pub a: DenseMatrix,
    pub y: Vec<f64>,
}

/// Lengths of the six blocks `[+7, 0, +9, 0, -8, 0]` for a length-`n` signal: 10/20/10/20/10%
/// of `n` (rounded), with the trailing zero block absorbing the remainder.
pub fn block_layout(n: usize) -> Result<[usize; 6]> {
    if n < 10 {
        return Err(OscarError::InvalidParameter(format!(
            "signal length must be at least 10, got {n}"
        )));
    }
    let part = |frac: f64| (frac * n as f64).round() as usize;
    let (one, two) = (part(0.1), part(0.2));
    let used = 3 * one + 2 * two;
    Ok([one, two, one, two, one, n - used])
}

/// Block means of the nonzero groups, in order.
pub const BLOCK_LEVELS: [f64; 3] = [7.0, 9.0, -8.0];

/// Group-sparse test signal: three blocks at levels 7, 9 and -8 perturbed by i.i.d. standard
/// normal noise, separated by zeros.
pub fn generate_signal(spec: &ExperimentSpec) -> Result<Vec<f64>> {
    let layout = block_layout(spec.n)?;
    let mut rng = stream_rng(spec.seed, STREAM_SIGNAL);
    let mut x = Vec::with_capacity(spec.n);
    for (block, &len) in layout.iter().enumerate() {
        if block % 2 == 0 {
            let level = BLOCK_LEVELS[block / 2];
            x.extend((0..len).map(|_| {
                let eps: f64 = StandardNormal.sample(&mut rng);
                level + eps
            }));
        } else {
            x.extend(std::iter::repeat_n(0.0, len));
        }
    }
    Ok(x)
}

/// `m x n` matrix with i.i.d. standard normal entries.
pub fn generate_sensing(spec: &ExperimentSpec) -> DenseMatrix {
    let mut rng = stream_rng(spec.seed, STREAM_SENSING);
    let data = (0..spec.m * spec.n)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    DenseMatrix::new(spec.m, spec.n, data).expect("finite gaussian entries")
}

/// `y = A x + sigma * g` with `g` standard normal from the noise stream of `seed`.
pub fn observe(a: &DenseMatrix, x: &[f64], sigma: f64, seed: u64) -> Result<Vec<f64>> {
    let mut y = a.matvec(x)?;
    if sigma > 0.0 {
        let mut rng = stream_rng(seed, STREAM_NOISE);
        for yi in &mut y {
            let g: f64 = StandardNormal.sample(&mut rng);
            *yi += sigma * g;
        }
    }
    Ok(y)
}

/// The four reported quantities of a trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialMetrics {
    pub time_s: f64,
    pub iterations: usize,
    pub mae: f64,
    pub mse: f64,
}

/// `MAE = ||x - e||_1 / n` and `MSE = ||x - e||_2^2 / n`, plus the run's time and iterations.
pub fn compute_metrics(x_true: &[f64], x_est: &[f64], run: &SolverRun) -> Result<TrialMetrics> {
    check_len(x_true.len(), x_est.len())?;
    let (mae, mse) = mae_mse(x_true, x_est);
    Ok(TrialMetrics {
        time_s: run.wall_time,
        iterations: run.iterations,
        mae,
        mse,
    })
}

/// One `(solver, prox, seed)` cell of a benchmark grid.
#[derive(Debug, Clone)]
pub struct GridCell {
    pub solver: SolverKind,
    pub prox: ProxStepKind,
    pub seed: u64,
    pub outcome: Result<(TrialMetrics, SolverRun)>,
}

/// Runs every `(solver, prox)` pair on the instance generated from `spec`.
///
/// The Lipschitz estimate and any Gram factorization are computed once per instance before
/// the first solve and shared by all cells, so reported times cover the iterations only.
/// Cells come back in `solvers x proxes` order.
pub fn run_grid(
    spec: &ExperimentSpec,
    solvers: &[SolverKind],
    proxes: &[ProxStepKind],
    base: &SolverConfig,
) -> Result<Vec<GridCell>> {
    let inst = spec.instance()?;
    let problem = Problem::new(&inst.a, &inst.y)?.with_truth(&inst.x)?;
    warm_up(&problem, solvers, base)?;

    let mut cells = Vec::with_capacity(solvers.len() * proxes.len());
    for &solver in solvers {
        for &prox in proxes {
            let config = SolverConfig {
                params: spec.params,
                prox,
                ..base.clone()
            };
            let outcome = solve(solver, &problem, &config).and_then(|run| {
                let metrics = compute_metrics(&inst.x, &run.x_final, &run)?;
                Ok((metrics, run))
            });
            cells.push(GridCell {
                solver,
                prox,
                seed: spec.seed,
                outcome,
            });
        }
    }
    Ok(cells)
}

fn warm_up(problem: &Problem<'_>, solvers: &[SolverKind], base: &SolverConfig) -> Result<()> {
    problem.lipschitz();
    if solvers.iter().any(|s| s.needs_gram()) {
        problem.gram(base.admm.mu)?;
    }
    Ok(())
}

/// One row of the signal-length study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub solver: SolverKind,
    pub prox: ProxStepKind,
    pub seed: u64,
    /// Median wall time over the repetitions.
    pub time_s: f64,
    pub iterations: usize,
    pub mae: f64,
    pub mse: f64,
    pub converged: bool,
}

/// Runs all twelve variants once per length (timing each `repeats` times and keeping the
/// median) on the canonical setup resized to `n` with `n / 2` measurements.
pub fn length_sweep(
    lengths: &[usize],
    seed: u64,
    repeats: usize,
    base: &SolverConfig,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &n in lengths {
        let spec = ExperimentSpec::with_length(n).with_seed(seed);
        let inst = spec.instance()?;
        let problem = Problem::new(&inst.a, &inst.y)?.with_truth(&inst.x)?;
        warm_up(&problem, &SolverKind::ALL, base)?;
        for solver in SolverKind::ALL {
            let configs = ProxStepKind::ALL.map(|prox| SolverConfig {
                params: spec.params,
                prox,
                ..base.clone()
            });
            let mut times = [Vec::new(), Vec::new()];
            let mut first: [Option<SolverRun>; 2] = [None, None];
            // alternate the order of the two variants so slow drift affects both alike
            for rep in 0..repeats.max(1) {
                for j in 0..2 {
                    let v = if rep % 2 == 0 { j } else { 1 - j };
                    let run = solve(solver, &problem, &configs[v])?;
                    times[v].push(run.wall_time);
                    first[v].get_or_insert(run);
                }
            }
            for (v, prox) in ProxStepKind::ALL.into_iter().enumerate() {
                let run = first[v].take().expect("at least one repetition");
                let (mae, mse) = mae_mse(&inst.x, &run.x_final);
                rows.push(SweepRow {
                    n,
                    solver,
                    prox,
                    seed,
                    time_s: median(&mut times[v]),
                    iterations: run.iterations,
                    mae,
                    mse,
                    converged: run.converged,
                });
            }
        }
    }
    Ok(rows)
}

/// Prox parameters of the speed study: `lambda1 = 0.1`, `lambda2 = 0.04 / 2^k`, which keeps
/// every weight in `[0.1, 4]` at length `100 * 2^k`.
pub fn prox_bench_params(k: u32) -> OscarParams {
    OscarParams::new(0.1, 0.04 / f64::from(1u32 << k)).expect("valid parameters")
}

pub fn prox_bench_len(k: u32) -> usize {
    100 << k
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProxBenchRow {
    pub k: u32,
    pub n: usize,
    pub apo_time: f64,
    pub gpo_time: f64,
    pub max_abs_diff: f64,
}

/// Times both operators on uniform `[-5, 5]` vectors of length `100 * 2^k` for each `k`.
///
/// Each timing is the median of `repeats` calls (at least 5). `max_abs_diff` is the median
/// over `vectors` independent inputs of `||APO(z) - GPO(z)||_inf`.
pub fn prox_speed_bench(
    ks: impl IntoIterator<Item = u32>,
    params_rule: impl Fn(u32) -> OscarParams,
    repeats: usize,
    vectors: usize,
    seed: u64,
) -> Result<Vec<ProxBenchRow>> {
    let repeats = repeats.max(5);
    let mut rows = Vec::new();
    for k in ks {
        if !(1..=12).contains(&k) {
            return Err(OscarError::InvalidParameter(format!(
                "k must lie in 1..=12, got {k}"
            )));
        }
        let n = prox_bench_len(k);
        let params = params_rule(k);
        let mut rng = stream_rng(seed.wrapping_add(u64::from(k)), STREAM_PROX_BENCH);
        let mut diffs = Vec::with_capacity(vectors.max(1));
        let mut apo_times = Vec::new();
        let mut gpo_times = Vec::new();
        for vi in 0..vectors.max(1) {
            let z: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..=5.0)).collect();
            let apo = oscar_apo(&z, params);
            let gpo = oscar_gpo(&z, params);
            diffs.push(
                apo.iter()
                    .zip(&gpo)
                    .map(|(a, g)| (a - g).abs())
                    .fold(0.0, f64::max),
            );
            if vi == 0 {
                for _ in 0..repeats {
                    apo_times.push(time_call(|| oscar_apo(&z, params)));
                    gpo_times.push(time_call(|| oscar_gpo(&z, params)));
                }
            }
        }
        rows.push(ProxBenchRow {
            k,
            n,
            apo_time: median(&mut apo_times),
            gpo_time: median(&mut gpo_times),
            max_abs_diff: median(&mut diffs),
        });
    }
    Ok(rows)
}

fn time_call<T>(f: impl FnOnce() -> T) -> f64 {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed().as_secs_f64();
    std::hint::black_box(out);
    elapsed
}

/// Median of a non-empty sample (mean of the middle pair for even sizes).
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}
