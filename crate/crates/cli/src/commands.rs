use std::path::{Path, PathBuf};

use oscar_core::experiments::{
    length_sweep, prox_bench_params, prox_speed_bench, run_grid, ExperimentSpec, GridCell,
};
use oscar_core::{mae_mse, OscarError, OscarParams, Problem, SolverConfig, SolverRun};

use crate::cli::{
    BenchArgs, Cli, Command, IterationArgs, PenaltyArgs, ProxArgs, ProxBenchArgs, SolveArgs,
    SweepArgs,
};
use crate::error::{CliError, CliResult};
use crate::io::{
    output_path, read_matrix, read_vector, write_csv, write_json_mirror, write_vector,
};
use crate::results::{trace_rows, BenchEntry, BenchRow};

/// Runs a parsed command and returns its one-line summary.
pub fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Prox(args) => cmd_prox(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::ProxBench(args) => cmd_prox_bench(&args),
        Command::Sweep(args) => cmd_sweep(&args),
    }
}

fn params(p: &PenaltyArgs) -> CliResult<OscarParams> {
    Ok(OscarParams::new(p.lambda1, p.lambda2)?)
}

fn solver_config(params: OscarParams, it: &IterationArgs) -> CliResult<SolverConfig> {
    let mut config = SolverConfig {
        params,
        tol: it.tol,
        max_iter: it.max_iter,
        ..SolverConfig::default()
    };
    if let Some(mu) = it.mu {
        config.admm.mu = mu;
        config.padmm.mu = Some(mu);
    }
    config.validate()?;
    Ok(config)
}

pub fn cmd_prox(args: &ProxArgs) -> CliResult<String> {
    let params = params(&args.penalty)?;
    let v = read_vector(&args.input)?;
    let out = args.prox.apply(&v, params);
    let path = output_path(&args.out);
    write_vector(&path, &out)?;
    Ok(format!(
        "prox={} n={} lambda1={} lambda2={} out={}",
        args.prox,
        v.len(),
        params.lambda1(),
        params.lambda2(),
        path.display()
    ))
}

pub fn cmd_solve(args: &SolveArgs) -> CliResult<String> {
    let params = params(&args.penalty)?;
    let mut config = solver_config(params, &args.iteration)?;
    config.prox = args.prox;

    let (a, y, mut truth) = match (&args.observations, &args.matrix) {
        (Some(yp), Some(ap)) => (read_matrix(ap)?, read_vector(yp)?, None),
        _ => {
            let spec = ExperimentSpec {
                params,
                ..ExperimentSpec::with_length(args.n).with_seed(args.seed)
            };
            let inst = spec.instance()?;
            (inst.a, inst.y, Some(inst.x))
        }
    };
    if let Some(path) = &args.truth {
        truth = Some(read_vector(path)?);
    }
    if a.rows() != y.len() {
        return Err(CliError::Usage(format!(
            "matrix has {} rows but the observation vector has {} entries",
            a.rows(),
            y.len()
        )));
    }
    if let Some(t) = &truth {
        if t.len() != a.cols() {
            return Err(CliError::Usage(format!(
                "matrix has {} columns but the truth vector has {} entries",
                a.cols(),
                t.len()
            )));
        }
    }

    let mut problem = Problem::new(&a, &y)?;
    if let Some(t) = &truth {
        problem = problem.with_truth(t)?;
    }
    problem.lipschitz();
    if args.solver.needs_gram() {
        problem.gram(config.admm.mu)?;
    }

    let out = output_path(&args.out);
    let run = match oscar_core::solve(args.solver, &problem, &config) {
        Ok(run) => run,
        Err(e @ OscarError::Stagnation { .. }) => {
            if let OscarError::Stagnation { last, .. } = &e {
                write_vector(&out, last)?;
            }
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };
    write_vector(&out, &run.x_final)?;
    if let Some(trace) = &args.trace {
        let path = output_path(trace);
        let rows = trace_rows(&run);
        write_csv(&path, &rows)?;
        if args.json {
            write_json_mirror(&path, &rows)?;
        }
    }
    if args.json {
        write_json_mirror(&out, &run)?;
    }

    let summary = solve_summary(args, &run, &problem, truth.as_deref())?;
    if run.converged {
        Ok(summary)
    } else {
        Err(CliError::NotConverged(summary))
    }
}

fn solve_summary(
    args: &SolveArgs,
    run: &SolverRun,
    problem: &Problem<'_>,
    truth: Option<&[f64]>,
) -> CliResult<String> {
    let objective = run
        .objective_trace
        .last()
        .copied()
        .map_or_else(|| problem.objective(&run.x_final, OscarParams::ZERO), Ok)?;
    let mut s = format!(
        "solver={} prox={} iterations={} objective={:.6} converged={} time_s={:.6}",
        args.solver, args.prox, run.iterations, objective, run.converged, run.wall_time
    );
    if let Some(t) = truth {
        let (mae, mse) = mae_mse(t, &run.x_final);
        s.push_str(&format!(" mae={mae:.6} mse={mse:.6}"));
    }
    Ok(s)
}

fn trace_dir(args: &BenchArgs, out: &Path) -> PathBuf {
    match &args.trace_dir {
        Some(dir) => output_path(dir),
        None => {
            let stem = out
                .file_stem()
                .map_or_else(|| "bench".into(), |s| s.to_string_lossy().into_owned());
            out.with_file_name(format!("{stem}_traces"))
        }
    }
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<String> {
    if args.seeds == 0 {
        return Err(CliError::Usage("at least one seed is required".into()));
    }
    let params = params(&args.penalty)?;
    let config = solver_config(params, &args.iteration)?;
    let out = output_path(&args.out);
    let traces = (!args.no_traces).then(|| trace_dir(args, &out));

    let mut cells: Vec<GridCell> = Vec::new();
    for seed in args.seed..args.seed + args.seeds {
        let spec = ExperimentSpec {
            n: args.n,
            m: args.m.unwrap_or(args.n / 2),
            noise_sigma: args.sigma,
            params,
            seed,
        };
        for cell in run_grid(&spec, &args.solver, &args.prox, &config)? {
            match &cell.outcome {
                Ok((m, run)) => {
                    eprintln!(
                        "seed={seed} {}-{} iterations={} mae={:.4} mse={:.4} time_s={:.4}",
                        cell.solver, cell.prox, m.iterations, m.mae, m.mse, m.time_s
                    );
                    if let Some(dir) = &traces {
                        let name = format!("{}_{}_seed{seed}.csv", cell.solver, cell.prox);
                        write_csv(&dir.join(name), &trace_rows(run))?;
                    }
                }
                Err(e) => eprintln!("seed={seed} {}-{} failed: {e}", cell.solver, cell.prox),
            }
            cells.push(cell);
        }
    }
    cells.sort_by_key(|c| (c.seed, c.solver, c.prox));

    let rows: Vec<BenchRow> = cells
        .iter()
        .filter_map(|c| {
            c.outcome
                .as_ref()
                .ok()
                .map(|(m, _)| BenchRow::new(c.solver, c.prox, c.seed, m))
        })
        .collect();
    write_csv(&out, &rows)?;
    if args.json {
        let entries: Vec<BenchEntry> = cells.iter().map(BenchEntry::from).collect();
        write_json_mirror(&out, &entries)?;
    }
    Ok(format!(
        "bench seeds={} cells={} rows={} failed={} out={}",
        args.seeds,
        cells.len(),
        rows.len(),
        cells.len() - rows.len(),
        out.display()
    ))
}

pub fn cmd_prox_bench(args: &ProxBenchArgs) -> CliResult<String> {
    if args.k_min < 1 || args.k_max > 12 || args.k_min > args.k_max {
        return Err(CliError::Usage(format!(
            "k range {}..={} must lie within 1..=12",
            args.k_min, args.k_max
        )));
    }
    let rows = prox_speed_bench(
        args.k_min..=args.k_max,
        prox_bench_params,
        args.repeats,
        args.vectors,
        args.seed,
    )?;
    let out = output_path(&args.out);
    write_csv(&out, &rows)?;
    if args.json {
        write_json_mirror(&out, &rows)?;
    }
    for r in &rows {
        eprintln!(
            "k={} n={} apo_time={:.3e} gpo_time={:.3e} max_abs_diff={:.3e}",
            r.k, r.n, r.apo_time, r.gpo_time, r.max_abs_diff
        );
    }
    Ok(format!(
        "prox-bench rows={} out={}",
        rows.len(),
        out.display()
    ))
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<String> {
    if args.lengths.is_empty() {
        return Err(CliError::Usage("no lengths given".into()));
    }
    for &n in &args.lengths {
        if n < 100 {
            return Err(CliError::Usage(format!(
                "length {n} is below the minimum of 100"
            )));
        }
        let bytes = ExperimentSpec::with_length(n).dense_bytes();
        if bytes > args.max_bytes {
            return Err(CliError::Usage(format!(
                "length {n} needs a {bytes}-byte sensing matrix, above the budget of {} bytes",
                args.max_bytes
            )));
        }
    }
    let config = solver_config(ExperimentSpec::default().params, &args.iteration)?;
    let mut rows = length_sweep(&args.lengths, args.seed, args.repeats, &config)?;
    rows.sort_by_key(|r| (r.n, r.solver, r.prox));
    let out = output_path(&args.out);
    write_csv(&out, &rows)?;
    if args.json {
        write_json_mirror(&out, &rows)?;
    }
    for r in &rows {
        eprintln!(
            "n={} {}-{} time_s={:.4} iterations={} mae={:.4}",
            r.n, r.solver, r.prox, r.time_s, r.iterations, r.mae
        );
    }
    Ok(format!(
        "sweep lengths={} rows={} out={}",
        args.lengths.len(),
        rows.len(),
        out.display()
    ))
}
