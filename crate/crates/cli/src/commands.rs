use std::collections::BTreeMap;
use std::io::Write;

use linewalker::benchmarks::{self, BenchmarkFunction};
use linewalker::driver::{self, Incumbent};
use linewalker::{metrics, Algorithm, Evaluation, ExternalOracle, Grid, Objective, RunConfig, RunTrace};
use rayon::prelude::*;

use crate::args::{RunArgs, SuiteArgs};
use crate::artifacts::{
    csv_artifact, fit_rows, json_artifact, snapshot_rows, Artifact, EvalRecord, FitHeader, FractionRow,
    SuiteHeader, SuiteRow, Target, TaseRow, TraceFile,
};
use crate::error::{CliError, Result};

/// Artifacts of one command plus the lines to print on success.
#[derive(Debug)]
pub struct Output {
    pub artifacts: Vec<Artifact>,
    pub summary: Vec<String>,
}

/// Solve flags and TASE of a benchmark run.
struct Scores {
    solved: bool,
    solved_by_value: bool,
    tase: f64,
    truth: Vec<f64>,
}

fn score(f: &BenchmarkFunction, grid: &Grid, trace: &RunTrace) -> Result<Option<Scores>> {
    let Some(report) = metrics::solve_report(trace, f.f_star) else {
        return Ok(None);
    };
    let truth = f.truth(grid);
    let cfg = &trace.config;
    let reference = metrics::reference_fit(&truth, cfg.initial_sample_count, cfg.alpha, cfg.mu)?;
    let tase = metrics::tase(trace.final_fit.values(), reference.values(), &truth)?;
    Ok(Some(Scores {
        solved: report.solved,
        solved_by_value: report.solved_by_value,
        tase,
        truth,
    }))
}

fn stem(target: &Target, algorithm: Algorithm, budget: usize) -> String {
    format!("{}_{}_{}", target.label(), algorithm, budget)
}

/// Trace of a run that stopped with an error, as far as it got.
fn partial_trace(
    target: Target,
    algorithm: Algorithm,
    config: &RunConfig,
    grid: &Grid,
    evaluations: &[Evaluation],
    incumbents: &[Incumbent],
) -> TraceFile {
    let records: Vec<EvalRecord> = evaluations
        .iter()
        .map(|e| EvalRecord {
            index: e.index,
            t: grid.param(e.index),
            x: grid.point(e.index),
            f: e.value,
            iteration: e.iteration,
            reason: e.reason,
            candidate: e.candidate,
        })
        .collect();
    let best = incumbents
        .last()
        .and_then(|b| records.iter().find(|r| r.index == b.index).cloned());
    TraceFile {
        target,
        algorithm,
        config: config.clone(),
        iterations: evaluations.last().map_or(0, |e| e.iteration),
        evaluations: records,
        incumbents: incumbents.to_vec(),
        best,
        solved: None,
        solved_by_value: None,
        tase: None,
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn run_single(args: &RunArgs) -> Result<Output> {
    let algorithm: Algorithm = args.algo.into();
    let (target, grid, bench, mut objective): (Target, Grid, Option<&BenchmarkFunction>, Box<dyn Objective>) =
        match (&args.function, &args.oracle) {
            (Some(name), _) => {
                let f = benchmarks::lookup(name)?;
                let n = args.tuning.n.unwrap_or_else(|| f.n_points());
                let grid = f.grid(n).map_err(|e| usage(e.to_string()))?;
                let target = Target::Function {
                    name: f.name.to_string(),
                };
                (target, grid, Some(f), Box::new(move |x: &[f64]| f.value(x[0])))
            }
            (None, Some(command)) => {
                let (Some(from), Some(to)) = (&args.from, &args.to) else {
                    return Err(usage("--oracle needs --from and --to"));
                };
                if let Some(d) = args.dim {
                    if from.len() != d || to.len() != d {
                        return Err(usage(format!(
                            "--dim {d} but --from has {} and --to has {} coordinates",
                            from.len(),
                            to.len()
                        )));
                    }
                }
                let n = args.tuning.n.unwrap_or(RunConfig::default().n_points);
                let grid = Grid::new(from.clone(), to.clone(), n).map_err(|e| usage(e.to_string()))?;
                let oracle = ExternalOracle::spawn_shell(command)?;
                let target = Target::Oracle {
                    command: command.clone(),
                    from: from.clone(),
                    to: to.clone(),
                };
                (target, grid, None, Box::new(oracle))
            }
            (None, None) => return Err(usage("one of --fn or --oracle is required")),
        };

    let mut config = args.tuning.config(grid.len(), args.budget);
    config.snapshots = args.snapshots;
    let stem = stem(&target, algorithm, args.budget);

    let trace = match driver::run(algorithm, &grid, objective.as_mut(), &config) {
        Ok(t) => t,
        Err(err) => {
            // Keep what was evaluated before the failure.
            let partial = partial_trace(target, algorithm, &config, &grid, &err.evaluations, &err.incumbents);
            let artifact = json_artifact(format!("{stem}.partial.json"), &partial)?;
            return Err(CliError::Partial {
                artifact: Box::new(artifact),
                source: Box::new(err.into()),
            });
        }
    };
    drop(objective);

    let mut file = TraceFile::new(target.clone(), &grid, &trace);
    let scores = match bench {
        Some(f) => score(f, &grid, &trace)?,
        None => None,
    };
    if let Some(s) = &scores {
        file.solved = Some(s.solved);
        file.solved_by_value = Some(s.solved_by_value);
        file.tase = Some(s.tase);
    }

    let header = FitHeader {
        target: target.clone(),
        algorithm,
        config: config.clone(),
    };
    let truth = scores.as_ref().map(|s| s.truth.as_slice());
    let mut artifacts = vec![
        json_artifact(format!("{stem}.trace.json"), &file)?,
        csv_artifact(
            format!("{stem}.fit.csv"),
            &header,
            &fit_rows(&grid, &trace.final_fit, &trace, truth),
        )?,
    ];
    if args.snapshots {
        artifacts.push(csv_artifact(
            format!("{stem}.snapshots.csv"),
            &header,
            &snapshot_rows(&grid, &trace.snapshots),
        )?);
    }

    let mut line = format!(
        "{} {} budget={} evaluations={} iterations={}",
        target.label(),
        algorithm,
        args.budget,
        trace.evaluations.len(),
        trace.iterations
    );
    if let Some(b) = &file.best {
        line.push_str(&format!(" best_f={} index={} x={:?}", b.f, b.index, b.x));
    }
    if let Some(s) = &scores {
        line.push_str(&format!(" solved={} tase={:.6}", s.solved, s.tase));
    }
    Ok(Output {
        artifacts,
        summary: vec![line],
    })
}

struct InstanceResult {
    row: SuiteRow,
    trace: Option<Artifact>,
}

fn run_instance(f: &'static BenchmarkFunction, algorithm: Algorithm, budget: usize, args: &SuiteArgs) -> InstanceResult {
    let n = args.tuning.n.unwrap_or_else(|| f.n_points());
    let config = args.tuning.config(n, budget);
    let mut row = SuiteRow {
        function: f.name.to_string(),
        algorithm,
        budget,
        n_points: n,
        evals_used: 0,
        solved: None,
        solved_by_value: None,
        best_f: None,
        f_star: f.f_star,
        tase: None,
        error: None,
    };
    let target = Target::Function {
        name: f.name.to_string(),
    };
    let path = format!("traces/{}.json", stem(&target, algorithm, budget));

    let outcome = (|| -> Result<(RunTrace, Grid)> {
        let grid = f.grid(n)?;
        let mut objective = |x: &[f64]| f.value(x[0]);
        let trace = driver::run(algorithm, &grid, &mut objective, &config)?;
        Ok((trace, grid))
    })();
    let (trace, grid) = match outcome {
        Ok(v) => v,
        Err(e) => {
            if let CliError::Run(r) = &e {
                row.evals_used = r.evaluations.len();
                row.best_f = r.incumbents.last().map(|b| b.value);
            }
            row.error = Some(e.to_string());
            return InstanceResult { row, trace: None };
        }
    };

    row.evals_used = trace.evaluations.len();
    row.best_f = trace.best().map(|b| b.value);
    let mut file = TraceFile::new(target, &grid, &trace);
    match score(f, &grid, &trace) {
        Ok(Some(s)) => {
            row.solved = Some(s.solved);
            row.solved_by_value = Some(s.solved_by_value);
            row.tase = Some(s.tase);
            file.solved = row.solved;
            file.solved_by_value = row.solved_by_value;
            file.tase = row.tase;
        }
        Ok(None) => {}
        Err(e) => row.error = Some(e.to_string()),
    }
    let trace = match json_artifact(path, &file) {
        Ok(a) => Some(a),
        Err(e) => {
            row.error = Some(e.to_string());
            None
        }
    };
    InstanceResult { row, trace }
}

pub fn fraction_rows(rows: &[SuiteRow]) -> Vec<FractionRow> {
    let mut tally: BTreeMap<(String, usize), (usize, usize)> = BTreeMap::new();
    for r in rows {
        let slot = tally.entry((r.algorithm.to_string(), r.budget)).or_default();
        slot.1 += 1;
        if r.solved == Some(true) {
            slot.0 += 1;
        }
    }
    tally
        .into_iter()
        .map(|((algorithm, budget), (solved, total))| FractionRow {
            algorithm,
            budget,
            solved,
            total,
            fraction: solved as f64 / total as f64,
        })
        .collect()
}

pub fn tase_rows(rows: &[SuiteRow]) -> Vec<TaseRow> {
    let mut groups: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
    for r in rows {
        let g = groups.entry((r.algorithm.to_string(), r.budget)).or_default();
        if let Some(t) = r.tase {
            g.push(t);
        }
    }
    groups
        .into_iter()
        .map(|((algorithm, budget), v)| TaseRow {
            algorithm,
            budget,
            count: v.len(),
            mean_tase: metrics::mean_tase(&v),
        })
        .collect()
}

/// Run the suite. Instance failures are recorded in the table; the error
/// returned alongside the output reports them after the artifacts exist.
pub fn run_suite(args: &SuiteArgs) -> Result<(Output, Option<CliError>)> {
    let functions: Vec<&'static BenchmarkFunction> = match &args.only {
        Some(names) => names
            .iter()
            .map(|n| benchmarks::lookup(n.trim()))
            .collect::<std::result::Result<_, _>>()?,
        None => benchmarks::all().iter().collect(),
    };
    if args.budgets.is_empty() || args.algos.is_empty() {
        return Err(usage("--budgets and --algos must not be empty"));
    }
    let algorithms: Vec<Algorithm> = args.algos.iter().map(|&a| a.into()).collect();
    let mut jobs = Vec::new();
    for &f in &functions {
        for &a in &algorithms {
            for &b in &args.budgets {
                jobs.push((f, a, b));
            }
        }
    }
    let results: Vec<InstanceResult> = jobs
        .par_iter()
        .map(|&(f, a, b)| run_instance(f, a, b, args))
        .collect();

    let rows: Vec<SuiteRow> = results.iter().map(|r| r.row.clone()).collect();
    let header = SuiteHeader {
        functions: functions.iter().map(|f| f.name.to_string()).collect(),
        budgets: args.budgets.clone(),
        algorithms: algorithms.clone(),
        config: args
            .tuning
            .config(RunConfig::default().n_points, *args.budgets.iter().min().expect("non-empty")),
    };
    let fractions = fraction_rows(&rows);
    let tases = tase_rows(&rows);

    let mut artifacts: Vec<Artifact> = results.into_iter().filter_map(|r| r.trace).collect();
    artifacts.push(csv_artifact("results.csv", &header, &rows)?);
    artifacts.push(csv_artifact("fraction_solved.csv", &header, &fractions)?);
    artifacts.push(csv_artifact("mean_tase.csv", &header, &tases)?);

    let mut summary = vec![format!("{:<8} {:>6} {:>7} {:>10}", "algo", "budget", "solved", "mean_tase")];
    for (fr, tr) in fractions.iter().zip(&tases) {
        summary.push(format!(
            "{:<8} {:>6} {:>3}/{:<3} {:>10}",
            fr.algorithm,
            fr.budget,
            fr.solved,
            fr.total,
            tr.mean_tase.map_or("-".to_string(), |t| format!("{t:.4}"))
        ));
    }
    let failed: Vec<&SuiteRow> = rows.iter().filter(|r| r.error.is_some()).collect();
    for r in &failed {
        summary.push(format!(
            "failed: {} {} {}: {}",
            r.function,
            r.algorithm,
            r.budget,
            r.error.as_deref().unwrap_or("")
        ));
    }
    let failure = (!failed.is_empty()).then_some(CliError::SuiteFailures {
        failed: failed.len(),
        total: rows.len(),
    });
    Ok((Output { artifacts, summary }, failure))
}

/// Fail unless two runs produced the same files byte for byte.
pub fn compare_runs(first: &[Artifact], second: &[Artifact]) -> Result<()> {
    for (a, b) in first.iter().zip(second) {
        if a != b {
            return Err(CliError::Nondeterministic { path: a.path.clone() });
        }
    }
    if first.len() != second.len() {
        let longer = if first.len() > second.len() { first } else { second };
        return Err(CliError::Nondeterministic {
            path: longer[first.len().min(second.len())].path.clone(),
        });
    }
    Ok(())
}

pub fn list(out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{:<20} {:>10} {:>10} {:>8} {:>16}", "name", "lower", "upper", "N", "f_star")?;
    for f in benchmarks::all() {
        writeln!(
            out,
            "{:<20} {:>10} {:>10} {:>8} {:>16}",
            f.name,
            f.lower,
            f.upper,
            f.n_points(),
            f.f_star
        )?;
    }
    Ok(())
}
