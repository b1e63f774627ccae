use std::fs;
use std::io::Write;
use std::path::Path;

use contract_sched::bounds::{self, BoundReport};
use contract_sched::transforms::{normalize, reduce_consecutive_pairs, NormalizationTrace};
use contract_sched::{
    acceleration_optimal_base, acceleration_ratio, deficiency, deficiency_optimal_base, exponential_schedule,
    greedy, lpt_makespan, performance_ratio, Error, ExactSolver, Extended, ExponentialSpec, MakespanInstance,
    MeasureReport, Schedule, Solver, Window,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::table::{format_sig, Table};
use crate::{
    BaseChoice, BoundName, BoundsArgs, Command, EvalArgs, GenArgs, MakespanArgs, MakespanSolver, MeasureArg,
    NormalizeArgs, SolverArg, SweepArgs, VerifyArgs, WindowArg, THREADS_ENV,
};

pub fn execute(command: &Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Gen(args) => cmd_gen(args, out),
        Command::Eval(args) => cmd_eval(args, out),
        Command::Bounds(args) => cmd_bounds(args, out),
        Command::Makespan(args) => cmd_makespan(args, out),
        Command::Normalize(args) => cmd_normalize(args, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::Verify(args) => cmd_verify(args, out),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path.display().to_string(), e))
}

/// Writes to `path` if given, to `out` otherwise.
fn emit(path: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(path) => write_file(path, bytes),
        None => out.write_all(bytes).map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn read_schedule(path: &Path) -> CliResult<Schedule<f64>> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| CliError::io(display.clone(), e))?;
    serde_json::from_str(&text).map_err(|source| {
        // validation failures surface through serde as custom errors
        CliError::Json { path: display, source }
    })
}

fn resolve_base(choice: BaseChoice, n: usize, m: usize) -> CliResult<f64> {
    if n == 0 || m == 0 {
        return Err(Error::EmptyDimension { n, m }.into());
    }
    Ok(match choice {
        BaseChoice::DeficiencyOptimal => deficiency_optimal_base(n, m),
        BaseChoice::AccelerationOptimal => acceleration_optimal_base(n, m),
        BaseChoice::Value(b) => b,
    })
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> CliResult<()> {
    let base = resolve_base(args.base, args.n, args.m)?;
    let mut spec = ExponentialSpec::new(args.n, args.m, base);
    if let Some(k) = args.k {
        spec = spec.with_k_max(k);
    }
    let schedule = exponential_schedule(&spec)?;
    emit(args.out.as_deref(), to_json(&schedule).as_bytes(), out)
}

pub fn evaluate(schedule: &Schedule<f64>, measure: MeasureArg, solver: SolverArg, window: WindowArg) -> CliResult<MeasureReport<f64>> {
    let window = match window {
        WindowArg::Served => Window::Served,
        WindowArg::All => Window::All,
    };
    let solver = match solver {
        SolverArg::Exact => Solver::Exact(ExactSolver::default()),
        SolverArg::Lpt => Solver::Lpt,
    };
    Ok(match measure {
        MeasureArg::Acc => acceleration_ratio(schedule, &window),
        MeasureArg::Perf => performance_ratio(schedule, &window),
        MeasureArg::Def => deficiency(schedule, &window, solver)?,
    })
}

fn extended(x: Extended<f64>) -> String {
    match x {
        Extended::Finite(v) => format_sig(v),
        Extended::Infinite => "inf".into(),
    }
}

pub fn series_table(report: &MeasureReport<f64>, comment: String) -> Table {
    let mut table = Table::new(comment, vec!["time", "snapshot", "denominator", "ratio"]);
    for w in &report.series {
        let snapshot: Vec<String> = w.sorted.iter().map(|&x| format_sig(x)).collect();
        table.push(vec![
            format_sig(w.time),
            snapshot.join(";"),
            w.denominator.map(format_sig).unwrap_or_default(),
            extended(w.ratio),
        ]);
    }
    table
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> CliResult<()> {
    let schedule = read_schedule(&args.schedule)?;
    let report = evaluate(&schedule, args.measure, args.solver, args.window)?;
    if let Some(path) = &args.csv {
        let comment = format!(
            "measure={:?} solver={:?} window={:?} n={} m={} contracts={} value={}",
            args.measure,
            args.solver,
            args.window,
            schedule.n_problems(),
            schedule.m_processors(),
            schedule.len(),
            extended(report.value),
        )
        .to_lowercase();
        write_file(path, &series_table(&report, comment).to_bytes()?)?;
    }
    emit(None, to_json(&report).as_bytes(), out)
}

fn single_processor(m: usize) -> CliResult<()> {
    if m != 1 {
        return Err(Error::NotSingleProcessor(m).into());
    }
    Ok(())
}

pub fn bound(args: &BoundsArgs) -> CliResult<BoundReport<f64>> {
    let (n, m) = (args.n, args.m);
    Ok(match args.name {
        BoundName::DeficiencyUb => {
            let b = args.b.ok_or(CliError::Usage { what: "arguments", message: "--b is required for deficiency-ub".into() })?;
            bounds::deficiency_upper_bound(n, m, b)?
        }
        BoundName::DeficiencyUbBeta => bounds::deficiency_upper_bound_at_beta(n, m)?,
        BoundName::BestExp => {
            single_processor(m)?;
            bounds::best_exponential_deficiency_single_processor(n)?
        }
        BoundName::GeneralLb => {
            single_processor(m)?;
            bounds::deficiency_lower_bound_general(n)?
        }
        BoundName::RoundrobinLb => {
            single_processor(m)?;
            bounds::roundrobin_lower_bound(n)?
        }
        BoundName::TwoProblemLb => bounds::two_problem_lower_bound(),
        BoundName::CyclicAccLb => bounds::cyclic_acceleration_lower_bound(n, m)?,
        BoundName::PerfClosedForm => bounds::performance_ratio_closed_form(n, m)?,
        BoundName::AccOptDeficiencyUb => bounds::acceleration_optimal_deficiency_bound(n, m)?,
    })
}

fn cmd_bounds(args: &BoundsArgs, out: &mut dyn Write) -> CliResult<()> {
    let report = bound(args)?;
    emit(None, to_json(&report).as_bytes(), out)
}

#[derive(Serialize)]
struct MakespanOutput {
    makespan: f64,
    loads: Vec<f64>,
    assignment: Vec<usize>,
    optimal: bool,
}

fn cmd_makespan(args: &MakespanArgs, out: &mut dyn Write) -> CliResult<()> {
    let instance = MakespanInstance::new(args.sizes.clone(), args.m)?;
    let assignment = match args.solver {
        MakespanSolver::Exact => ExactSolver::default().solve(&instance)?,
        MakespanSolver::Greedy => greedy(&instance),
        MakespanSolver::Lpt => lpt_makespan(&instance),
    };
    let output = MakespanOutput {
        makespan: assignment.makespan,
        loads: assignment.loads,
        assignment: assignment.processor_of,
        optimal: assignment.optimal,
    };
    emit(None, to_json(&output).as_bytes(), out)
}

pub fn normalize_schedule(schedule: &Schedule<f64>, pairs: bool) -> CliResult<NormalizationTrace<f64>> {
    let mut trace = normalize(schedule)?;
    if pairs {
        let reduced = reduce_consecutive_pairs(&trace.output)?;
        trace.output = reduced.output;
        trace.steps.extend(reduced.steps);
    }
    Ok(trace)
}

fn cmd_normalize(args: &NormalizeArgs, out: &mut dyn Write) -> CliResult<()> {
    let schedule = read_schedule(&args.schedule)?;
    let trace = normalize_schedule(&schedule, args.pairs)?;
    if let Some(path) = &args.trace {
        write_file(path, to_json(&trace).as_bytes())?;
    }
    emit(args.out.as_deref(), to_json(&trace.output).as_bytes(), out)
}

/// Thread pool sized by [`THREADS_ENV`], or rayon's default when unset.
pub fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads = value
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| CliError::Usage { what: THREADS_ENV, message: format!("expected a positive integer, got {value:?}") })?;
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| CliError::Usage { what: "thread pool", message: e.to_string() })
}

pub fn figure_table(args: &SweepArgs, pool: &rayon::ThreadPool) -> CliResult<Table> {
    Ok(match args.figure {
        1 => {
            let mut table = Table::new(format!("figure=1 perf vs n/m, m divides n, r_max={}", args.r_max), vec!["n_over_m", "perf"]);
            for (r, value) in bounds::performance_curve::<f64>(args.r_max) {
                table.push(vec![r.to_string(), format_sig(value)]);
            }
            table
        }
        2 => {
            let mut table = Table::new(
                format!("figure=2 deficiency bound at beta, m_max={} rho_max={}", args.m_max, args.rho_max),
                vec!["m", "rho", "beta", "lambda", "value"],
            );
            let points: Vec<(usize, usize)> = (1..=args.m_max).flat_map(|m| (1..=args.rho_max).map(move |rho| (m, rho))).collect();
            let rows: Vec<CliResult<Vec<String>>> = pool.install(|| {
                points
                    .par_iter()
                    .map(|&(m, rho)| {
                        let report = bounds::deficiency_upper_bound_at_beta::<f64>(rho * m + 1, m)?;
                        Ok(vec![
                            m.to_string(),
                            rho.to_string(),
                            format_sig(report.params.beta.expect("beta")),
                            format_sig(report.params.lambda.expect("lambda")),
                            format_sig(report.value),
                        ])
                    })
                    .collect()
            });
            for row in rows {
                table.push(row?);
            }
            table
        }
        3 => {
            let mut table = Table::new(format!("figure=3 single processor, n_max={}", args.n_max), vec!["n", "lower", "exp"]);
            for (n, lower, exp) in bounds::single_processor_curves::<f64>(args.n_max) {
                table.push(vec![n.to_string(), format_sig(lower), format_sig(exp)]);
            }
            table
        }
        other => return Err(CliError::Usage { what: "figure", message: format!("expected 1, 2 or 3, got {other}") }),
    })
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let pool = thread_pool()?;
    let table = figure_table(args, &pool)?;
    emit(args.csv.as_deref(), &table.to_bytes()?, out)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let config = crate::verify::VerifyConfig {
        seed: args.seed,
        tolerance: args.tolerance,
        trials: args.trials,
        only: args.only.clone(),
    };
    let report = crate::verify::run(&config);
    emit(None, to_json(&report).as_bytes(), out)?;
    if report.passed {
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        Err(CliError::VerifyFailed { failed, total: report.checks.len() })
    }
}
