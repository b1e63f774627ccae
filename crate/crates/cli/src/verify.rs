//! Property and acceptance checks runnable from the command line.
//!
//! Every check is deterministic for a given [`VerifyConfig`]: randomized
//! checks draw from a ChaCha stream seeded by the config seed and the check's
//! position, so reports are byte-identical across runs.

use contract_sched::bounds::{
    acceleration_optimal_deficiency_bound, best_exponential_deficiency_single_processor,
    cyclic_acceleration_lower_bound, deficiency_lower_bound_general, deficiency_upper_bound,
    deficiency_upper_bound_at_beta, exponential_finish_time, grid_max, optimize_geometric_functional,
    performance_ratio_closed_form, roundrobin_lower_bound, two_problem_lower_bound, GeometricFunctional,
};
use contract_sched::transforms::{is_normalized, longest_run, not_increased, sum_deficiency, RemovalReason};
use contract_sched::{
    acceleration_optimal_base, acceleration_ratio, deficiency, deficiency_bruteforce_oracle, deficiency_optimal_base,
    exact_makespan, exponential_schedule, gamma_rho, graham_kappa, greedy_geometric_makespan, greedy_in_order,
    normalize, performance_ratio, reduce_consecutive_pairs, Contract, Extended, ExponentialSpec, MakespanInstance,
    Schedule, Solver, StepKind, Window,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, Default)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Replaces each check's own tolerance.
    pub tolerance: Option<f64>,
    /// Replaces each randomized check's own trial count.
    pub trials: Option<usize>,
    pub only: Option<String>,
}

impl VerifyConfig {
    pub fn with_seed(seed: u64) -> Self {
        VerifyConfig { seed, ..Default::default() }
    }

    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

type CheckFn = fn(&VerifyConfig) -> Check;

/// Acceptance criteria, in order.
pub const CRITERIA: [(&str, CheckFn); 10] = [
    ("doubling-schedule", criterion_doubling),
    ("best-exponential-single-processor", criterion_best_exponential),
    ("greedy-closed-form", criterion_greedy_closed_form),
    ("finish-time-closed-form", criterion_finish_time),
    ("deficiency-surface", criterion_surface),
    ("lower-bounds", criterion_lower_bounds),
    ("oracle-equivalence", criterion_oracles),
    ("graham-sandwich", criterion_graham),
    ("transform-safety", criterion_transforms),
    ("figure-data", criterion_figures),
];

const INVARIANTS: [(&str, CheckFn); 8] = [
    ("snapshot-monotone", invariant_snapshot_monotone),
    ("empirical-deficiency-below-bound", invariant_empirical_below_bound),
    ("beta-minimizes", invariant_beta_minimizes),
    ("beta-bound-above-lower-bounds", invariant_bound_ordering),
    ("acceleration-optimal-deficiency", invariant_acceleration_optimal_deficiency),
    ("performance-oracle", invariant_performance_oracle),
    ("deficiency-at-least-one", invariant_deficiency_at_least_one),
    ("one-problem-measures-coincide", invariant_measures_coincide),
];

/// Runs the acceptance criterion with 1-based index `id`.
pub fn criterion(id: usize, config: &VerifyConfig) -> Check {
    (CRITERIA[id - 1].1)(config)
}

pub fn run(config: &VerifyConfig) -> VerifyReport {
    let checks: Vec<Check> = CRITERIA
        .iter()
        .chain(INVARIANTS.iter())
        .filter(|(name, _)| config.only.as_deref().map_or(true, |only| name.contains(only)))
        .map(|(_, f)| f(config))
        .collect();
    VerifyReport {
        seed: config.seed,
        tolerance: config.tolerance,
        trials: config.trials,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn check(name: &'static str, tolerance: Option<f64>, failures: Vec<String>, summary: String) -> Check {
    let passed = failures.is_empty();
    let detail = if passed {
        summary
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        format!("{} failure(s): {}", failures.len(), shown.join("; "))
    };
    Check { name, passed, tolerance, detail }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn finite(x: Extended<f64>) -> f64 {
    x.finite().unwrap_or(f64::INFINITY)
}

fn exp_schedule(n: usize, m: usize, b: f64, k: usize) -> Schedule<f64> {
    exponential_schedule(&ExponentialSpec::new(n, m, b).with_k_max(k)).expect("valid exponential spec")
}

fn empirical_deficiency(s: &Schedule<f64>) -> f64 {
    finite(deficiency(s, &Window::Served, Solver::default()).expect("small instances").value)
}

fn criterion_doubling(config: &VerifyConfig) -> Check {
    let tol = config.tol(1e-3);
    let s = exp_schedule(1, 1, 2.0, 40);
    let def = empirical_deficiency(&s);
    let acc = finite(acceleration_ratio(&s, &Window::Served).value);
    let mut failures = vec![];
    for (what, v) in [("deficiency", def), ("acceleration", acc)] {
        if (v - 4.0).abs() > tol {
            failures.push(format!("{what} {v}"));
        }
    }
    check("doubling-schedule", Some(tol), failures, format!("deficiency {def}, acceleration {acc}"))
}

fn criterion_best_exponential(config: &VerifyConfig) -> Check {
    let tol = config.tol(1e-4);
    let mut failures = vec![];
    let mut values = vec![];
    for n in 1..=6 {
        let s = exp_schedule(n, 1, deficiency_optimal_base(n, 1), 60);
        let empirical = empirical_deficiency(&s);
        let closed = best_exponential_deficiency_single_processor::<f64>(n).expect("n >= 1").value;
        if (empirical - closed).abs() > tol {
            failures.push(format!("n={n}: {empirical} vs {closed}"));
        }
        values.push(empirical);
    }
    if (values[1] - 2.598).abs() > config.tol(1e-3) {
        failures.push(format!("n=2 value {}", values[1]));
    }
    check("best-exponential-single-processor", Some(tol), failures, format!("n=1..6: {values:?}"))
}

const GRID_BASES: [f64; 4] = [1.1, 1.5, 2.0, 3.0];

fn geometric_instance(b: f64, n: usize, m: usize, k: usize) -> MakespanInstance<f64> {
    MakespanInstance::new((k..k + n).map(|i| b.powi(i as i32)).collect(), m).expect("positive sizes")
}

fn geometric_grid() -> impl Iterator<Item = (f64, usize, usize, usize)> {
    GRID_BASES
        .into_iter()
        .flat_map(|b| (1..=8).flat_map(move |n| (1..=4).flat_map(move |m| (0..=3).map(move |k| (b, n, m, k)))))
}

fn criterion_greedy_closed_form(config: &VerifyConfig) -> Check {
    let tol = config.tol(1e-9);
    let mut failures = vec![];
    let mut count = 0;
    for (b, n, m, k) in geometric_grid() {
        let inst = geometric_instance(b, n, m, k);
        let order: Vec<usize> = (0..n).collect();
        let greedy = greedy_in_order(&inst, &order).expect("identity order").makespan;
        let closed = greedy_geometric_makespan(b, n, m, k);
        if !rel_close(greedy, closed, tol) {
            failures.push(format!("b={b} n={n} m={m} k={k}: {greedy} vs {closed}"));
        }
        count += 1;
    }
    check("greedy-closed-form", Some(tol), failures, format!("{count} grid points"))
}

fn criterion_finish_time(config: &VerifyConfig) -> Check {
    let tol = config.tol(1e-9);
    let mut failures = vec![];
    let mut count = 0;
    for (b, n, m, k) in geometric_grid() {
        let s = exp_schedule(n, m, b, n + m + k + 1);
        let simulated = s.finish_time(n + k);
        let closed = exponential_finish_time(b, n, m, k);
        if !rel_close(simulated, closed, tol) {
            failures.push(format!("b={b} n={n} m={m} k={k}: {simulated} vs {closed}"));
        }
        count += 1;
    }
    check("finish-time-closed-form", Some(tol), failures, format!("{count} grid points"))
}

fn criterion_surface(config: &VerifyConfig) -> Check {
    let tol = config.tol(1e-6);
    let want = 0.375 * 5f64.powf(1.25);
    let mut failures = vec![];
    let mut points = vec![];
    for m in 1..=64 {
        for rho in 1..=64 {
            let report = deficiency_upper_bound_at_beta::<f64>(rho * m + 1, m).expect("n, m >= 1");
            points.push(((m, rho), report.value));
            if report.value > 3.74 {
                failures.push(format!("m={m} rho={rho}: {} > 3.74", report.value));
            }
        }
    }
    let ((m, rho), max) = grid_max(points).expect("non-empty grid");
    if (m, rho) != (2, 1) || (max - want).abs() > tol {
        failures.push(format!("maximum {max} at m={m} rho={rho}"));
    }
    for m in 1..=64 {
        for n in 1..=m {
            let v = deficiency_upper_bound_at_beta::<f64>(n, m).expect("n, m >= 1").value;
            if v > 4.0 {
                failures.push(format!("n={n} m={m}: {v} > 4"));
            }
        }
    }
    check("deficiency-surface", Some(tol), failures, format!("maximum {max} at m={m} rho={rho}"))
}

fn criterion_lower_bounds(config: &VerifyConfig) -> Check {
    let mut failures = vec![];
    let two = two_problem_lower_bound::<f64>();
    let numeric = optimize_geometric_functional::<f64>(GeometricFunctional::TwoProblem).expect("converges");
    let a_want = 2f64.powf(2.0 / 3.0);
    if (two.value - 2.1165).abs() > config.tol(1e-3) || (numeric.value - 2.1165).abs() > config.tol(1e-3) {
        failures.push(format!("two-problem value {} / {}", two.value, numeric.value));
    }
    if (numeric.a - a_want).abs() > config.tol(1e-6) {
        failures.push(format!("two-problem minimizer {}", numeric.a));
    }
    for n in 1..=30 {
        let rr = roundrobin_lower_bound::<f64>(n).expect("n >= 1").value;
        let best = best_exponential_deficiency_single_processor::<f64>(n).expect("n >= 1").value;
        if rr != best {
            failures.push(format!("round-robin n={n}: {rr} vs {best}"));
        }
    }
    let cyclic = cyclic_acceleration_lower_bound::<f64>(1, 1).expect("n, m >= 1").value;
    if (cyclic - 4.0).abs() > 1e-12 {
        failures.push(format!("cyclic n=m=1: {cyclic}"));
    }
    for n in 1..=6 {
        for m in 1..=6 {
            let opt = optimize_geometric_functional::<f64>(GeometricFunctional::Cyclic { n, m }).expect("converges");
            let a = acceleration_optimal_base::<f64>(n, m);
            if (opt.a - a).abs() > config.tol(1e-6) {
                failures.push(format!("cyclic n={n} m={m}: {} vs {a}", opt.a));
            }
        }
    }
    check(
        "lower-bounds",
        config.tolerance,
        failures,
        format!("two-problem {} at a={}", numeric.value, numeric.a),
    )
}

fn random_schedule(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize, max_len: usize) -> Schedule<f64> {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let len = rng.gen_range(n..=max_len.max(n));
    let contracts = (0..len)
        .map(|i| {
            let p = if i < n { i } else { rng.gen_range(0..n) };
            Contract::new(p, rng.gen_range(0..m), rng.gen_range(0.1..10.0))
        })
        .collect();
    Schedule::new(n, m, contracts).expect("valid random schedule")
}

fn random_single(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Schedule<f64> {
    let entries: Vec<(usize, f64)> = (0..len).map(|_| (rng.gen_range(0..n), rng.gen_range(0.1..10.0))).collect();
    Schedule::single_processor(n, entries).expect("valid random schedule")
}

/// Minimum over all `m^n` assignments of the maximum load.
pub fn enumerate_makespan(sizes: &[f64], m: usize) -> f64 {
    let n = sizes.len();
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut loads = vec![0.0; m];
            for &s in sizes {
                loads[code % m] += s;
                code /= m;
            }
            loads.into_iter().fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

fn criterion_oracles(config: &VerifyConfig) -> Check {
    let tol = config.tol(1e-9);
    let trials = config.trials(200);
    let mut rng = config.rng(7);
    let mut failures = vec![];
    let mut compared = 0;
    for _ in 0..trials {
        let s = random_schedule(&mut rng, 6, 3, 12);
        let report = deficiency(&s, &Window::All, Solver::default()).expect("small instances");
        for w in &report.series {
            let oracle = deficiency_bruteforce_oracle(&s, w.time).expect("within oracle guard");
            match (w.ratio, oracle) {
                (Extended::Finite(a), Extended::Finite(b)) => {
                    compared += 1;
                    if !rel_close(a, b, tol) {
                        failures.push(format!("t={}: {a} vs {b}", w.time));
                    }
                }
                (a, b) if a != b => failures.push(format!("t={}: {a} vs {b}", w.time)),
                _ => {}
            }
        }
    }
    for _ in 0..trials {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=3);
        let sizes: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..10.0)).collect();
        let exact = exact_makespan(&MakespanInstance::new(sizes.clone(), m).expect("positive sizes")).expect("small");
        let brute = enumerate_makespan(&sizes, m);
        if !rel_close(exact.makespan, brute, tol) {
            failures.push(format!("makespan {sizes:?} m={m}: {} vs {brute}", exact.makespan));
        }
    }
    check(
        "oracle-equivalence",
        Some(tol),
        failures,
        format!("{trials} schedules ({compared} critical times), {trials} makespan instances"),
    )
}

fn criterion_graham(config: &VerifyConfig) -> Check {
    let slack = config.tol(1e-12);
    let mut failures = vec![];
    for (b, n, m, k) in geometric_grid() {
        let inst = geometric_instance(b, n, m, k);
        let order: Vec<usize> = (0..n).collect();
        let greedy = greedy_in_order(&inst, &order).expect("identity order").makespan;
        let exact = exact_makespan(&inst).expect("small").makespan;
        let graham = 2.0 - 1.0 / m as f64;
        let kappa_bound = graham_kappa(b, m) * greedy_geometric_makespan(b, n, m, k);
        if exact > greedy * (1.0 + slack) || greedy > graham * exact * (1.0 + slack) {
            failures.push(format!("b={b} n={n} m={m} k={k}: exact {exact}, greedy {greedy}"));
        }
        if exact < kappa_bound * (1.0 - slack) {
            failures.push(format!("b={b} n={n} m={m} k={k}: exact {exact} < kappa bound {kappa_bound}"));
        }
    }
    check("graham-sandwich", Some(slack), failures, "all geometric grid instances".into())
}

fn criterion_transforms(config: &VerifyConfig) -> Check {
    let tol = config.tol(1e-9);
    let trials = config.trials(500);
    let mut rng = config.rng(9);
    let mut failures = vec![];
    let (mut swaps, mut removals) = (0, 0);
    for _ in 0..trials {
        let s = random_single(&mut rng, 3, 8);
        let trace = normalize(&s).expect("single processor");
        if !not_increased(sum_deficiency(&trace.output), sum_deficiency(&s), tol) {
            failures.push(format!("normalize increased deficiency on {:?}", s.contracts()));
        }
        for step in &trace.steps {
            swaps += matches!(step.kind, StepKind::Swap { .. }) as usize;
            if !step.guaranteed || !step.not_increased(tol) {
                failures.push(format!("normalize step {step:?}"));
            }
        }
        if !is_normalized(&trace.output).expect("single processor") || !normalize(&trace.output).expect("single processor").is_identity() {
            failures.push(format!("normalize not idempotent on {:?}", s.contracts()));
        }
    }
    for _ in 0..trials {
        let s = normalize(&random_single(&mut rng, 2, 10)).expect("single processor").output;
        let trace = match reduce_consecutive_pairs(&s) {
            Ok(trace) => trace,
            Err(e) => {
                failures.push(format!("reduce failed: {e}"));
                continue;
            }
        };
        if longest_run(&trace.output) > 2 {
            failures.push(format!("run left in {:?}", trace.output.contracts()));
        }
        for step in &trace.steps {
            removals += matches!(step.kind, StepKind::Removal { reason: RemovalReason::ConsecutivePair, .. }) as usize;
            if !step.guaranteed || !step.not_increased(tol) {
                failures.push(format!("reduce step {step:?}"));
            }
        }
        if !not_increased(sum_deficiency(&trace.output), sum_deficiency(&s), tol) {
            failures.push(format!("reduce increased deficiency on {:?}", s.contracts()));
        }
    }
    check(
        "transform-safety",
        Some(tol),
        failures,
        format!("{trials} normalized ({swaps} swaps), {trials} reduced ({removals} pair removals)"),
    )
}

fn criterion_figures(config: &VerifyConfig) -> Check {
    let tol = config.tol(1e-12);
    let mut failures = vec![];
    let fig1 = contract_sched::bounds::performance_curve::<f64>(64);
    if (fig1[0].1 - 4.0).abs() > tol {
        failures.push(format!("figure 1 starts at {}", fig1[0].1));
    }
    if !fig1.windows(2).all(|w| w[1].1 < w[0].1) {
        failures.push("figure 1 not decreasing".into());
    }
    let e = std::f64::consts::E;
    let last = fig1.last().expect("non-empty").1;
    if !fig1.iter().all(|&(_, v)| v > e) || last - e > 0.03 {
        failures.push(format!("figure 1 does not approach e from above: last {last}"));
    }
    let fig3 = contract_sched::bounds::single_processor_curves::<f64>(20);
    if fig3.len() != 20 {
        failures.push(format!("figure 3 has {} rows", fig3.len()));
    }
    for &(n, lower, exp) in &fig3 {
        let nn = n as f64;
        if !rel_close(lower, (nn + 1.0) / nn, tol) || !rel_close(exp, (nn + 1.0).powf((nn + 1.0) / nn) / nn, tol) || exp <= lower {
            failures.push(format!("figure 3 row n={n}: {lower}, {exp}"));
        }
    }
    if (fig3[0].2 - 4.0).abs() > tol || (fig3[1].2 - 2.598).abs() > 1e-3 || (fig3[1].1 - 1.5).abs() > tol {
        failures.push("figure 3 anchors".into());
    }
    check(
        "figure-data",
        Some(tol),
        failures,
        format!("figure 1 from {} down to {last}; figure 3 n=1..20", fig1[0].1),
    )
}

fn invariant_snapshot_monotone(config: &VerifyConfig) -> Check {
    let trials = config.trials(200);
    let mut rng = config.rng(11);
    let mut failures = vec![];
    for _ in 0..trials {
        let s = random_schedule(&mut rng, 5, 3, 15);
        let times = s.critical_times();
        let min_gap = times.windows(2).map(|g| g[1] - g[0]).fold(f64::INFINITY, f64::min);
        for w in times.windows(2) {
            let (a, b) = (s.snapshot(w[0]), s.snapshot(w[1]));
            if a.longest().iter().zip(b.longest()).any(|(x, y)| x > y) {
                failures.push(format!("snapshot shrinks between {} and {}", w[0], w[1]));
            }
            if s.snapshot_before(w[1]).longest() != s.snapshot(w[1] - min_gap / 2.0).longest() {
                failures.push(format!("left limit at {} differs from epsilon snapshot", w[1]));
            }
        }
    }
    check("snapshot-monotone", None, failures, format!("{trials} schedules"))
}

fn invariant_empirical_below_bound(config: &VerifyConfig) -> Check {
    let slack = config.tol(1e-6);
    let mut failures = vec![];
    for b in [1.2, 1.5, 2.0, 3.0] {
        for n in 1..=6 {
            for m in 1..=4 {
                let s = exp_schedule(n, m, b, 8 * (n + m));
                let empirical = empirical_deficiency(&s);
                let bound = deficiency_upper_bound(n, m, b).expect("b > 1").value;
                if empirical > bound + slack {
                    failures.push(format!("b={b} n={n} m={m}: {empirical} > {bound}"));
                }
            }
        }
    }
    check("empirical-deficiency-below-bound", Some(slack), failures, "b in {1.2,1.5,2,3}, n 1..6, m 1..4".into())
}

fn invariant_beta_minimizes(_config: &VerifyConfig) -> Check {
    let f = |b: f64, n: usize, m: usize| {
        let (gamma, _) = gamma_rho(n, m);
        b.powi((n + m) as i32) / (b.powi((n + m - 1) as i32) - b.powi(gamma as i32))
    };
    let mut failures = vec![];
    for n in 1..=16 {
        for m in 1..=16 {
            let beta = deficiency_optimal_base::<f64>(n, m);
            if f(beta, n, m) > f(beta + 1e-3, n, m) || f(beta, n, m) > f(beta - 1e-3, n, m) {
                failures.push(format!("n={n} m={m}"));
            }
        }
    }
    check("beta-minimizes", None, failures, "n, m in 1..16, delta 1e-3".into())
}

fn invariant_bound_ordering(_config: &VerifyConfig) -> Check {
    let mut failures = vec![];
    for n in 1..=16 {
        let at_beta = deficiency_upper_bound_at_beta::<f64>(n, 1).expect("n >= 1").value;
        let rr = roundrobin_lower_bound::<f64>(n).expect("n >= 1").value;
        let general = deficiency_lower_bound_general::<f64>(n).expect("n >= 1").value;
        if at_beta < rr * (1.0 - 1e-12) || at_beta < general {
            failures.push(format!("n={n}: {at_beta} below {rr} or {general}"));
        }
        for m in 1..=16 {
            let v = deficiency_upper_bound_at_beta::<f64>(n, m).expect("n, m >= 1").value;
            if v < 1.0 {
                failures.push(format!("n={n} m={m}: {v} < 1"));
            }
        }
    }
    check("beta-bound-above-lower-bounds", None, failures, "n, m in 1..16".into())
}

fn invariant_acceleration_optimal_deficiency(config: &VerifyConfig) -> Check {
    let tol = config.tol(0.01);
    let grid = (1..=16).flat_map(|m| (m..=16).map(move |n| (n, m)));
    let points = grid.map(|(n, m)| ((n, m), acceleration_optimal_deficiency_bound::<f64>(n, m).expect("n, m >= 1").value));
    let ((n, m), max) = grid_max(points).expect("non-empty grid");
    let mut failures = vec![];
    if (max - 4.24).abs() > tol {
        failures.push(format!("worst case {max} at n={n} m={m}"));
    }
    check("acceleration-optimal-deficiency", Some(tol), failures, format!("worst case {max} at n={n} m={m} over n >= m"))
}

/// Best offline smallest contract: `t` over the fewest problems a processor must take.
fn performance_oracle(s: &Schedule<f64>, t: f64) -> Extended<f64> {
    let snap = s.snapshot_before(t);
    if !snap.is_complete() {
        return Extended::Infinite;
    }
    let (n, m) = (s.n_problems(), s.m_processors());
    let best = (0..m.pow(n as u32))
        .map(|mut code| {
            let mut counts = vec![0usize; m];
            for _ in 0..n {
                counts[code % m] += 1;
                code /= m;
            }
            t / *counts.iter().max().expect("m >= 1") as f64
        })
        .fold(0.0, f64::max);
    Extended::Finite(best / snap.smallest())
}

fn invariant_performance_oracle(config: &VerifyConfig) -> Check {
    let tol = config.tol(1e-12);
    let trials = config.trials(200);
    let mut rng = config.rng(13);
    let mut failures = vec![];
    for _ in 0..trials {
        let s = random_schedule(&mut rng, 5, 3, 10);
        for w in &performance_ratio(&s, &Window::All).series {
            match (w.ratio, performance_oracle(&s, w.time)) {
                (Extended::Finite(a), Extended::Finite(b)) if rel_close(a, b, tol) => {}
                (Extended::Infinite, Extended::Infinite) => {}
                (a, b) => failures.push(format!("t={}: {a} vs {b}", w.time)),
            }
        }
    }
    check("performance-oracle", Some(tol), failures, format!("{trials} schedules"))
}

fn invariant_deficiency_at_least_one(config: &VerifyConfig) -> Check {
    let trials = config.trials(200);
    let mut rng = config.rng(15);
    let mut failures = vec![];
    for _ in 0..trials {
        let s = random_schedule(&mut rng, 6, 3, 14);
        for w in &deficiency(&s, &Window::Served, Solver::default()).expect("small").series {
            if w.ratio < Extended::Finite(1.0 - 1e-12) {
                failures.push(format!("t={}: {}", w.time, w.ratio));
            }
        }
    }
    check("deficiency-at-least-one", None, failures, format!("{trials} schedules"))
}

fn invariant_measures_coincide(_config: &VerifyConfig) -> Check {
    let mut failures = vec![];
    for b in [1.3, 2.0, 2.7] {
        let s = exp_schedule(1, 1, b, 30);
        let acc = acceleration_ratio(&s, &Window::Served).value;
        let perf = performance_ratio(&s, &Window::Served).value;
        let def = deficiency(&s, &Window::Served, Solver::default()).expect("small").value;
        if acc != perf || acc != def {
            failures.push(format!("b={b}: {acc} {perf} {def}"));
        }
    }
    let (n, m) = (3, 3);
    let perf = performance_ratio_closed_form::<f64>(n, m).expect("n, m >= 1").value;
    if (perf - 4.0).abs() > 1e-12 {
        failures.push(format!("closed-form performance at n=m: {perf}"));
    }
    check("one-problem-measures-coincide", None, failures, "b in {1.3, 2, 2.7}".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_makespan(&[1.0, 2.0, 4.0], 2), 4.0);
        assert_eq!(enumerate_makespan(&[3.0, 3.0, 2.0, 2.0, 2.0], 2), 6.0);
        assert_eq!(enumerate_makespan(&[1.0, 2.0], 1), 3.0);
    }

    #[test]
    fn reports_are_reproducible() {
        let config = VerifyConfig { trials: Some(20), only: Some("oracle".into()), ..VerifyConfig::with_seed(3) };
        let a = serde_json::to_string(&run(&config)).unwrap();
        let b = serde_json::to_string(&run(&config)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tolerance_override_is_reported() {
        let config = VerifyConfig { tolerance: Some(1e-30), only: Some("doubling".into()), ..Default::default() };
        let report = run(&config);
        assert_eq!(report.checks[0].tolerance, Some(1e-30));
        assert!(!report.passed);
    }
}
