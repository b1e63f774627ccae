use contract_sched::{
    acceleration_ratio, deficiency, deficiency_bruteforce_oracle, exponential_schedule, performance_ratio,
    single_processor_deficiency, Contract, Extended, ExponentialSpec, Rational64, Schedule, Solver, Window,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_schedule(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize, max_len: usize) -> Schedule<f64> {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let len = rng.gen_range(n..=max_len.max(n));
    let contracts = (0..len)
        .map(|i| {
            // the first n contracts serve every problem once, so most windows are served
            let p = if i < n { i } else { rng.gen_range(0..n) };
            Contract::new(p, rng.gen_range(0..m), rng.gen_range(0.1..10.0))
        })
        .collect();
    Schedule::new(n, m, contracts).unwrap()
}

/// Performance ratio from its definition: the best offline schedule gives
/// each problem one contract; over every assignment of problems to
/// processors, its smallest contract is `t` over the largest processor count.
fn performance_oracle(s: &Schedule<f64>, t: f64) -> Extended<f64> {
    let snap = s.snapshot_before(t);
    if !snap.is_complete() {
        return Extended::Infinite;
    }
    let (n, m) = (s.n_problems(), s.m_processors());
    let mut best: f64 = 0.0;
    let mut code = vec![0usize; n];
    'outer: loop {
        let mut counts = vec![0usize; m];
        for &p in &code {
            counts[p] += 1;
        }
        best = best.max(t / *counts.iter().max().unwrap() as f64);
        for j in 0..n {
            code[j] += 1;
            if code[j] < m {
                continue 'outer;
            }
            code[j] = 0;
        }
        break;
    }
    Extended::Finite(best / snap.smallest())
}

#[test]
fn deficiency_matches_bisection_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for _ in 0..250 {
        let s = random_schedule(&mut rng, 6, 3, 12);
        let report = deficiency(&s, &Window::All, Solver::default()).unwrap();
        for w in &report.series {
            let oracle = deficiency_bruteforce_oracle(&s, w.time).unwrap();
            match (w.ratio, oracle) {
                (Extended::Finite(a), Extended::Finite(b)) => {
                    assert!((a - b).abs() <= 1e-9 * a.max(b), "{a} vs {b} at {}", w.time);
                    compared += 1;
                }
                (a, b) => assert_eq!(a, b),
            }
        }
    }
    assert!(compared > 500);
}

#[test]
fn performance_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let s = random_schedule(&mut rng, 5, 3, 10);
        let report = performance_ratio(&s, &Window::All);
        for w in &report.series {
            let oracle = performance_oracle(&s, w.time);
            match (w.ratio, oracle) {
                (Extended::Finite(a), Extended::Finite(b)) => assert!((a - b).abs() <= 1e-12 * a),
                (a, b) => assert_eq!(a, b),
            }
        }
    }
}

#[test]
fn single_processor_formula_agrees_with_opt() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let mut s = random_schedule(&mut rng, 6, 1, 15);
        if s.m_processors() != 1 {
            s = Schedule::single_processor(s.n_problems(), s.contracts().iter().map(|c| (c.problem, c.length))).unwrap();
        }
        let via_opt = deficiency(&s, &Window::Served, Solver::default()).unwrap();
        let via_sum = single_processor_deficiency(&s, &Window::Served).unwrap();
        match (via_opt.value, via_sum.value) {
            (Extended::Finite(a), Extended::Finite(b)) => assert!((a - b).abs() <= 1e-12 * a),
            (a, b) => assert_eq!(a, b),
        }
    }
}

#[test]
fn single_processor_formula_agrees_with_opt_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let len = rng.gen_range(n..=12);
        let contracts: Vec<(usize, Rational64)> = (0..len)
            .map(|i| {
                let p = if i < n { i } else { rng.gen_range(0..n) };
                (p, Rational64::new(rng.gen_range(1..200), rng.gen_range(1..20)))
            })
            .collect();
        let s = Schedule::single_processor(n, contracts).unwrap();
        let via_opt = deficiency(&s, &Window::Served, Solver::default()).unwrap();
        let via_sum = single_processor_deficiency(&s, &Window::Served).unwrap();
        assert_eq!(via_opt.value, via_sum.value);
        assert_eq!(via_opt.argmax, via_sum.argmax);
    }
}

#[test]
fn served_deficiency_is_at_least_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let s = random_schedule(&mut rng, 6, 3, 14);
        let report = deficiency(&s, &Window::Served, Solver::default()).unwrap();
        for w in &report.series {
            assert!(w.ratio >= Extended::Finite(1.0 - 1e-12));
        }
    }
}

#[test]
fn interior_times_never_exceed_next_critical_time() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..200 {
        let s = random_schedule(&mut rng, 4, 3, 12);
        let times = s.critical_times();
        for w in times.windows(2) {
            let (g0, g1) = (w[0], w[1]);
            let at_next = deficiency(&s, &Window::Times(vec![g1]), Solver::default()).unwrap().value;
            for _ in 0..3 {
                let t = rng.gen_range(g0..g1);
                if t <= g0 {
                    continue;
                }
                let snap = s.snapshot(t);
                if !snap.is_complete() {
                    continue;
                }
                let interior = deficiency(&s, &Window::Times(vec![t]), Solver::default()).unwrap().value;
                assert!(interior <= at_next, "t={t} in ({g0}, {g1})");
            }
        }
    }
}

#[test]
fn measures_coincide_for_one_problem_one_processor() {
    for &b in &[1.3, 2.0, 2.7] {
        let s = exponential_schedule(&ExponentialSpec::new(1, 1, b).with_k_max(30)).unwrap();
        let acc = acceleration_ratio(&s, &Window::Served).value;
        let perf = performance_ratio(&s, &Window::Served).value;
        let def = deficiency(&s, &Window::Served, Solver::default()).unwrap().value;
        assert_eq!(acc, perf);
        assert_eq!(acc, def);
    }
}

#[test]
fn performance_equals_acceleration_with_enough_processors() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..100 {
        let s = random_schedule(&mut rng, 3, 3, 10);
        if s.m_processors() < s.n_problems() {
            continue;
        }
        assert_eq!(acceleration_ratio(&s, &Window::All).value, performance_ratio(&s, &Window::All).value);
    }
}
