use contract_sched::{
    exact_makespan, exponential_schedule, graham_kappa, greedy_geometric_makespan, greedy_in_order, ExponentialSpec,
    MakespanInstance,
};
use contract_sched::bounds::exponential_finish_time;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BASES: [f64; 4] = [1.1, 1.5, 2.0, 3.0];

fn geometric(b: f64, n: usize, k: usize) -> Vec<f64> {
    (k..k + n).map(|i| b.powi(i as i32)).collect()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

/// Minimum over all `m^n` assignments of the maximum load.
fn enumerate_makespan(sizes: &[f64], m: usize) -> f64 {
    let n = sizes.len();
    let mut best = f64::INFINITY;
    let mut code = vec![0usize; n];
    loop {
        let mut loads = vec![0.0; m];
        for (j, &p) in code.iter().enumerate() {
            loads[p] += sizes[j];
        }
        best = best.min(loads.iter().cloned().fold(0.0, f64::max));
        let mut j = 0;
        loop {
            if j == n {
                return best;
            }
            code[j] += 1;
            if code[j] < m {
                break;
            }
            code[j] = 0;
            j += 1;
        }
    }
}

#[test]
fn greedy_matches_closed_form() {
    for &b in &BASES {
        for n in 1..=8 {
            for m in 1..=4 {
                for k in 0..=3 {
                    let inst = MakespanInstance::new(geometric(b, n, k), m).unwrap();
                    let order: Vec<usize> = (0..n).collect();
                    let greedy = greedy_in_order(&inst, &order).unwrap();
                    let closed = greedy_geometric_makespan(b, n, m, k);
                    assert!(close(greedy.makespan, closed), "b={b} n={n} m={m} k={k}");
                    for (i, &p) in greedy.processor_of.iter().enumerate() {
                        assert_eq!(p, i % m);
                    }
                }
            }
        }
    }
}

#[test]
fn finish_times_match_closed_form() {
    for &b in &BASES {
        for n in 1..=8 {
            for m in 1..=4 {
                let s = exponential_schedule(&ExponentialSpec::new(n, m, b).with_k_max(n + m + 4)).unwrap();
                for k in 0..=3 {
                    let closed = exponential_finish_time(b, n, m, k);
                    assert!(close(s.finish_time(n + k), closed), "b={b} n={n} m={m} k={k}");
                }
            }
        }
    }
}

#[test]
fn graham_sandwich_on_geometric_instances() {
    for &b in &BASES {
        for n in 1..=8 {
            for m in 1..=4 {
                for k in 0..=3 {
                    let inst = MakespanInstance::new(geometric(b, n, k), m).unwrap();
                    let order: Vec<usize> = (0..n).collect();
                    let greedy = greedy_in_order(&inst, &order).unwrap().makespan;
                    let exact = exact_makespan(&inst).unwrap().makespan;
                    let graham = 2.0 - 1.0 / m as f64;
                    assert!(exact <= greedy * (1.0 + 1e-12));
                    assert!(greedy <= graham * exact * (1.0 + 1e-12));
                    let kappa = graham_kappa(b, m);
                    assert!(exact >= kappa * greedy_geometric_makespan(b, n, m, k) * (1.0 - 1e-12));
                }
            }
        }
    }
}

#[test]
fn exact_agrees_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..300 {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=3);
        let sizes: Vec<f64> = (0..n)
            .map(|_| if trial % 3 == 0 { rng.gen_range(1..6) as f64 } else { rng.gen_range(0.05..10.0) })
            .collect();
        let inst = MakespanInstance::new(sizes.clone(), m).unwrap();
        let exact = exact_makespan(&inst).unwrap();
        let brute = enumerate_makespan(&sizes, m);
        assert!(close(exact.makespan, brute), "sizes={sizes:?} m={m}: {} vs {brute}", exact.makespan);
        assert!(exact.optimal);
        let max = sizes.iter().cloned().fold(0.0, f64::max);
        assert!(exact.makespan >= inst.lower_bound() * (1.0 - 1e-12));
        if m >= n {
            assert_eq!(exact.makespan, max);
        }
    }
}
