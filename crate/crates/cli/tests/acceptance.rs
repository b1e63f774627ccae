//! Acceptance criteria, one test each. Run with
//! `cargo test -p contract-sched-cli --test acceptance -- --nocapture --test-threads 1`
//! to see one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use contract_sched_cli::verify::{criterion, Check, VerifyConfig, DEFAULT_SEED};

fn accept(id: usize, budget: Option<Duration>) -> Check {
    let start = Instant::now();
    let check = criterion(id, &VerifyConfig::with_seed(DEFAULT_SEED));
    let elapsed = start.elapsed();
    let in_budget = budget.map_or(true, |b| elapsed <= b);
    let status = if check.passed && in_budget { "PASS" } else { "FAIL" };
    println!("{status} criterion {id:>2} {}: {} ({:.3}s)", check.name, check.detail, elapsed.as_secs_f64());
    assert!(check.passed, "criterion {id} failed: {}", check.detail);
    assert!(in_budget, "criterion {id} took {elapsed:?}, budget {budget:?}");
    check
}

#[test]
fn criterion_01_doubling() {
    accept(1, Some(Duration::from_secs(1)));
}

#[test]
fn criterion_02_best_exponential() {
    accept(2, Some(Duration::from_secs(10)));
}

#[test]
fn criterion_03_greedy_closed_form() {
    accept(3, None);
}

#[test]
fn criterion_04_finish_times() {
    accept(4, None);
}

#[test]
fn criterion_05_surface() {
    accept(5, Some(Duration::from_secs(5)));
}

#[test]
fn criterion_06_lower_bounds() {
    accept(6, None);
}

#[test]
fn criterion_07_oracles() {
    accept(7, Some(Duration::from_secs(60)));
}

#[test]
fn criterion_08_graham() {
    accept(8, None);
}

#[test]
fn criterion_09_transforms() {
    accept(9, None);
}

fn sweep(figure: &str) -> Vec<Vec<f64>> {
    let out = Command::new(env!("CARGO_BIN_EXE_contract-sched")).args(["sweep", "--figure", figure]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    lines.next().unwrap();
    lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn criterion_10_figures() {
    let fig1 = sweep("1");
    let fig2 = sweep("2");
    let fig3 = sweep("3");
    let e = std::f64::consts::E;
    let mut failures = vec![];
    if fig1[0][1] != 4.0 || !fig1.windows(2).all(|w| w[1][1] < w[0][1]) || !fig1.iter().all(|r| r[1] > e) {
        failures.push("figure 1 shape");
    }
    let max = fig2.iter().max_by(|a, b| a[4].total_cmp(&b[4])).unwrap();
    if (max[0], max[1]) != (2.0, 1.0) || (max[4] - 0.375 * 5f64.powf(1.25)).abs() > 1e-9 || fig2.len() != 64 * 64 {
        failures.push("figure 2 maximum");
    }
    if fig3.len() != 20 || !fig3.iter().all(|r| r[2] > r[1]) || (fig3[1][2] - 2.598).abs() > 1e-3 {
        failures.push("figure 3 rows");
    }
    if !failures.is_empty() {
        println!("FAIL criterion 10 figure-csv: {failures:?}");
    }
    assert!(failures.is_empty(), "{failures:?}");
    accept(10, None);
}
