//! Acceleration ratio, performance ratio and deficiency of schedule prefixes.
//!
//! Every measure is a supremum over interruption times. Between two
//! consecutive contract completions the completed set does not change while
//! `t` grows, so the supremum is reached right before a completion: the
//! measures are evaluated at `G^-` for every critical time `G`.
//!
//! A window in which some problem has no completed contract makes every
//! measure unbounded. By default such windows (which always precede the
//! first time all problems are served) are listed in
//! [`MeasureReport::unserved`] and left out of the supremum; see [`Window`].

mod oracle;

pub use oracle::{deficiency_bruteforce_oracle, scaling_oracle, ORACLE_MAX_M, ORACLE_MAX_N};

use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::makespan::{lpt_makespan, ExactSolver, MakespanInstance};
use crate::scalar::{Extended, Scalar};
use crate::schedule::{Schedule, ScheduleRule, Snapshot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Acceleration,
    Performance,
    Deficiency,
}

/// How `OPT(S)` is obtained for the deficiency.
#[derive(Clone, Copy, Debug)]
pub enum Solver {
    Exact(ExactSolver),
    /// LPT makespan; the resulting deficiency is only an estimate.
    Lpt,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::Exact(ExactSolver::default())
    }
}

/// Interruption times a measure is evaluated at.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum Window<T> {
    /// Right before every completion at which all problems are served.
    #[default]
    Served,
    /// Right before every completion; unserved windows count as `+inf`.
    All,
    /// Right before each given time; unserved windows count as `+inf`.
    Times(Vec<T>),
}

/// One evaluated interruption.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowEval<T: Scalar> {
    /// Evaluated right before this time.
    pub time: T,
    /// `S_X^t` in nondecreasing order.
    pub sorted: Vec<T>,
    /// `OPT(S)`, `S(1)` or `ceil(n/m) S(1)`; absent when unserved.
    pub denominator: Option<T>,
    pub ratio: Extended<T>,
}

/// Closed-form value of the measure on the infinite schedule a prefix was cut from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticLimit<T: Scalar> {
    pub value: T,
    /// `false` when `value` is only an upper bound.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureReport<T: Scalar> {
    pub measure: Measure,
    /// Supremum of the series; `+inf` if an unserved window was evaluated or
    /// nothing was evaluated.
    pub value: Extended<T>,
    pub argmax: Option<T>,
    pub series: Vec<WindowEval<T>>,
    /// Critical times skipped because some problem was unserved.
    pub unserved: Vec<T>,
    /// `false` when the deficiency used LPT instead of `OPT`.
    pub exact: bool,
    /// The schedule is a finite prefix of a generated infinite schedule.
    pub truncated: bool,
    pub analytic: Option<AnalyticLimit<T>>,
}

fn evaluate<T, F>(schedule: &Schedule<T>, window: &Window<T>, measure: Measure, mut denominator: F) -> Result<MeasureReport<T>>
where
    T: Scalar,
    F: FnMut(&Snapshot<T>) -> Result<T>,
{
    let (times, skip_unserved) = match window {
        Window::Served => (schedule.critical_times(), true),
        Window::All => (schedule.critical_times(), false),
        Window::Times(ts) => (ts.clone(), false),
    };
    let mut series = Vec::with_capacity(times.len());
    let mut unserved = Vec::new();
    for t in times {
        let snap = schedule.snapshot_before(t);
        if !snap.is_complete() {
            unserved.push(t);
            if skip_unserved {
                continue;
            }
            series.push(WindowEval { time: t, sorted: snap.sorted().to_vec(), denominator: None, ratio: Extended::Infinite });
            continue;
        }
        let d = denominator(&snap)?;
        series.push(WindowEval {
            time: t,
            sorted: snap.sorted().to_vec(),
            denominator: Some(d),
            ratio: Extended::Finite(t / d),
        });
    }

    let mut value = Extended::Infinite;
    let mut argmax = None;
    for (i, w) in series.iter().enumerate() {
        if i == 0 || w.ratio > value {
            value = w.ratio;
            argmax = Some(w.time);
        }
    }
    Ok(MeasureReport {
        measure,
        value,
        argmax,
        series,
        unserved,
        exact: true,
        truncated: schedule.rule().is_some(),
        analytic: analytic_limit(schedule, measure),
    })
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn analytic_limit<T: Scalar>(schedule: &Schedule<T>, measure: Measure) -> Option<AnalyticLimit<T>> {
    let ScheduleRule::Exponential { base } = *schedule.rule()?;
    let (n, m) = (schedule.n_problems(), schedule.m_processors());
    let acc = bounds::exponential_acceleration_ratio(base, n, m);
    Some(match measure {
        Measure::Acceleration => AnalyticLimit { value: acc, exact: true },
        Measure::Performance => AnalyticLimit { value: acc / T::from_count(ceil_div(n, m)), exact: true },
        Measure::Deficiency => AnalyticLimit {
            value: bounds::exponential_deficiency_bound(base, n, m),
            exact: m == 1,
        },
    })
}

/// `sup_t max_p t / l_{p,t}`.
pub fn acceleration_ratio<T: Scalar>(schedule: &Schedule<T>, window: &Window<T>) -> MeasureReport<T> {
    evaluate(schedule, window, Measure::Acceleration, |snap| Ok(snap.smallest()))
        .expect("acceleration ratio cannot fail")
}

/// `sup_t (t / ceil(n/m)) / S_X^t(1)`: an offline schedule that knows `t`
/// can at best give every problem a contract of length `t / ceil(n/m)`.
pub fn performance_ratio<T: Scalar>(schedule: &Schedule<T>, window: &Window<T>) -> MeasureReport<T> {
    let per_processor = T::from_count(ceil_div(schedule.n_problems(), schedule.m_processors()));
    evaluate(schedule, window, Measure::Performance, |snap| Ok(per_processor * snap.smallest()))
        .expect("performance ratio cannot fail")
}

/// `sup_t t / OPT(S_X^t)`.
pub fn deficiency<T: Scalar>(schedule: &Schedule<T>, window: &Window<T>, solver: Solver) -> Result<MeasureReport<T>> {
    let m = schedule.m_processors();
    let mut report = evaluate(schedule, window, Measure::Deficiency, |snap| {
        let instance = MakespanInstance::new(snap.sorted().to_vec(), m)?;
        Ok(match solver {
            Solver::Exact(exact) => exact.solve(&instance)?.makespan,
            Solver::Lpt => lpt_makespan(&instance).makespan,
        })
    })?;
    report.exact = matches!(solver, Solver::Exact(_));
    Ok(report)
}

/// Single-processor deficiency `sup_t t / sum_p l_{p,t}`; on one processor
/// `OPT(S)` is the sum of the sizes.
pub fn single_processor_deficiency<T: Scalar>(schedule: &Schedule<T>, window: &Window<T>) -> Result<MeasureReport<T>> {
    if schedule.m_processors() != 1 {
        return Err(Error::NotSingleProcessor(schedule.m_processors()));
    }
    evaluate(schedule, window, Measure::Deficiency, |snap| Ok(snap.total()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{acceleration_optimal_base, exponential_schedule, ExponentialSpec};
    use approx::assert_relative_eq;
    use num_rational::Rational64;

    fn exp(n: usize, m: usize, b: f64, k: usize) -> Schedule<f64> {
        exponential_schedule(&ExponentialSpec::new(n, m, b).with_k_max(k)).unwrap()
    }

    fn value(r: &MeasureReport<f64>) -> f64 {
        r.value.finite().unwrap()
    }

    #[test]
    fn doubling_schedule_approaches_four() {
        let s = exp(1, 1, 2.0, 40);
        let acc = acceleration_ratio(&s, &Window::Served);
        let perf = performance_ratio(&s, &Window::Served);
        let def = deficiency(&s, &Window::Served, Solver::default()).unwrap();
        assert!((value(&acc) - 4.0).abs() < 1e-9);
        assert_eq!(value(&acc), value(&perf));
        assert_eq!(value(&acc), value(&def));
        assert_eq!(acc.unserved, vec![1.0]);
        assert_eq!(acc.analytic, Some(AnalyticLimit { value: 4.0, exact: true }));
        assert!(acc.truncated);
        // (2^40 - 1) / 2^38
        assert_eq!(acc.argmax, Some(2f64.powi(40) - 1.0));
    }

    #[test]
    fn single_contract_acceleration() {
        let s = Schedule::single_processor(1, vec![(0, 3.0)]).unwrap();
        let r = acceleration_ratio(&s, &Window::Times(vec![5.0]));
        assert_eq!(r.value, Extended::Finite(5.0 / 3.0));
    }

    #[test]
    fn acceleration_optimal_two_problems() {
        let b = acceleration_optimal_base::<f64>(2, 1);
        assert_eq!(b, 1.5);
        let s = exp(2, 1, b, 60);
        let acc = value(&acceleration_ratio(&s, &Window::Served));
        assert!((acc - 6.75).abs() < 1e-6, "{acc}");
        let perf = value(&performance_ratio(&s, &Window::Served));
        assert!((perf - 3.375).abs() < 1e-6, "{perf}");
    }

    #[test]
    fn performance_equals_acceleration_when_processors_suffice() {
        for (n, m) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 3)] {
            let s = exp(n, m, 1.7, 8 * (n + m));
            let acc = acceleration_ratio(&s, &Window::Served);
            let perf = performance_ratio(&s, &Window::Served);
            assert_eq!(acc.value, perf.value, "n={n} m={m}");
        }
    }

    #[test]
    fn best_exponential_two_problems() {
        let s = exp(2, 1, 3f64.sqrt(), 40);
        let def = deficiency(&s, &Window::Served, Solver::default()).unwrap();
        let want = 27f64.sqrt() / 2.0;
        assert!((value(&def) - want).abs() < 1e-6);
        assert_eq!(def.analytic.map(|a| a.exact), Some(true));
        assert_relative_eq!(def.analytic.unwrap().value, want, max_relative = 1e-12);
    }

    #[test]
    fn single_processor_formula_matches_opt() {
        let s = Schedule::single_processor(3, vec![(0, 1.0), (2, 0.5), (1, 2.0), (0, 3.0), (2, 4.0), (1, 1.0), (0, 7.0)])
            .unwrap();
        let via_opt = deficiency(&s, &Window::Served, Solver::default()).unwrap();
        let via_sum = single_processor_deficiency(&s, &Window::Served).unwrap();
        assert_eq!(via_opt.value, via_sum.value);
        assert_eq!(via_opt.series, via_sum.series);
        let multi = Schedule::round_robin(2, 2, vec![1.0, 2.0]).unwrap();
        assert!(matches!(single_processor_deficiency(&multi, &Window::Served), Err(Error::NotSingleProcessor(2))));
    }

    #[test]
    fn windows_control_unserved_handling() {
        let s = Schedule::single_processor(2, vec![(0, 1.0), (1, 2.0), (0, 4.0), (1, 8.0)]).unwrap();
        let served = deficiency(&s, &Window::Served, Solver::default()).unwrap();
        assert_eq!(served.unserved, vec![1.0, 3.0]);
        assert_eq!(served.series.len(), 2);
        // 7^-: {1,2} -> 7/3; 15^-: {4,2} -> 15/6
        assert_eq!(served.series[0].ratio, Extended::Finite(7.0 / 3.0));
        assert_eq!(served.value, Extended::Finite(2.5));
        assert_eq!(served.argmax, Some(15.0));

        let all = deficiency(&s, &Window::All, Solver::default()).unwrap();
        assert_eq!(all.value, Extended::Infinite);
        assert_eq!(all.series.len(), 4);
        assert_eq!(all.series[0].denominator, None);

        let none = Schedule::single_processor(2, vec![(0, 1.0), (0, 2.0)]).unwrap();
        let r = deficiency(&none, &Window::Served, Solver::default()).unwrap();
        assert!(r.series.is_empty());
        assert_eq!(r.value, Extended::Infinite);
        assert!(!r.truncated);
    }

    #[test]
    fn lpt_solver_is_flagged() {
        let s = exp(5, 2, 1.3, 30);
        let exact = deficiency(&s, &Window::Served, Solver::default()).unwrap();
        let lpt = deficiency(&s, &Window::Served, Solver::Lpt).unwrap();
        assert!(exact.exact);
        assert!(!lpt.exact);
        assert!(lpt.value <= exact.value);
        assert_eq!(exact.analytic.map(|a| a.exact), Some(false));
    }

    #[test]
    fn too_many_problems_propagates() {
        let s = exp(25, 1, 1.1, 26);
        let err = deficiency(&s, &Window::Served, Solver::default()).unwrap_err();
        assert!(matches!(err, Error::InstanceTooLarge { jobs: 25, .. }));
    }

    #[test]
    fn exact_rational_deficiency() {
        let q = Rational64::from_integer;
        let s = exponential_schedule(&ExponentialSpec::new(1, 1, q(2)).with_k_max(10)).unwrap();
        let r = deficiency(&s, &Window::Served, Solver::default()).unwrap();
        // (2^10 - 1) / 2^8
        assert_eq!(r.value, Extended::Finite(Rational64::new(1023, 256)));
        assert_eq!(r.analytic, Some(AnalyticLimit { value: q(4), exact: true }));
    }

    #[test]
    fn multiprocessor_evaluation_uses_opt() {
        // n=3, m=2, b=2: G = 1, 2, 5, 10, 21; at 10^-: S = {1, 2, 4}, OPT = 4.
        let s = exp(3, 2, 2.0, 5);
        let r = deficiency(&s, &Window::Served, Solver::default()).unwrap();
        assert_eq!(r.unserved, vec![1.0, 2.0, 5.0]);
        assert_eq!(r.series[0].time, 10.0);
        assert_eq!(r.series[0].denominator, Some(4.0));
        // 21^-: S = {8, 2, 4} -> OPT 8
        assert_eq!(r.series[1].denominator, Some(8.0));
    }
}
