//! Single-processor schedule transformations that never increase deficiency.
//!
//! All transforms first drop dominated contracts (a contract no longer than
//! an earlier one for the same problem completes nothing new). Every applied
//! step is recorded with the deficiency of the schedule before and after it.
//!
//! On one processor the deficiency is `sup t / sum_p l_{p,t}` over the times
//! right before each completion. Here a problem without a completed contract
//! contributes 0 to the sum rather than making the value unbounded; only
//! times before the first completion are left out. See [`sum_deficiency`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schedule::Schedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemovalReason {
    /// Not longer than an earlier contract for the same problem.
    Dominated,
    /// First of two consecutive contracts for one problem.
    ConsecutivePair,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepKind<T: Scalar> {
    /// Problems `from` and `to` trade places on every contract starting at or after `time`.
    Swap { index: usize, time: T, from: usize, to: usize },
    Removal { index: usize, time: T, problem: usize, length: T, reason: RemovalReason },
    /// The run at `index` keeps both contracts: the second is at least as
    /// long as the other problem's longest completed contract.
    Certified { index: usize, time: T },
    /// The run at `index` is left in place: the pair comparison is vacuous
    /// and no single removal from the run keeps deficiency from growing.
    Kept { index: usize, time: T },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Step<T: Scalar> {
    #[serde(flatten)]
    pub kind: StepKind<T>,
    /// [`sum_deficiency`] before and after the step.
    pub before: Option<T>,
    pub after: Option<T>,
    /// The step is one for which deficiency provably does not grow.
    pub guaranteed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar + Serialize"))]
pub struct NormalizationTrace<T: Scalar> {
    pub input: Schedule<T>,
    pub output: Schedule<T>,
    pub steps: Vec<Step<T>>,
}

impl<T: Scalar> NormalizationTrace<T> {
    /// No step was applied.
    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }
}

type Entries<T> = Vec<(usize, T)>;

fn entries<T: Scalar>(schedule: &Schedule<T>) -> Entries<T> {
    schedule.contracts().iter().map(|c| (c.problem, c.length)).collect()
}

fn rebuild<T: Scalar>(n: usize, entries: &Entries<T>) -> Schedule<T> {
    Schedule::single_processor(n, entries.iter().copied()).expect("transforms keep contracts valid")
}

/// `max t / sum_p l_{p,t^-}` over completion times `t` with at least one
/// earlier completion; `None` when there is no such time.
pub fn sum_deficiency<T: Scalar>(schedule: &Schedule<T>) -> Option<T> {
    schedule
        .critical_times()
        .into_iter()
        .filter_map(|t| {
            let total = schedule.snapshot_before(t).total();
            (total > T::zero()).then(|| t / total)
        })
        .reduce(|a, b| a.max_of(b))
}

impl<T: Scalar> Step<T> {
    /// `after <= before`, up to a relative `slack`.
    pub fn not_increased(&self, slack: T) -> bool {
        not_increased(self.after, self.before, slack)
    }
}

/// `after <= before` up to relative `slack`; an absent value is the empty supremum.
pub fn not_increased<T: Scalar>(after: Option<T>, before: Option<T>, slack: T) -> bool {
    match (after, before) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a <= b + slack * b.abs().max_of(T::one()),
    }
}

fn require_single_processor<T: Scalar>(schedule: &Schedule<T>) -> Result<()> {
    match schedule.m_processors() {
        1 => Ok(()),
        m => Err(Error::NotSingleProcessor(m)),
    }
}

struct Tracer<T: Scalar> {
    n: usize,
    current: Entries<T>,
    schedule: Schedule<T>,
    value: Option<T>,
    steps: Vec<Step<T>>,
}

impl<T: Scalar> Tracer<T> {
    fn new(schedule: &Schedule<T>) -> Self {
        Tracer {
            n: schedule.n_problems(),
            current: entries(schedule),
            schedule: schedule.clone(),
            value: sum_deficiency(schedule),
            steps: Vec::new(),
        }
    }

    fn apply(&mut self, kind: StepKind<T>, guaranteed: bool, next: Entries<T>) {
        let schedule = rebuild(self.n, &next);
        let after = sum_deficiency(&schedule);
        self.steps.push(Step { kind, before: self.value, after, guaranteed });
        self.current = next;
        self.schedule = schedule;
        self.value = after;
    }

    fn remove(&mut self, index: usize, reason: RemovalReason, guaranteed: bool) {
        let (problem, length) = self.current[index];
        let time = self.schedule.start_time(index);
        let mut next = self.current.clone();
        next.remove(index);
        self.apply(StepKind::Removal { index, time, problem, length, reason }, guaranteed, next);
    }

    /// First index of the run starting at `start` whose removal does not
    /// raise the current value.
    fn first_safe_removal(&self, start: usize) -> Option<usize> {
        let problem = self.current[start].0;
        (start..self.current.len()).take_while(|&j| self.current[j].0 == problem).find(|&j| {
            let mut next = self.current.clone();
            next.remove(j);
            match (sum_deficiency(&rebuild(self.n, &next)), self.value) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => a <= b || a.approx_eq(b),
            }
        })
    }

    fn drop_dominated(&mut self) {
        while let Some(index) = first_dominated(&self.current) {
            self.remove(index, RemovalReason::Dominated, true);
        }
    }

    fn normalize(&mut self) {
        self.drop_dominated();
        while let Some(index) = first_violation(&self.schedule) {
            let time = self.schedule.start_time(index);
            let snap = self.schedule.snapshot(time);
            let from = self.current[index].0;
            let to = least_worked(snap.longest());
            let mut next = self.current.clone();
            for entry in &mut next[index..] {
                if entry.0 == from {
                    entry.0 = to;
                } else if entry.0 == to {
                    entry.0 = from;
                }
            }
            self.apply(StepKind::Swap { index, time, from, to }, true, next);
            self.drop_dominated();
        }
    }

    fn finish(self, input: &Schedule<T>) -> NormalizationTrace<T> {
        NormalizationTrace { input: input.clone(), output: self.schedule, steps: self.steps }
    }
}

fn first_dominated<T: Scalar>(entries: &Entries<T>) -> Option<usize> {
    let mut best: Vec<Option<T>> = Vec::new();
    for (index, &(problem, length)) in entries.iter().enumerate() {
        if best.len() <= problem {
            best.resize(problem + 1, None);
        }
        match best[problem] {
            Some(b) if length <= b || length.approx_eq(b) => return Some(index),
            _ => best[problem] = Some(length),
        }
    }
    None
}

/// Lowest-index problem with the smallest longest completed contract.
fn least_worked<T: Scalar>(longest: &[T]) -> usize {
    let mut best = 0;
    for (p, &l) in longest.iter().enumerate().skip(1) {
        if l < longest[best] && !l.approx_eq(longest[best]) {
            best = p;
        }
    }
    best
}

/// First contract that does not serve the least-worked problem at its start.
fn first_violation<T: Scalar>(schedule: &Schedule<T>) -> Option<usize> {
    schedule.contracts().iter().enumerate().position(|(index, c)| {
        let snap = schedule.snapshot(schedule.start_time(index));
        least_worked(snap.longest()) != c.problem
    })
}

/// Every contract serves the lowest-index problem minimizing `l_{i,T}` at its start `T`.
pub fn is_normalized<T: Scalar>(schedule: &Schedule<T>) -> Result<bool> {
    require_single_processor(schedule)?;
    Ok(first_violation(schedule).is_none())
}

/// Removes every contract not longer than an earlier contract for the same problem.
pub fn drop_dominated<T: Scalar>(schedule: &Schedule<T>) -> Result<NormalizationTrace<T>> {
    require_single_processor(schedule)?;
    let mut tracer = Tracer::new(schedule);
    tracer.drop_dominated();
    Ok(tracer.finish(schedule))
}

/// Makes every contract serve a least-worked problem.
///
/// Repeatedly takes the earliest contract whose problem `j` is not the
/// least-worked problem `i` at its start `T`, and exchanges `i` and `j` on
/// every contract starting at or after `T`.
pub fn normalize<T: Scalar>(schedule: &Schedule<T>) -> Result<NormalizationTrace<T>> {
    require_single_processor(schedule)?;
    let mut tracer = Tracer::new(schedule);
    tracer.normalize();
    Ok(tracer.finish(schedule))
}

/// Longest completed contract per problem right before `t`.
fn longest_before<T: Scalar>(schedule: &Schedule<T>, t: T) -> Vec<T> {
    schedule.snapshot_before(t).longest().to_vec()
}

/// Maximum of `t / (a + b)` over the terms with a positive denominator.
fn max_ratio<T: Scalar>(terms: &[(T, T, T)]) -> Option<T> {
    terms
        .iter()
        .filter(|&&(_, a, b)| a + b > T::zero())
        .map(|&(t, a, b)| t / (a + b))
        .reduce(|x, y| x.max_of(y))
}

/// For two problems on one processor, shortens every run of three or more
/// consecutive contracts for one problem.
///
/// For the run's first two contracts `x_i, x_{i+1}` starting at `t`, with
/// `l_p, l_q` the longest completed contracts of the run's problem and the
/// other one at `t`, and `λ_q` the latter at `t^-`, the removal of `x_i` is
/// safe when
///
/// ```text
/// max(t/(l_p+λ_q), (t+x_{i+1})/(l_p+l_q))
///     <= max(t/(l_p+λ_q), (t+x_i)/(l_p+l_q), (t+x_i+x_{i+1})/(x_i+l_q))
/// ```
///
/// with terms of zero denominator left out. Otherwise `x_{i+1} >= l_q` must hold and
/// the run is certified. The schedule is re-normalized after each removal.
///
/// When nothing has completed before `t` (a run right after the very first
/// contract) the comparison says nothing. Each contract of the run is then
/// tried in turn and the first whose removal does not raise [`sum_deficiency`]
/// is dropped; if there is none the run is kept and recorded as such.
pub fn reduce_consecutive_pairs<T: Scalar>(schedule: &Schedule<T>) -> Result<NormalizationTrace<T>> {
    require_single_processor(schedule)?;
    if schedule.n_problems() != 2 {
        return Err(Error::NotTwoProblems(schedule.n_problems()));
    }
    let mut tracer = Tracer::new(schedule);
    tracer.drop_dominated();
    if let Some(index) = first_violation(&tracer.schedule) {
        return Err(Error::NotNormalized { index });
    }
    let mut cursor = 0;
    while let Some(i) = first_long_run(&tracer.current, cursor) {
        let s = &tracer.schedule;
        let t = s.start_time(i);
        let p = tracer.current[i].0;
        let q = 1 - p;
        let (xi, xj) = (tracer.current[i].1, tracer.current[i + 1].1);
        let at = s.snapshot(t);
        let (lp, lq) = (at.longest()[p], at.longest()[q]);
        let lambda_q = longest_before(s, t)[q];
        if lp + lambda_q == T::zero() {
            // nothing completed before t: the comparison only holds vacuously
            match tracer.first_safe_removal(i) {
                Some(j) => {
                    tracer.remove(j, RemovalReason::ConsecutivePair, true);
                    tracer.normalize();
                    cursor = 0;
                }
                None => {
                    let value = tracer.value;
                    tracer.steps.push(Step { kind: StepKind::Kept { index: i, time: t }, before: value, after: value, guaranteed: true });
                    cursor = i + 1;
                }
            }
            continue;
        }
        let q_x = max_ratio(&[(t, lp, lambda_q), (t + xi, lp, lq), (t + xi + xj, xi, lq)]);
        let q_x_prime = max_ratio(&[(t, lp, lambda_q), (t + xj, lp, lq)]);
        let passes = match (q_x_prime, q_x) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a <= b || a.approx_eq(b),
        };
        if passes {
            tracer.remove(i, RemovalReason::ConsecutivePair, true);
            tracer.normalize();
            cursor = 0;
        } else if xj >= lq || xj.approx_eq(lq) {
            let value = tracer.value;
            tracer.steps.push(Step {
                kind: StepKind::Certified { index: i, time: t },
                before: value,
                after: value,
                guaranteed: true,
            });
            cursor = i + 1;
        } else {
            return Err(Error::PairDichotomyFailed { index: i });
        }
    }
    Ok(tracer.finish(schedule))
}

/// Start of the first run of at least three contracts for one problem, at or after `from`.
fn first_long_run<T>(entries: &[(usize, T)], from: usize) -> Option<usize> {
    (from..entries.len().saturating_sub(2))
        .find(|&i| entries[i].0 == entries[i + 1].0 && entries[i].0 == entries[i + 2].0 && (i == 0 || entries[i - 1].0 != entries[i].0))
}

/// Longest run of consecutive contracts for one problem.
pub fn longest_run<T: Scalar>(schedule: &Schedule<T>) -> usize {
    let mut best = 0;
    let mut run = 0;
    let mut last = None;
    for c in schedule.contracts() {
        run = if last == Some(c.problem) { run + 1 } else { 1 };
        last = Some(c.problem);
        best = best.max(run);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn single(n: usize, entries: &[(usize, f64)]) -> Schedule<f64> {
        Schedule::single_processor(n, entries.iter().copied()).unwrap()
    }

    fn problems(s: &Schedule<f64>) -> Vec<usize> {
        s.contracts().iter().map(|c| c.problem).collect()
    }

    #[test]
    fn swap_on_least_worked_violation() {
        let s = single(2, &[(0, 1.0), (0, 2.0), (1, 4.0)]);
        let trace = normalize(&s).unwrap();
        assert_eq!(problems(&trace.output), vec![0, 1, 0]);
        assert!(matches!(trace.steps[0].kind, StepKind::Swap { index: 1, from: 0, to: 1, .. }));
        assert!(is_normalized(&trace.output).unwrap());
        for step in &trace.steps {
            assert!(step.not_increased(1e-12));
        }
    }

    #[test]
    fn round_robin_is_identity() {
        let s = single(3, &[(0, 1.0), (1, 2.0), (2, 3.0), (0, 5.0), (1, 8.0), (2, 13.0)]);
        let trace = normalize(&s).unwrap();
        assert!(trace.is_identity());
        assert_eq!(trace.output, s);
    }

    #[test]
    fn relabels_ties_toward_lower_index() {
        let s = single(2, &[(1, 1.0), (0, 2.0), (1, 3.0)]);
        let trace = normalize(&s).unwrap();
        assert_eq!(problems(&trace.output), vec![0, 1, 0]);
        assert!(trace.steps[0].guaranteed);
        assert_eq!(trace.steps[0].after, trace.steps[0].before);
    }

    #[test]
    fn dominated_contracts_are_dropped() {
        let s = single(2, &[(0, 2.0), (1, 3.0), (0, 2.0), (0, 1.0), (1, 5.0)]);
        let trace = drop_dominated(&s).unwrap();
        assert_eq!(trace.output.len(), 3);
        assert_eq!(trace.steps.len(), 2);
        assert!(trace.steps.iter().all(|st| matches!(st.kind, StepKind::Removal { reason: RemovalReason::Dominated, .. })));
        assert!(trace.steps.iter().all(|st| st.not_increased(1e-12)));
    }

    #[test]
    fn normalize_is_idempotent() {
        let s = single(3, &[(2, 1.0), (2, 3.0), (0, 2.0), (1, 0.5), (0, 4.0), (1, 7.0), (1, 9.0)]);
        let once = normalize(&s).unwrap();
        let twice = normalize(&once.output).unwrap();
        assert!(twice.is_identity());
    }

    #[test]
    fn pair_reduction_shortens_runs() {
        // normalized: at each start the other problem is ahead
        let s = single(2, &[(0, 1.0), (1, 5.0), (0, 2.0), (0, 3.0), (0, 6.0), (1, 20.0)]);
        assert!(is_normalized(&s).unwrap());
        assert_eq!(longest_run(&s), 3);
        let trace = reduce_consecutive_pairs(&s).unwrap();
        assert!(longest_run(&trace.output) <= 2);
        for step in &trace.steps {
            if let StepKind::Removal { reason: RemovalReason::ConsecutivePair, .. } = step.kind {
                assert!(step.not_increased(1e-9));
            }
        }
    }

    #[test]
    fn alternating_pairs_are_identity() {
        let s = single(2, &[(0, 1.0), (1, 2.0), (0, 3.0), (1, 4.0)]);
        assert!(reduce_consecutive_pairs(&s).unwrap().is_identity());
    }

    #[test]
    fn pair_reduction_requirements() {
        let s = single(3, &[(0, 1.0)]);
        assert_eq!(reduce_consecutive_pairs(&s).unwrap_err(), Error::NotTwoProblems(3));
        let s = single(2, &[(0, 1.0), (0, 2.0), (1, 3.0)]);
        assert_eq!(reduce_consecutive_pairs(&s).unwrap_err(), Error::NotNormalized { index: 1 });
        let multi = Schedule::round_robin(2, 2, vec![1.0, 2.0]).unwrap();
        assert_eq!(normalize(&multi).unwrap_err(), Error::NotSingleProcessor(2));
    }

    #[test]
    fn exact_rationals() {
        let q = Rational64::from_integer;
        let s = Schedule::single_processor(2, vec![(0, q(1)), (0, q(2)), (1, q(4))]).unwrap();
        let trace = normalize(&s).unwrap();
        let got: Vec<usize> = trace.output.contracts().iter().map(|c| c.problem).collect();
        assert_eq!(got, vec![0, 1, 0]);
    }
}
