//! Schedules of contracts on identical processors.
//!
//! A [`Schedule`] is a finite, validated prefix of a (possibly infinite)
//! schedule. Contracts are kept in their global execution order; each
//! processor runs its own contracts back-to-back from time 0, so the finish
//! time of a contract is the sum of the lengths of the contracts queued
//! before it on its processor, plus its own length.
//!
//! Interruptions happen either *at* a time `t` (every contract finishing at
//! or before `t` counts) or *right before* `t`, written `t^-`, which excludes
//! every contract finishing at `t`. The left limit is kept symbolic so that
//! suprema over critical times are evaluated exactly.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contract<T> {
    pub problem: usize,
    pub processor: usize,
    pub length: T,
}

impl<T> Contract<T> {
    pub fn new(problem: usize, processor: usize, length: T) -> Self {
        Contract { problem, processor, length }
    }
}

/// How a finite prefix was generated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ScheduleRule<T> {
    /// Round-robin over problems and processors with `x_i = base^i`.
    Exponential { base: T },
}

/// On-disk representation; see [`Schedule`] for the validated type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleFile<T> {
    pub n: usize,
    pub m: usize,
    pub contracts: Vec<Contract<T>>,
    #[serde(default = "Option::default", skip_serializing_if = "Option::is_none")]
    pub rule: Option<ScheduleRule<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "ScheduleFile<T>",
    into = "ScheduleFile<T>",
    bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + DeserializeOwned")
)]
pub struct Schedule<T: Scalar> {
    n: usize,
    m: usize,
    contracts: Vec<Contract<T>>,
    rule: Option<ScheduleRule<T>>,
    start: Vec<T>,
    finish: Vec<T>,
}

impl<T: Scalar> TryFrom<ScheduleFile<T>> for Schedule<T> {
    type Error = Error;

    fn try_from(file: ScheduleFile<T>) -> Result<Self> {
        let mut schedule = Schedule::new(file.n, file.m, file.contracts)?;
        schedule.rule = file.rule;
        Ok(schedule)
    }
}

impl<T: Scalar> From<Schedule<T>> for ScheduleFile<T> {
    fn from(schedule: Schedule<T>) -> Self {
        ScheduleFile {
            n: schedule.n,
            m: schedule.m,
            contracts: schedule.contracts,
            rule: schedule.rule,
        }
    }
}

/// Completion record of one contract.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Completion<T> {
    pub index: usize,
    pub processor: usize,
    pub start: T,
    pub finish: T,
}

impl<T: Scalar> Schedule<T> {
    pub fn new(n: usize, m: usize, contracts: Vec<Contract<T>>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::EmptyDimension { n, m });
        }
        let mut loads = vec![T::zero(); m];
        let mut start = Vec::with_capacity(contracts.len());
        let mut finish = Vec::with_capacity(contracts.len());
        for (index, c) in contracts.iter().enumerate() {
            if !c.length.is_finite_value() || c.length <= T::zero() {
                return Err(Error::InvalidLength { index, length: c.length.to_string() });
            }
            if c.problem >= n {
                return Err(Error::ProblemOutOfRange { index, problem: c.problem, n });
            }
            if c.processor >= m {
                return Err(Error::ProcessorOutOfRange { index, processor: c.processor, m });
            }
            start.push(loads[c.processor]);
            loads[c.processor] = loads[c.processor] + c.length;
            finish.push(loads[c.processor]);
        }
        Ok(Schedule { n, m, contracts, rule: None, start, finish })
    }

    /// Single-processor schedule from `(problem, length)` pairs.
    pub fn single_processor(n: usize, contracts: impl IntoIterator<Item = (usize, T)>) -> Result<Self> {
        let contracts = contracts
            .into_iter()
            .map(|(problem, length)| Contract::new(problem, 0, length))
            .collect();
        Schedule::new(n, 1, contracts)
    }

    /// Round-robin schedule with the given lengths: contract `i` serves
    /// problem `i mod n` on processor `i mod m`.
    pub fn round_robin(n: usize, m: usize, lengths: impl IntoIterator<Item = T>) -> Result<Self> {
        let contracts = lengths
            .into_iter()
            .enumerate()
            .map(|(i, length)| Contract::new(i % n, i % m, length))
            .collect();
        Schedule::new(n, m, contracts)
    }

    pub fn with_rule(mut self, rule: ScheduleRule<T>) -> Self {
        self.rule = Some(rule);
        self
    }

    pub fn n_problems(&self) -> usize {
        self.n
    }

    pub fn m_processors(&self) -> usize {
        self.m
    }

    pub fn contracts(&self) -> &[Contract<T>] {
        &self.contracts
    }

    pub fn len(&self) -> usize {
        self.contracts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contracts.is_empty()
    }

    pub fn rule(&self) -> Option<&ScheduleRule<T>> {
        self.rule.as_ref()
    }

    pub fn start_time(&self, index: usize) -> T {
        self.start[index]
    }

    pub fn finish_time(&self, index: usize) -> T {
        self.finish[index]
    }

    pub fn finish_times(&self) -> &[T] {
        &self.finish
    }

    /// Contracts of one processor, as indices into [`Schedule::contracts`].
    pub fn queue(&self, processor: usize) -> Vec<usize> {
        (0..self.contracts.len()).filter(|&i| self.contracts[i].processor == processor).collect()
    }

    /// Per-contract start and finish times, in global contract order.
    pub fn simulate(&self) -> Vec<Completion<T>> {
        self.contracts
            .iter()
            .enumerate()
            .map(|(index, c)| Completion {
                index,
                processor: c.processor,
                start: self.start[index],
                finish: self.finish[index],
            })
            .collect()
    }

    /// Sorted, de-duplicated contract finish times. Finish times equal up to
    /// the scalar's relative tolerance are merged.
    pub fn critical_times(&self) -> Vec<T> {
        let mut times = self.finish.clone();
        times.sort_by(|a, b| a.partial_cmp(b).expect("finish times are comparable"));
        let mut out: Vec<T> = Vec::with_capacity(times.len());
        for t in times {
            match out.last() {
                Some(last) if last.approx_eq(t) => {}
                _ => out.push(t),
            }
        }
        out
    }

    /// State at interruption time `t`: contracts finishing at or before `t` count.
    pub fn snapshot(&self, t: T) -> Snapshot<T> {
        self.snapshot_where(t, false, |finish| finish <= t || finish.approx_eq(t))
    }

    /// State right before `t`: contracts finishing at `t` are still running.
    pub fn snapshot_before(&self, t: T) -> Snapshot<T> {
        self.snapshot_where(t, true, |finish| finish < t && !finish.approx_eq(t))
    }

    fn snapshot_where(&self, t: T, left_limit: bool, completed: impl Fn(T) -> bool) -> Snapshot<T> {
        let mut longest = vec![T::zero(); self.n];
        for (c, &finish) in self.contracts.iter().zip(&self.finish) {
            if completed(finish) && c.length > longest[c.problem] {
                longest[c.problem] = c.length;
            }
        }
        Snapshot::new(t, left_limit, longest)
    }

    /// Earliest finish time at which every problem has a completed contract.
    pub fn first_served_time(&self) -> Option<T> {
        let mut first: Vec<Option<T>> = vec![None; self.n];
        for (c, &finish) in self.contracts.iter().zip(&self.finish) {
            let slot = &mut first[c.problem];
            if slot.map_or(true, |f| finish < f) {
                *slot = Some(finish);
            }
        }
        first.into_iter().try_fold(T::zero(), |acc, f| f.map(|f| acc.max_of(f)))
    }

    pub fn to_file(&self) -> ScheduleFile<T> {
        self.clone().into()
    }
}

/// The per-problem longest completed contract lengths at one interruption.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot<T> {
    pub time: T,
    /// `true` when taken at `time^-`.
    pub left_limit: bool,
    longest: Vec<T>,
    sorted: Vec<T>,
}

impl<T: Scalar> Snapshot<T> {
    pub fn new(time: T, left_limit: bool, longest: Vec<T>) -> Self {
        let mut sorted = longest.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("lengths are comparable"));
        Snapshot { time, left_limit, longest, sorted }
    }

    /// `longest()[p]` is the longest completed contract of problem `p`, 0 if none.
    pub fn longest(&self) -> &[T] {
        &self.longest
    }

    /// The lengths in nondecreasing order.
    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    /// The `i`-th smallest length, 1-based.
    pub fn kth_smallest(&self, i: usize) -> T {
        self.sorted[i - 1]
    }

    pub fn smallest(&self) -> T {
        self.sorted[0]
    }

    pub fn total(&self) -> T {
        self.longest.iter().fold(T::zero(), |acc, &x| acc + x)
    }

    /// Every problem has at least one completed contract.
    pub fn is_complete(&self) -> bool {
        self.sorted[0] > T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn doubling_two_problems() -> Schedule<f64> {
        Schedule::single_processor(2, vec![(0, 1.0), (1, 2.0), (0, 4.0), (1, 8.0)]).unwrap()
    }

    #[test]
    fn finish_times_are_per_processor_prefix_sums() {
        let s = Schedule::round_robin(3, 2, vec![1.0, 2.0, 4.0, 8.0]).unwrap();
        let finish: Vec<f64> = s.simulate().iter().map(|c| c.finish).collect();
        assert_eq!(finish, vec![1.0, 2.0, 5.0, 10.0]);
        assert_eq!(s.queue(0), vec![0, 2]);
        assert_eq!(s.queue(1), vec![1, 3]);

        let single = Schedule::round_robin(1, 1, vec![5.0]).unwrap();
        assert_eq!(single.finish_time(0), 5.0);

        let s = Schedule::round_robin(1, 1, vec![1.0, 2.0, 4.0]).unwrap();
        assert_eq!(s.finish_times(), &[1.0, 3.0, 7.0]);
    }

    #[test]
    fn construction_rejects_bad_contracts() {
        assert!(matches!(
            Schedule::single_processor(1, vec![(0, 0.0)]),
            Err(Error::InvalidLength { index: 0, .. })
        ));
        assert!(matches!(
            Schedule::single_processor(1, vec![(0, 1.0), (0, -2.0)]),
            Err(Error::InvalidLength { index: 1, .. })
        ));
        assert!(matches!(
            Schedule::single_processor(1, vec![(0, f64::NAN)]),
            Err(Error::InvalidLength { .. })
        ));
        assert!(matches!(
            Schedule::single_processor(2, vec![(2, 1.0)]),
            Err(Error::ProblemOutOfRange { problem: 2, n: 2, .. })
        ));
        assert!(matches!(
            Schedule::new(1, 2, vec![Contract::new(0, 2, 1.0)]),
            Err(Error::ProcessorOutOfRange { processor: 2, m: 2, .. })
        ));
        assert!(matches!(Schedule::<f64>::new(0, 1, vec![]), Err(Error::EmptyDimension { .. })));
    }

    #[test]
    fn snapshot_right_before_excludes_finishing_contract() {
        let s = doubling_two_problems();
        assert_eq!(s.snapshot_before(7.0).longest(), &[1.0, 2.0]);
        assert_eq!(s.snapshot(7.0).longest(), &[4.0, 2.0]);
        assert_eq!(s.snapshot(15.0).longest(), &[4.0, 8.0]);
        assert_eq!(s.snapshot(15.0).sorted(), &[4.0, 8.0]);
    }

    #[test]
    fn early_snapshot_is_incomplete() {
        let s = doubling_two_problems();
        let snap = s.snapshot(0.5);
        assert_eq!(snap.longest(), &[0.0, 0.0]);
        assert!(!snap.is_complete());
        assert!(!s.snapshot(2.0).is_complete());
        assert!(s.snapshot(3.0).is_complete());
        assert_eq!(s.first_served_time(), Some(3.0));
    }

    #[test]
    fn critical_times_are_sorted_distinct_finish_times() {
        let s = Schedule::round_robin(1, 1, vec![1.0, 2.0, 4.0]).unwrap();
        assert_eq!(s.critical_times(), vec![1.0, 3.0, 7.0]);
        let empty = Schedule::<f64>::new(2, 2, vec![]).unwrap();
        assert!(empty.critical_times().is_empty());
        let s = Schedule::round_robin(3, 2, vec![1.0, 2.0, 4.0, 8.0]).unwrap();
        assert_eq!(s.critical_times(), vec![1.0, 2.0, 5.0, 10.0]);
    }

    #[test]
    fn ties_are_merged_and_excluded_together() {
        // Both processors finish at 3.
        let s = Schedule::new(
            2,
            2,
            vec![Contract::new(0, 0, 1.0), Contract::new(1, 1, 3.0), Contract::new(0, 0, 2.0)],
        )
        .unwrap();
        assert_eq!(s.critical_times(), vec![1.0, 3.0]);
        assert_eq!(s.snapshot_before(3.0).longest(), &[1.0, 0.0]);
        assert_eq!(s.snapshot(3.0).longest(), &[2.0, 3.0]);
    }

    #[test]
    fn rational_schedules_are_exact() {
        let q = |n: i64, d: i64| Rational64::new(n, d);
        let s = Schedule::single_processor(2, vec![(0, q(1, 3)), (1, q(2, 3)), (0, q(4, 3))]).unwrap();
        assert_eq!(s.finish_times(), &[q(1, 3), q(1, 1), q(7, 3)]);
        assert_eq!(s.snapshot_before(q(7, 3)).longest(), &[q(1, 3), q(2, 3)]);
    }

    #[test]
    fn json_layout_and_round_trip() {
        let s = Schedule::round_robin(2, 1, vec![1.0, 1.7320508075688772, 3.0000000000000004]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with(r#"{"n":2,"m":1,"contracts":[{"problem":0,"processor":0,"length":1.0}"#));
        let back: Schedule<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);

        let with_rule = s.clone().with_rule(ScheduleRule::Exponential { base: 2.0 });
        let text = serde_json::to_string(&with_rule).unwrap();
        assert!(text.contains(r#""rule":{"family":"exponential","base":2.0}"#));
        let back: Schedule<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.rule(), Some(&ScheduleRule::Exponential { base: 2.0 }));
    }

    #[test]
    fn json_rejects_invalid_schedules() {
        let bad = r#"{"n":1,"m":1,"contracts":[{"problem":0,"processor":0,"length":-1.0}]}"#;
        assert!(serde_json::from_str::<Schedule<f64>>(bad).is_err());
        let bad = r#"{"n":1,"m":1,"contracts":[{"problem":3,"processor":0,"length":1.0}]}"#;
        assert!(serde_json::from_str::<Schedule<f64>>(bad).is_err());
    }
}
