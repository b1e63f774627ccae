//! Makespan on `m` identical processors.
//!
//! The makespan of an assignment is its maximum processor load; `OPT(S)` is
//! the minimum over all assignments of the jobs `S`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{powu, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct MakespanInstance<T> {
    sizes: Vec<T>,
    m: usize,
}

impl<T: Scalar> MakespanInstance<T> {
    pub fn new(sizes: Vec<T>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyDimension { n: sizes.len(), m });
        }
        for (index, s) in sizes.iter().enumerate() {
            if !s.is_finite_value() || *s <= T::zero() {
                return Err(Error::InvalidJobSize { index, size: s.to_string() });
            }
        }
        Ok(MakespanInstance { sizes, m })
    }

    pub fn sizes(&self) -> &[T] {
        &self.sizes
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn jobs(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> T {
        self.sizes.iter().fold(T::zero(), |acc, &s| acc + s)
    }

    /// `max(max size, total / m)`.
    pub fn lower_bound(&self) -> T {
        let largest = self.sizes.iter().fold(T::zero(), |acc, &s| acc.max_of(s));
        largest.max_of(self.total() / T::from_count(self.m))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assignment<T> {
    /// `processor_of[j]` is the processor of job `j`.
    pub processor_of: Vec<usize>,
    pub loads: Vec<T>,
    pub makespan: T,
    /// Proven minimum.
    pub optimal: bool,
}

impl<T: Scalar> Assignment<T> {
    fn from_map(instance: &MakespanInstance<T>, processor_of: Vec<usize>, optimal: bool) -> Self {
        let mut loads = vec![T::zero(); instance.m];
        for (&p, &s) in processor_of.iter().zip(&instance.sizes) {
            loads[p] = loads[p] + s;
        }
        let makespan = loads.iter().fold(T::zero(), |acc, &l| acc.max_of(l));
        Assignment { processor_of, loads, makespan, optimal }
    }
}

fn least_loaded<T: Scalar>(loads: &[T]) -> usize {
    let mut best = 0;
    for (p, &load) in loads.iter().enumerate().skip(1) {
        if load < loads[best] {
            best = p;
        }
    }
    best
}

fn list_schedule<T: Scalar>(instance: &MakespanInstance<T>, order: &[usize]) -> Vec<usize> {
    let mut loads = vec![T::zero(); instance.m];
    let mut processor_of = vec![0; instance.sizes.len()];
    for &job in order {
        let p = least_loaded(&loads);
        loads[p] = loads[p] + instance.sizes[job];
        processor_of[job] = p;
    }
    processor_of
}

/// Graham's list scheduling: jobs in `order`, each to a least-loaded
/// processor, ties to the lowest index.
pub fn greedy_in_order<T: Scalar>(instance: &MakespanInstance<T>, order: &[usize]) -> Result<Assignment<T>> {
    let jobs = instance.jobs();
    let mut seen = vec![false; jobs];
    if order.len() != jobs {
        return Err(Error::InvalidOrder { jobs });
    }
    for &j in order {
        if j >= jobs || std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidOrder { jobs });
        }
    }
    let map = list_schedule(instance, order);
    let optimal = instance.m >= jobs;
    Ok(Assignment::from_map(instance, map, optimal))
}

/// Greedy in index order.
pub fn greedy<T: Scalar>(instance: &MakespanInstance<T>) -> Assignment<T> {
    let order: Vec<usize> = (0..instance.jobs()).collect();
    greedy_in_order(instance, &order).expect("identity order is a permutation")
}

fn decreasing_order<T: Scalar>(sizes: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    // stable: equal sizes keep index order
    order.sort_by(|&a, &b| sizes[b].partial_cmp(&sizes[a]).expect("sizes are comparable"));
    order
}

/// Longest processing time first.
pub fn lpt_makespan<T: Scalar>(instance: &MakespanInstance<T>) -> Assignment<T> {
    let order = decreasing_order(&instance.sizes);
    let map = list_schedule(instance, &order);
    let mut assignment = Assignment::from_map(instance, map, false);
    assignment.optimal = assignment.makespan <= instance.lower_bound();
    assignment
}

/// Closed-form makespan of greedy on `b^k, ..., b^{n+k-1}` in increasing
/// order: `b^k (b^{n+m-1} - b^γ) / (b^m - 1)` with `γ = (n-1) mod m`.
pub fn greedy_geometric_makespan<T: Scalar>(b: T, n: usize, m: usize, k: usize) -> T {
    assert!(n >= 1 && m >= 1, "n and m must be positive");
    assert!(b > T::one(), "base must exceed 1");
    let gamma = (n - 1) % m;
    powu(b, k) * (powu(b, n + m - 1) - powu(b, gamma)) / (powu(b, m) - T::one())
}

/// `κ = max{1 / (2 - 1/m), (b^m - 1) / b^m}`: greedy on a geometric
/// instance is within `1/κ` of optimal.
pub fn graham_kappa<T: Scalar>(b: T, m: usize) -> T {
    let mm = T::from_count(m);
    let two = T::one() + T::one();
    let graham = T::one() / (two - T::one() / mm);
    let bm = powu(b, m);
    graham.max_of((bm - T::one()) / bm)
}

/// Branch-and-bound solver for `OPT(S)`.
///
/// Jobs are placed largest first. At each node processors with a load
/// already tried at that node are skipped, which removes the symmetry
/// between identical processors, and a node is cut when
/// `max(current max load, (placed + remaining) / m)` cannot beat the
/// incumbent. The incumbent starts from LPT and the search stops as soon as
/// it meets `max(max size, total / m)`.
#[derive(Clone, Copy, Debug)]
pub struct ExactSolver {
    pub max_jobs: usize,
}

impl Default for ExactSolver {
    fn default() -> Self {
        ExactSolver { max_jobs: 24 }
    }
}

struct Search<'a, T> {
    sizes: &'a [T],
    order: &'a [usize],
    suffix: Vec<T>,
    m: usize,
    lower: T,
    best: T,
    best_map: Vec<usize>,
    map: Vec<usize>,
    loads: Vec<T>,
}

impl<T: Scalar> Search<'_, T> {
    fn done(&self) -> bool {
        self.best <= self.lower
    }

    fn descend(&mut self, depth: usize, current_max: T) {
        if depth == self.order.len() {
            if current_max < self.best {
                self.best = current_max;
                self.best_map.clone_from(&self.map);
            }
            return;
        }
        let placed_total = self.loads.iter().fold(T::zero(), |acc, &l| acc + l);
        let bound = current_max.max_of((placed_total + self.suffix[depth]) / T::from_count(self.m));
        if bound >= self.best {
            return;
        }
        let job = self.order[depth];
        let size = self.sizes[job];
        for p in 0..self.m {
            let load = self.loads[p];
            if self.loads[..p].iter().any(|&l| l == load) {
                continue;
            }
            let next = load + size;
            if next >= self.best {
                continue;
            }
            self.loads[p] = next;
            self.map[job] = p;
            self.descend(depth + 1, current_max.max_of(next));
            self.loads[p] = load;
            if self.done() {
                return;
            }
        }
    }
}

impl ExactSolver {
    pub fn solve<T: Scalar>(&self, instance: &MakespanInstance<T>) -> Result<Assignment<T>> {
        let jobs = instance.jobs();
        if jobs > self.max_jobs {
            return Err(Error::InstanceTooLarge { jobs, limit: self.max_jobs });
        }
        let incumbent = lpt_makespan(instance);
        let lower = instance.lower_bound();
        if jobs == 0 || incumbent.makespan <= lower || instance.m == 1 {
            return Ok(Assignment { optimal: true, ..incumbent });
        }
        let order = decreasing_order(&instance.sizes);
        let mut suffix = vec![T::zero(); jobs + 1];
        for d in (0..jobs).rev() {
            suffix[d] = suffix[d + 1] + instance.sizes[order[d]];
        }
        let mut search = Search {
            sizes: &instance.sizes,
            order: &order,
            suffix,
            m: instance.m,
            lower,
            best: incumbent.makespan,
            best_map: incumbent.processor_of.clone(),
            map: vec![0; jobs],
            loads: vec![T::zero(); instance.m],
        };
        search.descend(0, T::zero());
        Ok(Assignment::from_map(instance, search.best_map, true))
    }
}

/// `OPT(S)` with the default 24-job guard.
pub fn exact_makespan<T: Scalar>(instance: &MakespanInstance<T>) -> Result<Assignment<T>> {
    ExactSolver::default().solve(instance)
}
