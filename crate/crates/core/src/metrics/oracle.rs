//! Deficiency straight from its definition, for cross-checking `t / OPT(S)`.
//!
//! The best offline answer at time `t` scales every completed length by a
//! common factor `d`, and `d` is as large as possible while the scaled set
//! still fits on `m` processors within `t`. The oracle finds that `d` by
//! bisection, deciding each trial with its own exhaustive bin-packing search.
//! It shares no code with the makespan solvers.

use crate::error::{Error, Result};
use crate::scalar::{Extended, Real};
use crate::schedule::Schedule;

pub const ORACLE_MAX_N: usize = 10;
pub const ORACLE_MAX_M: usize = 3;

const BISECTION_STEPS: usize = 200;

/// Can `items` (sorted decreasing) be packed into `bins` of `capacity`?
fn packs<T: Real>(items: &[T], loads: &mut [T], capacity: T) -> bool {
    let Some((&first, rest)) = items.split_first() else {
        return true;
    };
    for b in 0..loads.len() {
        let load = loads[b];
        if loads[..b].contains(&load) {
            continue;
        }
        if load + first <= capacity {
            loads[b] = load + first;
            let ok = packs(rest, loads, capacity);
            loads[b] = load;
            if ok {
                return true;
            }
        }
    }
    false
}

/// Largest `d` such that `{d s : s in sizes}` packs into `m` processors within `t`.
pub fn scaling_oracle<T: Real>(sizes: &[T], m: usize, t: T) -> Result<T> {
    if sizes.len() > ORACLE_MAX_N || m > ORACLE_MAX_M || m == 0 || sizes.is_empty() {
        return Err(Error::OracleGuard { n: sizes.len(), m, max_n: ORACLE_MAX_N, max_m: ORACLE_MAX_M });
    }
    let mut items = sizes.to_vec();
    items.sort_by(|a, b| b.partial_cmp(a).expect("sizes are comparable"));
    let total = items.iter().fold(T::zero(), |acc, &s| acc + s);
    // Rounding in d * s must not turn a boundary packing into a failure.
    let slack = T::one() + T::from_f64_lossy(1e-13);
    let feasible = |d: T| {
        let scaled: Vec<T> = items.iter().map(|&s| s * d).collect();
        packs(&scaled, &mut vec![T::zero(); m], t * slack)
    };
    // Everything on one processor always fits; the largest item must fit alone.
    let mut lo = t / total;
    let mut hi = t / items[0];
    if feasible(hi) {
        return Ok(hi);
    }
    for _ in 0..BISECTION_STEPS {
        let mid = (lo + hi) / (T::one() + T::one());
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Deficiency of `schedule` right before `t`, from the scaling definition.
pub fn deficiency_bruteforce_oracle<T: Real>(schedule: &Schedule<T>, t: T) -> Result<Extended<T>> {
    let snap = schedule.snapshot_before(t);
    if !snap.is_complete() {
        return Ok(Extended::Infinite);
    }
    scaling_oracle(snap.sorted(), schedule.m_processors(), t).map(Extended::Finite)
}
