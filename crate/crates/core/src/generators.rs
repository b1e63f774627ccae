//! Exponential round-robin schedules and their optimal bases.

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::schedule::{Schedule, ScheduleRule};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentialSpec<T> {
    pub n: usize,
    pub m: usize,
    pub base: T,
    pub k_max: usize,
}

impl<T: Scalar> ExponentialSpec<T> {
    /// Spec with the default prefix length `8 (n + m)`.
    pub fn new(n: usize, m: usize, base: T) -> Self {
        ExponentialSpec { n, m, base, k_max: default_k_max(n, m) }
    }

    pub fn with_k_max(mut self, k_max: usize) -> Self {
        self.k_max = k_max;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::EmptyDimension { n: self.n, m: self.m });
        }
        if !self.base.is_finite_value() || self.base <= T::one() {
            return Err(Error::InvalidBase(self.base.to_string()));
        }
        if self.k_max < self.n + self.m {
            return Err(Error::TooFewContracts { k_max: self.k_max, required: self.n + self.m });
        }
        Ok(())
    }
}

pub fn default_k_max(n: usize, m: usize) -> usize {
    8 * (n + m)
}

/// Contract `i` has length `base^i`, serves problem `i mod n` and runs on
/// processor `i mod m`.
pub fn exponential_schedule<T: Scalar>(spec: &ExponentialSpec<T>) -> Result<Schedule<T>> {
    spec.validate()?;
    let lengths = std::iter::successors(Some(T::one()), |&x| Some(x * spec.base)).take(spec.k_max);
    let schedule = Schedule::round_robin(spec.n, spec.m, lengths)?;
    Ok(schedule.with_rule(ScheduleRule::Exponential { base: spec.base }))
}

/// `γ = (n - 1) mod m` and `ρ` with `n - 1 = ρ m + γ`.
pub fn gamma_rho(n: usize, m: usize) -> (usize, usize) {
    ((n - 1) % m, (n - 1) / m)
}

/// Base minimizing `b^{n+m} / (b^{n+m-1} - b^γ)`, namely
/// `(n + m - γ)^{1 / (n + m - γ - 1)} = (m(ρ+1) + 1)^{1 / (m(ρ+1))}`.
/// For one processor this is `(n+1)^{1/n}`.
pub fn deficiency_optimal_base<T: Real>(n: usize, m: usize) -> T {
    assert!(n >= 1 && m >= 1, "n and m must be positive");
    let (_, rho) = gamma_rho(n, m);
    let y = T::from_count(m * (rho + 1));
    ((y + T::one()).ln() / y).exp()
}

/// Base of the acceleration-optimal cyclic schedule, `((m + n) / n)^{1/m}`.
pub fn acceleration_optimal_base<T: Real>(n: usize, m: usize) -> T {
    assert!(n >= 1 && m >= 1, "n and m must be positive");
    let ratio = T::from_count(m + n) / T::from_count(n);
    (ratio.ln() / T::from_count(m)).exp()
}
