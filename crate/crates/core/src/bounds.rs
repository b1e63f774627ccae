//! Closed-form bounds on acceleration ratio, performance ratio and deficiency.
//!
//! Calculators that only need field arithmetic are generic over
//! [`Scalar`] and evaluate exactly on rationals; those involving roots of the
//! parameters need [`Real`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{acceleration_optimal_base, deficiency_optimal_base, gamma_rho};
use crate::makespan::graham_kappa;
use crate::metrics::Measure;
use crate::scalar::{powu, Real, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
}

/// Parameters a bound was evaluated with; absent ones do not apply.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundParams<T: Scalar> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<T>,
}

impl<T: Scalar> Default for BoundParams<T> {
    fn default() -> Self {
        BoundParams { n: None, m: None, b: None, gamma: None, rho: None, kappa: None, lambda: None, beta: None, a: None }
    }
}

impl<T: Scalar> BoundParams<T> {
    fn dims(n: usize, m: usize) -> Self {
        let (gamma, rho) = gamma_rho(n, m);
        BoundParams { n: Some(n), m: Some(m), gamma: Some(gamma), rho: Some(rho), ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedValue<T: Scalar> {
    pub name: &'static str,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport<T: Scalar> {
    pub name: &'static str,
    pub kind: BoundKind,
    pub measure: Measure,
    pub value: T,
    pub params: BoundParams<T>,
    /// Equivalent or relaxed forms of the same bound.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<NamedValue<T>>,
}

fn check_base<T: Scalar>(b: T) -> Result<()> {
    if !b.is_finite_value() || b <= T::one() {
        return Err(Error::InvalidBase(b.to_string()));
    }
    Ok(())
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::EmptyDimension { n, m });
    }
    Ok(())
}

/// `λ = 1/κ = min{2 - 1/m, b^m / (b^m - 1)}`.
pub fn lambda<T: Scalar>(b: T, m: usize) -> T {
    T::one() / graham_kappa(b, m)
}

/// Finish time of contract `n + k` of an exponential schedule:
/// `(b^{k+n+m} - b^{(k+n) mod m}) / (b^m - 1)`.
pub fn exponential_finish_time<T: Scalar>(b: T, n: usize, m: usize, k: usize) -> T {
    (powu(b, k + n + m) - powu(b, (k + n) % m)) / (powu(b, m) - T::one())
}

/// Acceleration ratio of the exponential schedule with base `b`:
/// `b^{n+m} / (b^m - 1)`.
pub fn exponential_acceleration_ratio<T: Scalar>(b: T, n: usize, m: usize) -> T {
    powu(b, n + m) / (powu(b, m) - T::one())
}

/// `λ b^{n+m} / (b^{n+m-1} - b^γ)`; exact for one processor, where it reads
/// `b^{n+1} / (b^n - 1)`.
pub fn exponential_deficiency_bound<T: Scalar>(b: T, n: usize, m: usize) -> T {
    let (gamma, _) = gamma_rho(n, m);
    lambda(b, m) * powu(b, n + m) / (powu(b, n + m - 1) - powu(b, gamma))
}

/// Upper bound on the deficiency of the exponential schedule with base `b`.
pub fn deficiency_upper_bound<T: Scalar>(n: usize, m: usize, b: T) -> Result<BoundReport<T>> {
    check_dims(n, m)?;
    check_base(b)?;
    let kappa = graham_kappa(b, m);
    Ok(BoundReport {
        name: "deficiency-ub",
        kind: BoundKind::Upper,
        measure: Measure::Deficiency,
        value: exponential_deficiency_bound(b, n, m),
        params: BoundParams {
            b: Some(b),
            kappa: Some(kappa),
            lambda: Some(T::one() / kappa),
            ..BoundParams::dims(n, m)
        },
        forms: vec![],
    })
}

/// The bound above at `b = β = (m(ρ+1) + 1)^{1/(m(ρ+1))}`.
pub fn deficiency_upper_bound_at_beta<T: Real>(n: usize, m: usize) -> Result<BoundReport<T>> {
    check_dims(n, m)?;
    let beta = deficiency_optimal_base::<T>(n, m);
    let mut report = deficiency_upper_bound(n, m, beta)?;
    report.name = "deficiency-ub-beta";
    report.params.beta = Some(beta);
    // ρ-form, which depends on (m, ρ) only
    let (_, rho) = gamma_rho(n, m);
    let y = (m * (rho + 1)) as i32;
    let rho_form = lambda(beta, m) / (beta.recip() - beta.powi(-y - 1));
    report.forms.push(NamedValue { name: "rho-form", value: rho_form });
    Ok(report)
}

/// The deficiency bound for the acceleration-optimal base `((m+n)/n)^{1/m}`.
pub fn acceleration_optimal_deficiency_bound<T: Real>(n: usize, m: usize) -> Result<BoundReport<T>> {
    check_dims(n, m)?;
    let a = acceleration_optimal_base::<T>(n, m);
    let mut report = deficiency_upper_bound(n, m, a)?;
    report.name = "acc-opt-deficiency-ub";
    report.params.a = Some(a);
    Ok(report)
}

/// Largest value over labelled points; the first wins among equals.
pub fn grid_max<K, T: Scalar>(points: impl IntoIterator<Item = (K, T)>) -> Option<(K, T)> {
    points.into_iter().fold(None, |best, (k, v)| match best {
        Some((_, bv)) if bv >= v => best,
        _ => Some((k, v)),
    })
}

/// `(n+1)^{(n+1)/n} / n`, the deficiency of the best exponential schedule on one processor.
pub fn best_exponential_deficiency_single_processor<T: Real>(n: usize) -> Result<BoundReport<T>> {
    check_dims(n, 1)?;
    let nn = T::from_count(n);
    let value = (nn + T::one()).powf((nn + T::one()) / nn) / nn;
    Ok(BoundReport {
        name: "best-exp",
        kind: BoundKind::Upper,
        measure: Measure::Deficiency,
        value,
        params: BoundParams { b: Some(deficiency_optimal_base(n, 1)), ..BoundParams::dims(n, 1) },
        forms: vec![],
    })
}

/// `(n+1)/n`: no single-processor schedule does better.
pub fn deficiency_lower_bound_general<T: Scalar>(n: usize) -> Result<BoundReport<T>> {
    check_dims(n, 1)?;
    let nn = T::from_count(n);
    Ok(BoundReport {
        name: "general-lb",
        kind: BoundKind::Lower,
        measure: Measure::Deficiency,
        value: (nn + T::one()) / nn,
        params: BoundParams::dims(n, 1),
        forms: vec![],
    })
}

/// Lower bound for round-robin schedules on one processor; it coincides with
/// the best exponential schedule.
pub fn roundrobin_lower_bound<T: Real>(n: usize) -> Result<BoundReport<T>> {
    let mut report = best_exponential_deficiency_single_processor::<T>(n)?;
    report.name = "roundrobin-lb";
    report.kind = BoundKind::Lower;
    report.params.a = report.params.b.take();
    Ok(report)
}

/// `min_{a>1} a^4 / (a^3 - 1) = 2^{8/3} / 3`, attained at `a = 2^{2/3}`.
pub fn two_problem_lower_bound<T: Real>() -> BoundReport<T> {
    let f = GeometricFunctional::TwoProblem;
    let a = f.closed_form_minimizer::<T>();
    BoundReport {
        name: "two-problem-lb",
        kind: BoundKind::Lower,
        measure: Measure::Deficiency,
        value: f.value(a),
        params: BoundParams { a: Some(a), ..BoundParams::dims(2, 1) },
        forms: vec![],
    }
}

/// `(n/m) ((n+m)/n)^{(n+m)/m}`, attained at `a = ((m+n)/n)^{1/m}`.
pub fn cyclic_acceleration_lower_bound<T: Real>(n: usize, m: usize) -> Result<BoundReport<T>> {
    check_dims(n, m)?;
    let (nn, mm) = (T::from_count(n), T::from_count(m));
    let value = nn / mm * ((nn + mm) / nn).powf((nn + mm) / mm);
    Ok(BoundReport {
        name: "cyclic-acc-lb",
        kind: BoundKind::Lower,
        measure: Measure::Acceleration,
        value,
        params: BoundParams { a: Some(acceleration_optimal_base(n, m)), ..BoundParams::dims(n, m) },
        forms: vec![],
    })
}

/// Performance ratio of the acceleration-optimal schedule:
/// `(n/m) ((m+n)/n)^{(m+n)/m}`, divided by `ceil(n/m)` when `m < n`.
///
/// `forms` carries `(1 + n/m)(1 + m/n)^{n/m}` (equal to the `m >= n`
/// value) and `(1 + m/n)^{1 + n/m}` (an upper bound when `m < n`).
pub fn performance_ratio_closed_form<T: Real>(n: usize, m: usize) -> Result<BoundReport<T>> {
    check_dims(n, m)?;
    let (nn, mm) = (T::from_count(n), T::from_count(m));
    let acc = nn / mm * ((mm + nn) / nn).powf((mm + nn) / mm);
    let value = if m >= n { acc } else { acc / T::from_count(n.div_ceil(m)) };
    let one = T::one();
    let ratio_form = (one + nn / mm) * (one + mm / nn).powf(nn / mm);
    let relaxed = (one + mm / nn) * (one + mm / nn).powf(nn / mm);
    Ok(BoundReport {
        name: "perf-closed-form",
        kind: BoundKind::Upper,
        measure: Measure::Performance,
        value,
        params: BoundParams { a: Some(acceleration_optimal_base(n, m)), ..BoundParams::dims(n, m) },
        forms: vec![
            NamedValue { name: "one-plus-n-over-m", value: ratio_form },
            NamedValue { name: "one-plus-m-over-n", value: relaxed },
        ],
    })
}

/// Suprema of geometric-sequence functionals, each of the form
/// `a^p / (a^q - 1)` in the limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeometricFunctional {
    /// `a^{n+1} / (a^n - 1)`: round-robin schedules on one processor.
    RoundRobin { n: usize },
    /// `a^{n+m} / (a^m - 1)`: acceleration ratio of cyclic schedules.
    Cyclic { n: usize, m: usize },
    /// `a^4 / (a^3 - 1)`: two problems on one processor.
    TwoProblem,
}

impl GeometricFunctional {
    /// `(p, q)` with limit value `a^p / (a^q - 1)`.
    pub fn exponents(&self) -> (usize, usize) {
        match *self {
            GeometricFunctional::RoundRobin { n } => (n + 1, n),
            GeometricFunctional::Cyclic { n, m } => (n + m, m),
            GeometricFunctional::TwoProblem => (4, 3),
        }
    }

    pub fn value<T: Real>(&self, a: T) -> T {
        let (p, q) = self.exponents();
        // a^{p-q} / (1 - a^{-q}) avoids overflowing a^p
        a.powi((p - q) as i32) / (T::one() - a.powi(-(q as i32)))
    }

    /// `d/da ln F(a) = p/a - q a^{q-1} / (a^q - 1)`.
    pub fn log_derivative<T: Real>(&self, a: T) -> T {
        let (p, q) = self.exponents();
        let (pp, qq) = (T::from_count(p), T::from_count(q));
        pp / a - qq / (a * (T::one() - a.powi(-(q as i32))))
    }

    /// Stationary point `(p / (p - q))^{1/q}`.
    pub fn closed_form_minimizer<T: Real>(&self) -> T {
        let (p, q) = self.exponents();
        let ratio = T::from_count(p) / T::from_count(p - q);
        (ratio.ln() / T::from_count(q)).exp()
    }

    /// `max_{k <= k_max}` of the finite-sum functional before the limit is
    /// taken, summed term by term.
    pub fn truncated_sup<T: Real>(&self, a: T, k_max: usize) -> T {
        let top = match *self {
            GeometricFunctional::RoundRobin { n } => k_max + n,
            GeometricFunctional::Cyclic { n, m } => k_max + n + 2 * m - 1,
            GeometricFunctional::TwoProblem => k_max + 1,
        };
        let powers: Vec<T> = std::iter::successors(Some(T::one()), |&x| Some(x * a)).take(top + 1).collect();
        let sum = |range: std::ops::RangeInclusive<usize>| range.map(|j| powers[j]).fold(T::zero(), |acc, x| acc + x);
        let first_k = if matches!(self, GeometricFunctional::TwoProblem) { 2 } else { 0 };
        let mut best = T::neg_infinity();
        for k in first_k..=k_max {
            let ratio = match *self {
                GeometricFunctional::RoundRobin { n } => sum(0..=k + n) / sum(k..=k + n - 1),
                GeometricFunctional::Cyclic { n, m } => sum(0..=k + n + 2 * m - 1) / sum(k + m..=k + 2 * m - 1),
                GeometricFunctional::TwoProblem => sum(0..=k + 1) / sum(k - 2..=k),
            };
            best = Float::max(best, ratio);
        }
        best
    }
}

use num_traits::Float;

/// Ternary search for the minimizer of a unimodal function.
#[derive(Clone, Copy, Debug)]
pub struct TernarySearch {
    pub lo: f64,
    pub hi: f64,
    /// Bracket width at which the search stops, relative to `1 + lo`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for TernarySearch {
    fn default() -> Self {
        TernarySearch { lo: 1.0 + 1e-9, hi: 64.0, tol: 1e-12, max_iter: 500 }
    }
}

impl TernarySearch {
    /// Minimize `f` on the bracket. When the two probe values are equal to
    /// rounding, the sign of `derivative` at their midpoint decides which
    /// side to drop.
    pub fn minimize<T: Real>(&self, f: impl Fn(T) -> T, derivative: impl Fn(T) -> T) -> Result<T> {
        let mut lo = T::from_f64_lossy(self.lo);
        let mut hi = T::from_f64_lossy(self.hi);
        let tol = T::from_f64_lossy(self.tol);
        let three = T::from_count(3);
        let flat = T::from_count(4) * T::epsilon();
        for _ in 0..self.max_iter {
            if hi - lo <= tol * (T::one() + Float::abs(lo)) {
                return Ok((lo + hi) / (T::one() + T::one()));
            }
            let third = (hi - lo) / three;
            let (m1, m2) = (lo + third, hi - third);
            if m1 <= lo || m2 >= hi || m1 >= m2 {
                // bracket at working precision
                return Ok((lo + hi) / (T::one() + T::one()));
            }
            let (f1, f2) = (f(m1), f(m2));
            let drop_right = if Float::abs(f1 - f2) <= flat * Float::max(Float::abs(f1), Float::abs(f2)) {
                derivative((m1 + m2) / (T::one() + T::one())) > T::zero()
            } else {
                f1 < f2
            };
            if drop_right {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        Err(Error::NoConvergence { iterations: self.max_iter })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FunctionalOptimum<T: Scalar> {
    pub a: T,
    pub value: T,
    /// Direct supremum over `k <= 200` of the finite-sum functional at `a`.
    pub truncated_sup: T,
}

/// Samples the log-derivative on a log-spaced grid over the bracket and
/// checks it changes sign at most once, from negative to positive.
fn assert_unimodal<T: Real>(functional: &GeometricFunctional, search: &TernarySearch) -> Result<()> {
    let samples = 256;
    let (lo, hi) = (search.lo.ln(), search.hi.ln());
    let mut seen_positive = false;
    for i in 0..=samples {
        let a = T::from_f64_lossy((lo + (hi - lo) * i as f64 / samples as f64).exp());
        let positive = functional.log_derivative(a) > T::zero();
        if seen_positive && !positive {
            return Err(Error::InvalidParameter(format!("{functional:?} is not unimodal on the bracket")));
        }
        seen_positive |= positive;
    }
    Ok(())
}

pub fn optimize_geometric_functional<T: Real>(functional: GeometricFunctional) -> Result<FunctionalOptimum<T>> {
    optimize_geometric_functional_with(functional, &TernarySearch::default())
}

pub fn optimize_geometric_functional_with<T: Real>(
    functional: GeometricFunctional,
    search: &TernarySearch,
) -> Result<FunctionalOptimum<T>> {
    match functional {
        GeometricFunctional::RoundRobin { n: 0 } | GeometricFunctional::Cyclic { n: 0, .. } | GeometricFunctional::Cyclic { m: 0, .. } => {
            return Err(Error::InvalidParameter("functional needs n, m >= 1".into()));
        }
        _ => {}
    }
    assert_unimodal::<T>(&functional, search)?;
    let a = search.minimize(|a| functional.value(a), |a| functional.log_derivative(a))?;
    Ok(FunctionalOptimum { a, value: functional.value(a), truncated_sup: functional.truncated_sup(a, 200) })
}

/// Figure data: performance ratio against `r = n/m` for `m | n`, `r = 1..=r_max`.
pub fn performance_curve<T: Real>(r_max: usize) -> Vec<(usize, T)> {
    (1..=r_max)
        .map(|r| {
            let value = performance_ratio_closed_form::<T>(r, 1).expect("r >= 1").value;
            (r, value)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfacePoint<T: Scalar> {
    pub m: usize,
    pub rho: usize,
    pub beta: T,
    pub lambda: T,
    pub value: T,
}

/// Figure data: the deficiency bound at `β` over `m = 1..=m_max`,
/// `ρ = 1..=rho_max` (so `n > m`), evaluated at `n = ρ m + 1`.
pub fn deficiency_surface<T: Real>(m_max: usize, rho_max: usize) -> Vec<SurfacePoint<T>> {
    let mut out = Vec::with_capacity(m_max * rho_max);
    for m in 1..=m_max {
        for rho in 1..=rho_max {
            let report = deficiency_upper_bound_at_beta::<T>(rho * m + 1, m).expect("n, m >= 1");
            out.push(SurfacePoint {
                m,
                rho,
                beta: report.params.beta.expect("beta set"),
                lambda: report.params.lambda.expect("lambda set"),
                value: report.value,
            });
        }
    }
    out
}

/// Figure data: `((n+1)/n, (n+1)^{(n+1)/n}/n)` for `n = 1..=n_max`.
pub fn single_processor_curves<T: Real>(n_max: usize) -> Vec<(usize, T, T)> {
    (1..=n_max)
        .map(|n| {
            let lower = deficiency_lower_bound_general::<T>(n).expect("n >= 1").value;
            let exp = best_exponential_deficiency_single_processor::<T>(n).expect("n >= 1").value;
            (n, lower, exp)
        })
        .collect()
}
