//! Numeric abstractions shared by every module.
//!
//! Schedules, makespan solvers and the measures only need field arithmetic
//! and an ordering, so they are generic over [`Scalar`], which is
//! implemented for `f64`, `f32` and exact rationals ([`Rational64`]).
//! Calculators that take roots or logarithms (optimal bases, the
//! root-valued bounds, the functional optimizer) require [`Real`].

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};

use num_rational::Rational64;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

/// A length/time value.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Relative tolerance used when comparing computed times; zero for exact types.
    fn rel_tol() -> Self;

    /// `false` for NaN and infinities.
    fn is_finite_value(&self) -> bool;

    fn approx_eq(self, other: Self) -> bool {
        if self == other {
            return true;
        }
        let scale = if self.abs() > other.abs() { self.abs() } else { other.abs() };
        (self - other).abs() <= Self::rel_tol() * scale
    }

    fn from_count(count: usize) -> Self {
        Self::from_usize(count).expect("count representable in scalar type")
    }

    /// Lossy conversion used for reporting.
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn rel_tol() -> Self {
        1e-9
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn rel_tol() -> Self {
        1e-5
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Rational64 {
    fn rel_tol() -> Self {
        Rational64::from_integer(0)
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Scalars with transcendental functions.
pub trait Real: Scalar + Float {
    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 converts")
    }
}

impl Real for f64 {}
impl Real for f32 {}

/// Integer power by repeated squaring; works for exact types.
pub fn powu<T: Scalar>(base: T, exp: usize) -> T {
    num_traits::pow(base, exp)
}

/// A value on the extended half-line: either finite or `+inf`.
///
/// Measures are suprema and become unbounded when a window leaves some
/// problem without a completed contract; exact scalar types have no
/// infinity of their own.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Extended<T> {
    pub fn finite(&self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(*v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => v.as_f64(),
            Extended::Infinite => f64::INFINITY,
        }
    }

    /// `self <= other + slack * max(1, |other|)`.
    pub fn le_with_slack(&self, other: &Self, slack: T) -> bool {
        match (self, other) {
            (_, Extended::Infinite) => true,
            (Extended::Infinite, Extended::Finite(_)) => false,
            (Extended::Finite(a), Extended::Finite(b)) => {
                let scale = T::one().max_of(b.abs());
                *a <= *b + slack * scale
            }
        }
    }

    pub fn max(self, other: Self) -> Self {
        match (self, other) {
            (Extended::Infinite, _) | (_, Extended::Infinite) => Extended::Infinite,
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a.max_of(b)),
        }
    }
}

impl<T: Scalar> PartialOrd for Extended<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Extended::Infinite, Extended::Infinite) => Some(Ordering::Equal),
            (Extended::Infinite, _) => Some(Ordering::Greater),
            (_, Extended::Infinite) => Some(Ordering::Less),
            (Extended::Finite(a), Extended::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl<T: Scalar> Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => Display::fmt(v, f),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// Finite values serialize as numbers, `+inf` as the string `"inf"`.
impl<T: Scalar> Serialize for Extended<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => serializer.serialize_f64(v.as_f64()),
            Extended::Infinite => serializer.serialize_str("inf"),
        }
    }
}
