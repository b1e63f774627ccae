//! Schedules of contract algorithms on identical processors.
//!
//! A contract algorithm must be given its running time in advance. To make
//! `n` problems interruptible, a schedule runs contracts for them on `m`
//! processors; when interrupted at time `t`, each problem is answered by its
//! longest completed contract. This crate builds such schedules, simulates
//! them, and measures them by acceleration ratio, performance ratio and
//! deficiency, together with closed-form bounds and normalizing transforms.
//!
//! Everything is generic over the scalar type. Use `f64` for speed and
//! `Rational64` for exact arithmetic:
//!
//! ```
//! use contract_sched::{exponential_schedule, deficiency, ExponentialSpec, Solver, Window};
//!
//! let schedule = exponential_schedule(&ExponentialSpec::new(1, 1, 2.0).with_k_max(40)).unwrap();
//! let report = deficiency(&schedule, &Window::Served, Solver::default()).unwrap();
//! let value: f64 = report.value.finite().unwrap();
//! assert!((value - 4.0).abs() < 1e-9);
//! ```

pub mod bounds;
pub mod error;
pub mod generators;
pub mod makespan;
pub mod metrics;
pub mod scalar;
pub mod schedule;
pub mod transforms;

pub use num_rational::Rational64;

pub use bounds::{BoundKind, BoundParams, BoundReport, GeometricFunctional, TernarySearch};
pub use error::{Error, Result};
pub use generators::{
    acceleration_optimal_base, deficiency_optimal_base, default_k_max, exponential_schedule, gamma_rho, ExponentialSpec,
};
pub use makespan::{
    exact_makespan, graham_kappa, greedy, greedy_geometric_makespan, greedy_in_order, lpt_makespan, Assignment,
    ExactSolver, MakespanInstance,
};
pub use metrics::{
    acceleration_ratio, deficiency, deficiency_bruteforce_oracle, performance_ratio, single_processor_deficiency, Measure,
    MeasureReport, Solver, Window, WindowEval,
};
pub use scalar::{Extended, Real, Scalar};
pub use schedule::{Contract, Schedule, ScheduleFile, ScheduleRule, Snapshot};
pub use transforms::{normalize, reduce_consecutive_pairs, NormalizationTrace, Step, StepKind};

pub type Schedule64 = Schedule<f64>;
pub type Schedule32 = Schedule<f32>;
pub type ScheduleQ = Schedule<Rational64>;
pub type Snapshot64 = Snapshot<f64>;
pub type MeasureReport64 = MeasureReport<f64>;
pub type MeasureReportQ = MeasureReport<Rational64>;
pub type MakespanInstance64 = MakespanInstance<f64>;
pub type MakespanInstanceQ = MakespanInstance<Rational64>;
pub type Assignment64 = Assignment<f64>;
pub type BoundReport64 = BoundReport<f64>;
pub type ExponentialSpec64 = ExponentialSpec<f64>;
pub type NormalizationTrace64 = NormalizationTrace<f64>;
