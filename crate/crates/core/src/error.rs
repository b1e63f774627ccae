use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("schedule needs at least one problem and one processor (n={n}, m={m})")]
    EmptyDimension { n: usize, m: usize },

    #[error("contract {index} has non-positive or non-finite length {length}")]
    InvalidLength { index: usize, length: String },

    #[error("contract {index} serves problem {problem}, but the schedule has {n} problems")]
    ProblemOutOfRange { index: usize, problem: usize, n: usize },

    #[error("contract {index} runs on processor {processor}, but the schedule has {m} processors")]
    ProcessorOutOfRange { index: usize, processor: usize, m: usize },

    #[error("base must be finite and greater than 1, got {0}")]
    InvalidBase(String),

    #[error("exponential schedule needs k_max >= n + m = {required}, got {k_max}")]
    TooFewContracts { k_max: usize, required: usize },

    #[error("job {index} has non-positive or non-finite size {size}")]
    InvalidJobSize { index: usize, size: String },

    #[error("order is not a permutation of 0..{jobs}")]
    InvalidOrder { jobs: usize },

    #[error("exact makespan search is limited to {limit} jobs, instance has {jobs}")]
    InstanceTooLarge { jobs: usize, limit: usize },

    #[error("oracle limited to n <= {max_n} and m <= {max_m}, got n={n}, m={m}")]
    OracleGuard { n: usize, m: usize, max_n: usize, max_m: usize },

    #[error("operation requires a single processor, schedule has m={0}")]
    NotSingleProcessor(usize),

    #[error("operation requires exactly two problems, schedule has n={0}")]
    NotTwoProblems(usize),

    #[error("schedule is not normalized: contract {index} does not serve a least-worked problem")]
    NotNormalized { index: usize },

    #[error("pair starting at contract {index} neither passes the removal test nor is certified")]
    PairDichotomyFailed { index: usize },

    #[error("ternary search did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyDimension { .. } => "empty-dimension",
            Error::InvalidLength { .. } => "invalid-length",
            Error::ProblemOutOfRange { .. } => "problem-out-of-range",
            Error::ProcessorOutOfRange { .. } => "processor-out-of-range",
            Error::InvalidBase(_) => "invalid-base",
            Error::TooFewContracts { .. } => "too-few-contracts",
            Error::InvalidJobSize { .. } => "invalid-job-size",
            Error::InvalidOrder { .. } => "invalid-order",
            Error::InstanceTooLarge { .. } => "instance-too-large",
            Error::OracleGuard { .. } => "oracle-guard",
            Error::NotSingleProcessor(_) => "not-single-processor",
            Error::NotTwoProblems(_) => "not-two-problems",
            Error::NotNormalized { .. } => "not-normalized",
            Error::PairDichotomyFailed { .. } => "pair-dichotomy-failed",
            Error::NoConvergence { .. } => "no-convergence",
            Error::InvalidParameter(_) => "invalid-parameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
