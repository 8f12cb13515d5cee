//! Error types shared across the crate.

use thiserror::Error;

/// Errors from space and cone-function construction and arithmetic.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("functions live over different spaces")]
    SpaceMismatch,
    #[error("operands mix the discrete and PL models")]
    KindMismatch,
    #[error("scalar must be nonnegative")]
    NegativeScalar,
    #[error("operation requires a nonempty list of functions")]
    EmptyList,
    #[error("plateau widths must satisfy 0 < inner < outer")]
    BadWidths,
    #[error("space must contain at least one point")]
    EmptySpace,
    #[error("point identifiers must be pairwise distinct")]
    DuplicatePoints,
    #[error("resolution must be positive")]
    BadResolution,
    #[error("cone functions must be nonnegative everywhere")]
    NegativeValue,
    #[error("breakpoints must be strictly increasing and finite")]
    BadBreakpoints,
    #[error("breakpoint and value lists must have equal length >= 2")]
    LengthMismatch,
    #[error("PL cone functions must vanish at their first and last breakpoint")]
    NonzeroEndpoint,
    #[error("expected {expected} values for this space, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("point does not belong to this space")]
    BadPoint,
    #[error("cannot parse rational value {0:?}")]
    BadRational(String),
}

/// Errors from operator construction and application.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("point map is not a bijection")]
    NotBijective,
    #[error("point map values must be strictly monotone with matching tail slopes")]
    NotMonotone,
    #[error("weights must be strictly positive")]
    NonPositiveWeight,
    #[error("operator components disagree about the spaces involved")]
    ComponentMismatch,
    #[error("spaces are incompatible: {0}")]
    IncompatibleSpaces(String),
    #[error("weight range must satisfy 0 < lo <= hi")]
    BadRange,
}

/// Errors surfaced by oracle evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("fixture does not support this space: {0}")]
    UnsupportedSpace(String),
}

/// Errors from the verification checkers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("oracle evaluation failed: {0}")]
    OracleFailure(#[from] OracleError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("trials must be >= 1")]
    NoTrials,
    #[error("cannot sample {wanted} functions with pairwise-disjoint cozero sets on this space")]
    CannotSampleDisjoint { wanted: usize },
    #[error("witness does not match property {0}")]
    BadWitness(String),
}

/// Errors from the black-box recovery procedure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecoveryError {
    #[error("oracle evaluation failed: {0}")]
    OracleFailure(#[from] OracleError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("no probe has positive image at {point}: the map sends every probe to 0 there")]
    NotLocalizableZero { point: String },
    #[error("disjoint probes {first} and {second} both have positive image at {point}: disjointness is not preserved")]
    NotLocalizableMultiple {
        point: String,
        first: String,
        second: String,
    },
    #[error("probe budget {budget} exhausted at {point} (needs at least {needed})")]
    BudgetExhausted {
        point: String,
        budget: u64,
        needed: u64,
    },
    #[error("weight probe at {point} returned zero, contradicting localization")]
    WeightZero { point: String },
    #[error("weight probes at {point} disagree: {first} vs {second}")]
    WeightUnstable {
        point: String,
        first: f64,
        second: f64,
    },
    #[error("recovered point map is not a bijection: {detail}")]
    TauNotBijective { detail: String },
    #[error("recovery config invalid: {0}")]
    BadConfig(String),
}

/// Errors from the brute-force grid enumeration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid cone with {elements} elements exceeds the cap of {cap}")]
    TooLarge { elements: usize, cap: usize },
    #[error("searching {elements}! bijections exceeds the permutation cap of {cap}")]
    TooManyBijections { elements: usize, cap: u64 },
}
