use thiserror::Error;

/// Errors raised by jet arithmetic and the functional calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("shape mismatch: (n={left_n}, D={left_d}) vs (n={right_n}, D={right_d})")]
    ShapeMismatch {
        left_n: usize,
        left_d: u32,
        right_n: usize,
        right_d: u32,
    },
    #[error("constant term vanishes; {0} requires f(0) != 0")]
    VanishingConstant(&'static str),
    #[error("exact regime requires constant term 1 for {0}")]
    NonUnitConstant(&'static str),
    #[error("exact regime requires {0} to have zero constant term")]
    NonZeroConstant(&'static str),
    #[error("float exponent {0} cannot be used in the exact regime")]
    FloatExponentInExactRegime(f64),
    #[error("need at least one variable")]
    NoVariables,
    #[error("multi-index {alpha:?} has {got} entries, expected {expected}")]
    IndexLength {
        alpha: Vec<u32>,
        got: usize,
        expected: usize,
    },
    #[error("cannot truncate to degree {requested} above the cap {cap}")]
    TruncationAboveCap { requested: u32, cap: u32 },
    #[error("malformed jet JSON: {0}")]
    Format(String),
}

/// Errors from the coefficient tables.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoefficientError {
    #[error("order must be at least 1, got {0}")]
    OrderTooSmall(u32),
    #[error("binomial C({m}, {nu}) out of range")]
    BinomialRange { m: i64, nu: i64 },
    #[error("internal disagreement between computation paths for {table}: {detail}")]
    Disagreement { table: &'static str, detail: String },
}

/// Errors from the function-space layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("weight exponent s must exceed -1, got {0}")]
    WeightExponent(String),
    #[error("derivative order m must be at least 1")]
    DerivativeOrder,
    #[error("need at least one variable")]
    NoVariables,
    #[error("point lies outside the open unit ball (|w| = {0})")]
    OutsideBall(f64),
    #[error("invalid companion pair: 2*{m0} - {k0} != {n}")]
    InvalidCompanion { n: usize, m0: u32, k0: u32 },
    #[error("multiplier of degree {deg} on polynomials of degree {d} exceeds jet cap {cap}")]
    CapacityExceeded { deg: u32, d: u32, cap: u32 },
    #[error("dimension mismatch: jet has {jet} variables, space has {space}")]
    DimensionMismatch { jet: usize, space: usize },
}

/// Errors from identity verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdentityError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("index {name}={value} outside 1..={max}")]
    IndexRange {
        name: &'static str,
        value: u32,
        max: u32,
    },
    #[error("order {0} must be at least 1")]
    Order(u32),
    #[error("internal disagreement between computation paths for {0}")]
    Disagreement(&'static str),
    #[error("|f| drops to {0:e} on the sample set; refusing to bound f^(t-k)")]
    NearZero(f64),
    #[error("f(z)/f(0) leaves the right half-plane on the samples; log branch is ambiguous")]
    BranchAmbiguous,
    #[error("jet cap {cap} too small: exact f^k h needs degree {needed}")]
    InsufficientCap { cap: u32, needed: u32 },
    #[error("unknown identity id {0:?}")]
    UnknownIdentity(String),
    #[error("parameter {0} is required for this identity")]
    MissingParameter(&'static str),
}
