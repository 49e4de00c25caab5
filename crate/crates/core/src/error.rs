use thiserror::Error;

/// A parse failure located at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl std::fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at position {}: expected ", self.position)?;
        match self.expected.as_slice() {
            [] => write!(f, "nothing")?,
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(" "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator polynomial is identically zero")]
    ZeroDenominatorPolynomial,
    #[error("expected {expected} branch functions, got {got}")]
    BranchCountMismatch { expected: usize, got: usize },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("divisor has a branch that is identically zero")]
    EventuallyZeroDivisor,
    #[error("index {index} is before the start index {start}")]
    IndexBeforeStart { index: u64, start: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("invalid bounds: lo must be strictly less than hi")]
    InvalidBounds,
    #[error("tolerance must be positive")]
    ToleranceNotPositive,
    #[error("syntax error {0}")]
    Syntax(SyntaxError),
    #[error("exponent at position {position} is not a non-negative integer")]
    NonIntegerExponent { position: usize },
    #[error("exponent at position {position} is negative")]
    NegativeExponent { position: usize },
    #[error("expression mixes variables `{first}` and `{second}`")]
    MultipleVariables { first: String, second: String },
    #[error("function has a pole at {0}")]
    PoleAtPoint(String),
    #[error("power sum degree {degree} exceeds the bound {bound}")]
    DegreeBoundExceeded { degree: usize, bound: usize },
    #[error("integrand is not a polynomial")]
    NonPolynomialIntegrand,
    #[error("invalid interval: lower limit exceeds upper limit")]
    InvalidInterval,
    #[error("integrand has a pole in the interval")]
    PoleInInterval,
    #[error("Riemann sums did not settle within the refinement budget")]
    NoConvergenceWithinBudget,
    #[error("candidate index {0} is outside the universe")]
    CandidateOutOfUniverse(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("scene has no chain")]
    MissingChain,
    #[error("chain is not inclusion-decreasing from the full universe (at level {0})")]
    ChainNotDecreasing(usize),
    #[error("scene file line {line}: {message}")]
    SceneFormat { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
