use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GkError {
    #[error("operands live in different coefficient rings")]
    MixedRing,
    #[error("operand dimensions differ")]
    DimMismatch,
    #[error("expected a degree-1 element: {0}")]
    DegreeError(String),
    #[error("spinor is not pure: annihilator has rank {rank}, expected {expected}")]
    NotPure { rank: usize, expected: usize },
    #[error("pure spinor is degenerate: annihilator meets its conjugate")]
    NotNondegenerate,
    #[error("linear system has no solution: {0}")]
    Unsolvable(String),
    #[error("structures do not commute")]
    NonCommuting,
    #[error("cannot evaluate exactly at this point: {0}")]
    EvaluationError(String),
    #[error("operator is not tensorial: {0}")]
    NotTensorial(String),
    #[error("evaluation paths disagree: {0}")]
    PathMismatch(String),
    #[error("spinor is not integrable: {0}")]
    NotIntegrable(String),
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("lift failed at order {order}: {reason}")]
    LiftFailure { order: usize, reason: String },
    #[error("form is not d-exact in K at mode {mode}")]
    NotExact { mode: String },
    #[error("obstruction term at order {order} is not in K²")]
    NotInK2 { order: usize },
    #[error("no real b in ker¹ solves the order-{order} system at mode {mode}")]
    KerSolveFailure { order: usize, mode: String },
    #[error("mode support {support} exceeds the budget: {reason}")]
    ModeCapExceeded { support: u32, reason: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, GkError>;
