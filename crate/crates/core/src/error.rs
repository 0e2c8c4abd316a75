use alloc::string::String;

/// Errors raised by the engine, its learners and adversaries.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("breakpoint coordinates must be strictly increasing (violated at index {index})")]
    UnsortedBreakpoints { index: usize },
    #[error("breakpoint {index} is not finite")]
    NonFiniteBreakpoint { index: usize },
    #[error("coordinate {x} is already a breakpoint")]
    DuplicateCoordinate { x: f64 },
    #[error("exponent {0} is out of range")]
    InvalidExponent(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("round {t}: input at distance {delta} violates the admissible radius {radius}")]
    InadmissibleInput { t: usize, delta: f64, radius: f64 },
    #[error("round {t}: input repeats an earlier input")]
    DuplicateInput { t: usize },
    #[error("no hypothesis is consistent with the revealed history")]
    InconsistentHistory,
    #[error("adversary `{adversary}` cannot run under scenario `{scenario}`")]
    IncompatibleScenario { adversary: String, scenario: String },
    #[error("operation not supported for this class: {0}")]
    UnsupportedClass(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
