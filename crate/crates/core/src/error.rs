use crate::automata::VarId;
use crate::rational::Rational;

/// Errors raised by automaton constructions and analyses.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PgaError {
    #[error("invalid {what} parameter {value}: {reason}")]
    InvalidParameter {
        what: &'static str,
        value: Rational,
        reason: &'static str,
    },
    /// A construction was called with inputs violating its precondition.
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("variable `{0}` already occurs in the automaton")]
    VariableOccurs(VarId),
    /// The scalar cycles of the automaton carry mass of at least one, so the
    /// Neumann series `Σ Mⁱ` does not converge.
    #[error("divergent automaton: I - M is not a nonsingular M-matrix")]
    DivergentAutomaton,
    /// Normalization was requested but observations rejected all mass.
    #[error("posterior has zero mass: every execution was rejected by an observation")]
    ZeroMass,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub type Result<T, E = PgaError> = std::result::Result<T, E>;
