use crate::name::Name;

/// Errors raised by automaton construction, the algebra and the analyses.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("state {0} has zero total out-weight; cannot normalize")]
    NotNormalizable(Name),
    #[error("k-step automaton needs k >= 1, got {0}")]
    InvalidK(usize),
    #[error("word lengths differ: left {left}, right {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("unknown label {0}")]
    UnknownLabel(Name),
    #[error("unknown state {0}")]
    UnknownState(Name),
    #[error("duplicate state {0}")]
    DuplicateState(Name),
    #[error("automaton has {states} states, above the isomorphism search bound {bound}")]
    TooLarge { states: usize, bound: usize },
    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),
    #[error("wire arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("vector has length {got}, automaton has {expected} states")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("automaton is not closed: both parallel alphabets must have one element")]
    NotClosed,
    #[error("automaton is not Markov")]
    NotMarkov,
    #[error("state renaming is not injective: {0} used twice")]
    RenameCollision(Name),
    #[error("unknown reference {0}")]
    UnknownReference(String),
    #[error("label {0} listed twice")]
    DuplicateLabel(Name),
    #[error("{0}")]
    Eval(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
