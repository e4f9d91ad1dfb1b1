use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters n={n}, q={q}: both must be at least 2")]
    InvalidParams { n: usize, q: usize },

    #[error("q^n = {states} states exceeds the state cap of {cap}")]
    StateCapExceeded { states: u128, cap: usize },

    #[error("symbol {symbol} is out of range for an alphabet of size {q}")]
    InvalidSymbol { symbol: usize, q: usize },

    #[error("expected length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("index {index} is out of range for {size} states")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("parameter mismatch: ({0}) vs ({1})")]
    ParamsMismatch(String, String),

    #[error("table does not commute with the shift (fails at configuration {at})")]
    NotACellularAutomaton { at: usize },

    #[error("transformation is not invertible")]
    NotInvertible,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("target orbit size {target} does not divide source orbit size {from}")]
    NonDividingSizes { from: usize, target: usize },

    #[error("source and target are the same orbit")]
    SameOrbit,

    #[error("closure exceeded the cap of {cap} elements ({partial} found so far)")]
    CapExceeded { cap: usize, partial: usize },

    #[error("target is not in the closure of the generators")]
    NotInClosure,

    #[error("no generating subset of size at most {max}")]
    NotFound { max: usize },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// True for failures caused by a size limit rather than bad input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::StateCapExceeded { .. } | Error::CapExceeded { .. } | Error::Overflow(_)
        )
    }
}
