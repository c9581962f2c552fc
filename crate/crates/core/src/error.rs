use thiserror::Error;

/// Errors raised by the library.
///
/// `Parse` and `InvalidParams` are input errors, `Budget` is a refusal of the
/// brute-force oracles, and `Contract` flags misuse of an API precondition.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("budget refusal: instance has {edges} edges, budget is {budget}")]
    Budget { edges: usize, budget: usize },

    #[error("infeasible demand pair ({0}, {1}): target is unreachable")]
    InfeasibleDemand(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}
