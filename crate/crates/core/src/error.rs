use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("restriction order {m} out of range for an array of order {n}")]
    BadRestriction { m: usize, n: usize },

    #[error("order {n} exceeds the limit {max} for {what}")]
    OrderTooLarge { n: usize, max: usize, what: &'static str },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid array: {0}")]
    InvalidArray(String),

    #[error("cannot condition on a non-identity map: {0}")]
    ImpossibleConditioning(String),

    #[error("boundary parameters (p0, p1) = ({p0}, {p1}): the stationary law is degenerate or not unique")]
    DegenerateParameters { p0: f64, p1: f64 },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub(crate) fn check_same_order(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
