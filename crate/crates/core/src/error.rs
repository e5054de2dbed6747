use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A bivariate expansion was asked for an x-coefficient it does not carry.
    #[error("x-degree {requested} exceeds the expansion order {available}")]
    OutOfRange { requested: usize, available: usize },

    #[error("truncation order {trunc_order} leaves no buffer above max degree {max_degree}")]
    InsufficientBuffer { trunc_order: usize, max_degree: usize },

    #[error("not a polynomial of degree <= {max_degree}: nonzero coefficient at t^{degree}")]
    NotPolynomial { degree: usize, max_degree: usize },

    #[error("invalid parameters: {0}")]
    Domain(String),

    #[error("tau = {tau} lies in the critical set C_{d} ({rule})")]
    NonGeneric { tau: String, d: i64, rule: &'static str },

    #[error("negative t-exponent {0} in coefficient extraction")]
    NegativeExponent(i64),

    #[error("identity violated: {0}")]
    Identity(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
