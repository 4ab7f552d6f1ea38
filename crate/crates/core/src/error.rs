use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error(
        "quotient is not integral: leading coefficient {divisor_lead} does not divide {dividend}"
    )]
    NonIntegralQuotient {
        divisor_lead: String,
        dividend: String,
    },
    #[error("division leaves a nonzero remainder {0}")]
    InexactDivision(String),
    #[error("cyclotomic modulus needs n >= 2, got {0}")]
    ModulusTooSmall(usize),
    #[error("{what} requires n >= {min}, got {n}")]
    OrderTooSmall {
        what: &'static str,
        min: usize,
        n: usize,
    },
    #[error("invalid composition {input:?}: {reason}")]
    InvalidComp { input: String, reason: String },
    #[error("malformed JSON document: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
