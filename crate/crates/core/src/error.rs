use thiserror::Error;

/// Failure while parsing symbol text.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    /// Byte offset into the source text.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("`{0}` is reserved and cannot be bound")]
    ReservedName(String),
    #[error("binding `{0}` is not a finite real")]
    NonFiniteBinding(String),
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("non-integer exponent")]
    NonIntegerExponent,
    #[error("Blaschke zero {0} lies outside the open unit disk")]
    ZeroOutsideDisk(String),
    #[error("Blaschke zero at the origin; use the exponent m instead")]
    ZeroAtOrigin,
    #[error("Blaschke zeros must be constants")]
    NonConstantZero,
    #[error("constant subexpression is not finite")]
    NonFiniteConstant,
    #[error("trailing input")]
    TrailingInput,
}

/// Failure while evaluating a function on the closed disk.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite value")]
    NonFinite,
    #[error("point outside the closed unit disk")]
    OutsideDisk,
    #[error("parameter t outside (0, 1)")]
    ParamOutsideDomain,
}

/// Errors of the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("point {0} is not inside the open unit disk")]
    NotInDisk(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
