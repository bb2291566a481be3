use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not a rational number in p/q form: {0:?}")]
    Rational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("unknown preset {0:?} (expected kk, sk, cdg, lax or ito)")]
    Preset(String),
    #[error("unknown branch {0:?}")]
    Branch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("symbol {0} has no binding")]
    Unbound(&'static str),
    #[error("specialization makes a denominator vanish")]
    DegenerateSpecialization,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("ansatz order m = {0} is outside the supported range 1..=2")]
    UnsupportedOrder(u32),
    #[error("discriminant (2 alpha + beta)^2 - 40 gamma omega = {0} is negative; A is not real")]
    NegativeDiscriminant(f64),
    #[error("branch {branch} is incompatible with k = {k}")]
    BranchMismatch { branch: &'static str, k: f64 },
    #[error("the k = 0 rational branch is a limiting case; request it explicitly")]
    RationalLimitNotRequested,
    #[error("family id {0} is outside 1..=6")]
    UnknownFamily(u8),
    #[error("printed solution index {0} is outside 1..=12")]
    UnknownPrinted(u8),
    #[error("equation at power {0} is not of the expected shape: {1}")]
    Shape(i32, String),
    #[error("{0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
