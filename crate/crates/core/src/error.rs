use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the field, factoring, residue and scan machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{m} is not squarefree")]
    NotSquarefree { m: i64 },
    #[error("m = {m} gives an imaginary quadratic field, which is not supported")]
    ComplexField { m: i64 },
    #[error("m = {m} does not define a quadratic field")]
    DegenerateField { m: i64 },
    #[error("operands belong to different fields (m = {left} and m = {right})")]
    FieldMismatch { left: i64, right: i64 },
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{pi} does not divide {beta}")]
    NotDivisible { beta: String, pi: String },
    #[error("the zero element has no factorization")]
    ZeroElement,
    #[error("triple member {0} is zero")]
    ZeroMember(usize),
    #[error("triple does not sum to zero")]
    TripleSumNonzero,
    #[error("the base {base} is divisible by {p}")]
    BaseDivisible { p: BigInt, base: String },
    #[error("field Q(sqrt({m})) has class number {class_number}, expected 1")]
    ClassNumberNotOne { m: i64, class_number: u64 },
    #[error("invalid scan base {base}: {reason}")]
    InvalidBase { base: String, reason: String },
    #[error("ideal reduction exceeded {steps} steps while looking for a generator of norm {norm}")]
    SearchOverflow { norm: BigInt, steps: usize },
    #[error("no principal generator exists for the prime ideal above {0}")]
    NonPrincipal(BigInt),
    #[error("could not factor {n} within {iterations} Pollard rho iterations")]
    NormFactorizationTimeout { n: BigInt, iterations: u64 },
    #[error("prime {pi} divides u_{n} but tests Wieferich to the base")]
    LemmaViolation { n: u64, pi: String },
    #[error("inequality check `{check}` failed at n = {n}")]
    InequalityViolation { n: u64, check: String },
    #[error("cannot parse element `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("factorization cache: {0}")]
    Cache(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Stable identifier used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquarefree { .. } => "NotSquarefree",
            Error::ComplexField { .. } => "ComplexField",
            Error::DegenerateField { .. } => "DegenerateField",
            Error::FieldMismatch { .. } => "FieldMismatch",
            Error::NotPrime(_) => "NotPrime",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::ZeroElement => "ZeroElement",
            Error::ZeroMember(_) => "ZeroMember",
            Error::TripleSumNonzero => "TripleSumNonzero",
            Error::BaseDivisible { .. } => "BaseDivisible",
            Error::ClassNumberNotOne { .. } => "ClassNumberNotOne",
            Error::InvalidBase { .. } => "InvalidBase",
            Error::SearchOverflow { .. } => "SearchOverflow",
            Error::NonPrincipal(_) => "NonPrincipal",
            Error::NormFactorizationTimeout { .. } => "NormFactorizationTimeout",
            Error::LemmaViolation { .. } => "LemmaViolation",
            Error::InequalityViolation { .. } => "InequalityViolation",
            Error::Parse { .. } => "ParseError",
            Error::Cache(_) => "CacheError",
            Error::Invalid(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
