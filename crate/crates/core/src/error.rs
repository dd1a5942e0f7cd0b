use num_bigint::BigInt;
use thiserror::Error;

use crate::expr::ParseError;
use crate::higher_deriv::DefinednessFailure;
use crate::poly::Monomial;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),

    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error(
        "coefficient {coefficient} of monomial {monomial} has {p}-adic valuation {valuation}, \
         below the required {required}"
    )]
    InsufficientValuation {
        monomial: Monomial,
        coefficient: BigInt,
        p: u64,
        valuation: u64,
        required: u64,
    },

    #[error("expected a tuple of {expected} polynomials, got {got}")]
    TupleLength { expected: usize, got: usize },

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("series is not exact; its tail beyond t^{trunc} is unknown")]
    InexactEvaluation { trunc: usize },

    #[error("substituted series must have zero constant term")]
    NonzeroConstantTerm,

    #[error("dimension cap exceeded: {needed} > {cap}")]
    DimensionCap { needed: usize, cap: usize },

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid higher derivation document: {0}")]
    SpecDocument(String),

    #[error(
        "l!^-1 [d]^l is not defined at generator {} for l = {}: coefficient {} of {} is not divisible by {}^{}",
        .0.generator + 1, .0.ell, .0.coefficient, .0.monomial, .0.p, .0.required
    )]
    Undefined(Box<DefinednessFailure>),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
