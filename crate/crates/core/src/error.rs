use thiserror::Error;

/// Errors produced while constructing fields, codes and decoders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} is outside the supported range 1..=16")]
    DegreeOutOfRange(u32),
    #[error(
        "polynomial {poly} is not primitive: the powers of z cycle after {cycle} steps instead of {order}"
    )]
    NotPrimitive {
        poly: String,
        cycle: usize,
        order: usize,
    },
    #[error("polynomial {poly} has degree {degree}, expected {expected}")]
    WrongDegree {
        poly: String,
        degree: i64,
        expected: u32,
    },
    #[error("code length must be odd, got {0}")]
    EvenLength(usize),
    #[error("code length must be positive")]
    ZeroLength,
    #[error("field GF(2^{m}) does not contain the {n}th roots of unity")]
    FieldMismatch { n: usize, m: u32 },
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("{0} does not divide 1+z^{1}")]
    NotAFactor(String, usize),
    #[error("transform coefficient {index} is not binary; the input is not an idempotent")]
    NotIdempotent { index: usize },
    #[error("{0} is not a cyclotomic coset representative")]
    UnknownCoset(usize),
    #[error("at least one coset must be selected")]
    EmptyCosetSet,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("cannot substitute {psi} equations from a pool of {pool}")]
    PoolTooSmall { psi: usize, pool: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
