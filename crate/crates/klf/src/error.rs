//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid extension degree {0}")]
    BadDegree(u32),

    #[error("field size p^d = {size} exceeds cap {cap}")]
    FieldSizeCap { size: u128, cap: u64 },

    #[error("work estimate {estimate} exceeds cap {cap}; raise --cap to opt in")]
    WorkCap { estimate: u128, cap: u64 },

    #[error("degree {sub} does not divide {sup}, no embedding")]
    NoEmbedding { sub: u32, sup: u32 },

    #[error("element of wrong field: expected F_{p}^{d}", p = .0, d = .1)]
    WrongField(u64, u32),

    #[error("mismatched cyclotomic orders {0} and {1}")]
    MismatchedP(u64, u64),

    #[error("zero has infinite valuation")]
    ZeroValuation,

    #[error("fiber parameter t must be a unit")]
    ZeroFiber,

    #[error("non-exact division by {divisor} in Newton identity (upstream sum error?)")]
    InexactNewton { divisor: u64 },

    #[error("series coefficient c_{index} is not a rational integer")]
    NonIntegerCoefficient { index: usize },

    #[error("exterior power degree {l} exceeds dimension {dim}")]
    ExtTooLarge { l: u32, dim: u32 },

    #[error("p = {p} divides n+1 = {m}: obstruction count undefined, use the degenerate variant")]
    PDividesOrder { p: u64, m: u64 },

    #[error("cannot parse linear algebra operation: {0}")]
    BadLinOp(String),

    #[error("no rational function of numerator degree <= {num} and denominator degree <= {den} matches the series; raise the truncation order")]
    NoReconstruction { num: usize, den: usize },

    #[error("reconstruction unstable: truncation orders {d1} and {d2} disagree")]
    UnstableReconstruction { d1: usize, d2: usize },

    #[error("trivial factor does not divide the L-function (remainder nonzero)")]
    TrivialFactorRemainder,

    #[error("negative coefficient m_k({0}) inside the truncation window")]
    NegativeMk(usize),

    #[error("Newton polygon requires constant term 1")]
    BadConstantTerm,

    #[error("Hodge data inexact: polygon comparison refused")]
    InexactHodge,

    #[error("constant vectors fail to span the cokernel in weight {weight}")]
    ConstantBasisDeficit { weight: u32 },

    #[error("inconsistent linear system in filtered reduction")]
    ReductionInconsistent,

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache format: {0}")]
    CacheFormat(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
