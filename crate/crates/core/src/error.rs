use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact: nonzero remainder of degree {remainder_degree}")]
    InexactDivision { remainder_degree: usize },
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("invalid trinomial x^{n} + x^{s} + 1: need 0 < s < n")]
    InvalidTrinomial { n: u64, s: u64 },
    #[error("cannot parse polynomial {input:?}: {reason}")]
    PolyParse { input: String, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("polynomial is divisible by x")]
    DivisibleByX,
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("degree {degree} exceeds the small-factor limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("no factorization of 2^{0}-1 is available; supply a factor table")]
    MissingFactorization(u64),
    #[error("2^{r}-1 is beyond the built-in factoring cutoff {cutoff}; supply a factor table")]
    FactoringCutoff { r: u64, cutoff: u64 },
    #[error("factor table line {line}: {reason}")]
    FactorTableParse { line: usize, reason: String },
    #[error("factor table entry for r = {r}: product of primes is not 2^{r}-1")]
    FactorProductMismatch { r: u64 },
    #[error("x^{n} + x^{s} + 1 is not almost irreducible with exponent {r} (rejected at {stage})")]
    CertificationFailed { r: u64, n: u64, s: u64, stage: String },
    #[error("ring elements belong to different contexts")]
    ContextMismatch,
    #[error("LFSR seed must have length {expected} and must not be all zero")]
    BadSeed { expected: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
