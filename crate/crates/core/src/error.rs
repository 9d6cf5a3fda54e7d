use thiserror::Error;

/// Errors raised by the engine.
///
/// `TheoremViolation` is reserved for outcomes that would contradict a proven
/// statement (a singular conductor matrix, a mass formula disagreeing with
/// exhaustive enumeration); callers treat it differently from ordinary input
/// errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("unknown preset group `{0}`")]
    UnknownPreset(String),
    #[error("generator closure exceeds the order bound {0}")]
    OrderBoundExceeded(usize),
    #[error("element {0} is out of range for a group of order {1}")]
    ElementOutOfRange(usize, usize),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("{0} is not coprime to {1}")]
    NotCoprime(i64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("profile modulus {profile} does not match group exponent {exponent}")]
    ModulusMismatch { profile: u64, exponent: u64 },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("the identity element has no ramification type")]
    IdentityElement,
    #[error("subgroup must be proper")]
    NotProper,
    #[error("invalid ramification datum: {0}")]
    InvalidDatum(String),
    #[error("expected a tame datum (trivial wild inertia)")]
    WildDatum,
    #[error("value is not rational: {0}")]
    NotRational(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} divides the group order; the tame formula does not apply")]
    WildPrime(u64),
    #[error("prime {0} does not divide the group order")]
    NotWildPrime(u64),
    #[error("Frobenius {frobenius} mod {modulus} lies outside the profile subgroup; {prime} is not the norm of a degree-one prime of the base field")]
    FrobeniusOutsideProfile { prime: u64, frobenius: u64, modulus: u64 },
    #[error("group is not abelian")]
    NotAbelian,
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("pinned value {value} for coordinate {coord} is not representable")]
    NotRepresentable { coord: usize, value: u64 },
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

impl Error {
    pub fn is_theorem_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
