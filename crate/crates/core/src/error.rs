use thiserror::Error;

use crate::residue::Modulus;

/// Errors raised across the crate.
///
/// Variants flagged as contract violations indicate a bug (for instance a
/// pulled-back cocycle that fails to be a cocycle) rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("modulus {p}^{s} does not fit the 62-bit residue backing")]
    ModulusTooLarge { p: u64, s: u32 },
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: Modulus },
    #[error("cannot reduce from exponent {from} to {to}")]
    ReductionOutOfRange { from: u32, to: u32 },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(Modulus, Modulus),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("not a subcomplex: simplex {0:?} is missing from the total complex")]
    NotASubcomplex(Vec<u32>),
    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
