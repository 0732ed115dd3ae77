//! Simple binary matroids with an ambient GF(2) geometry.
//!
//! A matroid here is a pair (E, G): G is the projective geometry
//! PG(n-1,2), identified with the nonzero vectors of GF(2)^n, and E is a
//! subset of its points. The crate provides the linear-algebra kernel
//! (points, flats, flat enumeration), named constructions (doubling,
//! semidoubling, twist doubling and its inverse), recognition procedures
//! (induced embeddings, Bose-Burton and affine recognition, k-evenness,
//! claw and Fano freeness), the critical number, certificate-producing
//! structure decomposition, and a census plus verification-suite harness.

pub mod gf2;
pub mod matroid;
pub mod recognize;
pub mod critical;
pub mod structure;
pub mod census;
pub mod suites;

use thiserror::Error;

/// Errors surfaced by data-driven operations (parsing, dimension caps,
/// precondition violations on user-supplied inputs).
#[derive(Debug, Error)]
pub enum ClawfreeError {
    #[error("dimension {0} exceeds the supported maximum {max}", max = gf2::MAX_DIM)]
    DimTooLarge(u32),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(u32, u32),
    #[error("flat is not a hyperplane of the ambient geometry")]
    NotHyperplane,
    #[error("point {0} does not lie in a {1}-dimensional geometry")]
    PointOutOfRange(u32, u32),
    #[error("apex {0} lies in the ground set")]
    ApexInGround(u32),
    #[error("apex {0} lies in the hyperplane")]
    ApexInHyperplane(u32),
    #[error("point {0} lies in the flat")]
    PointInFlat(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input is not 3-even")]
    NotThreeEven,
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("census scale cap exceeded for dimension {0}")]
    CensusScale(u32),
}

pub type Result<T> = std::result::Result<T, ClawfreeError>;
