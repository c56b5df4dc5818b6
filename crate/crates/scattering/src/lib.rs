//! Exact computation of rank-2 cluster scattering diagrams.
//!
//! The crate computes the wall exponents and wall functions of the rank-2
//! cluster scattering diagram attached to an exchange matrix with
//! off-diagonal entries `c` and `-b`, entirely in exact rational arithmetic.
//! Wall-crossing automorphisms are represented by their action on the two
//! exchange-type variables `y1`, `y2` as truncated formal power series, the
//! diagram is recovered by degree-by-degree factorization of the product of
//! the two initial automorphisms, and the resulting exponent tables are
//! lifted to symbolic polynomials in `(c, b)` and `(g, b, c)`.
//!
//! Modules:
//! - [`series`]: truncated bivariate power series over exact rationals.
//! - [`group`]: group elements as pairs of multiplier series; elementary
//!   dilogarithm walls.
//! - [`diagram`]: the factorization engine, scattering diagrams, and
//!   path-ordered products.
//! - [`poly`]: sparse polynomials in the named indeterminates `c`, `b`, `g`.
//! - [`reconstruct`]: lifting numeric wall exponents to symbolic polynomials.
//! - [`tau`]: expanded wall-function coefficients, numeric and symbolic.
//! - [`verify`]: machine verification of the structural claims over
//!   configurable ranges.
//! - [`cache`]: on-disk cache of computed tables.
//! - [`cli`]: the `csd` command-line surface and its output documents.
//! - [`ratio`], [`par`]: rational-scalar helpers and the data-parallel map.

pub mod cache;
pub mod cli;
pub mod diagram;
pub mod group;
pub mod par;
pub mod poly;
pub mod ratio;
pub mod reconstruct;
pub mod series;
pub mod tau;
pub mod verify;

use group::Direction;

/// Crate-wide error type for fallible operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("truncation degree must be at least {min}, got {got}")]
    TruncationTooSmall { min: u32, got: u32 },
    #[error("b and c must be positive integers")]
    NonPositiveParams,
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("direction ({0}, {1}) lies on a coordinate axis; this operation needs n1, n2 >= 1")]
    AxisDirection(u32, u32),
    #[error("out-of-sample validation failed for alpha table of ({n}, at c={c}, b={b}): expected {expected}, reconstructed {got}")]
    ReconstructionMismatch {
        n: Direction,
        c: u32,
        b: u32,
        expected: String,
        got: String,
    },
    #[error("path endpoint ({0}, {1}) lies on a wall support ray")]
    EndpointOnRay(i64, i64),
    #[error("path endpoint must be a nonzero vector")]
    ZeroEndpoint,
    #[error("degree {0} exceeds the stored truncation degree {1}")]
    DegreeOutOfRange(u32, u32),
    #[error("cache: {0}")]
    Cache(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
