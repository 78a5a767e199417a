//! Exact certification of affine matrix spaces.
//!
//! The library decides, with exact arithmetic over Q, Q(i) and GF(p),
//! whether every element of an affine subspace S = P + span{Z_1..Z_h}
//! of n x n matrices is nilpotent or normal, samples real-
//! diagonalizability, checks the resulting dimensions against the known
//! maximal bounds (n(n-1)/2 for nilpotent spaces, with the refined
//! n(n-1)/2 - 1 for affine-not-linear spaces in characteristic zero; n
//! for normal spaces; n(n+1)/2 and n(n+1)/2 - 1 for real-diagonalizable
//! spaces), and constructs the extremal witness spaces together with the
//! characteristic-2 counterexample that separates the refined bound from
//! the general one.
//!
//! The symbolic kernel is a division-free Berkowitz characteristic
//! polynomial evaluated over multivariate polynomial rings; independent
//! brute-force oracles validate every certifier on small instances.

pub mod charpoly;
pub mod diag;
pub mod eigen;
pub mod error;
mod linalg;
pub mod matrix;
pub mod nilpotency;
pub mod normality;
pub mod numeric;
pub mod oracle;
pub mod pit;
pub mod poly;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod subspace;
pub mod unipoly;

pub use charpoly::{berkowitz, faddeev_leverrier, CharPoly};
pub use error::{Error, Result};
pub use matrix::{matrix_from_int_rows, Matrix};
pub use poly::MultiPoly;
pub use report::{BoundCheck, CertReport, Counterexample, Method};
pub use ring::{FieldElem, Ring};
pub use scalar::{FieldTag, Scalar};
pub use subspace::AffineSubspace;
pub use unipoly::UniPoly;

/// Matrix over an exact field element.
pub type ScalarMatrix = Matrix<Scalar>;
/// Matrix over a multivariate polynomial ring, as produced by
/// [`AffineSubspace::generic_element`].
pub type PolyMatrix = Matrix<MultiPoly>;
