//! Ring and field abstractions the matrix kernel is generic over.
//!
//! A ring element cannot manufacture a zero out of thin air (a GF(p)
//! zero needs to know p, a polynomial zero needs the variable count), so
//! zeros and ones are constructed from a [`Ring::Tag`] that containers
//! such as matrices carry alongside their entries.

use std::fmt::{Debug, Display};

use crate::error::Result;
use crate::scalar::FieldTag;

/// Commutative ring with involution, the entry type of a matrix.
pub trait Ring: Clone + PartialEq + Debug + Display {
    /// Runtime description of the ring (field tag, variable count, ...).
    type Tag: Clone + PartialEq + Debug;

    fn tag(&self) -> Self::Tag;
    fn zero_of(tag: &Self::Tag) -> Self;
    fn one_of(tag: &Self::Tag) -> Self;
    fn ring_add(&self, rhs: &Self) -> Self;
    fn ring_sub(&self, rhs: &Self) -> Self;
    fn ring_mul(&self, rhs: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    /// Coefficient-wise complex conjugation; identity where it is trivial.
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
}

/// Ring elements that form a field; enables Gaussian elimination.
pub trait FieldElem: Ring<Tag = FieldTag> {
    fn inv(&self) -> Result<Self>;
}
