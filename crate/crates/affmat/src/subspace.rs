//! Affine subspaces S = P + span{Z_1..Z_h} of n x n matrices.
//!
//! Spaces are canonicalized on construction: dependent generators are
//! pruned first-come-first-kept, and when the space is linear (0 in S,
//! equivalently P in span Z) the base point is replaced by 0. The
//! dimension of an affine subspace is the dimension of its direction
//! space. Flattening is row-major throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::matrix::{Matrix, MatrixJson};
use crate::poly::MultiPoly;
use crate::scalar::{FieldTag, Scalar};

#[derive(Debug, Clone)]
pub struct AffineSubspace {
    n: usize,
    field: FieldTag,
    base: Matrix<Scalar>,
    basis: Vec<Matrix<Scalar>>,
    is_linear: bool,
    echelon: Echelon<Scalar>, // direction space, for membership tests
}

impl PartialEq for AffineSubspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.field == other.field
            && self.base == other.base
            && self.basis == other.basis
    }
}

impl AffineSubspace {
    /// Build the space P + span(gens), canonicalizing as documented.
    pub fn new(base: Matrix<Scalar>, gens: Vec<Matrix<Scalar>>) -> Result<AffineSubspace> {
        let n = base.n();
        let field = base.field();
        let mut echelon = Echelon::new(n * n, field);
        let mut basis = Vec::new();
        for g in gens {
            if g.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.n(),
                });
            }
            if g.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field.to_string(),
                    found: g.field().to_string(),
                });
            }
            if echelon.insert(g.flatten()) {
                basis.push(g);
            }
        }
        let is_linear = echelon.contains(base.flatten());
        let base = if is_linear {
            Matrix::zero(n, field)
        } else {
            base
        };
        Ok(AffineSubspace {
            n,
            field,
            base,
            basis,
            is_linear,
            echelon,
        })
    }

    /// Linear space spanned by the given generators.
    pub fn linear(n: usize, field: FieldTag, gens: Vec<Matrix<Scalar>>) -> Result<AffineSubspace> {
        AffineSubspace::new(Matrix::zero(n, field), gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    /// Dimension of the direction space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether 0 is an element, i.e. the space is linear rather than
    /// affine-not-linear.
    pub fn is_linear(&self) -> bool {
        self.is_linear
    }

    pub fn base(&self) -> &Matrix<Scalar> {
        &self.base
    }

    pub fn basis(&self) -> &[Matrix<Scalar>] {
        &self.basis
    }

    /// Exact membership: m - P in span(Z).
    pub fn membership(&self, m: &Matrix<Scalar>) -> Result<bool> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: m.n(),
            });
        }
        if m.field() != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field.to_string(),
                found: m.field().to_string(),
            });
        }
        let diff = m.sub(&self.base)?;
        Ok(self.echelon.contains(diff.flatten()))
    }

    /// The generic element P + t_1 Z_1 + ... + t_h Z_h as a matrix of
    /// affine polynomials in h parameters.
    pub fn generic_element(&self) -> Matrix<MultiPoly> {
        let h = self.basis.len();
        Matrix::from_fn(
            self.n,
            crate::poly::PolyTag {
                field: self.field,
                nvars: h,
            },
            |i, j| {
                let mut p = MultiPoly::constant(self.base.at(i, j).clone(), h);
                for (k, z) in self.basis.iter().enumerate() {
                    let c = z.at(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    let term = MultiPoly::var(k, self.field, h).scalar_mul(c);
                    p = p.add(&term).expect("same ring");
                }
                p
            },
        )
    }

    /// Evaluate the generic element at a parameter point.
    pub fn element_at_point(&self, point: &[Scalar]) -> Result<Matrix<Scalar>> {
        if point.len() != self.basis.len() {
            return Err(Error::ParameterCountMismatch {
                expected: self.basis.len(),
                found: point.len(),
            });
        }
        let mut acc = self.base.clone();
        for (t, z) in point.iter().zip(&self.basis) {
            if t.field() != self.field {
                return Err(Error::FieldMismatch {
                    expected: self.field.to_string(),
                    found: t.field().to_string(),
                });
            }
            acc = acc.add(&z.scale(t))?;
        }
        Ok(acc)
    }

    /// W = span{P, Z_1..Z_h}: the linear span of the whole space.
    /// dim W = dim Z when the space is linear, dim Z + 1 otherwise.
    pub fn span_with_base(&self) -> Result<AffineSubspace> {
        let mut gens = Vec::with_capacity(self.basis.len() + 1);
        if !self.is_linear {
            gens.push(self.base.clone());
        }
        gens.extend(self.basis.iter().cloned());
        AffineSubspace::linear(self.n, self.field, gens)
    }

    /// All p^h elements of a finite-field space, exactly once, in
    /// odometer order over the parameter tuples.
    pub fn enumerate(&self, cap: u64) -> Result<Enumerate<'_>> {
        let FieldTag::Gf(p) = self.field else {
            return Err(Error::NotEnumerable);
        };
        let h = self.basis.len() as u32;
        let total = (p as u128).checked_pow(h).ok_or(Error::EnumerationTooLarge {
            size: u128::MAX,
            cap,
        })?;
        if total > cap as u128 {
            return Err(Error::EnumerationTooLarge { size: total, cap });
        }
        Ok(Enumerate {
            space: self,
            p,
            index: 0,
            total: total as u64,
        })
    }

    /// Parameter tuple of `index` in the odometer order used by
    /// `enumerate`; exposed so enumeration can be chunked statelessly.
    pub fn point_at_index(&self, index: u64) -> Vec<Scalar> {
        let FieldTag::Gf(p) = self.field else {
            unreachable!("point_at_index is only used for finite fields")
        };
        let mut digits = Vec::with_capacity(self.basis.len());
        let mut rest = index;
        for _ in 0..self.basis.len() {
            digits.push(Scalar::from_int((rest % p) as i64, &self.field));
            rest /= p;
        }
        digits
    }
}

/// Stateless, index-driven iterator over a finite-field space.
pub struct Enumerate<'a> {
    space: &'a AffineSubspace,
    #[allow(dead_code)]
    p: u64,
    index: u64,
    total: u64,
}

impl Enumerate<'_> {
    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for Enumerate<'_> {
    type Item = (Vec<Scalar>, Matrix<Scalar>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.index >= self.total {
            return None;
        }
        let point = self.space.point_at_index(self.index);
        self.index += 1;
        let m = self
            .space
            .element_at_point(&point)
            .expect("point is in the space's field");
        Some((point, m))
    }
}

/// JSON form: {"field": ..., "n": ..., "base": Matrix, "generators": [Matrix...]}
#[derive(Serialize, Deserialize)]
pub struct SubspaceJson {
    pub field: FieldTag,
    pub n: usize,
    pub base: MatrixJson,
    pub generators: Vec<MatrixJson>,
}

impl From<&AffineSubspace> for SubspaceJson {
    fn from(s: &AffineSubspace) -> Self {
        SubspaceJson {
            field: s.field,
            n: s.n,
            base: (&s.base).into(),
            generators: s.basis.iter().map(|m| m.into()).collect(),
        }
    }
}

impl TryFrom<SubspaceJson> for AffineSubspace {
    type Error = Error;

    fn try_from(j: SubspaceJson) -> Result<AffineSubspace> {
        let base: Matrix<Scalar> = j.base.try_into()?;
        if base.n() != j.n {
            return Err(Error::DimensionMismatch {
                expected: j.n,
                found: base.n(),
            });
        }
        if base.field() != j.field {
            return Err(Error::FieldMismatch {
                expected: j.field.to_string(),
                found: base.field().to_string(),
            });
        }
        let gens: Result<Vec<Matrix<Scalar>>> =
            j.generators.into_iter().map(Matrix::try_from).collect();
        AffineSubspace::new(base, gens?)
    }
}

impl Serialize for AffineSubspace {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceJson::from(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for AffineSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = SubspaceJson::deserialize(de)?;
        AffineSubspace::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, tag: FieldTag, i: usize, j: usize) -> Matrix<Scalar> {
        Matrix::unit(n, tag, i, j)
    }

    /// The char-2 remark space E12 + <E12 + E21> over GF(2).
    pub(crate) fn char2_space() -> AffineSubspace {
        let tag = FieldTag::Gf(2);
        let e12 = e(2, tag, 0, 1);
        let dir = e12.add(&e(2, tag, 1, 0)).unwrap();
        AffineSubspace::new(e12, vec![dir]).unwrap()
    }

    #[test]
    fn duplicate_generators_are_pruned() {
        let s = AffineSubspace::linear(
            2,
            FieldTag::Q,
            vec![e(2, FieldTag::Q, 0, 1), e(2, FieldTag::Q, 0, 1)],
        )
        .unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.is_linear());
    }

    #[test]
    fn char2_space_is_affine_not_linear_of_dim_1() {
        let s = char2_space();
        assert_eq!(s.dim(), 1);
        assert!(!s.is_linear());
    }

    #[test]
    fn base_in_span_canonicalizes_to_zero() {
        let s = AffineSubspace::new(e(2, FieldTag::Q, 0, 0), vec![e(2, FieldTag::Q, 0, 0)]).unwrap();
        assert!(s.is_linear());
        assert!(s.base().is_zero());
    }

    #[test]
    fn membership_of_strictly_upper_space() {
        let tag = FieldTag::Q;
        let s = AffineSubspace::linear(3, tag, vec![e(3, tag, 0, 1), e(3, tag, 0, 2), e(3, tag, 1, 2)])
            .unwrap();
        assert!(s.membership(&e(3, tag, 0, 2)).unwrap());
        assert!(!s.membership(&e(3, tag, 1, 0)).unwrap());
    }

    #[test]
    fn membership_of_char2_space_contains_e21() {
        let s = char2_space();
        assert!(s.membership(&e(2, FieldTag::Gf(2), 1, 0)).unwrap());
        assert!(!s.membership(&Matrix::zero(2, FieldTag::Gf(2))).unwrap());
        assert_eq!(s.is_linear(), s.membership(&Matrix::zero(2, FieldTag::Gf(2))).unwrap());
    }

    #[test]
    fn generic_element_of_char2_space() {
        let s = char2_space();
        let g = s.generic_element();
        // [[0, 1+t1], [t1, 0]]
        assert!(g.at(0, 0).is_identically_zero());
        assert_eq!(g.at(0, 1).to_string(), "t1 + 1");
        assert_eq!(g.at(1, 0).to_string(), "t1");
        assert!(g.at(1, 1).is_identically_zero());
    }

    #[test]
    fn generic_element_evaluates_to_base_at_zero() {
        let tag = FieldTag::Q;
        let s = AffineSubspace::new(e(2, tag, 0, 0), vec![e(2, tag, 1, 1)]).unwrap();
        let at0 = s.element_at_point(&[Scalar::zero(&tag)]).unwrap();
        assert_eq!(&at0, s.base());
    }

    #[test]
    fn span_with_base_of_char2_space_has_dim_2() {
        let s = char2_space();
        let w = s.span_with_base().unwrap();
        assert_eq!(w.dim(), 2);
        assert!(w.is_linear());
        assert!(w.membership(&e(2, FieldTag::Gf(2), 1, 0)).unwrap());
    }

    #[test]
    fn span_with_base_of_linear_space_is_itself() {
        let tag = FieldTag::Q;
        let s = AffineSubspace::linear(2, tag, vec![e(2, tag, 0, 1)]).unwrap();
        let w = s.span_with_base().unwrap();
        assert_eq!(w.dim(), s.dim());
    }

    #[test]
    fn enumerate_char2_space() {
        let s = char2_space();
        let elems: Vec<_> = s.enumerate(100).unwrap().map(|(_, m)| m).collect();
        assert_eq!(elems.len(), 2);
        let tag = FieldTag::Gf(2);
        assert!(elems.contains(&e(2, tag, 0, 1)));
        assert!(elems.contains(&e(2, tag, 1, 0)));
    }

    #[test]
    fn enumerate_cardinality_and_cap() {
        let tag = FieldTag::Gf(3);
        let s = AffineSubspace::linear(2, tag, vec![e(2, tag, 0, 0)]).unwrap();
        assert_eq!(s.enumerate(100).unwrap().count(), 3);
        // dim 0: just the base
        let s0 = AffineSubspace::new(e(2, tag, 0, 1), vec![]).unwrap();
        let all: Vec<_> = s0.enumerate(100).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].1, e(2, tag, 0, 1));
        // cap respected
        let s2 = AffineSubspace::linear(
            2,
            tag,
            vec![e(2, tag, 0, 0), e(2, tag, 0, 1), e(2, tag, 1, 0)],
        )
        .unwrap();
        assert!(matches!(
            s2.enumerate(10),
            Err(Error::EnumerationTooLarge { size: 27, cap: 10 })
        ));
    }

    #[test]
    fn infinite_fields_are_not_enumerable() {
        let s = AffineSubspace::linear(2, FieldTag::Q, vec![e(2, FieldTag::Q, 0, 1)]).unwrap();
        assert!(matches!(s.enumerate(100), Err(Error::NotEnumerable)));
    }

    #[test]
    fn mixed_fields_rejected() {
        let base = e(2, FieldTag::Q, 0, 1);
        let gen = e(2, FieldTag::Gf(2), 0, 1);
        assert!(AffineSubspace::new(base, vec![gen]).is_err());
    }

    #[test]
    fn json_round_trip_preserves_space() {
        let s = char2_space();
        let text = serde_json::to_string(&s).unwrap();
        let back: AffineSubspace = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
    }
}
