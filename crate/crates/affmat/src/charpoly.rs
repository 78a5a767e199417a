//! Characteristic polynomials, sign convention det(xI - A).
//!
//! Berkowitz is the workhorse: division-free, so it runs unchanged over
//! GF(p) and over polynomial rings, which is what the symbolic
//! certificates need. Faddeev-LeVerrier divides by 1..n and is kept as an
//! independent cross-check over characteristic-zero fields.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{FieldElem, Ring};
use crate::scalar::Scalar;
use crate::unipoly::UniPoly;

/// Monic characteristic polynomial chi(x) = sum c_k x^k, c_n = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly<R: Ring> {
    coeffs: Vec<R>, // ascending, length n+1
}

impl<R: Ring> CharPoly<R> {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient c_k of x^k.
    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// chi(x) = x^n, the nilpotency criterion.
    pub fn is_power_of_x(&self) -> bool {
        self.coeffs[..self.coeffs.len() - 1].iter().all(|c| c.is_zero())
    }

    /// -c_{n-1}.
    pub fn trace_from_coeffs(&self) -> R {
        self.coeffs[self.degree() - 1].ring_neg()
    }

    /// c_{n-2}, which must equal S2 of the matrix.
    pub fn s2_from_coeffs(&self) -> Option<&R> {
        let n = self.degree();
        if n >= 2 {
            Some(&self.coeffs[n - 2])
        } else {
            None
        }
    }

    /// (-1)^n c_0.
    pub fn det_from_coeffs(&self) -> R {
        if self.degree() % 2 == 0 {
            self.coeffs[0].clone()
        } else {
            self.coeffs[0].ring_neg()
        }
    }
}

impl CharPoly<Scalar> {
    pub fn to_unipoly(&self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.clone())
    }
}

impl<R: Ring> fmt::Display for CharPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Division-free characteristic polynomial over any commutative ring.
///
/// Iterates over leading principal minors: the coefficient vector of the
/// k x k minor is multiplied by a Toeplitz matrix whose first column is
/// built from the bordering row, column and corner entry.
pub fn berkowitz<R: Ring>(m: &Matrix<R>) -> CharPoly<R> {
    let n = m.n();
    let tag = m.ring_tag().clone();
    let one = R::one_of(&tag);
    let zero = R::zero_of(&tag);

    // v holds the char poly of the leading k x k minor, descending powers.
    let mut v: Vec<R> = vec![one.clone()];
    for k in 0..n {
        // first column of the (k+2) x (k+1) Toeplitz matrix
        let mut col = Vec::with_capacity(k + 2);
        col.push(one.clone());
        col.push(m.at(k, k).ring_neg());
        // w walks through M^j C for the leading minor M and border column C
        let mut w: Vec<R> = (0..k).map(|i| m.at(i, k).clone()).collect();
        for _ in 0..k {
            let mut dot = zero.clone();
            for (i, wi) in w.iter().enumerate() {
                dot = dot.ring_add(&m.at(k, i).ring_mul(wi));
            }
            col.push(dot.ring_neg());
            let next: Vec<R> = (0..k)
                .map(|i| {
                    let mut acc = zero.clone();
                    for (j, wj) in w.iter().enumerate() {
                        acc = acc.ring_add(&m.at(i, j).ring_mul(wj));
                    }
                    acc
                })
                .collect();
            w = next;
        }
        col.truncate(k + 2);

        let mut next = vec![zero.clone(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    *slot = slot.ring_add(&col[i - j].ring_mul(vj));
                }
            }
        }
        v = next;
    }

    // v is descending: v[i] multiplies x^{n-i}
    let coeffs: Vec<R> = v.into_iter().rev().collect();
    CharPoly { coeffs }
}

/// Faddeev-LeVerrier over a characteristic-zero field; divides by 1..n.
pub fn faddeev_leverrier<K: FieldElem>(m: &Matrix<K>) -> Result<CharPoly<K>> {
    let tag = *m.ring_tag();
    if tag.characteristic() != 0 {
        return Err(Error::PositiveCharacteristic(tag.characteristic()));
    }
    let n = m.n();
    let mut coeffs = vec![K::zero_of(&tag); n + 1];
    coeffs[n] = K::one_of(&tag);
    let mut mk = m.clone();
    for k in 1..=n {
        if k > 1 {
            let shifted = mk.add(&Matrix::identity(n, tag).scale(&coeffs[n - k + 1]))?;
            mk = m.matmul(&shifted)?;
        }
        let kinv = int_in_field::<K>(k as i64, &tag).inv()?;
        coeffs[n - k] = mk.trace().ring_neg().ring_mul(&kinv);
    }
    Ok(CharPoly { coeffs })
}

fn int_in_field<K: FieldElem>(v: i64, tag: &crate::scalar::FieldTag) -> K {
    let one = K::one_of(tag);
    let mut acc = K::zero_of(tag);
    let neg = v < 0;
    for _ in 0..v.unsigned_abs() {
        acc = acc.ring_add(&one);
    }
    if neg {
        acc.ring_neg()
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::matrix_from_int_rows;
    use crate::poly::{MultiPoly, PolyTag};
    use crate::scalar::FieldTag;

    fn q(v: i64) -> Scalar {
        Scalar::from_int(v, &FieldTag::Q)
    }

    #[test]
    fn jordan_block_char_poly_is_x_to_n() {
        for n in 1..=5 {
            let m = Matrix::<Scalar>::from_fn(n, FieldTag::Q, |i, j| {
                q(if j == i + 1 { 1 } else { 0 })
            });
            let chi = berkowitz(&m);
            assert!(chi.is_power_of_x(), "n = {n}");
        }
    }

    #[test]
    fn two_by_two_hand_expansion() {
        let m = matrix_from_int_rows(FieldTag::Q, &[vec![2, 1], vec![1, 2]]).unwrap();
        let chi = berkowitz(&m);
        assert_eq!(chi.coeffs(), &[q(3), q(-4), q(1)]);
    }

    #[test]
    fn generic_diagonal_over_poly_ring() {
        let tag = PolyTag { field: FieldTag::Q, nvars: 2 };
        let t1 = MultiPoly::var(0, FieldTag::Q, 2);
        let t2 = MultiPoly::var(1, FieldTag::Q, 2);
        let zero = MultiPoly::zero(FieldTag::Q, 2);
        let m = Matrix::from_rows(vec![vec![t1.clone(), zero.clone()], vec![zero, t2.clone()]]).unwrap();
        assert_eq!(*m.ring_tag(), tag);
        let chi = berkowitz(&m);
        // x^2 - (t1+t2) x + t1 t2
        assert_eq!(chi.coeff(2), &MultiPoly::one_of(&tag));
        assert_eq!(chi.coeff(1), &t1.add(&t2).unwrap().neg());
        assert_eq!(chi.coeff(0), &t1.mul(&t2).unwrap());
    }

    #[test]
    fn faddeev_on_identity_and_unit() {
        let chi = faddeev_leverrier(&Matrix::<Scalar>::identity(3, FieldTag::Q)).unwrap();
        // (x-1)^3 = x^3 - 3x^2 + 3x - 1
        assert_eq!(chi.coeffs(), &[q(-1), q(3), q(-3), q(1)]);
        let e12 = Matrix::<Scalar>::unit(2, FieldTag::Q, 0, 1);
        let chi = faddeev_leverrier(&e12).unwrap();
        assert!(chi.is_power_of_x());
    }

    #[test]
    fn faddeev_rejects_positive_characteristic() {
        let m = matrix_from_int_rows(FieldTag::Gf(5), &[vec![1, 2], vec![3, 4]]).unwrap();
        assert!(matches!(
            faddeev_leverrier(&m),
            Err(Error::PositiveCharacteristic(5))
        ));
    }

    #[test]
    fn berkowitz_matches_faddeev_on_random_rationals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let rows: Vec<Vec<i64>> = (0..5)
                .map(|_| (0..5).map(|_| rng.gen_range(-6..=6)).collect())
                .collect();
            let m = matrix_from_int_rows(FieldTag::Q, &rows).unwrap();
            assert_eq!(berkowitz(&m), faddeev_leverrier(&m).unwrap());
        }
    }

    #[test]
    fn coefficient_identities_over_gf3() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let rows: Vec<Vec<i64>> = (0..4)
                .map(|_| (0..4).map(|_| rng.gen_range(0..3)).collect())
                .collect();
            let m = matrix_from_int_rows(FieldTag::Gf(3), &rows).unwrap();
            let chi = berkowitz(&m);
            assert_eq!(chi.trace_from_coeffs(), m.trace());
            assert_eq!(chi.s2_from_coeffs().unwrap(), &m.s2());
            assert_eq!(chi.det_from_coeffs(), m.det());
        }
    }
}
