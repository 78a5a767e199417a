//! Dense square matrices over any [`Ring`]: exact arithmetic, trace, S2,
//! conjugate transpose, nilpotency and normality tests.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charpoly::{berkowitz, CharPoly};
use crate::error::{Error, Result};
use crate::linalg::RectMat;
use crate::ring::{FieldElem, Ring};
use crate::scalar::{FieldTag, Scalar};

/// n x n matrix with entries in a common ring, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<R: Ring> {
    n: usize,
    tag: R::Tag,
    entries: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zero(n: usize, tag: R::Tag) -> Self {
        assert!(n > 0, "matrices are at least 1x1");
        Matrix {
            n,
            tag: tag.clone(),
            entries: vec![R::zero_of(&tag); n * n],
        }
    }

    pub fn identity(n: usize, tag: R::Tag) -> Self {
        let mut m = Matrix::zero(n, tag.clone());
        for i in 0..n {
            m.entries[i * n + i] = R::one_of(&tag);
        }
        m
    }

    /// E_{ij}: the unit matrix with a single 1 in row i, column j (0-based).
    pub fn unit(n: usize, tag: R::Tag, i: usize, j: usize) -> Self {
        assert!(i < n && j < n);
        let mut m = Matrix::zero(n, tag.clone());
        m.entries[i * n + j] = R::one_of(&tag);
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let tag = rows[0]
            .first()
            .ok_or_else(|| Error::InvalidInput("empty row".into()))?
            .tag();
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for e in row {
                if e.tag() != tag {
                    return Err(Error::InvalidInput(
                        "matrix entries come from different rings".into(),
                    ));
                }
                entries.push(e.clone());
            }
        }
        Ok(Matrix { n, tag, entries })
    }

    pub fn from_fn(n: usize, tag: R::Tag, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Matrix { n, tag, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring_tag(&self) -> &R::Tag {
        &self.tag
    }

    pub fn at(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        assert!(v.tag() == self.tag, "entry from a different ring");
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn check_same(&self, rhs: &Self) -> Result<()> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: rhs.n,
            });
        }
        if self.tag != rhs.tag {
            return Err(Error::InvalidInput(format!(
                "ring mismatch: {:?} vs {:?}",
                self.tag, rhs.tag
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(Matrix {
            n: self.n,
            tag: self.tag.clone(),
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.ring_add(b))
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(Matrix {
            n: self.n,
            tag: self.tag.clone(),
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.ring_sub(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Matrix {
            n: self.n,
            tag: self.tag.clone(),
            entries: self.entries.iter().map(|a| a.ring_neg()).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        assert!(c.tag() == self.tag, "scalar from a different ring");
        Matrix {
            n: self.n,
            tag: self.tag.clone(),
            entries: self.entries.iter().map(|a| a.ring_mul(c)).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let n = self.n;
        let mut out: Matrix<R> = Matrix::zero(n, self.tag.clone());
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).ring_add(&a.ring_mul(b));
                    out.entries[i * n + j] = v;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Matrix::identity(self.n, self.tag.clone());
        for _ in 0..k {
            acc = acc.matmul(self).expect("same ring");
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, self.tag.clone(), |i, j| self.at(j, i).clone())
    }

    /// A* = transpose of the entrywise conjugate. Over Q and GF(p) the
    /// conjugation is trivial, so this is the plain transpose.
    pub fn conj_transpose(&self) -> Self {
        Matrix::from_fn(self.n, self.tag.clone(), |i, j| self.at(j, i).conj())
    }

    pub fn trace(&self) -> R {
        let mut acc = R::zero_of(&self.tag);
        for i in 0..self.n {
            acc = acc.ring_add(self.at(i, i));
        }
        acc
    }

    /// Sum of the 2x2 principal minors; the x^{n-2} coefficient of the
    /// characteristic polynomial det(xI - A).
    pub fn s2(&self) -> R {
        let mut acc = R::zero_of(&self.tag);
        for i in 0..self.n {
            for j in i + 1..self.n {
                let m = self
                    .at(i, i)
                    .ring_mul(self.at(j, j))
                    .ring_sub(&self.at(i, j).ring_mul(self.at(j, i)));
                acc = acc.ring_add(&m);
            }
        }
        acc
    }

    pub fn char_poly(&self) -> CharPoly<R> {
        berkowitz(self)
    }
}

impl<K: FieldElem> Matrix<K> {
    pub fn field(&self) -> FieldTag {
        self.tag
    }

    pub(crate) fn to_rect(&self) -> RectMat<K> {
        RectMat {
            rows: self.n,
            cols: self.n,
            tag: self.tag,
            data: self.entries.clone(),
        }
    }

    /// Row-major flattening into a length-n^2 vector.
    pub fn flatten(&self) -> Vec<K> {
        self.entries.clone()
    }

    pub fn rank(&self) -> usize {
        self.to_rect().rank()
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Self {
        let mut r = self.to_rect();
        r.rref_in_place();
        Matrix {
            n: self.n,
            tag: self.tag,
            entries: r.data,
        }
    }

    pub fn det(&self) -> K {
        self.to_rect().det().expect("square over a field")
    }

    /// Nilpotency over a field: the characteristic polynomial is x^n.
    /// The equivalent power test m^n = 0 is computed as well; the two
    /// must agree or the kernel itself is broken.
    pub fn is_nilpotent(&self) -> bool {
        let chi = self.char_poly();
        let by_chi = chi.is_power_of_x();
        let by_power = self.pow(self.n).is_zero();
        assert_eq!(by_chi, by_power, "characteristic polynomial route disagrees with power route");
        by_chi
    }

    /// Normality m m* = m* m; defined over Q and Q(i) only.
    pub fn is_normal(&self) -> Result<bool> {
        if self.tag.is_finite() {
            return Err(Error::NormalityUndefined);
        }
        let star = self.conj_transpose();
        Ok(self.matmul(&star)? == star.matmul(self)?)
    }

    /// Exact inverse; `DivisionByZero` for singular input.
    pub fn inverse(&self) -> Result<Self> {
        let rect = self.to_rect();
        let n = self.n;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut b = vec![K::zero_of(&self.tag); n];
            b[j] = K::one_of(&self.tag);
            cols.push(rect.solve(&b).ok_or(Error::DivisionByZero)?);
        }
        Ok(Matrix::from_fn(n, self.tag, |i, j| cols[j][i].clone()))
    }
}

impl Matrix<Scalar> {
    /// Entrywise embedding of a rational matrix into Q(i).
    pub fn promote_to_gauss(&self) -> Result<Self> {
        let entries: Result<Vec<Scalar>> =
            self.entries.iter().map(|e| e.promote_to_gauss()).collect();
        Ok(Matrix {
            n: self.n,
            tag: FieldTag::Qi,
            entries: entries?,
        })
    }
}

impl<R: Ring> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Rational (or GF(p), or Gaussian-integer) matrix from integer rows.
pub fn matrix_from_int_rows(tag: FieldTag, rows: &[Vec<i64>]) -> Result<Matrix<Scalar>> {
    let data = rows
        .iter()
        .map(|r| r.iter().map(|&v| Scalar::from_int(v, &tag)).collect())
        .collect();
    Matrix::from_rows(data)
}

/// JSON form: {"field": "Q", "n": 2, "entries": [["0","1"],["0","0"]]}
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldTag,
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&Matrix<Scalar>> for MatrixJson {
    fn from(m: &Matrix<Scalar>) -> Self {
        MatrixJson {
            field: m.field(),
            n: m.n(),
            entries: (0..m.n())
                .map(|i| (0..m.n()).map(|j| m.at(i, j).to_string()).collect())
                .collect(),
        }
    }
}

impl TryFrom<MatrixJson> for Matrix<Scalar> {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Matrix<Scalar>> {
        if j.entries.len() != j.n {
            return Err(Error::DimensionMismatch {
                expected: j.n,
                found: j.entries.len(),
            });
        }
        let mut rows = Vec::with_capacity(j.n);
        for row in &j.entries {
            if row.len() != j.n {
                return Err(Error::DimensionMismatch {
                    expected: j.n,
                    found: row.len(),
                });
            }
            rows.push(
                row.iter()
                    .map(|s| Scalar::parse_in(s, &j.field))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Matrix::from_rows(rows)
    }
}

impl Serialize for Matrix<Scalar> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Matrix<Scalar> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(de)?;
        Matrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mq(rows: &[Vec<i64>]) -> Matrix<Scalar> {
        matrix_from_int_rows(FieldTag::Q, rows).unwrap()
    }

    #[test]
    fn trace_of_unit_product() {
        let e12 = Matrix::<Scalar>::unit(2, FieldTag::Q, 0, 1);
        let e21 = Matrix::<Scalar>::unit(2, FieldTag::Q, 1, 0);
        let p = e12.matmul(&e21).unwrap();
        assert_eq!(p.trace(), Scalar::from_int(1, &FieldTag::Q));
    }

    #[test]
    fn conj_transpose_over_qi() {
        let i = Scalar::i_unit();
        let z = Scalar::zero(&FieldTag::Qi);
        let m = Matrix::from_rows(vec![vec![i.clone(), z.clone()], vec![z.clone(), z.clone()]]).unwrap();
        let star = m.conj_transpose();
        assert_eq!(star.at(0, 0), &-&i);
        assert_eq!(star.at(0, 1), &z);
    }

    #[test]
    fn s2_examples() {
        assert_eq!(
            Matrix::<Scalar>::identity(3, FieldTag::Q).s2(),
            Scalar::from_int(3, &FieldTag::Q)
        );
        let m = mq(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(m.s2(), Scalar::from_int(-2, &FieldTag::Q));
        // strictly upper triangular: every principal 2x2 minor has a zero row
        let m = mq(&[vec![0, 5, 7], vec![0, 0, 3], vec![0, 0, 0]]);
        assert!(m.s2().is_zero());
    }

    #[test]
    fn nilpotency_examples() {
        let m = mq(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert!(m.is_nilpotent());
        assert!(!Matrix::<Scalar>::identity(2, FieldTag::Q).is_nilpotent());
        // E12 + E21 over GF(2) squares to the identity
        let m = matrix_from_int_rows(FieldTag::Gf(2), &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!m.is_nilpotent());
        assert!(m.pow(2) == Matrix::identity(2, FieldTag::Gf(2)));
    }

    #[test]
    fn normality_examples() {
        let m = mq(&[vec![0, 1], vec![-1, 0]]);
        assert!(m.is_normal().unwrap());
        let e12 = Matrix::<Scalar>::unit(2, FieldTag::Q, 0, 1);
        assert!(!e12.is_normal().unwrap());
        let d = matrix_from_int_rows(FieldTag::Qi, &[vec![3, 0], vec![0, 5]]).unwrap();
        assert!(d.is_normal().unwrap());
        let g = matrix_from_int_rows(FieldTag::Gf(3), &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(g.is_normal(), Err(Error::NormalityUndefined)));
    }

    #[test]
    fn rank_examples() {
        let m = mq(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::<Scalar>::zero(4, FieldTag::Q).rank(), 0);
        let m = matrix_from_int_rows(FieldTag::Gf(2), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rref_reduces_to_canonical_form() {
        let m = mq(&[vec![2, 4], vec![1, 3]]);
        assert_eq!(m.rref(), Matrix::identity(2, FieldTag::Q));
        let m = mq(&[vec![1, 2], vec![2, 4]]);
        let r = m.rref();
        assert_eq!(r.at(0, 0), &Scalar::from_int(1, &FieldTag::Q));
        assert_eq!(r.at(0, 1), &Scalar::from_int(2, &FieldTag::Q));
        assert!(r.at(1, 0).is_zero() && r.at(1, 1).is_zero());
    }

    #[test]
    fn inverse_round_trips() {
        let m = mq(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv).unwrap(), Matrix::identity(2, FieldTag::Q));
        let singular = mq(&[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn trace_cyclicity_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = mq(&(0..4)
                .map(|_| (0..4).map(|_| rng.gen_range(-5..=5)).collect())
                .collect::<Vec<_>>());
            let b = mq(&(0..4)
                .map(|_| (0..4).map(|_| rng.gen_range(-5..=5)).collect())
                .collect::<Vec<_>>());
            let ab = a.matmul(&b).unwrap().trace();
            let ba = b.matmul(&a).unwrap().trace();
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn json_round_trip() {
        let m = matrix_from_int_rows(FieldTag::Gf(5), &[vec![2, 0], vec![4, 1]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: Matrix<Scalar> = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
        let m = Matrix::from_rows(vec![
            vec![Scalar::i_unit(), Scalar::zero(&FieldTag::Qi)],
            vec![Scalar::from_int(2, &FieldTag::Qi), Scalar::i_unit()],
        ])
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: Matrix<Scalar> = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = mq(&[vec![1, 0], vec![0, 1]]);
        let b = mq(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(a.add(&b).is_err());
        assert!(a.matmul(&b).is_err());
    }
}
