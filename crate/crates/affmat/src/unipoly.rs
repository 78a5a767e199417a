//! Univariate polynomials over an exact field: division, gcd, derivative,
//! Sturm chains. Coefficients ascending; the zero polynomial has no
//! coefficients.

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{FieldTag, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    tag: FieldTag,
    coeffs: Vec<Scalar>, // ascending, normalized: no trailing zeros
}

impl UniPoly {
    pub fn zero(tag: FieldTag) -> UniPoly {
        UniPoly { tag, coeffs: vec![] }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> UniPoly {
        let tag = coeffs.first().map(|c| c.field()).unwrap_or(FieldTag::Q);
        let mut p = UniPoly { tag, coeffs };
        p.normalize();
        p
    }

    pub fn from_int_coeffs(tag: FieldTag, coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| Scalar::from_int(c, &tag)).collect())
    }

    /// x - r
    pub fn linear_root(r: &Scalar) -> UniPoly {
        UniPoly::from_coeffs(vec![-r, Scalar::one(&r.field())])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldTag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(&self.tag))
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(&self.tag);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &rhs.coeff(k));
        }
        let mut p = UniPoly { tag: self.tag, coeffs: out };
        p.normalize();
        p
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            tag: self.tag,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.tag);
        }
        let mut out = vec![Scalar::zero(&self.tag); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        let mut p = UniPoly { tag: self.tag, coeffs: out };
        p.normalize();
        p
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        let mut p = UniPoly {
            tag: self.tag,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        };
        p.normalize();
        p
    }

    pub fn monic(&self) -> Result<UniPoly> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        Ok(self.scale(&lead.inv()?))
    }

    /// Euclidean division: (quotient, remainder).
    pub fn divmod(&self, rhs: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let d = rhs.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = rhs.leading().unwrap().inv()?;
        let mut rem = self.clone();
        let mut quot = vec![Scalar::zero(&self.tag); self.coeffs.len().saturating_sub(d)];
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let f = &rem.coeff(rd) * &lead_inv;
            quot[rd - d] = f.clone();
            for k in 0..=d {
                let v = &rem.coeff(rd - d + k) - &(&rhs.coeff(k) * &f);
                rem.coeffs[rd - d + k] = v;
            }
            rem.normalize();
        }
        let mut q = UniPoly { tag: self.tag, coeffs: quot };
        q.normalize();
        Ok((q, rem))
    }

    pub fn rem(&self, rhs: &UniPoly) -> Result<UniPoly> {
        Ok(self.divmod(rhs)?.1)
    }

    /// Exact division; error if the remainder is nonzero.
    pub fn div_exact(&self, rhs: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divmod(rhs)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(self.tag);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                let mut acc = Scalar::zero(&self.tag);
                let one = Scalar::one(&self.tag);
                for _ in 0..k {
                    acc = &acc + &one;
                }
                &acc * c
            })
            .collect();
        let mut p = UniPoly { tag: self.tag, coeffs };
        p.normalize();
        p
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &UniPoly) -> Result<UniPoly> {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    /// gcd(p, p') is constant.
    pub fn is_squarefree(&self) -> Result<bool> {
        let g = self.gcd(&self.derivative())?;
        Ok(g.degree() == Some(0))
    }

    /// p / gcd(p, p'), the squarefree part.
    pub fn radical(&self) -> Result<UniPoly> {
        let g = self.gcd(&self.derivative())?;
        if g.degree() == Some(0) {
            return Ok(self.clone());
        }
        self.div_exact(&g)?.monic()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let (sign, mag) = if let Some(m) = cs.strip_prefix('-') {
                ("-", m.to_string())
            } else {
                ("+", cs)
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sturm chain p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k).
pub fn sturm_chain(p: &UniPoly) -> Result<Vec<UniPoly>> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let k = chain.len();
        if chain[k - 1].is_zero() {
            chain.pop();
            break;
        }
        if chain[k - 1].degree() == Some(0) {
            break;
        }
        let r = chain[k - 2].rem(&chain[k - 1])?;
        chain.push(r.neg());
    }
    Ok(chain)
}

fn sign_at(p: &UniPoly, x: &BigRational) -> Result<i8> {
    p.eval(&Scalar::Rat(x.clone())).rat_sign()
}

fn sign_at_infinity(p: &UniPoly, positive: bool) -> Result<i8> {
    let Some(d) = p.degree() else { return Ok(0) };
    let lead = p.leading().unwrap().rat_sign()?;
    if positive || d % 2 == 0 {
        Ok(lead)
    } else {
        Ok(-lead)
    }
}

fn variations(signs: &[i8]) -> usize {
    let mut count = 0;
    let mut last: Option<i8> = None;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if let Some(l) = last {
            if l != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Number of distinct real roots of a squarefree rational polynomial,
/// on the whole line or in the half-open interval (lo, hi].
pub fn sturm_real_root_count(
    p: &UniPoly,
    interval: Option<(&BigRational, &BigRational)>,
) -> Result<usize> {
    if p.field() != FieldTag::Q {
        return Err(Error::FieldMismatch {
            expected: "Q".into(),
            found: p.field().to_string(),
        });
    }
    if p.is_zero() {
        return Err(Error::NotSquarefree);
    }
    if !p.is_squarefree()? {
        return Err(Error::NotSquarefree);
    }
    if p.degree() == Some(0) {
        return Ok(0);
    }
    let chain = sturm_chain(p)?;
    let (lo_signs, hi_signs): (Vec<i8>, Vec<i8>) = match interval {
        None => (
            chain
                .iter()
                .map(|q| sign_at_infinity(q, false))
                .collect::<Result<_>>()?,
            chain
                .iter()
                .map(|q| sign_at_infinity(q, true))
                .collect::<Result<_>>()?,
        ),
        Some((lo, hi)) => (
            chain.iter().map(|q| sign_at(q, lo)).collect::<Result<_>>()?,
            chain.iter().map(|q| sign_at(q, hi)).collect::<Result<_>>()?,
        ),
    };
    let vl = variations(&lo_signs);
    let vh = variations(&hi_signs);
    Ok(vl.saturating_sub(vh))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_int_coeffs(FieldTag::Q, coeffs)
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) = x^2 - 3x + 2
        let p = qp(&[2, -3, 1]);
        let d = qp(&[-1, 1]);
        let (q, r) = p.divmod(&d).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, qp(&[-2, 1]));
        let g = p.gcd(&qp(&[-2, 1])).unwrap();
        assert_eq!(g, qp(&[-2, 1]));
    }

    #[test]
    fn squarefree_detection() {
        assert!(qp(&[2, -3, 1]).is_squarefree().unwrap());
        // (x-1)^2
        assert!(!qp(&[1, -2, 1]).is_squarefree().unwrap());
        assert_eq!(qp(&[1, -2, 1]).radical().unwrap(), qp(&[-1, 1]));
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(sturm_real_root_count(&qp(&[1, 0, 1]), None).unwrap(), 0); // x^2+1
        assert_eq!(sturm_real_root_count(&qp(&[-2, 0, 1]), None).unwrap(), 2); // x^2-2
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        assert_eq!(sturm_real_root_count(&qp(&[-6, 11, -6, 1]), None).unwrap(), 3);
        let lo = BigRational::from_integer(0.into());
        let hi = BigRational::from_integer(2.into());
        assert_eq!(
            sturm_real_root_count(&qp(&[-6, 11, -6, 1]), Some((&lo, &hi))).unwrap(),
            2
        );
    }

    #[test]
    fn sturm_rejects_non_squarefree() {
        assert!(matches!(
            sturm_real_root_count(&qp(&[1, -2, 1]), None),
            Err(Error::NotSquarefree)
        ));
    }

    #[test]
    fn display_poly() {
        assert_eq!(qp(&[1, -1, 1]).to_string(), "x^2 - x + 1");
        assert_eq!(qp(&[0, 0, 1]).to_string(), "x^2");
    }
}
