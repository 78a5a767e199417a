//! Sparse multivariate polynomials over an exact field.
//!
//! Terms are kept in a `BTreeMap` from exponent vector to nonzero
//! coefficient, so the representation is canonical and structural
//! equality decides polynomial equality. `is_identically_zero` is formal
//! zero: over GF(p) a polynomial such as t^2 - t is nonzero here even
//! though it vanishes at every point of the field.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::{FieldTag, Scalar};

/// Ring description of a polynomial ring: coefficient field + variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyTag {
    pub field: FieldTag,
    pub nvars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: FieldTag,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: FieldTag, nvars: usize) -> MultiPoly {
        MultiPoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, nvars: usize) -> MultiPoly {
        let field = c.field();
        let mut p = MultiPoly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The variable t_i (0-based).
    pub fn var(i: usize, field: FieldTag, nvars: usize) -> MultiPoly {
        assert!(i < nvars, "variable index out of range");
        let mut exp = vec![0u32; nvars];
        exp[i] = 1;
        let mut p = MultiPoly::zero(field, nvars);
        p.terms.insert(exp, Scalar::one(&field));
        p
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_identically_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    fn check_compatible(&self, rhs: &MultiPoly) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch {
                expected: self.field.to_string(),
                found: rhs.field.to_string(),
            });
        }
        if self.nvars != rhs.nvars {
            return Err(Error::ParameterCountMismatch {
                expected: self.nvars,
                found: rhs.nvars,
            });
        }
        Ok(())
    }

    fn insert_term(&mut self, exp: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &MultiPoly) -> Result<MultiPoly> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn mul(&self, rhs: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(rhs)?;
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(exp, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.field, self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    /// Conjugate every coefficient; variables are treated as real.
    pub fn conj_coeffs(&self) -> MultiPoly {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.conj();
        }
        out
    }

    /// Evaluate at a full point of the coefficient field.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::ParameterCountMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        for v in point {
            if v.field() != self.field {
                return Err(Error::FieldMismatch {
                    expected: self.field.to_string(),
                    found: v.field().to_string(),
                });
            }
        }
        let mut acc = Scalar::zero(&self.field);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e.iter()) {
                for _ in 0..k {
                    term = &term * x;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Substitute a constant for one variable; the variable count is kept.
    pub fn substitute(&self, var: usize, value: &Scalar) -> Result<MultiPoly> {
        if var >= self.nvars {
            return Err(Error::ParameterCountMismatch {
                expected: self.nvars,
                found: var,
            });
        }
        if value.field() != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field.to_string(),
                found: value.field().to_string(),
            });
        }
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            for _ in 0..e[var] {
                coeff = &coeff * value;
            }
            let mut exp = e.clone();
            exp[var] = 0;
            out.insert_term(exp, coeff);
        }
        Ok(out)
    }
}

/// Deterministic small-integer point where a formally nonzero polynomial
/// over an infinite field does not vanish.
///
/// Works one variable at a time: viewing p as a polynomial in t_k of
/// degree d, at most d of the candidate values 0, 1, -1, 2, -2, ... can
/// kill it, so scanning d+1 candidates always finds a substitution that
/// keeps the remaining polynomial nonzero. Candidate order is fixed, so
/// the returned point is reproducible.
pub fn find_nonvanishing_point(p: &MultiPoly) -> Result<Vec<Scalar>> {
    if p.field().is_finite() {
        return Err(Error::InvalidInput(
            "nonvanishing-point search is only valid over infinite fields".into(),
        ));
    }
    if p.is_identically_zero() {
        return Err(Error::InvalidInput(
            "the zero polynomial vanishes everywhere".into(),
        ));
    }
    let field = p.field();
    let mut current = p.clone();
    let mut point = Vec::with_capacity(p.nvars());
    for var in 0..p.nvars() {
        let d = current.degree_in(var);
        let mut chosen = None;
        for idx in 0..=d as i64 {
            let cand = if idx == 0 {
                0
            } else if idx % 2 == 1 {
                idx / 2 + 1
            } else {
                -(idx / 2)
            };
            let value = Scalar::from_int(cand, &field);
            let sub = current.substitute(var, &value)?;
            if !sub.is_identically_zero() {
                chosen = Some((value, sub));
                break;
            }
        }
        let (value, sub) = chosen.expect("a nonzero polynomial survives one of d+1 candidates");
        point.push(value);
        current = sub;
    }
    Ok(point)
}

impl Ring for MultiPoly {
    type Tag = PolyTag;

    fn tag(&self) -> PolyTag {
        PolyTag {
            field: self.field,
            nvars: self.nvars,
        }
    }
    fn zero_of(tag: &PolyTag) -> Self {
        MultiPoly::zero(tag.field, tag.nvars)
    }
    fn one_of(tag: &PolyTag) -> Self {
        MultiPoly::constant(Scalar::one(&tag.field), tag.nvars)
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self.add(rhs).expect("polynomial ring mismatch")
    }
    fn ring_sub(&self, rhs: &Self) -> Self {
        self.sub(rhs).expect("polynomial ring mismatch")
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self.mul(rhs).expect("polynomial ring mismatch")
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn conj(&self) -> Self {
        self.conj_coeffs()
    }
    fn is_zero(&self) -> bool {
        self.is_identically_zero()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_const = e.iter().all(|&k| k == 0);
            if is_const || !c.is_one() {
                // the ring tag carries the modulus; keep GF coefficients bare
                let cs = match c {
                    Scalar::Fp(v, _) => v.to_string(),
                    other => other.to_string(),
                };
                if cs.contains(['+', '-']) && !is_const {
                    write!(f, "({cs})")?;
                } else {
                    write!(f, "{cs}")?;
                }
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut firstv = true;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !firstv {
                    write!(f, "*")?;
                }
                firstv = false;
                if k == 1 {
                    write!(f, "t{}", i + 1)?;
                } else {
                    write!(f, "t{}^{}", i + 1, k)?;
                }
            }
        }
        Ok(())
    }
}
