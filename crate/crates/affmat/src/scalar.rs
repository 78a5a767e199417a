//! Exact field elements: rationals, Gaussian rationals and prime fields.
//!
//! A [`Scalar`] carries its own field tag so that heterogeneous data read
//! from files can be validated at runtime. Arithmetic between scalars of
//! different fields is a programming error (all public entry points
//! validate fields up front) and panics with a clear message.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ring::{FieldElem, Ring};

/// Which field a scalar (or a whole matrix / subspace) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    /// Rational numbers.
    Q,
    /// Gaussian rationals a + bi.
    Qi,
    /// Prime field of the given (prime) order.
    Gf(u64),
}

impl FieldTag {
    /// Validated constructor for prime fields.
    pub fn gf(p: u64) -> Result<FieldTag> {
        if is_prime(p) {
            Ok(FieldTag::Gf(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldTag::Q | FieldTag::Qi => 0,
            FieldTag::Gf(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldTag::Gf(_))
    }

    /// Accepts `Q`, `Qi`, `GF(p)` and the CLI spelling `GF:p`.
    pub fn parse(s: &str) -> Result<FieldTag> {
        let s = s.trim();
        match s {
            "Q" => return Ok(FieldTag::Q),
            "Qi" => return Ok(FieldTag::Qi),
            _ => {}
        }
        let inner = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("GF:"));
        if let Some(p) = inner {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad field `{s}`")))?;
            return FieldTag::gf(p);
        }
        Err(Error::InvalidInput(format!("bad field `{s}`")))
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::Qi => write!(f, "Qi"),
            FieldTag::Gf(p) => write!(f, "GF({p})"),
        }
    }
}

impl Serialize for FieldTag {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldTag {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        FieldTag::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Deterministic Miller–Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An exact field element. Rationals are kept in lowest terms with a
/// positive denominator (num-rational maintains that), prime-field values
/// in `[0, p)` with `p` prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Gauss(BigRational, BigRational),
    Fp(u64, u64),
}

impl Scalar {
    pub fn rat<T: Into<BigInt>>(num: T, den: T) -> Result<Scalar> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Rat(BigRational::new(num.into(), den)))
    }

    pub fn gauss(re: BigRational, im: BigRational) -> Scalar {
        Scalar::Gauss(re, im)
    }

    /// Element of GF(p); checks that `p` is prime.
    pub fn fp(value: i64, p: u64) -> Result<Scalar> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let v = value.rem_euclid(p as i64) as u64;
        Ok(Scalar::Fp(v, p))
    }

    pub fn from_int(v: i64, tag: &FieldTag) -> Scalar {
        match tag {
            FieldTag::Q => Scalar::Rat(BigRational::from_integer(v.into())),
            FieldTag::Qi => Scalar::Gauss(BigRational::from_integer(v.into()), BigRational::zero()),
            FieldTag::Gf(p) => Scalar::Fp(v.rem_euclid(*p as i64) as u64, *p),
        }
    }

    /// The imaginary unit of Q(i).
    pub fn i_unit() -> Scalar {
        Scalar::Gauss(BigRational::zero(), BigRational::one())
    }

    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Rat(_) => FieldTag::Q,
            Scalar::Gauss(..) => FieldTag::Qi,
            Scalar::Fp(_, p) => FieldTag::Gf(*p),
        }
    }

    pub fn zero(tag: &FieldTag) -> Scalar {
        Scalar::from_int(0, tag)
    }

    pub fn one(tag: &FieldTag) -> Scalar {
        Scalar::from_int(1, tag)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Gauss(re, im) => re.is_zero() && im.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Gauss(re, im) => re.is_one() && im.is_zero(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    /// Complex conjugation on Q(i); the identity on Q and GF(p).
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Gauss(re, im) => Scalar::Gauss(re.clone(), -im.clone()),
            other => other.clone(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Gauss(re, im) => {
                let norm = re * re + im * im;
                Scalar::Gauss(re / &norm, -(im / &norm))
            }
            Scalar::Fp(v, p) => Scalar::Fp(pow_mod(*v, p - 2, *p), *p),
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.inv()?)
    }

    /// Embed Q into Q(i). Identity on Q(i); error on finite fields.
    pub fn promote_to_gauss(&self) -> Result<Scalar> {
        match self {
            Scalar::Rat(r) => Ok(Scalar::Gauss(r.clone(), BigRational::zero())),
            Scalar::Gauss(..) => Ok(self.clone()),
            Scalar::Fp(..) => Err(Error::FieldMismatch {
                expected: "Q or Qi".into(),
                found: self.field().to_string(),
            }),
        }
    }

    /// a^2 + b^2 as a rational; |r| for rationals. Used as a nonnegative
    /// "size" that is zero exactly on zero.
    pub fn norm_rat(&self) -> Result<BigRational> {
        match self {
            Scalar::Rat(r) => Ok(r.abs()),
            Scalar::Gauss(re, im) => Ok(re * re + im * im),
            Scalar::Fp(..) => Err(Error::FieldMismatch {
                expected: "Q or Qi".into(),
                found: self.field().to_string(),
            }),
        }
    }

    /// Sign of a rational scalar: -1, 0, or 1.
    pub fn rat_sign(&self) -> Result<i8> {
        match self {
            Scalar::Rat(r) => Ok(if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }),
            _ => Err(Error::FieldMismatch {
                expected: "Q".into(),
                found: self.field().to_string(),
            }),
        }
    }

    pub fn as_rat(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Parse in the context of a declared field; plain integers are
    /// accepted for any field and coerced.
    pub fn parse_in(s: &str, tag: &FieldTag) -> Result<Scalar> {
        let v: Scalar = s.parse()?;
        match (v, tag) {
            (v @ Scalar::Rat(_), FieldTag::Q) => Ok(v),
            (Scalar::Rat(r), FieldTag::Qi) => Ok(Scalar::Gauss(r, BigRational::zero())),
            (v @ Scalar::Gauss(..), FieldTag::Qi) => Ok(v),
            (Scalar::Rat(r), FieldTag::Gf(p)) => {
                if !r.is_integer() {
                    return Err(Error::InvalidScalar(s.to_string()));
                }
                let v = r.to_integer().mod_floor_u64(*p);
                Ok(Scalar::Fp(v, *p))
            }
            (v @ Scalar::Fp(_, q), FieldTag::Gf(p)) if q == *p => Ok(v),
            (v, _) => Err(Error::FieldMismatch {
                expected: tag.to_string(),
                found: v.field().to_string(),
            }),
        }
    }

    fn same_field(&self, rhs: &Scalar) -> bool {
        self.field() == rhs.field()
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $rat:expr, |$re1:ident, $im1:ident, $re2:ident, $im2:ident| $gauss:expr, |$x:ident, $y:ident, $p:ident| $fp:expr) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                assert!(
                    self.same_field(rhs),
                    "scalar arithmetic across fields: {} vs {}",
                    self.field(),
                    rhs.field()
                );
                match (self, rhs) {
                    (Scalar::Rat($a), Scalar::Rat($b)) => Scalar::Rat($rat),
                    (Scalar::Gauss($re1, $im1), Scalar::Gauss($re2, $im2)) => $gauss,
                    (Scalar::Fp($x, $p), Scalar::Fp($y, _)) => $fp,
                    _ => unreachable!(),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(
    Add, add,
    |a, b| a + b,
    |re1, im1, re2, im2| Scalar::Gauss(re1 + re2, im1 + im2),
    |x, y, p| Scalar::Fp(((*x as u128 + *y as u128) % *p as u128) as u64, *p)
);

scalar_binop!(
    Sub, sub,
    |a, b| a - b,
    |re1, im1, re2, im2| Scalar::Gauss(re1 - re2, im1 - im2),
    |x, y, p| Scalar::Fp(((*x as u128 + *p as u128 - *y as u128) % *p as u128) as u64, *p)
);

scalar_binop!(
    Mul, mul,
    |a, b| a * b,
    |re1, im1, re2, im2| Scalar::Gauss(re1 * re2 - im1 * im2, re1 * im2 + im1 * re2),
    |x, y, p| Scalar::Fp(mul_mod(*x, *y, *p), *p)
);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r.clone()),
            Scalar::Gauss(re, im) => Scalar::Gauss(-re.clone(), -im.clone()),
            Scalar::Fp(v, p) => Scalar::Fp((p - v) % p, *p),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Ring for Scalar {
    type Tag = FieldTag;

    fn tag(&self) -> FieldTag {
        self.field()
    }
    fn zero_of(tag: &FieldTag) -> Scalar {
        Scalar::zero(tag)
    }
    fn one_of(tag: &FieldTag) -> Scalar {
        Scalar::one(tag)
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn ring_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Scalar::conj(self)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl FieldElem for Scalar {
    fn inv(&self) -> Result<Self> {
        Scalar::inv(self)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Gauss(re, im) => {
                if im.is_zero() {
                    write!(f, "{}", fmt_rat(re))
                } else if re.is_zero() {
                    write!(f, "{}i", fmt_rat(im))
                } else if im.is_negative() {
                    write!(f, "{}-{}i", fmt_rat(re), fmt_rat(&-im.clone()))
                } else {
                    write!(f, "{}+{}i", fmt_rat(re), fmt_rat(im))
                }
            }
            Scalar::Fp(v, p) => write!(f, "{v} mod {p}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses the formats produced by `Display`: `3/4`, `3/4+1/2i`,
    /// `-2i`, `2 mod 5`. The field is inferred from the shape.
    fn from_str(s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::InvalidScalar(s.to_string());
        if let Some((v, p)) = s.split_once(" mod ") {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let v: i64 = v.trim().parse().map_err(|_| bad())?;
            return Scalar::fp(v, p);
        }
        if let Some(body) = s.strip_suffix('i') {
            // split an `a+bi` / `a-bi` body at the sign of the imaginary part
            let split = body
                .char_indices()
                .skip(1)
                .find(|(_, c)| *c == '+' || *c == '-')
                .map(|(i, _)| i);
            let (re, im) = match split {
                Some(i) => (&body[..i], &body[i..]),
                None => ("0", if body.is_empty() { "1" } else { body }),
            };
            let re: BigRational = parse_rat(re).ok_or_else(bad)?;
            let im_str = im.strip_prefix('+').unwrap_or(im);
            let im: BigRational = parse_rat(if im_str.is_empty() { "1" } else { im_str }).ok_or_else(bad)?;
            return Ok(Scalar::Gauss(re, im));
        }
        parse_rat(s).map(Scalar::Rat).ok_or_else(bad)
    }
}

fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact square root of a nonnegative rational, if it is rational.
pub fn rat_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Exact square root in Q(i), if one exists there.
pub fn gauss_sqrt(w: &Scalar) -> Option<Scalar> {
    let (a, b) = match w {
        Scalar::Rat(r) => (r.clone(), BigRational::zero()),
        Scalar::Gauss(re, im) => (re.clone(), im.clone()),
        Scalar::Fp(..) => return None,
    };
    let two = BigRational::from_integer(2.into());
    if b.is_zero() {
        if !a.is_negative() {
            return rat_sqrt(&a).map(|u| Scalar::Gauss(u, BigRational::zero()));
        }
        return rat_sqrt(&-a).map(|v| Scalar::Gauss(BigRational::zero(), v));
    }
    // (u+vi)^2 = a+bi  =>  u^2 = (a + |w|)/2, v = b/(2u)
    let norm = &a * &a + &b * &b;
    let s = rat_sqrt(&norm)?;
    let u2 = (&a + &s) / &two;
    let u = rat_sqrt(&u2)?;
    if u.is_zero() {
        return None;
    }
    let v = &b / &(&two * &u);
    let cand = Scalar::Gauss(u, v);
    if &cand * &cand == Scalar::Gauss(a, b) {
        Some(cand)
    } else {
        None
    }
}
