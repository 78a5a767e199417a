//! Certification of all-nilpotent affine subspaces, the two trace/S2
//! lemmas as checked identities, and the extremal witness spaces.
//!
//! Over an infinite field the certificate is symbolic: the
//! characteristic polynomial of the generic element is computed by
//! Berkowitz over the polynomial ring, and the space is all-nilpotent
//! exactly when every coefficient below the leading one is formally
//! zero. Over GF(p) certification is enumeration only; formal-zero
//! testing would import characteristic-zero conclusions that fail there
//! (that is precisely what the char-2 counterexample demonstrates).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::find_nonvanishing_point;
use crate::report::{BoundCheck, CertReport, Counterexample, Method};
use crate::scalar::{FieldTag, Scalar};
use crate::subspace::AffineSubspace;

pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NilpotencyVerdict {
    AllNilpotent,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NilpotencyCert {
    pub verdict: NilpotencyVerdict,
    pub method: Method,
    pub counterexample: Option<Counterexample>,
    pub bound_check: BoundCheck,
}

/// Both sides of S2(R) - S2(R+U) = tr(RU) for nilpotent U.
#[derive(Debug, Clone, PartialEq)]
pub struct S2IdentityCheck {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub equal: bool,
}

/// Evaluates both sides of the identity exactly. U must be nilpotent;
/// the identity is field-agnostic.
pub fn check_s2_identity(r: &Matrix<Scalar>, u: &Matrix<Scalar>) -> Result<S2IdentityCheck> {
    if !u.is_nilpotent() {
        return Err(Error::NotNilpotent { which: "U".into() });
    }
    let lhs = &r.s2() - &r.add(u)?.s2();
    let rhs = r.matmul(u)?.trace();
    let equal = lhs == rhs;
    Ok(S2IdentityCheck { lhs, rhs, equal })
}

/// tr(AB) under the hypotheses P, P+A, P+B, P+A+B all nilpotent. The
/// returned value is 0 for every valid input; callers assert that.
pub fn trace_pairing(
    p: &Matrix<Scalar>,
    a: &Matrix<Scalar>,
    b: &Matrix<Scalar>,
) -> Result<Scalar> {
    let hyps: [(&str, Matrix<Scalar>); 4] = [
        ("P", p.clone()),
        ("P+A", p.add(a)?),
        ("P+B", p.add(b)?),
        ("P+A+B", p.add(a)?.add(b)?),
    ];
    for (name, m) in &hyps {
        if !m.is_nilpotent() {
            return Err(Error::NotNilpotent {
                which: (*name).into(),
            });
        }
    }
    Ok(a.matmul(b)?.trace())
}

fn bound_check_for(space: &AffineSubspace, all_nilpotent: bool) -> BoundCheck {
    let n = space.n();
    let bound = n * (n - 1) / 2;
    let refined = if space.field().characteristic() == 0 && !space.is_linear() {
        Some(bound.saturating_sub(1))
    } else {
        None
    };
    let effective = refined.unwrap_or(bound);
    BoundCheck {
        dim: space.dim(),
        bound,
        refined_bound: refined,
        satisfied: !all_nilpotent || space.dim() <= effective,
    }
}

pub fn certify_nilpotent(space: &AffineSubspace) -> Result<NilpotencyCert> {
    certify_nilpotent_capped(space, DEFAULT_ENUM_CAP)
}

pub fn certify_nilpotent_capped(space: &AffineSubspace, cap: u64) -> Result<NilpotencyCert> {
    if space.field().is_finite() {
        certify_by_enumeration(space, cap)
    } else {
        certify_symbolically(space)
    }
}

fn certify_symbolically(space: &AffineSubspace) -> Result<NilpotencyCert> {
    let n = space.n();
    let chi = space.generic_element().char_poly();
    let offending = (0..n).find(|&k| !chi.coeff(k).is_identically_zero());
    match offending {
        None => Ok(NilpotencyCert {
            verdict: NilpotencyVerdict::AllNilpotent,
            method: Method::Symbolic,
            counterexample: None,
            bound_check: bound_check_for(space, true),
        }),
        Some(k) => {
            let point = find_nonvanishing_point(chi.coeff(k))?;
            let matrix = space.element_at_point(&point)?;
            debug_assert!(space.membership(&matrix)?);
            debug_assert!(!matrix.is_nilpotent());
            Ok(NilpotencyCert {
                verdict: NilpotencyVerdict::Counterexample,
                method: Method::Symbolic,
                counterexample: Some(Counterexample { point, matrix }),
                bound_check: bound_check_for(space, false),
            })
        }
    }
}

fn certify_by_enumeration(space: &AffineSubspace, cap: u64) -> Result<NilpotencyCert> {
    for (point, m) in space.enumerate(cap)? {
        if !m.is_nilpotent() {
            return Ok(NilpotencyCert {
                verdict: NilpotencyVerdict::Counterexample,
                method: Method::Enumeration,
                counterexample: Some(Counterexample { point, matrix: m }),
                bound_check: bound_check_for(space, false),
            });
        }
    }
    Ok(NilpotencyCert {
        verdict: NilpotencyVerdict::AllNilpotent,
        method: Method::Enumeration,
        counterexample: None,
        bound_check: bound_check_for(space, true),
    })
}

/// The strictly upper triangular space: span{E_ij : i < j}, the linear
/// space meeting the n(n-1)/2 bound.
pub fn witness_max_nilpotent(n: usize, field: FieldTag) -> Result<AffineSubspace> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            gens.push(Matrix::unit(n, field, i, j));
        }
    }
    AffineSubspace::linear(n, field, gens)
}

/// E12 + span{E_ij : i < j, (i,j) != (1,2)}: affine, not linear, dimension
/// n(n-1)/2 - 1, every element strictly upper triangular. Meets the
/// refined characteristic-zero bound.
pub fn witness_affine_not_linear_nilpotent(n: usize, field: FieldTag) -> Result<AffineSubspace> {
    if n < 2 {
        return Err(Error::InvalidInput(
            "no affine-not-linear nilpotent space exists for n < 2".into(),
        ));
    }
    if field.characteristic() != 0 {
        return Err(Error::PositiveCharacteristic(field.characteristic()));
    }
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if (i, j) == (0, 1) {
                continue;
            }
            gens.push(Matrix::unit(n, field, i, j));
        }
    }
    AffineSubspace::new(Matrix::unit(n, field, 0, 1), gens)
}

/// K = Z/2, n = 2, S = E12 + <E12 + E21>: all-nilpotent, affine not
/// linear, of dimension n(n-1)/2 — the refined bound fails in
/// characteristic two.
pub fn char2_counterexample() -> AffineSubspace {
    let tag = FieldTag::Gf(2);
    let e12 = Matrix::unit(2, tag, 0, 1);
    let dir = e12.add(&Matrix::unit(2, tag, 1, 0)).unwrap();
    AffineSubspace::new(e12, vec![dir]).expect("fixed construction")
}

/// For a certified all-nilpotent affine space over a characteristic-zero
/// field, the linear span of base and directions is again all-nilpotent.
/// Returns that certification result; true for every valid input.
pub fn check_span_nilpotent_consequence(space: &AffineSubspace) -> Result<bool> {
    if space.field().characteristic() != 0 {
        return Err(Error::PreconditionFailed(
            "the span consequence is stated for characteristic zero".into(),
        ));
    }
    let cert = certify_nilpotent(space)?;
    if cert.verdict != NilpotencyVerdict::AllNilpotent {
        return Err(Error::PreconditionFailed(
            "space is not certified all-nilpotent".into(),
        ));
    }
    let span = space.span_with_base()?;
    let span_cert = certify_nilpotent(&span)?;
    Ok(span_cert.verdict == NilpotencyVerdict::AllNilpotent)
}

impl NilpotencyCert {
    pub fn to_report(&self, space: &AffineSubspace) -> CertReport {
        let mut notes = Vec::new();
        if space.field().characteristic() != 0 && !space.is_linear() {
            notes.push(format!(
                "char-0 refined bound not applicable (field characteristic {})",
                space.field().characteristic()
            ));
        }
        CertReport {
            property: "nilpotent".into(),
            verdict: match self.verdict {
                NilpotencyVerdict::AllNilpotent => "all-nilpotent".into(),
                NilpotencyVerdict::Counterexample => "counterexample".into(),
            },
            method: self.method,
            field: space.field().to_string(),
            n: space.n(),
            dim: space.dim(),
            is_linear: space.is_linear(),
            bound: self.bound_check.bound,
            refined_bound: self.bound_check.refined_bound,
            refined_bound_applicable: self.bound_check.refined_bound.is_some(),
            bound_satisfied: self.bound_check.satisfied,
            counterexample: self.counterexample.clone(),
            samples: None,
            seed: None,
            grid: None,
            notes,
        }
    }
}
