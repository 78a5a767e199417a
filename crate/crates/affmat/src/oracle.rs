//! Independent brute-force oracles. These test every enumerated element
//! with the single-matrix predicates and nothing else: no symbolic
//! certificates, no shared internals with the certifiers they validate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diag::is_diagonalizable_real;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::report::{CertReport, Counterexample, Method};
use crate::scalar::{FieldTag, Scalar};
use crate::subspace::AffineSubspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleProperty {
    Nilpotent,
    Normal,
    DiagonalizableReal,
}

/// Where the oracle draws its elements from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleDomain {
    /// Every element of a finite-field space.
    Enumerate,
    /// A finite integer lattice {-radius..radius}^h over Q.
    Lattice { radius: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleVerdict {
    pub property: OracleProperty,
    pub all_satisfy: bool,
    pub elements_tested: u64,
    pub first_counterexample: Option<Counterexample>,
}

fn predicate(property: OracleProperty, m: &Matrix<Scalar>) -> Result<bool> {
    match property {
        OracleProperty::Nilpotent => Ok(m.is_nilpotent()),
        OracleProperty::Normal => m.is_normal(),
        OracleProperty::DiagonalizableReal => Ok(is_diagonalizable_real(m)?.diagonalizable),
    }
}

/// Per-element verdict over a finite domain; exact and independent of
/// every certifier.
pub fn oracle_all_property(
    space: &AffineSubspace,
    property: OracleProperty,
    domain: OracleDomain,
    cap: u64,
) -> Result<OracleVerdict> {
    match (space.field(), domain) {
        (FieldTag::Gf(_), OracleDomain::Enumerate) => {
            if property != OracleProperty::Nilpotent {
                return Err(Error::InvalidInput(
                    "only nilpotency is defined over finite fields".into(),
                ));
            }
            let total = space.enumerate(cap)?.total();
            // enumeration is index-driven, so chunks run in parallel;
            // find_first keeps "first counterexample" deterministic
            let failing = (0..total).into_par_iter().find_first(|&i| {
                let point = space.point_at_index(i);
                let m = space.element_at_point(&point).expect("point in field");
                !predicate(property, &m).expect("nilpotency is total")
            });
            match failing {
                Some(i) => {
                    let point = space.point_at_index(i);
                    let matrix = space.element_at_point(&point)?;
                    Ok(OracleVerdict {
                        property,
                        all_satisfy: false,
                        elements_tested: i + 1,
                        first_counterexample: Some(Counterexample { point, matrix }),
                    })
                }
                None => Ok(OracleVerdict {
                    property,
                    all_satisfy: true,
                    elements_tested: total,
                    first_counterexample: None,
                }),
            }
        }
        (FieldTag::Q | FieldTag::Qi, OracleDomain::Lattice { radius }) => {
            let h = space.dim() as u32;
            let side = (2 * radius + 1) as u128;
            let total = side.checked_pow(h).ok_or(Error::EnumerationTooLarge {
                size: u128::MAX,
                cap,
            })?;
            if total > cap as u128 {
                return Err(Error::EnumerationTooLarge { size: total, cap });
            }
            let mut tested = 0u64;
            for index in 0..total as u64 {
                let mut rest = index;
                let point: Vec<Scalar> = (0..h)
                    .map(|_| {
                        let digit = (rest % side as u64) as i64 - radius;
                        rest /= side as u64;
                        Scalar::from_int(digit, &space.field())
                    })
                    .collect();
                let m = space.element_at_point(&point)?;
                tested += 1;
                if !predicate(property, &m)? {
                    return Ok(OracleVerdict {
                        property,
                        all_satisfy: false,
                        elements_tested: tested,
                        first_counterexample: Some(Counterexample { point, matrix: m }),
                    });
                }
            }
            Ok(OracleVerdict {
                property,
                all_satisfy: true,
                elements_tested: tested,
                first_counterexample: None,
            })
        }
        (FieldTag::Gf(_), OracleDomain::Lattice { .. }) => Err(Error::InvalidInput(
            "lattice oracles are for infinite fields; use enumeration".into(),
        )),
        (_, OracleDomain::Enumerate) => Err(Error::NotEnumerable),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Divergence {
    /// The one sanctioned divergence: a formal-nonzero polynomial that
    /// vanishes as a function over GF(p).
    CharPFormalVsFunctional,
    Unexplained,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub agree: bool,
    pub divergence: Option<Divergence>,
}

/// Compare a certifier's all-property verdict with an oracle verdict on
/// the same space. A divergence is sanctioned only when a formal method
/// ran over a finite field; the certifiers in this crate never do that,
/// so any divergence they produce is `Unexplained` and a bug.
pub fn cross_validate(
    certifier_all: bool,
    certifier_method: Method,
    field: FieldTag,
    oracle: &OracleVerdict,
) -> AgreementReport {
    if certifier_all == oracle.all_satisfy {
        return AgreementReport {
            agree: true,
            divergence: None,
        };
    }
    let sanctioned = field.is_finite() && certifier_method == Method::Symbolic;
    AgreementReport {
        agree: false,
        divergence: Some(if sanctioned {
            Divergence::CharPFormalVsFunctional
        } else {
            Divergence::Unexplained
        }),
    }
}

impl OracleVerdict {
    pub fn to_report(&self, space: &AffineSubspace) -> CertReport {
        let property = match self.property {
            OracleProperty::Nilpotent => "nilpotent",
            OracleProperty::Normal => "normal",
            OracleProperty::DiagonalizableReal => "diagonalizable-real",
        };
        CertReport {
            property: property.into(),
            verdict: if self.all_satisfy {
                "all-satisfy".into()
            } else {
                "counterexample".into()
            },
            method: Method::EnumerationOracle,
            field: space.field().to_string(),
            n: space.n(),
            dim: space.dim(),
            is_linear: space.is_linear(),
            bound: 0,
            refined_bound: None,
            refined_bound_applicable: false,
            bound_satisfied: true,
            counterexample: self.first_counterexample.clone(),
            samples: Some(self.elements_tested),
            seed: None,
            grid: None,
            notes: vec![],
        }
    }
}
