//! Exact real-diagonalizability and sampling-based certification of
//! affine spaces of rational matrices.
//!
//! A single rational matrix is decided exactly: it is diagonalizable
//! over R iff its minimal polynomial is squarefree with as many distinct
//! real roots (Sturm count) as its degree. Whole-space verdicts are
//! sampling only and say so: real-diagonalizability of a space is not a
//! polynomial identity, so the honest vocabulary is
//! "no-counterexample-found", never "certified".

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RectMat;
use crate::matrix::Matrix;
use crate::report::{BoundCheck, CertReport, Counterexample, Method};
use crate::scalar::{FieldTag, Scalar};
use crate::subspace::AffineSubspace;
use crate::unipoly::{sturm_real_root_count as sturm_count, UniPoly};

/// Monic least-degree annihilator, by rank-profiling the powers
/// I, m, m^2, ... and solving for the first linear dependence. Verified
/// to divide the characteristic polynomial.
pub fn minimal_polynomial(m: &Matrix<Scalar>) -> Result<UniPoly> {
    let n = m.n();
    let tag = m.field();
    let mut powers: Vec<Vec<Scalar>> = vec![Matrix::identity(n, tag).flatten()];
    let mut current = Matrix::identity(n, tag);
    for k in 1..=n {
        current = current.matmul(m)?;
        let target = current.flatten();
        // columns are the flattened lower powers
        let mut cols = RectMat::zeros(n * n, k, tag);
        for (j, p) in powers.iter().enumerate() {
            for i in 0..n * n {
                cols.set(i, j, p[i].clone());
            }
        }
        if let Some(coeffs) = cols.solve(&target) {
            // m^k = sum coeffs[i] m^i  =>  minpoly = x^k - sum coeffs[i] x^i
            let mut poly = vec![Scalar::zero(&tag); k + 1];
            for (i, c) in coeffs.into_iter().enumerate() {
                poly[i] = -&c;
            }
            poly[k] = Scalar::one(&tag);
            let minpoly = UniPoly::from_coeffs(poly);
            let chi = m.char_poly().to_unipoly();
            assert!(
                chi.rem(&minpoly)?.is_zero(),
                "minimal polynomial must divide the characteristic polynomial"
            );
            return Ok(minpoly);
        }
        powers.push(target);
    }
    unreachable!("Cayley-Hamilton bounds the minimal polynomial degree by n")
}

/// Exact count of distinct real roots of a squarefree rational
/// polynomial; optionally restricted to the half-open interval (lo, hi].
pub fn sturm_real_root_count(
    p: &UniPoly,
    interval: Option<(&BigRational, &BigRational)>,
) -> Result<usize> {
    sturm_count(p, interval)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagReason {
    MinimalPolyNotSquarefree,
    NonRealEigenvalue,
    Ok,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealDiagReport {
    pub diagonalizable: bool,
    pub reason: DiagReason,
    pub min_poly: UniPoly,
    /// Distinct real roots of the squarefree part of the minimal
    /// polynomial.
    pub real_root_count: usize,
    pub degree: usize,
}

/// Diagonalizable over R iff the minimal polynomial is squarefree and
/// all of its roots are real.
pub fn is_diagonalizable_real(m: &Matrix<Scalar>) -> Result<RealDiagReport> {
    if m.field() != FieldTag::Q {
        return Err(Error::FieldMismatch {
            expected: "Q".into(),
            found: m.field().to_string(),
        });
    }
    let min_poly = minimal_polynomial(m)?;
    let degree = min_poly.degree().unwrap_or(0);
    let squarefree = min_poly.is_squarefree()?;
    let radical = min_poly.radical()?;
    let real_root_count = sturm_count(&radical, None)?;
    let (diagonalizable, reason) = if !squarefree {
        (false, DiagReason::MinimalPolyNotSquarefree)
    } else if real_root_count < degree {
        (false, DiagReason::NonRealEigenvalue)
    } else {
        (true, DiagReason::Ok)
    };
    Ok(RealDiagReport {
        diagonalizable,
        reason,
        min_poly,
        real_root_count,
        degree,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleVerdict {
    NoCounterexampleFound,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSampleCert {
    pub verdict: SampleVerdict,
    pub samples_drawn: u64,
    pub grid: String,
    pub seed: u64,
    pub counterexample: Option<(Counterexample, RealDiagReport)>,
    pub bound_check: BoundCheck,
}

const GRID_RADIUS: i64 = 3;
const GRID_CAP: u64 = 10_000;

fn sample_point(space: &AffineSubspace, grid_total: u64, seed: u64, index: u64) -> Vec<Scalar> {
    let h = space.dim();
    if index < grid_total {
        // odometer over {-3..3}^h, first coordinate fastest
        let base = (2 * GRID_RADIUS + 1) as u64;
        let mut rest = index;
        (0..h)
            .map(|_| {
                let digit = (rest % base) as i64 - GRID_RADIUS;
                rest /= base;
                Scalar::from_int(digit, &FieldTag::Q)
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        (0..h)
            .map(|_| {
                let num = rng.gen_range(-100i64..=100);
                let den = rng.gen_range(1i64..=100);
                Scalar::rat(num, den).unwrap()
            })
            .collect()
    }
}

/// Tests `samples` members of a rational affine space: a deterministic
/// integer grid first, then seeded random rationals. The first failing
/// member (in index order, independent of thread count) is reported.
pub fn sample_certify_diag_space(
    space: &AffineSubspace,
    samples: u64,
    seed: u64,
) -> Result<SpaceSampleCert> {
    if space.field() != FieldTag::Q {
        return Err(Error::FieldMismatch {
            expected: "Q".into(),
            found: space.field().to_string(),
        });
    }
    let h = space.dim() as u32;
    let grid_total = (2 * GRID_RADIUS as u64 + 1)
        .checked_pow(h)
        .unwrap_or(u64::MAX)
        .min(GRID_CAP)
        .min(samples);
    let grid = format!(
        "integer grid {{-{GRID_RADIUS}..{GRID_RADIUS}}}^{h} (first {grid_total} points in odometer order), then seeded rationals with |num| <= 100, 1 <= den <= 100"
    );

    let failing = (0..samples).into_par_iter().find_first(|&i| {
        let point = sample_point(space, grid_total, seed, i);
        let member = space.element_at_point(&point).expect("point in field");
        !is_diagonalizable_real(&member)
            .expect("rational member")
            .diagonalizable
    });

    let n = space.n();
    let bound = if space.is_linear() {
        n * (n + 1) / 2
    } else {
        n * (n + 1) / 2 - 1
    };
    match failing {
        Some(i) => {
            let point = sample_point(space, grid_total, seed, i);
            let matrix = space.element_at_point(&point)?;
            let report = is_diagonalizable_real(&matrix)?;
            debug_assert!(space.membership(&matrix)?);
            Ok(SpaceSampleCert {
                verdict: SampleVerdict::Counterexample,
                samples_drawn: i + 1,
                grid,
                seed,
                counterexample: Some((Counterexample { point, matrix }, report)),
                bound_check: BoundCheck {
                    dim: space.dim(),
                    bound,
                    refined_bound: None,
                    satisfied: true,
                },
            })
        }
        None => Ok(SpaceSampleCert {
            verdict: SampleVerdict::NoCounterexampleFound,
            samples_drawn: samples,
            grid,
            seed,
            counterexample: None,
            bound_check: BoundCheck {
                dim: space.dim(),
                bound,
                refined_bound: None,
                satisfied: space.dim() <= bound,
            },
        }),
    }
}

/// The symmetric matrices: span{E_ii} + span{E_ij + E_ji}, dimension
/// n(n+1)/2.
pub fn witness_max_diag_linear(n: usize) -> Result<AffineSubspace> {
    let tag = FieldTag::Q;
    let mut gens = Vec::new();
    for i in 0..n {
        gens.push(Matrix::unit(n, tag, i, i));
    }
    for i in 0..n {
        for j in i + 1..n {
            gens.push(Matrix::unit(n, tag, i, j).add(&Matrix::unit(n, tag, j, i))?);
        }
    }
    AffineSubspace::linear(n, tag, gens)
}

/// E_11 + U with U spanned by E_ii (i >= 2) and E_ij + E_ji (i < j):
/// affine not linear of dimension n(n+1)/2 - 1, all members symmetric.
pub fn witness_max_diag_affine_not_linear(n: usize) -> Result<AffineSubspace> {
    let tag = FieldTag::Q;
    let mut gens = Vec::new();
    for i in 1..n {
        gens.push(Matrix::unit(n, tag, i, i));
    }
    for i in 0..n {
        for j in i + 1..n {
            gens.push(Matrix::unit(n, tag, i, j).add(&Matrix::unit(n, tag, j, i))?);
        }
    }
    AffineSubspace::new(Matrix::unit(n, tag, 0, 0), gens)
}

/// The 2x2 space {[[a, b], [2b, c]]}: contained in D(2, R) with the same
/// dimension 3 as the symmetric matrices, showing the maximal linear
/// space is not unique.
pub fn remark_2x2_space() -> AffineSubspace {
    let tag = FieldTag::Q;
    let e11 = Matrix::unit(2, tag, 0, 0);
    let e22 = Matrix::unit(2, tag, 1, 1);
    let mixed = Matrix::unit(2, tag, 0, 1)
        .add(&Matrix::unit(2, tag, 1, 0).scale(&Scalar::from_int(2, &tag)))
        .unwrap();
    AffineSubspace::linear(2, tag, vec![e11, mixed, e22]).expect("fixed construction")
}

#[derive(Debug, Clone, PartialEq)]
pub struct PencilEscape {
    pub t: BigRational,
    pub report: RealDiagReport,
    pub tried: u64,
}

/// Finite witness of the escape argument: for nonzero antisymmetric Y,
/// P + tY eventually leaves D(n, R). Search order is deterministic:
/// doubling 1, -1, 2, -2, 4, ..., then the remaining integers, then
/// half-integers, all within |t| <= 10 * max|P| + 10. Exhaustion is an
/// explicit error, never a nonexistence claim.
pub fn antisymmetric_pencil_escape(
    p: &Matrix<Scalar>,
    y: &Matrix<Scalar>,
) -> Result<PencilEscape> {
    if p.field() != FieldTag::Q || y.field() != FieldTag::Q {
        return Err(Error::FieldMismatch {
            expected: "Q".into(),
            found: format!("{}, {}", p.field(), y.field()),
        });
    }
    if y.is_zero() {
        return Err(Error::ZeroPencilDirection);
    }
    if y.transpose() != y.neg() {
        return Err(Error::NotAntisymmetric);
    }
    let max_abs = p
        .entries()
        .iter()
        .map(|e| e.norm_rat().expect("rational entry"))
        .fold(BigRational::from_integer(0.into()), |a, b| a.max(b));
    let budget = (max_abs * BigRational::from_integer(10.into()))
        .ceil()
        .to_integer()
        .to_i64()
        .unwrap_or(1_000_000)
        .min(1_000_000)
        + 10;

    let mut candidates: Vec<BigRational> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut push = |t: BigRational, v: &mut Vec<BigRational>| {
        if t.abs() <= BigRational::from_integer(budget.into()) && seen.insert(t.to_string()) {
            v.push(t);
        }
    };
    let mut k = 1i64;
    while k <= budget {
        push(BigRational::from_integer(k.into()), &mut candidates);
        push(BigRational::from_integer((-k).into()), &mut candidates);
        k *= 2;
    }
    for k in 2..=budget {
        push(BigRational::from_integer(k.into()), &mut candidates);
        push(BigRational::from_integer((-k).into()), &mut candidates);
    }
    let mut k = 1i64;
    while k <= 2 * budget {
        push(BigRational::new(k.into(), 2.into()), &mut candidates);
        push(BigRational::new((-k).into(), 2.into()), &mut candidates);
        k += 2;
    }

    let mut tried = 0u64;
    for t in candidates {
        tried += 1;
        let member = p.add(&y.scale(&Scalar::Rat(t.clone())))?;
        let report = is_diagonalizable_real(&member)?;
        if !report.diagonalizable {
            return Ok(PencilEscape { t, report, tried });
        }
    }
    Err(Error::BudgetExhausted {
        budget: budget.to_string(),
        tried,
    })
}

/// Basis of W ∩ A(n, R) for a linear space W: solve m + m^T = 0 inside
/// the span of the generators.
pub fn antisymmetric_intersection(w: &AffineSubspace) -> Result<Vec<Matrix<Scalar>>> {
    if w.field() != FieldTag::Q {
        return Err(Error::FieldMismatch {
            expected: "Q".into(),
            found: w.field().to_string(),
        });
    }
    if !w.is_linear() {
        return Err(Error::PreconditionFailed(
            "antisymmetric intersection is defined for linear spaces".into(),
        ));
    }
    let n = w.n();
    let h = w.dim();
    if h == 0 {
        return Ok(vec![]);
    }
    // columns: flatten(Z_k + Z_k^T)
    let mut cols = RectMat::zeros(n * n, h, FieldTag::Q);
    for (k, z) in w.basis().iter().enumerate() {
        let sym = z.add(&z.transpose())?;
        for (i, v) in sym.flatten().into_iter().enumerate() {
            cols.set(i, k, v);
        }
    }
    let kernel = cols.kernel_basis();
    let mut basis = Vec::with_capacity(kernel.len());
    for u in kernel {
        let mut acc = Matrix::zero(n, FieldTag::Q);
        for (k, z) in w.basis().iter().enumerate() {
            acc = acc.add(&z.scale(&u[k]))?;
        }
        basis.push(acc);
    }
    Ok(basis)
}

impl SpaceSampleCert {
    pub fn to_report(&self, space: &AffineSubspace) -> CertReport {
        let mut notes = vec![
            "sampling-based: a clean run is evidence, not a certificate".to_string(),
        ];
        if let Some((_, r)) = &self.counterexample {
            notes.push(format!(
                "counterexample reason: {:?}, minimal polynomial {}, {} of {} real roots",
                r.reason, r.min_poly, r.real_root_count, r.degree
            ));
        }
        CertReport {
            property: "diagonalizable-real".into(),
            verdict: match self.verdict {
                SampleVerdict::NoCounterexampleFound => "no-counterexample-found".into(),
                SampleVerdict::Counterexample => "counterexample".into(),
            },
            method: Method::Sampling,
            field: space.field().to_string(),
            n: space.n(),
            dim: space.dim(),
            is_linear: space.is_linear(),
            bound: self.bound_check.bound,
            refined_bound: self.bound_check.refined_bound,
            refined_bound_applicable: false,
            bound_satisfied: self.bound_check.satisfied,
            counterexample: self.counterexample.as_ref().map(|(c, _)| c.clone()),
            samples: Some(self.samples_drawn),
            seed: Some(self.seed),
            grid: Some(self.grid.clone()),
            notes,
        }
    }
}
