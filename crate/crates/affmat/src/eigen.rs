//! Exact simultaneous diagonalization by iterated eigenspace refinement.
//!
//! Starting from the whole space as one block, each input matrix splits
//! every block into its intersections with the matrix's eigenspaces;
//! when the family is simultaneously diagonalizable the final blocks are
//! exactly the common eigenspace intersections and the union of their
//! bases is a basis of common eigenvectors.
//!
//! The exact path is restricted to Gaussian-rational eigenvalues: roots
//! of the minimal polynomial are found by divisor/small-candidate search
//! with deflation plus the quadratic formula over Q(i), and verified by
//! kernel rank. Anything else routes to the numeric mode.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::diag::minimal_polynomial;
use crate::error::{Error, Result};
use crate::linalg::RectMat;
use crate::matrix::Matrix;
use crate::scalar::{gauss_sqrt, FieldTag, Scalar};
use crate::unipoly::UniPoly;

/// One common eigenspace: a basis of column vectors and, per input
/// matrix, the eigenvalue of that matrix on the block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactBlock {
    pub basis: Vec<Vec<Scalar>>,
    pub eigenvalues: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactRefinement {
    pub n: usize,
    pub blocks: Vec<ExactBlock>,
}

impl ExactRefinement {
    /// Invertible matrix whose columns are the union of the block bases.
    pub fn basis_matrix(&self) -> Matrix<Scalar> {
        let cols: Vec<&Vec<Scalar>> = self.blocks.iter().flat_map(|b| &b.basis).collect();
        assert_eq!(cols.len(), self.n, "blocks span the whole space");
        Matrix::from_fn(self.n, FieldTag::Qi, |i, j| cols[j][i].clone())
    }
}

/// All distinct roots in Q(i) of a polynomial over Q or Q(i); errors
/// with `NotExactEligible` if the polynomial does not split there (or
/// the coefficient divisors are out of reach).
pub fn gaussian_rational_roots(p: &UniPoly) -> Result<Vec<Scalar>> {
    let mut p = promote_poly(p)?.monic().map_err(|_| {
        Error::NotExactEligible("zero polynomial has no well-defined roots".into())
    })?;
    let mut roots: Vec<Scalar> = Vec::new();
    let x = UniPoly::from_coeffs(vec![Scalar::zero(&FieldTag::Qi), Scalar::one(&FieldTag::Qi)]);
    while p.degree() > Some(0) && p.coeff(0).is_zero() {
        push_unique(&mut roots, Scalar::zero(&FieldTag::Qi));
        p = p.div_exact(&x)?;
    }
    loop {
        match p.degree() {
            None | Some(0) => break,
            Some(1) => {
                push_unique(&mut roots, -&p.coeff(0));
                break;
            }
            Some(2) => {
                let b = p.coeff(1);
                let c = p.coeff(0);
                let disc = &(&b * &b) - &(&Scalar::from_int(4, &FieldTag::Qi) * &c);
                let Some(sq) = gauss_sqrt(&disc) else {
                    return Err(Error::NotExactEligible(format!(
                        "quadratic discriminant {disc} has no square root in Q(i)"
                    )));
                };
                let half = Scalar::rat(1, 2).unwrap().promote_to_gauss().unwrap();
                push_unique(&mut roots, &(&-&b + &sq) * &half);
                push_unique(&mut roots, &(&-&b - &sq) * &half);
                break;
            }
            Some(_) => {
                let Some(r) = find_one_root(&p)? else {
                    return Err(Error::NotExactEligible(format!(
                        "no Gaussian-rational root of degree-{} factor found",
                        p.degree().unwrap()
                    )));
                };
                push_unique(&mut roots, r.clone());
                p = p.div_exact(&UniPoly::linear_root(&r))?;
            }
        }
    }
    Ok(roots)
}

fn promote_poly(p: &UniPoly) -> Result<UniPoly> {
    match p.field() {
        FieldTag::Qi => Ok(p.clone()),
        FieldTag::Q => Ok(UniPoly::from_coeffs(
            p.coeffs()
                .iter()
                .map(|c| c.promote_to_gauss())
                .collect::<Result<Vec<_>>>()?,
        )),
        tag => Err(Error::FieldMismatch {
            expected: "Q or Qi".into(),
            found: tag.to_string(),
        }),
    }
}

fn push_unique(roots: &mut Vec<Scalar>, r: Scalar) {
    if !roots.contains(&r) {
        roots.push(r);
    }
}

fn find_one_root(p: &UniPoly) -> Result<Option<Scalar>> {
    let rational_coeffs = p
        .coeffs()
        .iter()
        .all(|c| matches!(c, Scalar::Gauss(_, im) if im.is_zero()));
    if rational_coeffs {
        if let Some(r) = rational_root_theorem(p)? {
            return Ok(Some(r));
        }
    }
    // small Gaussian-integer grid, deterministic order
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            let cand = Scalar::Gauss(
                BigRational::from_integer(a.into()),
                BigRational::from_integer(b.into()),
            );
            if p.eval(&cand).is_zero() {
                return Ok(Some(cand));
            }
        }
    }
    Ok(None)
}

/// Rational root theorem after clearing denominators: roots are +-d/e
/// with d dividing the constant and e the leading coefficient.
fn rational_root_theorem(p: &UniPoly) -> Result<Option<Scalar>> {
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        let den = match c {
            Scalar::Gauss(re, _) => re.denom().clone(),
            Scalar::Rat(r) => r.denom().clone(),
            _ => unreachable!("promoted earlier"),
        };
        lcm = num_integer::lcm(lcm, den);
    }
    let int_coeff = |c: &Scalar| -> BigInt {
        let r = match c {
            Scalar::Gauss(re, _) => re,
            Scalar::Rat(r) => r,
            _ => unreachable!(),
        };
        (r * BigRational::from_integer(lcm.clone())).to_integer()
    };
    let a0 = int_coeff(&p.coeff(0));
    let an = int_coeff(p.leading().unwrap());
    debug_assert!(!a0.is_zero(), "zero roots are stripped before the search");
    let (Some(ds), Some(es)) = (divisors(&a0), divisors(&an)) else {
        return Ok(None);
    };
    for d in &ds {
        for e in &es {
            for sign in [1i64, -1] {
                let cand = Scalar::Gauss(
                    BigRational::new(d * BigInt::from(sign), e.clone()),
                    BigRational::zero(),
                );
                if p.eval(&cand).is_zero() {
                    return Ok(Some(cand));
                }
            }
        }
    }
    Ok(None)
}

/// Positive divisors by trial-division factoring; `None` when the number
/// is out of comfortable factoring range.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut m = n.abs();
    if m.is_zero() {
        return None;
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let bound = BigInt::from(1_000_000u64);
    while &d * &d <= m && d <= bound {
        let mut k = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            k += 1;
        }
        if k > 0 {
            primes.push((d.clone(), k));
        }
        d += 1;
    }
    if !m.is_one() {
        if m > BigInt::from(1_000_000_000_000u64) {
            return None; // cofactor too large to certify prime cheaply
        }
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, k) in primes {
        let mut next = Vec::with_capacity(divs.len() * (k as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    Some(divs)
}

/// Distinct eigenvalues of a matrix with Gaussian-rational spectrum,
/// via its minimal polynomial.
pub fn exact_eigenvalues(m: &Matrix<Scalar>) -> Result<Vec<Scalar>> {
    let minpoly = minimal_polynomial(m)?;
    gaussian_rational_roots(&minpoly)
}

fn bundle(n: usize, cols: &[Vec<Scalar>]) -> RectMat<Scalar> {
    let mut r = RectMat::zeros(n, cols.len(), FieldTag::Qi);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            r.set(i, j, c[i].clone());
        }
    }
    r
}

fn rect_mul(a: &RectMat<Scalar>, b: &RectMat<Scalar>) -> RectMat<Scalar> {
    assert_eq!(a.cols, b.rows);
    let mut out = RectMat::zeros(a.rows, b.cols, a.tag);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let v = a.at(i, k);
            if v.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let cur = out.at(i, j);
                let add = v * b.at(k, j);
                out.set(i, j, cur + &add);
            }
        }
    }
    out
}

pub fn simultaneous_diagonalize_exact(mats: &[Matrix<Scalar>]) -> Result<ExactRefinement> {
    if mats.is_empty() {
        return Err(Error::InvalidInput("empty matrix family".into()));
    }
    let n = mats[0].n();
    let promoted: Vec<Matrix<Scalar>> = mats
        .iter()
        .map(|m| {
            if m.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.n(),
                });
            }
            m.promote_to_gauss()
        })
        .collect::<Result<_>>()?;

    let tag = FieldTag::Qi;
    let full: Vec<Vec<Scalar>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        Scalar::one(&tag)
                    } else {
                        Scalar::zero(&tag)
                    }
                })
                .collect()
        })
        .collect();
    let mut blocks: Vec<Vec<Vec<Scalar>>> = vec![full];

    for (mi, a) in promoted.iter().enumerate() {
        let eigenvalues = exact_eigenvalues(a)
            .map_err(|e| Error::NotExactEligible(format!("matrix {mi}: {e}")))?;
        let mut next: Vec<Vec<Vec<Scalar>>> = Vec::new();
        for (bi, block) in blocks.iter().enumerate() {
            let w = block.len();
            let b = bundle(n, block);
            let mut found = 0usize;
            for lambda in &eigenvalues {
                let shifted = a.sub(&Matrix::identity(n, tag).scale(lambda))?;
                let prod = rect_mul(&shifted.to_rect(), &b);
                let kernel = prod.kernel_basis();
                if kernel.is_empty() {
                    continue;
                }
                found += kernel.len();
                let vectors: Vec<Vec<Scalar>> = kernel
                    .iter()
                    .map(|u| {
                        (0..n)
                            .map(|i| {
                                let mut acc = Scalar::zero(&tag);
                                for (k, uk) in u.iter().enumerate() {
                                    acc = &acc + &(&block[k][i] * uk);
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect();
                next.push(vectors);
            }
            if found != w {
                return Err(Error::NotSimultaneouslyDiagonalizable {
                    matrix: mi,
                    block: bi,
                });
            }
        }
        blocks = next;
    }

    // eigenvalue table, verified exactly on every basis vector
    let mut out_blocks = Vec::with_capacity(blocks.len());
    for (bi, block) in blocks.iter().enumerate() {
        let mut eigenvalues = Vec::with_capacity(promoted.len());
        for (mi, a) in promoted.iter().enumerate() {
            let v = &block[0];
            let av = matvec(a, v);
            let pivot = v
                .iter()
                .position(|x| !x.is_zero())
                .expect("basis vectors are nonzero");
            let lambda = av[pivot].div(&v[pivot])?;
            for u in block {
                let au = matvec(a, u);
                for i in 0..n {
                    if au[i] != &lambda * &u[i] {
                        return Err(Error::NotSimultaneouslyDiagonalizable {
                            matrix: mi,
                            block: bi,
                        });
                    }
                }
            }
            eigenvalues.push(lambda);
        }
        out_blocks.push(ExactBlock {
            basis: block.clone(),
            eigenvalues,
        });
    }

    let refinement = ExactRefinement {
        n,
        blocks: out_blocks,
    };
    // disjoint and jointly spanning: the stacked basis is invertible
    let total: usize = refinement.blocks.iter().map(|b| b.basis.len()).sum();
    if total != n || refinement.basis_matrix().rank() != n {
        return Err(Error::NotExactEligible(
            "refinement blocks do not span the whole space".into(),
        ));
    }
    Ok(refinement)
}

pub(crate) fn matvec(a: &Matrix<Scalar>, v: &[Scalar]) -> Vec<Scalar> {
    let n = a.n();
    (0..n)
        .map(|i| {
            let mut acc = Scalar::zero(&a.field());
            for j in 0..n {
                acc = &acc + &(a.at(i, j) * &v[j]);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::matrix_from_int_rows;

    fn diag(tag: FieldTag, vals: &[i64]) -> Matrix<Scalar> {
        Matrix::from_fn(vals.len(), tag, |i, j| {
            if i == j {
                Scalar::from_int(vals[i], &tag)
            } else {
                Scalar::zero(&tag)
            }
        })
    }

    #[test]
    fn roots_of_simple_polynomials() {
        // x^2 - 4x + 3
        let p = UniPoly::from_int_coeffs(FieldTag::Q, &[3, -4, 1]);
        let mut roots = gaussian_rational_roots(&p).unwrap();
        roots.sort_by_key(|r| r.to_string());
        assert_eq!(roots.len(), 2);
        // x^2 + 1 -> +-i
        let p = UniPoly::from_int_coeffs(FieldTag::Q, &[1, 0, 1]);
        let roots = gaussian_rational_roots(&p).unwrap();
        assert!(roots.contains(&Scalar::i_unit().promote_to_gauss().unwrap()));
        // x^4 - 1 -> 1, -1, i, -i  (rational deflation then quadratic)
        let p = UniPoly::from_int_coeffs(FieldTag::Q, &[-1, 0, 0, 0, 1]);
        let roots = gaussian_rational_roots(&p).unwrap();
        assert_eq!(roots.len(), 4);
        // x^2 - 2 does not split over Q(i)
        let p = UniPoly::from_int_coeffs(FieldTag::Q, &[-2, 0, 1]);
        assert!(matches!(
            gaussian_rational_roots(&p),
            Err(Error::NotExactEligible(_))
        ));
    }

    #[test]
    fn refine_two_diagonals() {
        let a = diag(FieldTag::Q, &[1, 1, 2]);
        let b = diag(FieldTag::Q, &[3, 4, 4]);
        let r = simultaneous_diagonalize_exact(&[a, b]).unwrap();
        // multiplicity structure forces the full standard splitting
        assert_eq!(r.blocks.len(), 3);
        for block in &r.blocks {
            assert_eq!(block.basis.len(), 1);
        }
    }

    #[test]
    fn identity_gives_single_block() {
        let r = simultaneous_diagonalize_exact(&[Matrix::identity(3, FieldTag::Q)]).unwrap();
        assert_eq!(r.blocks.len(), 1);
        assert_eq!(r.blocks[0].basis.len(), 3);
        assert!(r.blocks[0].eigenvalues[0].is_one());
    }

    #[test]
    fn non_diagonalizable_matrix_is_rejected() {
        let m = matrix_from_int_rows(FieldTag::Q, &[vec![0, 1], vec![0, 0]]).unwrap();
        let err = simultaneous_diagonalize_exact(&[m]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotSimultaneouslyDiagonalizable { matrix: 0, block: 0 }
        ));
    }

    #[test]
    fn non_commuting_family_is_rejected() {
        let a = diag(FieldTag::Q, &[1, 2]);
        let b = matrix_from_int_rows(FieldTag::Q, &[vec![0, 1], vec![1, 0]]).unwrap();
        let err = simultaneous_diagonalize_exact(&[a, b]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotSimultaneouslyDiagonalizable { matrix: 1, .. }
        ));
    }

    #[test]
    fn rotation_matrix_splits_over_qi() {
        let y = matrix_from_int_rows(FieldTag::Q, &[vec![0, 1], vec![-1, 0]]).unwrap();
        let r = simultaneous_diagonalize_exact(&[y]).unwrap();
        assert_eq!(r.blocks.len(), 2);
        let evs: Vec<String> = r
            .blocks
            .iter()
            .map(|b| b.eigenvalues[0].to_string())
            .collect();
        assert!(evs.contains(&"1i".to_string()) && evs.contains(&"-1i".to_string()));
    }
}
