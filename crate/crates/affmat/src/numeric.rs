//! Floating-point fallback for simultaneous diagonalization of normal,
//! pairwise-commuting families whose eigenvalues are not
//! Gaussian-rational.
//!
//! Each normal matrix splits as A = H + iK with H, K Hermitian and
//! commuting; blocks are refined by Jacobi-diagonalizing the compressed
//! H and then K inside each eigenvalue cluster. Residuals are checked
//! against an explicit tolerance; nothing is silently accepted.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub const NUMERIC_TOL: f64 = 1e-9;
const CLUSTER_TOL: f64 = 1e-6;

/// Small dense complex matrix, row-major, square or rectangular.
#[derive(Debug, Clone)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> CMat {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn dagger(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).conj());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.at(i, j) + a * rhs.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn from_scalar_matrix(m: &Matrix<Scalar>) -> Result<CMat> {
        let n = m.n();
        let mut out = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, scalar_to_c64(m.at(i, j))?);
            }
        }
        Ok(out)
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn scalar_to_c64(s: &Scalar) -> Result<Complex64> {
    use num_traits::ToPrimitive;
    match s {
        Scalar::Rat(r) => Ok(Complex64::new(
            r.to_f64().ok_or_else(|| Error::InvalidInput("rational out of f64 range".into()))?,
            0.0,
        )),
        Scalar::Gauss(re, im) => Ok(Complex64::new(
            re.to_f64().ok_or_else(|| Error::InvalidInput("rational out of f64 range".into()))?,
            im.to_f64().ok_or_else(|| Error::InvalidInput("rational out of f64 range".into()))?,
        )),
        Scalar::Fp(..) => Err(Error::FieldMismatch {
            expected: "Q or Qi".into(),
            found: s.field().to_string(),
        }),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericBlock {
    #[serde(serialize_with = "serialize_basis")]
    pub basis: Vec<Vec<Complex64>>,
    #[serde(serialize_with = "serialize_evs")]
    pub eigenvalues: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericRefinement {
    pub n: usize,
    pub blocks: Vec<NumericBlock>,
    /// max over blocks, matrices and basis vectors of ||Av - lambda v||_inf
    /// for unit v.
    pub max_residual: f64,
}

fn serialize_basis<S: serde::Serializer>(
    basis: &[Vec<Complex64>],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    let as_pairs: Vec<Vec<[f64; 2]>> = basis
        .iter()
        .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    serde::Serialize::serialize(&as_pairs, ser)
}

fn serialize_evs<S: serde::Serializer>(
    evs: &[Complex64],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    let as_pairs: Vec<[f64; 2]> = evs.iter().map(|z| [z.re, z.im]).collect();
    serde::Serialize::serialize(&as_pairs, ser)
}

/// Cyclic Jacobi for a Hermitian matrix: returns (real eigenvalues,
/// unitary U with H = U diag U*). Eigenvalues are in U-column order.
pub fn jacobi_hermitian(h: &CMat) -> (Vec<f64>, CMat) {
    assert_eq!(h.rows, h.cols);
    let n = h.rows;
    let mut a = h.clone();
    let mut u = CMat::identity(n);
    let scale = a.max_abs().max(1.0);
    for _sweep in 0..80 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a.at(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.at(p, q);
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let alpha = a.at(p, p).re;
                let gamma = a.at(q, q).re;
                let abs = apq.norm();
                let phase = apq / abs;
                // zero the (p,q) entry: t solves t^2 - 2*tau*t - 1 = 0,
                // small-magnitude root for stability
                let tau = (gamma - alpha) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U_rot = [[c, -s*phase], [s*conj(phase), c]] on (p, q)
                let spp = s * phase;
                let spc = s * phase.conj();
                // right multiply: columns p, q
                for k in 0..n {
                    let akp = a.at(k, p);
                    let akq = a.at(k, q);
                    a.set(k, p, c * akp + spc * akq);
                    a.set(k, q, -spp * akp + c * akq);
                }
                // left multiply by U_rot^*: rows p, q
                for k in 0..n {
                    let apk = a.at(p, k);
                    let aqk = a.at(q, k);
                    a.set(p, k, c * apk + spp * aqk);
                    a.set(q, k, -spc * apk + c * aqk);
                }
                for k in 0..n {
                    let ukp = u.at(k, p);
                    let ukq = u.at(k, q);
                    u.set(k, p, c * ukp + spc * ukq);
                    u.set(k, q, -spp * ukp + c * ukq);
                }
            }
        }
    }
    let evals = (0..n).map(|i| a.at(i, i).re).collect();
    (evals, u)
}

fn cluster(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        match groups.last_mut() {
            Some(g) if (values[idx] - values[*g.last().unwrap()]).abs() <= tol => g.push(idx),
            _ => groups.push(vec![idx]),
        }
    }
    groups
}

/// Numeric simultaneous diagonalization of pairwise-commuting normal
/// matrices given as complex floats.
pub fn simultaneous_diagonalize_cmats(mats: &[CMat], tol: f64) -> Result<NumericRefinement> {
    if mats.is_empty() {
        return Err(Error::InvalidInput("empty matrix family".into()));
    }
    let n = mats[0].rows;
    for m in mats {
        if m.rows != n || m.cols != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.rows,
            });
        }
    }
    // blocks as orthonormal column bundles, starting from the full space
    let mut blocks: Vec<CMat> = vec![CMat::identity(n)];
    for (mi, a) in mats.iter().enumerate() {
        let scale = a.max_abs().max(1.0);
        let half = Complex64::new(0.5, 0.0);
        let half_i = Complex64::new(0.0, -0.5); // 1/(2i)
        let mut next: Vec<CMat> = Vec::new();
        for q in &blocks {
            let w = q.cols;
            if w == 1 {
                next.push(q.clone());
                continue;
            }
            let b = q.dagger().mul(&a.mul(q));
            let bd = b.dagger();
            let mut h = CMat::zeros(w, w);
            let mut k = CMat::zeros(w, w);
            for i in 0..w {
                for j in 0..w {
                    h.set(i, j, (b.at(i, j) + bd.at(i, j)) * half);
                    k.set(i, j, (b.at(i, j) - bd.at(i, j)) * half_i);
                }
            }
            let (hvals, u) = jacobi_hermitian(&h);
            let k2 = u.dagger().mul(&k.mul(&u));
            for group in cluster(&hvals, CLUSTER_TOL * scale) {
                if group.len() == 1 {
                    next.push(columns_product(q, &u, &group));
                    continue;
                }
                let g = group.len();
                let mut ksub = CMat::zeros(g, g);
                for (ii, &gi) in group.iter().enumerate() {
                    for (jj, &gj) in group.iter().enumerate() {
                        ksub.set(ii, jj, k2.at(gi, gj));
                    }
                }
                let (kvals, wmat) = jacobi_hermitian(&ksub);
                let ug = columns_product(q, &u, &group);
                for sub in cluster(&kvals, CLUSTER_TOL * scale) {
                    next.push(columns_product_identity(&ug, &wmat, &sub));
                }
            }
        }
        if next.iter().map(|b| b.cols).sum::<usize>() != n {
            return Err(Error::NotSimultaneouslyDiagonalizable {
                matrix: mi,
                block: 0,
            });
        }
        blocks = next;
    }

    // eigenvalue table with residual verification
    let mut out_blocks = Vec::new();
    let mut max_residual = 0.0f64;
    for (bi, q) in blocks.iter().enumerate() {
        let basis: Vec<Vec<Complex64>> = (0..q.cols)
            .map(|j| (0..n).map(|i| q.at(i, j)).collect())
            .collect();
        let mut eigenvalues = Vec::with_capacity(mats.len());
        for (mi, a) in mats.iter().enumerate() {
            // Rayleigh quotient on the first (unit) basis vector
            let v = &basis[0];
            let av = cmatvec(a, v);
            let lambda: Complex64 = v
                .iter()
                .zip(&av)
                .map(|(x, y)| x.conj() * y)
                .sum::<Complex64>()
                / v.iter().map(|x| x.norm_sqr()).sum::<f64>();
            for u in &basis {
                let norm = u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                let au = cmatvec(a, u);
                let res = au
                    .iter()
                    .zip(u)
                    .map(|(y, x)| (y - lambda * x).norm() / norm)
                    .fold(0.0, f64::max);
                max_residual = max_residual.max(res);
                if res > tol {
                    return Err(Error::NotSimultaneouslyDiagonalizable {
                        matrix: mi,
                        block: bi,
                    });
                }
            }
            eigenvalues.push(lambda);
        }
        out_blocks.push(NumericBlock { basis, eigenvalues });
    }
    Ok(NumericRefinement {
        n,
        blocks: out_blocks,
        max_residual,
    })
}

/// Matrices with exact entries, converted and refined numerically.
pub fn simultaneous_diagonalize_numeric(mats: &[Matrix<Scalar>]) -> Result<NumericRefinement> {
    let cmats: Vec<CMat> = mats
        .iter()
        .map(CMat::from_scalar_matrix)
        .collect::<Result<_>>()?;
    simultaneous_diagonalize_cmats(&cmats, NUMERIC_TOL)
}

fn cmatvec(a: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    (0..a.rows)
        .map(|i| (0..a.cols).map(|j| a.at(i, j) * v[j]).sum())
        .collect()
}

/// Q * U restricted to the given columns of U.
fn columns_product(q: &CMat, u: &CMat, cols: &[usize]) -> CMat {
    let mut sel = CMat::zeros(u.rows, cols.len());
    for (jj, &j) in cols.iter().enumerate() {
        for i in 0..u.rows {
            sel.set(i, jj, u.at(i, j));
        }
    }
    q.mul(&sel)
}

fn columns_product_identity(qg: &CMat, w: &CMat, cols: &[usize]) -> CMat {
    columns_product(qg, w, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(rng.gen_range(-3.0..3.0), 0.0));
            for j in i + 1..n {
                let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        m
    }

    #[test]
    fn jacobi_reconstructs_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let n = rng.gen_range(2..=6);
            let h = random_hermitian(&mut rng, n);
            let (evals, u) = jacobi_hermitian(&h);
            // H U = U diag
            let hu = h.mul(&u);
            for j in 0..n {
                for i in 0..n {
                    let expect = u.at(i, j) * evals[j];
                    assert!(
                        (hu.at(i, j) - expect).norm() < 1e-9,
                        "residual too large"
                    );
                }
            }
            // unitarity
            let utu = u.dagger().mul(&u);
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((utu.at(i, j) - expect).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn antisymmetric_gets_imaginary_eigenvalues() {
        // [[0,1],[-1,0]] is normal with eigenvalues +-i
        let mut y = CMat::zeros(2, 2);
        y.set(0, 1, Complex64::new(1.0, 0.0));
        y.set(1, 0, Complex64::new(-1.0, 0.0));
        let r = simultaneous_diagonalize_cmats(&[y], NUMERIC_TOL).unwrap();
        assert_eq!(r.blocks.len(), 2);
        let mut evs: Vec<f64> = r.blocks.iter().map(|b| b.eigenvalues[0].im).collect();
        evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((evs[0] + 1.0).abs() < 1e-9 && (evs[1] - 1.0).abs() < 1e-9);
        assert!(r.max_residual <= NUMERIC_TOL);
    }
}
