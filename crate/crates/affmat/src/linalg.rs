//! Exact Gaussian elimination over a field: rank, RREF, kernels, solves.
//!
//! Works on rectangular data; the public square [`crate::matrix::Matrix`]
//! delegates here. Row-major storage throughout.

use crate::error::Result;
use crate::ring::FieldElem;
use crate::scalar::FieldTag;

#[derive(Debug, Clone, PartialEq)]
pub struct RectMat<K: FieldElem> {
    pub rows: usize,
    pub cols: usize,
    pub tag: FieldTag,
    pub data: Vec<K>,
}

impl<K: FieldElem> RectMat<K> {
    pub fn zeros(rows: usize, cols: usize, tag: FieldTag) -> Self {
        RectMat {
            rows,
            cols,
            tag,
            data: vec![K::zero_of(&tag); rows * cols],
        }
    }

    #[cfg(test)]
    pub fn from_rows(rows: Vec<Vec<K>>, tag: FieldTag) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        debug_assert!(rows.iter().all(|x| x.len() == c));
        RectMat {
            rows: r,
            cols: c,
            tag,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.at(r, c).inv().expect("pivot is nonzero");
            for j in c..self.cols {
                let v = self.at(r, j).ring_mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.at(i, c).is_zero() {
                    continue;
                }
                let f = self.at(i, c).clone();
                for j in c..self.cols {
                    let v = self.at(i, j).ring_sub(&self.at(r, j).ring_mul(&f));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel {x : Mx = 0}, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<K>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![K::zero_of(&self.tag); self.cols];
            v[free] = K::one_of(&self.tag);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.at(r, free).ring_neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve Mx = b exactly; `None` when inconsistent. Free variables are
    /// set to zero, so the solution is deterministic.
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RectMat::zeros(self.rows, self.cols + 1, self.tag);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.cols) {
            return None; // a pivot in the augmented column
        }
        let mut x = vec![K::zero_of(&self.tag); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }

    /// Determinant of a square matrix by elimination with row swaps.
    pub fn det(&self) -> Result<K> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = K::one_of(&self.tag);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Ok(K::zero_of(&self.tag));
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.ring_neg();
            }
            det = det.ring_mul(m.at(c, c));
            let inv = m.at(c, c).inv()?;
            for i in c + 1..n {
                if m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c).ring_mul(&inv);
                for j in c..n {
                    let v = m.at(i, j).ring_sub(&m.at(c, j).ring_mul(&f));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }
}

/// Incremental row-echelon basis. Keeps insertion order bookkeeping so
/// generator pruning is first-come-first-kept and deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Echelon<K: FieldElem> {
    tag: FieldTag,
    width: usize,
    rows: Vec<Vec<K>>,    // normalized: leading entry 1
    pivots: Vec<usize>,   // pivot column per row, strictly increasing order not required
}

impl<K: FieldElem> Echelon<K> {
    pub fn new(width: usize, tag: FieldTag) -> Self {
        Echelon {
            tag,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current basis; the remainder is zero iff
    /// `v` lies in the span.
    pub fn reduce(&self, mut v: Vec<K>) -> Vec<K> {
        assert_eq!(v.len(), self.width);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for j in 0..self.width {
                v[j] = v[j].ring_sub(&row[j].ring_mul(&f));
            }
        }
        v
    }

    /// Insert `v` if independent; returns whether it enlarged the span.
    pub fn insert(&mut self, v: Vec<K>) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("leading entry nonzero");
        let norm: Vec<K> = r.iter().map(|x| x.ring_mul(&inv)).collect();
        self.rows.push(norm);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: Vec<K>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

}
