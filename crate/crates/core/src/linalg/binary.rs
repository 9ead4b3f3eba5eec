//! Binary matrices with rows packed into machine words.
//!
//! Row `i` is a `u64` whose bit `j` is the entry in column `j`. Matrices may be
//! rectangular (up to 64 columns); square ones double as elements of GL(m, F2).

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    rows: Vec<u64>,
    cols: usize,
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix{:?}", self.to_positions())
    }
}

fn col_mask(cols: usize) -> u64 {
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

impl BinaryMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(cols <= 64, "at most 64 columns");
        BinaryMatrix {
            rows: vec![0; rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n <= 64, "at most 64 columns");
        BinaryMatrix {
            rows: (0..n).map(|i| 1u64 << i).collect(),
            cols: n,
        }
    }

    pub fn from_rows(rows: Vec<u64>, cols: usize) -> Result<Self> {
        if cols > 64 {
            return Err(Error::Dimension(format!("{cols} columns exceed 64")));
        }
        let mask = col_mask(cols);
        if rows.iter().any(|r| r & !mask != 0) {
            return Err(Error::Dimension("row has bits beyond column count".into()));
        }
        Ok(BinaryMatrix { rows, cols })
    }

    /// Builds a square matrix from 1-based nonzero positions per row, e.g.
    /// `[[1,2,3],[1,3],[2]]`.
    pub fn from_positions(positions: &[Vec<usize>]) -> Result<Self> {
        let n = positions.len();
        Self::from_positions_with_cols(positions, n)
    }

    pub fn from_positions_with_cols(positions: &[Vec<usize>], cols: usize) -> Result<Self> {
        let mut rows = Vec::with_capacity(positions.len());
        for row in positions {
            let mut bits = 0u64;
            for &p in row {
                if p == 0 || p > cols {
                    return Err(Error::IndexOutOfRange {
                        index: p,
                        size: cols,
                    });
                }
                bits |= 1 << (p - 1);
            }
            rows.push(bits);
        }
        Self::from_rows(rows, cols)
    }

    pub fn to_positions(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|&r| (0..self.cols).filter(|&j| r >> j & 1 == 1).map(|j| j + 1).collect())
            .collect()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut out = BinaryMatrix::zero(self.cols, self.rows.len());
        for (i, &r) in self.rows.iter().enumerate() {
            for j in 0..self.cols {
                if r >> j & 1 == 1 {
                    out.rows[j] |= 1 << i;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows.len() != other.rows.len() || self.cols != other.cols {
            return Err(Error::Dimension("binary add".into()));
        }
        Ok(BinaryMatrix {
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect(),
            cols: self.cols,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows.len() {
            return Err(Error::Dimension(format!(
                "binary mul {}x{} by {}x{}",
                self.rows.len(),
                self.cols,
                other.rows.len(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    acc ^= other.rows[k];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Ok(BinaryMatrix {
            rows,
            cols: other.cols,
        })
    }

    /// Matrix-vector product; bit `j` of `x` is coordinate `j`.
    pub fn apply(&self, x: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &r)| acc | (((r & x).count_ones() as u64 & 1) << i))
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&mut self.rows.clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows.len(),
                cols: self.cols,
            });
        }
        let n = self.cols;
        let mut a = self.rows.clone();
        let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for c in 0..n {
            let p = (c..n).find(|&i| a[i] >> c & 1 == 1).ok_or(Error::Singular)?;
            a.swap(c, p);
            inv.swap(c, p);
            for i in 0..n {
                if i != c && a[i] >> c & 1 == 1 {
                    a[i] ^= a[c];
                    inv[i] ^= inv[c];
                }
            }
        }
        Ok(BinaryMatrix { rows: inv, cols: n })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows.len(),
                cols: self.cols,
            });
        }
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = BinaryMatrix::identity(self.cols);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Submatrix on the given (0-based) rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let mut out = BinaryMatrix::zero(rows.len(), cols.len());
        for (oi, &i) in rows.iter().enumerate() {
            if i >= self.rows.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    size: self.rows.len(),
                });
            }
            for (oj, &j) in cols.iter().enumerate() {
                if j >= self.cols {
                    return Err(Error::IndexOutOfRange {
                        index: j,
                        size: self.cols,
                    });
                }
                if self.get(i, j) {
                    out.rows[oi] |= 1 << oj;
                }
            }
        }
        Ok(out)
    }
}

/// Rank of a list of packed rows; the slice is used as scratch space.
pub fn rank_of_rows(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot = rows[i];
        if pivot == 0 {
            continue;
        }
        rank += 1;
        let low = pivot & pivot.wrapping_neg();
        for r in rows[i + 1..].iter_mut() {
            if *r & low != 0 {
                *r ^= pivot;
            }
        }
    }
    rank
}

/// A nonzero `x` (restricted to `col_mask`) with `rows[i] · x = 0` for every
/// row, if one exists.
pub fn kernel_vector(rows: &[u64], col_mask: u64) -> Option<u64> {
    let mut reduced: Vec<u64> = Vec::with_capacity(rows.len());
    let mut pivots: Vec<u32> = Vec::with_capacity(rows.len());
    for &r in rows {
        let mut r = r & col_mask;
        for (p, &pc) in reduced.iter().zip(&pivots) {
            if r >> pc & 1 == 1 {
                r ^= p;
            }
        }
        if r != 0 {
            let pc = r.trailing_zeros();
            for q in reduced.iter_mut() {
                if *q >> pc & 1 == 1 {
                    *q ^= r;
                }
            }
            reduced.push(r);
            pivots.push(pc);
        }
    }
    let pivot_mask = pivots.iter().fold(0u64, |m, &p| m | 1 << p);
    let free = col_mask & !pivot_mask;
    if free == 0 {
        return None;
    }
    let f = free.trailing_zeros();
    let mut x = 1u64 << f;
    for (p, &pc) in reduced.iter().zip(&pivots) {
        if p >> f & 1 == 1 {
            x |= 1 << pc;
        }
    }
    Some(x)
}
