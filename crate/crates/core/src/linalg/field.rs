//! Dense matrices over GF(2^r), stored row-major as raw element values.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix over {:?} [", self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:x}")).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl FieldMatrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&v) = data.iter().find(|&&v| !field.contains(v as u32)) {
            return Err(Error::ElementOutOfRange {
                value: v as u32,
                size: field.size() as u32,
            });
        }
        Ok(FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zero(field: &Field, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diagonal(field: &Field, diag: &[u8]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zero(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            if !field.contains(d as u32) {
                return Err(Error::ElementOutOfRange {
                    value: d as u32,
                    size: field.size() as u32,
                });
            }
            m.data[i * n + i] = d;
        }
        Ok(m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    /// Order of a square matrix (number of rows otherwise).
    pub fn order(&self) -> usize {
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        assert!(self.field.contains(v as u32), "value outside field");
        self.data[i * self.cols + j] = v;
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix add".into()));
        }
        Ok(FieldMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = vec![0u8; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(other.row(k)) {
                    *d ^= f.mul(a, b);
                }
            }
        }
        Ok(FieldMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: other.cols,
            data: out,
        })
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: u8) -> Self {
        let mut m = self.clone();
        for v in m.data.iter_mut() {
            *v = self.field.mul(*v, c);
        }
        m
    }

    /// `A^k` by repeated squaring.
    pub fn pow(&self, k: u64) -> Result<Self> {
        self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(&self.field, self.rows);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![0u8; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j);
            }
        }
        FieldMatrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        let mut scratch = self.data.clone();
        rank_in_place(&self.field, &mut scratch, self.rows, self.cols)
    }

    pub fn det(&self) -> Result<u8> {
        self.require_square()?;
        let n = self.rows;
        let f = &self.field;
        let mut a = self.data.clone();
        let mut det = 1u8;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| a[i * n + c] != 0) else {
                return Ok(0);
            };
            if p != c {
                for j in 0..n {
                    a.swap(c * n + j, p * n + j);
                }
            }
            let pivot = a[c * n + c];
            det = f.mul(det, pivot);
            let pinv = f.inv_raw(pivot);
            for i in c + 1..n {
                let factor = f.mul(a[i * n + c], pinv);
                if factor != 0 {
                    for j in c..n {
                        a[i * n + j] ^= f.mul(factor, a[c * n + j]);
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let f = &self.field;
        let mut a = self.data.clone();
        let mut inv = Self::identity(f, n).data;
        for c in 0..n {
            let p = (c..n).find(|&i| a[i * n + c] != 0).ok_or(Error::Singular)?;
            if p != c {
                for j in 0..n {
                    a.swap(c * n + j, p * n + j);
                    inv.swap(c * n + j, p * n + j);
                }
            }
            let pinv = f.inv_raw(a[c * n + c]);
            for j in 0..n {
                a[c * n + j] = f.mul(a[c * n + j], pinv);
                inv[c * n + j] = f.mul(inv[c * n + j], pinv);
            }
            for i in 0..n {
                let factor = a[i * n + c];
                if i != c && factor != 0 {
                    for j in 0..n {
                        a[i * n + j] ^= f.mul(factor, a[c * n + j]);
                        inv[i * n + j] ^= f.mul(factor, inv[c * n + j]);
                    }
                }
            }
        }
        Ok(FieldMatrix {
            field: f.clone(),
            rows: n,
            cols: n,
            data: inv,
        })
    }

    /// Entries at the given 0-based rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &i in rows {
            if i >= self.rows {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    size: self.rows,
                });
            }
        }
        for &j in cols {
            if j >= self.cols {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    size: self.cols,
                });
            }
        }
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j));
            }
        }
        Ok(FieldMatrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: cols.len(),
            data,
        })
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u8))
    }

    pub fn is_involutory(&self) -> bool {
        self.is_square() && self.mul(self).map(|m| m.is_identity()).unwrap_or(false)
    }

    pub fn is_orthogonal(&self) -> bool {
        self.is_square()
            && self
                .mul(&self.transpose())
                .map(|m| m.is_identity())
                .unwrap_or(false)
    }
}

/// Rank of a row-major `rows`×`cols` array; `a` is destroyed.
pub(crate) fn rank_in_place(f: &Field, a: &mut [u8], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if p != rank {
            for j in c..cols {
                a.swap(rank * cols + j, p * cols + j);
            }
        }
        let pinv = f.inv_raw(a[rank * cols + c]);
        for i in rank + 1..rows {
            let factor = f.mul(a[i * cols + c], pinv);
            if factor != 0 {
                for j in c..cols {
                    a[i * cols + j] ^= f.mul(factor, a[rank * cols + j]);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A nonzero vector `x` with `A·x = 0`, if the columns of `A` are dependent.
pub(crate) fn kernel_in_place(f: &Field, a: &mut [u8], rows: usize, cols: usize) -> Option<Vec<u8>> {
    // reduced row echelon form
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        for j in 0..cols {
            a.swap(r * cols + j, p * cols + j);
        }
        let pinv = f.inv_raw(a[r * cols + c]);
        for j in 0..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], pinv);
        }
        for i in 0..rows {
            let factor = a[i * cols + c];
            if i != r && factor != 0 {
                for j in 0..cols {
                    a[i * cols + j] ^= f.mul(factor, a[r * cols + j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![0u8; cols];
    x[free] = 1;
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = a[i * cols + free];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> Field {
        Field::gf16()
    }

    fn remark_matrix(f: &Field) -> FieldMatrix {
        // Circ(0, α, 1, α+1)
        FieldMatrix::from_rows(
            f,
            &[vec![0, 2, 1, 3], vec![3, 0, 2, 1], vec![1, 3, 0, 2], vec![2, 1, 3, 0]],
        )
        .unwrap()
    }

    #[test]
    fn identity_product() {
        let f = gf16();
        let a = remark_matrix(&f);
        assert_eq!(a.mul(&FieldMatrix::identity(&f, 4)).unwrap(), a);
        assert_eq!(a.pow(1).unwrap(), a);
        assert!(a.pow(0).unwrap().is_identity());
    }

    #[test]
    fn singular_example() {
        let f = gf16();
        let a = remark_matrix(&f);
        assert_eq!(a.rank(), 3);
        assert_eq!(a.det().unwrap(), 0);
        assert_eq!(a.inverse(), Err(Error::Singular));
        assert_eq!(a.nonzero_count(), 12);
        let sub = a.submatrix(&[2, 3], &[0, 1]).unwrap();
        assert_eq!(sub.to_rows(), vec![vec![1, 3], vec![2, 1]]);
    }

    #[test]
    fn det_examples() {
        let f = gf16();
        let m = FieldMatrix::from_rows(&f, &[vec![1, 3], vec![2, 1]]).unwrap();
        // 1·1 + (α+1)·α = 1 + α² + α
        assert_eq!(m.det().unwrap(), 0x7);
        let d = FieldMatrix::diagonal(&f, &[2, 3, 9, 0xd]).unwrap();
        let expected = [2u8, 3, 9, 0xd].iter().fold(1, |acc, &x| f.mul(acc, x));
        assert_eq!(d.det().unwrap(), expected);
        assert_eq!(FieldMatrix::identity(&f, 5).det().unwrap(), 1);
    }

    #[test]
    fn submatrix_of_identity() {
        let f = gf16();
        let i4 = FieldMatrix::identity(&f, 4);
        let s = i4.submatrix(&[0, 1], &[2, 3]).unwrap();
        assert_eq!(s.nonzero_count(), 0);
        assert_eq!(i4.submatrix(&[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap(), i4);
        assert!(i4.submatrix(&[4], &[0]).is_err());
    }

    #[test]
    fn involutory_circulant() {
        let f = gf16();
        let c = FieldMatrix::from_rows(
            &f,
            &[vec![0, 1, 1, 1], vec![1, 0, 1, 1], vec![1, 1, 0, 1], vec![1, 1, 1, 0]],
        )
        .unwrap();
        assert!(c.is_involutory());
        assert!(!remark_matrix(&f).is_involutory());
    }

    #[test]
    fn kernel_vector_is_in_kernel() {
        let f = gf16();
        let a = remark_matrix(&f);
        let x = kernel_in_place(&f, &mut a.data.clone(), 4, 4).unwrap();
        let col = FieldMatrix::new(&f, 4, 1, x).unwrap();
        assert_eq!(a.mul(&col).unwrap().nonzero_count(), 0);
        assert!(kernel_in_place(&f, &mut FieldMatrix::identity(&f, 3).data.clone(), 3, 3).is_none());
    }
}
