//! Matrices whose entries are m×m binary matrices (m ≤ 8).

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{BinaryMatrix, FieldMatrix};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockMatrix {
    n: usize,
    m: usize,
    blocks: Vec<BinaryMatrix>,
}

impl fmt::Debug for BlockMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BlockMatrix n={} m={} [", self.n, self.m)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let b = self.get(i, j);
                    if b.is_zero() {
                        "0".to_string()
                    } else {
                        format!("{:?}", b.to_positions())
                    }
                })
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl BlockMatrix {
    pub fn new(n: usize, m: usize, blocks: Vec<BinaryMatrix>) -> Result<Self> {
        if !(1..=8).contains(&m) {
            return Err(Error::Dimension(format!("block size {m} outside 1..=8")));
        }
        if blocks.len() != n * n {
            return Err(Error::Dimension(format!("{} blocks for order {n}", blocks.len())));
        }
        if blocks.iter().any(|b| b.n_rows() != m || b.n_cols() != m) {
            return Err(Error::Dimension(format!("every block must be {m}x{m}")));
        }
        Ok(BlockMatrix { n, m, blocks })
    }

    pub fn from_rows(m: usize, rows: Vec<Vec<BinaryMatrix>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    pub fn zero(n: usize, m: usize) -> Self {
        BlockMatrix {
            n,
            m,
            blocks: vec![BinaryMatrix::zero(m, m); n * n],
        }
    }

    pub fn identity(n: usize, m: usize) -> Self {
        let mut b = Self::zero(n, m);
        for i in 0..n {
            b.blocks[i * n + i] = BinaryMatrix::identity(m);
        }
        b
    }

    /// Replaces every field entry by its multiplication matrix.
    pub fn from_field(a: &FieldMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.n_rows(),
                cols: a.n_cols(),
            });
        }
        let f = a.field();
        Self::new(
            a.order(),
            f.r() as usize,
            a.data().iter().map(|&v| f.mul_matrix(v)).collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn block_size(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &BinaryMatrix {
        &self.blocks[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, b: BinaryMatrix) {
        assert!(b.n_rows() == self.m && b.n_cols() == self.m, "block shape");
        self.blocks[i * self.n + j] = b;
    }

    pub fn blocks(&self) -> &[BinaryMatrix] {
        &self.blocks
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::Dimension(format!(
                "block mul n={} m={} by n={} m={}",
                self.n, self.m, other.n, other.m
            )));
        }
        let n = self.n;
        let mut out = Self::zero(n, self.m);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b)?;
                    out.blocks[i * n + j] = out.blocks[i * n + j].add(&prod)?;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n, self.m);
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

    /// Transpose of the expanded binary matrix, kept in block form.
    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n, self.m);
        for i in 0..n {
            for j in 0..n {
                out.blocks[j * n + i] = self.get(i, j).transpose();
            }
        }
        out
    }

    /// Flattens to an (nm)×(nm) binary matrix; block (i,j) sits at rows
    /// i·m..(i+1)·m and columns j·m..(j+1)·m.
    pub fn expand(&self) -> Result<BinaryMatrix> {
        let (n, m) = (self.n, self.m);
        if n * m > 64 {
            return Err(Error::SizeGuard(format!("{n}x{n} blocks of size {m} exceed 64 bits")));
        }
        let mut rows = vec![0u64; n * m];
        for i in 0..n {
            for j in 0..n {
                for (r, &bits) in self.get(i, j).rows().iter().enumerate() {
                    rows[i * m + r] |= bits << (j * m);
                }
            }
        }
        BinaryMatrix::from_rows(rows, n * m)
    }

    /// Number of nonzero blocks.
    pub fn nonzero_count(&self) -> usize {
        self.blocks.iter().filter(|b| !b.is_zero()).count()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.m)
    }

    pub fn is_involutory(&self) -> bool {
        self.mul(self).map(|p| p.is_identity()).unwrap_or(false)
    }

    pub fn is_orthogonal(&self) -> bool {
        self.mul(&self.transpose())
            .map(|p| p.is_identity())
            .unwrap_or(false)
    }
}
