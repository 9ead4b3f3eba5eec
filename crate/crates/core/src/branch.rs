//! Differential and linear branch numbers, and the MDS / NMDS / k-NMDS
//! predicates for field and block matrices.
//!
//! β_d(M) is found as the smallest v = s + n − t such that some t rows of M
//! restricted to some s columns have rank below s: a kernel vector x of that
//! submatrix has w(x) ≤ s and w(Mx) ≤ n − t. Values of v are tried in
//! increasing order, so the first hit is exact and its kernel vector is a
//! witness.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel_in_place, kernel_vector, rank_in_place, rank_of_rows};
use crate::linalg::{BlockMatrix, FieldMatrix, Matrix};

/// Branch numbers with input vectors attaining them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchReport {
    pub beta_d: usize,
    pub beta_l: usize,
    pub witness_d: Vec<u8>,
    pub witness_l: Vec<u8>,
}

/// Why a matrix failed (or passed) the NMDS test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Too few nonzero entries, or two zeros sharing a row or column.
    ZeroPattern { nonzero: usize },
    /// A rank-deficient submatrix (1-based indices).
    Submatrix { rows: Vec<usize>, cols: Vec<usize> },
    /// An input whose weight plus output weight is below n.
    Codeword { input: Vec<u8>, weight: usize },
    /// The matrix is MDS, which excludes NMDS.
    Mds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NmdsVerdict {
    pub is_mds: bool,
    pub is_nmds: bool,
    pub certificate: Option<Certificate>,
}

/// Full verdict in the CLI's JSON shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub beta_d: usize,
    pub beta_l: usize,
    pub mds: bool,
    pub nmds: bool,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub differential: Vec<String>,
    pub linear: Vec<String>,
}

pub(crate) fn all_combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

type CombTable = Vec<Vec<Vec<Vec<usize>>>>;

/// k-subsets of {0..n} in lexicographic order (cached for n ≤ 8).
fn combinations(n: usize, k: usize) -> std::borrow::Cow<'static, [Vec<usize>]> {
    static TABLE: OnceLock<CombTable> = OnceLock::new();
    if n <= 8 {
        let t = TABLE.get_or_init(|| {
            (0..=8)
                .map(|n| (0..=n).map(|k| all_combinations(n, k)).collect())
                .collect()
        });
        if k > n {
            return std::borrow::Cow::Owned(Vec::new());
        }
        std::borrow::Cow::Borrowed(&t[n][k])
    } else {
        std::borrow::Cow::Owned(all_combinations(n, k))
    }
}

/// What the subset-rank scan needs from a matrix.
trait Scan {
    fn n(&self) -> usize;
    /// Columns `s` of the rows `t` submatrix are linearly dependent.
    fn deficient(&self, t: &[usize], s: &[usize]) -> bool;
    /// Full-length input supported on `s` that the rows `t` annihilate.
    fn kernel(&self, t: &[usize], s: &[usize]) -> Vec<u8>;
}

struct FieldScan<'a>(&'a FieldMatrix);

impl Scan for FieldScan<'_> {
    fn n(&self) -> usize {
        self.0.order()
    }

    fn deficient(&self, t: &[usize], s: &[usize]) -> bool {
        if t.len() < s.len() {
            return true;
        }
        let mut buf = [0u8; 64];
        let mut idx = 0;
        for &i in t {
            let row = self.0.row(i);
            for &j in s {
                buf[idx] = row[j];
                idx += 1;
            }
        }
        rank_in_place(self.0.field(), &mut buf[..idx], t.len(), s.len()) < s.len()
    }

    fn kernel(&self, t: &[usize], s: &[usize]) -> Vec<u8> {
        let mut buf: Vec<u8> = t
            .iter()
            .flat_map(|&i| s.iter().map(move |&j| self.0.get(i, j)))
            .collect();
        let local = kernel_in_place(self.0.field(), &mut buf, t.len(), s.len())
            .expect("deficient submatrix has a kernel");
        let mut x = vec![0u8; self.n()];
        for (&j, v) in s.iter().zip(local) {
            x[j] = v;
        }
        x
    }
}

struct BlockScan {
    n: usize,
    m: usize,
    rows: Vec<u64>,
}

impl BlockScan {
    fn new(b: &BlockMatrix) -> Result<Self> {
        Ok(BlockScan {
            n: b.order(),
            m: b.block_size(),
            rows: b.expand()?.rows().to_vec(),
        })
    }

    fn col_mask(&self, s: &[usize]) -> u64 {
        let block = (1u64 << self.m) - 1;
        s.iter().fold(0, |acc, &j| acc | block << (j * self.m))
    }

    fn sub_rows(&self, t: &[usize], mask: u64) -> Vec<u64> {
        t.iter()
            .flat_map(|&i| self.rows[i * self.m..(i + 1) * self.m].iter().map(move |r| r & mask))
            .collect()
    }
}

impl Scan for BlockScan {
    fn n(&self) -> usize {
        self.n
    }

    fn deficient(&self, t: &[usize], s: &[usize]) -> bool {
        if t.len() < s.len() {
            return true;
        }
        let mut rows = self.sub_rows(t, self.col_mask(s));
        rank_of_rows(&mut rows) < s.len() * self.m
    }

    fn kernel(&self, t: &[usize], s: &[usize]) -> Vec<u8> {
        let mask = self.col_mask(s);
        let x = kernel_vector(&self.sub_rows(t, mask), mask).expect("deficient submatrix");
        let block = (1u64 << self.m) - 1;
        (0..self.n).map(|j| (x >> (j * self.m) & block) as u8).collect()
    }
}

/// Smallest v ≤ `max_v` with a deficient (t, s) pair, plus a witness.
fn scan<S: Scan>(m: &S, max_v: usize) -> Option<(usize, Vec<u8>)> {
    let n = m.n();
    for v in 1..=max_v {
        for s in 1..=n {
            let Some(t) = (s + n).checked_sub(v) else {
                continue;
            };
            if t > n {
                continue;
            }
            for cols in combinations(n, s).iter() {
                for rows in combinations(n, t).iter() {
                    if m.deficient(rows, cols) {
                        return Some((v, m.kernel(rows, cols)));
                    }
                }
            }
        }
    }
    None
}

fn check_square(m: &FieldMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.n_rows(),
            cols: m.n_cols(),
        })
    }
}

fn differential_field(m: &FieldMatrix) -> (usize, Vec<u8>) {
    scan(&FieldScan(m), m.order() + 1).expect("v = n+1 always hits")
}

fn differential_block(b: &BlockMatrix) -> Result<(usize, Vec<u8>)> {
    Ok(scan(&BlockScan::new(b)?, b.order() + 1).expect("v = n+1 always hits"))
}

/// β_d and a minimizing input.
pub fn branch_differential(m: &Matrix) -> Result<(usize, Vec<u8>)> {
    match m {
        Matrix::Field(f) => {
            check_square(f)?;
            Ok(differential_field(f))
        }
        Matrix::Block(b) => differential_block(b),
    }
}

/// β_l, i.e. β_d of the transpose.
pub fn branch_linear(m: &Matrix) -> Result<(usize, Vec<u8>)> {
    branch_differential(&m.transpose())
}

pub fn branch_numbers(m: &Matrix) -> Result<BranchReport> {
    let (beta_d, witness_d) = branch_differential(m)?;
    let (beta_l, witness_l) = branch_linear(m)?;
    Ok(BranchReport {
        beta_d,
        beta_l,
        witness_d,
        witness_l,
    })
}

/// Number of nonzero coordinates of `M·x`.
pub fn output_weight(m: &Matrix, x: &[u8]) -> Result<usize> {
    match m {
        Matrix::Field(a) => {
            let f = a.field();
            Ok((0..a.n_rows())
                .filter(|&i| {
                    a.row(i)
                        .iter()
                        .zip(x)
                        .fold(0u8, |acc, (&e, &v)| acc ^ f.mul(e, v))
                        != 0
                })
                .count())
        }
        Matrix::Block(b) => {
            let e = b.expand()?;
            let bm = b.block_size();
            let packed = x
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &v)| acc | (v as u64) << (j * bm));
            let y = e.apply(packed);
            let block = (1u64 << bm) - 1;
            Ok((0..b.order()).filter(|&i| y >> (i * bm) & block != 0).count())
        }
    }
}

const BRUTE_LIMIT: u64 = 1 << 24;

fn brute_field_differential(a: &FieldMatrix) -> (usize, Vec<u8>) {
    let n = a.order();
    let f = a.field();
    let q = f.size();
    let cols: Vec<Vec<u8>> = (0..n).map(|j| (0..n).map(|i| a.get(i, j)).collect()).collect();
    let mut best = (usize::MAX, Vec::new());
    // inputs scaled so that the first nonzero coordinate is 1
    for lead in 0..n {
        let free = n - lead - 1;
        let total = q.pow(free as u32);
        let mut x = vec![0u8; n];
        x[lead] = 1;
        for idx in 0..total {
            let mut rest = idx;
            for j in lead + 1..n {
                x[j] = (rest % q) as u8;
                rest /= q;
            }
            let mut y = vec![0u8; n];
            for (j, &xj) in x.iter().enumerate() {
                if xj == 0 {
                    continue;
                }
                for (yi, &c) in y.iter_mut().zip(&cols[j]) {
                    *yi ^= f.mul(c, xj);
                }
            }
            let w = x.iter().filter(|&&v| v != 0).count() + y.iter().filter(|&&v| v != 0).count();
            if w < best.0 {
                best = (w, x.clone());
            }
        }
    }
    best
}

fn brute_block_differential(b: &BlockMatrix) -> Result<(usize, Vec<u8>)> {
    let e = b.expand()?;
    let (n, m) = (b.order(), b.block_size());
    let block = (1u64 << m) - 1;
    let wt = |v: u64| (0..n).filter(|&i| v >> (i * m) & block != 0).count();
    let mut best = (usize::MAX, 0u64);
    for x in 1..(1u64 << (n * m)) {
        let w = wt(x) + wt(e.apply(x));
        if w < best.0 {
            best = (w, x);
        }
    }
    let x = (0..n).map(|j| (best.1 >> (j * m) & block) as u8).collect();
    Ok((best.0, x))
}

/// Branch numbers by enumerating every input. Only for small spaces:
/// (2^r)^n ≤ 2^24 for fields, 2^(nm) ≤ 2^24 for blocks.
pub fn branch_bruteforce(m: &Matrix) -> Result<BranchReport> {
    let space = match m {
        Matrix::Field(a) => {
            check_square(a)?;
            (a.field().size() as u64).checked_pow(a.order() as u32)
        }
        Matrix::Block(b) => 1u64.checked_shl((b.order() * b.block_size()) as u32),
    };
    match space {
        Some(s) if s <= BRUTE_LIMIT => {}
        _ => {
            return Err(Error::SizeGuard(format!(
                "input space of order-{} matrix exceeds 2^24",
                m.order()
            )))
        }
    }
    let d = |m: &Matrix| match m {
        Matrix::Field(a) => Ok(brute_field_differential(a)),
        Matrix::Block(b) => brute_block_differential(b),
    };
    let (beta_d, witness_d) = d(m)?;
    let (beta_l, witness_l) = d(&m.transpose())?;
    Ok(BranchReport {
        beta_d,
        beta_l,
        witness_d,
        witness_l,
    })
}

/// Every square submatrix nonsingular.
pub fn is_mds(m: &Matrix) -> Result<bool> {
    match m {
        Matrix::Field(a) => {
            check_square(a)?;
            Ok(mds_field(a))
        }
        Matrix::Block(b) => {
            let n = b.order();
            let (bd, _) = differential_block(b)?;
            if bd != n + 1 {
                return Ok(false);
            }
            Ok(differential_block(&b.transpose())?.0 == n + 1)
        }
    }
}

fn mds_field(a: &FieldMatrix) -> bool {
    let n = a.order();
    if a.data().contains(&0) {
        return false;
    }
    let sc = FieldScan(a);
    (2..=n).all(|g| {
        let subsets = combinations(n, g);
        subsets
            .iter()
            .all(|rows| subsets.iter().all(|cols| !sc.deficient(rows, cols)))
    })
}

fn zero_pattern_ok(a: &FieldMatrix) -> bool {
    let n = a.order();
    if a.nonzero_count() + n < n * n {
        return false;
    }
    let row_ok = (0..n).all(|i| a.row(i).iter().filter(|&&v| v == 0).count() <= 1);
    let col_ok = (0..n).all(|j| (0..n).filter(|&i| a.get(i, j) == 0).count() <= 1);
    row_ok && col_ok
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// Field case: every (g+1)×g and g×(g+1) submatrix has rank g, and M is not MDS.
fn nmds_field(a: &FieldMatrix) -> NmdsVerdict {
    let n = a.order();
    let fail = |c| NmdsVerdict {
        is_mds: false,
        is_nmds: false,
        certificate: Some(c),
    };
    if n < 2 {
        let mds = mds_field(a);
        return NmdsVerdict {
            is_mds: mds,
            is_nmds: false,
            certificate: Some(if mds {
                Certificate::Mds
            } else {
                Certificate::ZeroPattern { nonzero: 0 }
            }),
        };
    }
    if !zero_pattern_ok(a) {
        return fail(Certificate::ZeroPattern {
            nonzero: a.nonzero_count(),
        });
    }
    let sc = FieldScan(a);
    let at = a.transpose();
    let sct = FieldScan(&at);
    for g in 1..n {
        let small = combinations(n, g);
        let big = combinations(n, g + 1);
        for cols in small.iter() {
            for rows in big.iter() {
                if sc.deficient(rows, cols) {
                    return fail(Certificate::Submatrix {
                        rows: one_based(rows),
                        cols: one_based(cols),
                    });
                }
                // g×(g+1) of M is the transpose of a (g+1)×g of M^T
                if sct.deficient(rows, cols) {
                    return fail(Certificate::Submatrix {
                        rows: one_based(cols),
                        cols: one_based(rows),
                    });
                }
            }
        }
    }
    if mds_field(a) {
        return NmdsVerdict {
            is_mds: true,
            is_nmds: false,
            certificate: Some(Certificate::Mds),
        };
    }
    NmdsVerdict {
        is_mds: false,
        is_nmds: true,
        certificate: None,
    }
}

fn nmds_block(b: &BlockMatrix) -> Result<NmdsVerdict> {
    let n = b.order();
    let (bd, wd) = differential_block(b)?;
    if bd < n {
        return Ok(NmdsVerdict {
            is_mds: false,
            is_nmds: false,
            certificate: Some(Certificate::Codeword {
                input: wd,
                weight: bd,
            }),
        });
    }
    let (bl, wl) = differential_block(&b.transpose())?;
    if bl < n {
        return Ok(NmdsVerdict {
            is_mds: false,
            is_nmds: false,
            certificate: Some(Certificate::Codeword {
                input: wl,
                weight: bl,
            }),
        });
    }
    let mds = bd == n + 1 && bl == n + 1;
    Ok(NmdsVerdict {
        is_mds: mds,
        is_nmds: !mds,
        certificate: mds.then_some(Certificate::Mds),
    })
}

pub fn is_nmds(m: &Matrix) -> Result<NmdsVerdict> {
    match m {
        Matrix::Field(a) => {
            check_square(a)?;
            Ok(nmds_field(a))
        }
        Matrix::Block(b) => nmds_block(b),
    }
}

/// Fast yes/no NMDS test for field matrices, used by the search loops.
pub fn field_is_nmds(a: &FieldMatrix) -> bool {
    nmds_field(a).is_nmds
}

/// NMDS verdict for B^k.
pub fn is_k_nmds(b: &Matrix, k: u64) -> Result<NmdsVerdict> {
    if k == 0 {
        return Err(Error::InvalidSpec("k must be positive".into()));
    }
    is_nmds(&b.pow(k)?)
}

fn format_vector(m: &Matrix, x: &[u8]) -> Vec<String> {
    match m {
        Matrix::Field(a) => x.iter().map(|&v| a.field().format_element(v)).collect(),
        Matrix::Block(_) => x.iter().map(|v| format!("{v:#x}")).collect(),
    }
}

/// Branch numbers, MDS and NMDS status together.
pub fn verdict(m: &Matrix) -> Result<Verdict> {
    let report = branch_numbers(m)?;
    let n = m.order();
    let mds = match m {
        Matrix::Field(a) => mds_field(a),
        Matrix::Block(_) => report.beta_d == n + 1 && report.beta_l == n + 1,
    };
    Ok(Verdict {
        beta_d: report.beta_d,
        beta_l: report.beta_l,
        mds,
        nmds: !mds && report.beta_d == n && report.beta_l == n,
        witness: Witness {
            differential: format_vector(m, &report.witness_d),
            linear: format_vector(m, &report.witness_l),
        },
    })
}
