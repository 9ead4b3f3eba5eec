//! XOR-count cost model.
//!
//! XOR(M) = Σ XOR(M_ij) + K·w, where K = Σ (k_i − 1) over rows with k_i
//! nonzero entries, and w is the word size (r for GF(2^r), m for m×m blocks).
//! Element costs come from one of three metrics:
//!
//! * d-XOR: weight of the multiplication matrix minus its size.
//! * s-XOR: fewest elementary column additions that, up to a row permutation,
//!   build the multiplication matrix. Computed exactly by BFS for r ≤ 4.
//! * catalog: stored values for the GF(2^8) elements and GL(8, F2) blocks that
//!   the shipped constructions use, where search is out of reach.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::construct::{gl8_c, gl8_c8};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{BinaryMatrix, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// s-XOR where computable, stored values where not, d-XOR otherwise.
    Default,
    SXor,
    DXor,
    Catalog,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(Metric::Default),
            "s-xor" | "sxor" => Ok(Metric::SXor),
            "d-xor" | "dxor" => Ok(Metric::DXor),
            "catalog" => Ok(Metric::Catalog),
            _ => Err(Error::Parse(format!("unknown metric {s:?}"))),
        }
    }
}

/// Cost of one element and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElementCost {
    pub xor: usize,
    pub metric: &'static str,
    /// Only an upper bound (d-XOR used in place of an unavailable metric).
    pub bound: bool,
}

impl ElementCost {
    fn exact(xor: usize, metric: &'static str) -> Self {
        ElementCost {
            xor,
            metric,
            bound: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryCost {
    pub row: usize,
    pub col: usize,
    pub xor: usize,
    pub metric: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub fixed_xor: usize,
    pub word_size: usize,
    /// Nonzero entries (1-based positions) with their costs.
    pub element_costs: Vec<EntryCost>,
    pub total: usize,
    pub metric: Metric,
    pub bound: bool,
}

impl CostReport {
    pub fn element_sum(&self) -> usize {
        self.element_costs.iter().map(|e| e.xor).sum()
    }

    /// `(1+2+1+2) + 4·4 = 22`: nonzero element costs in row order, then K·w.
    pub fn decomposition(&self) -> String {
        let parts: Vec<String> = self
            .element_costs
            .iter()
            .filter(|e| e.xor > 0)
            .map(|e| e.xor.to_string())
            .collect();
        let fixed = format!("{}·{}", self.fixed_xor, self.word_size);
        if parts.is_empty() {
            format!("{fixed} = {}", self.total)
        } else {
            format!("({}) + {fixed} = {}", parts.join("+"), self.total)
        }
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "| entry | XOR | metric |");
        let _ = writeln!(s, "|---|---|---|");
        for e in self.element_costs.iter().filter(|e| e.xor > 0) {
            let _ = writeln!(s, "| ({},{}) | {} | {} |", e.row, e.col, e.xor, e.metric);
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "fixed XOR K = {}, word size {}", self.fixed_xor, self.word_size);
        let _ = writeln!(s, "XOR = {}", self.decomposition());
        if self.bound {
            let _ = writeln!(s, "(upper bound: some entries costed by d-XOR)");
        }
        s
    }
}

/// K = Σ (k_i − 1).
pub fn fixed_xor(m: &Matrix) -> Result<usize> {
    let n = m.order();
    let mut k = 0;
    for i in 0..n {
        let ki = match m {
            Matrix::Field(a) => a.row(i).iter().filter(|&&v| v != 0).count(),
            Matrix::Block(b) => (0..n).filter(|&j| !b.get(i, j).is_zero()).count(),
        };
        if ki == 0 {
            return Err(Error::AllZeroRow(i + 1));
        }
        k += ki - 1;
    }
    Ok(k)
}

pub fn d_xor_binary(b: &BinaryMatrix) -> Result<usize> {
    if !b.is_square() {
        return Err(Error::NotSquare {
            rows: b.n_rows(),
            cols: b.n_cols(),
        });
    }
    if b.rank() < b.n_rows() {
        return Err(Error::Singular);
    }
    Ok(b.weight() - b.n_rows())
}

pub fn d_xor(field: &Field, e: u8) -> Result<usize> {
    if e == 0 {
        return Err(Error::ZeroInverse);
    }
    d_xor_binary(&field.mul_matrix(e))
}

// r×r binary matrices packed 4 bits per row; cosets of the row-permutation
// group are represented by their sorted rows.
fn pack(rows: &[u64]) -> u64 {
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    sorted.iter().enumerate().fold(0, |acc, (i, &r)| acc | r << (4 * i))
}

fn unpack(code: u64, r: usize) -> Vec<u64> {
    (0..r).map(|i| code >> (4 * i) & 0xf).collect()
}

/// Right multiplication by I + E_ij adds column i into column j.
fn add_column(rows: &[u64], i: usize, j: usize) -> Vec<u64> {
    rows.iter().map(|&row| row ^ ((row >> i & 1) << j)).collect()
}

struct CosetGraph {
    /// coset → (distance, parent coset, generator (i, j) used to reach it)
    nodes: HashMap<u64, (usize, u64, (usize, usize))>,
}

fn coset_graph(r: usize) -> &'static CosetGraph {
    static GRAPHS: [OnceLock<CosetGraph>; 5] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    GRAPHS[r].get_or_init(|| {
        let start = pack(BinaryMatrix::identity(r).rows());
        let mut nodes = HashMap::new();
        nodes.insert(start, (0, start, (0, 0)));
        let mut queue = VecDeque::from([start]);
        while let Some(code) = queue.pop_front() {
            let d = nodes[&code].0;
            let rows = unpack(code, r);
            for i in 0..r {
                for j in 0..r {
                    if i == j {
                        continue;
                    }
                    let next = pack(&add_column(&rows, i, j));
                    nodes.entry(next).or_insert_with(|| {
                        queue.push_back(next);
                        (d + 1, code, (i, j))
                    });
                }
            }
        }
        CosetGraph { nodes }
    })
}

fn check_bfs_size(r: usize) -> Result<()> {
    if r == 0 || r > 4 {
        return Err(Error::SizeGuard(format!("s-XOR search needs r ≤ 4, got {r}")));
    }
    Ok(())
}

/// Exact s-XOR of an invertible binary matrix of size ≤ 4.
pub fn s_xor_binary(b: &BinaryMatrix) -> Result<usize> {
    let r = b.n_rows();
    check_bfs_size(r)?;
    d_xor_binary(b)?;
    Ok(coset_graph(r).nodes[&pack(b.rows())].0)
}

pub fn s_xor(field: &Field, e: u8) -> Result<usize> {
    if e == 0 {
        return Err(Error::ZeroInverse);
    }
    check_bfs_size(field.r() as usize)?;
    s_xor_binary(&field.mul_matrix(e))
}

/// A shortest sequence of column additions (i, j), 0-based, whose product
/// (I+E_i1j1)·(I+E_i2j2)⋯ equals `b` up to a row permutation.
pub fn s_xor_factorization(b: &BinaryMatrix) -> Result<Vec<(usize, usize)>> {
    let r = b.n_rows();
    check_bfs_size(r)?;
    d_xor_binary(b)?;
    let g = coset_graph(r);
    let mut code = pack(b.rows());
    let mut steps = Vec::new();
    loop {
        let (d, parent, gen) = g.nodes[&code];
        if d == 0 {
            break;
        }
        steps.push(gen);
        code = parent;
    }
    steps.reverse();
    Ok(steps)
}

/// Stored s-XOR counts for GF(2^8) elements used by the shipped constructions.
pub fn catalog_xor(field: &Field, e: u8) -> Result<usize> {
    if e == 1 {
        return Ok(0);
    }
    if field.r() == 8 && field.modulus() == 0x1c3 && e != 0 {
        let table = [(1i64, 3usize), (2, 4), (-1, 3), (-2, 4)];
        if let Some(&(_, x)) = table.iter().find(|(k, _)| field.alpha_pow(*k) == e) {
            return Ok(x);
        }
    }
    Err(Error::MissingCatalogXor(format!("{e:#x} in {field}")))
}

fn stored_blocks() -> &'static Vec<(BinaryMatrix, usize)> {
    static TABLE: OnceLock<Vec<(BinaryMatrix, usize)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let c = gl8_c();
        let c8 = gl8_c8();
        let p = |m: &BinaryMatrix, e: i64| m.pow(e).expect("invertible");
        vec![
            (p(&c, 1), 1),
            (p(&c, -1), 1),
            (p(&c, 2), 2),
            (p(&c, -2), 2),
            (p(&c8, 1), 2),
            (p(&c8, -1), 2),
            (p(&c8, 2), 4),
            (p(&c8, -2), 4),
        ]
    })
}

/// Stored cost of a GL(8, F2) block from the C or C8 families.
pub fn catalog_block_xor(b: &BinaryMatrix) -> Result<usize> {
    if *b == BinaryMatrix::identity(b.n_rows()) {
        return Ok(0);
    }
    stored_blocks()
        .iter()
        .find(|(m, _)| m == b)
        .map(|&(_, x)| x)
        .ok_or_else(|| Error::MissingCatalogXor(format!("block {:?}", b.to_positions())))
}

pub fn element_cost(field: &Field, e: u8, metric: Metric) -> Result<ElementCost> {
    if e == 0 {
        return Err(Error::ZeroInverse);
    }
    if e == 1 {
        let label = match metric {
            Metric::DXor => "d-xor",
            Metric::Catalog => "catalog",
            _ => "s-xor",
        };
        return Ok(ElementCost::exact(0, label));
    }
    match metric {
        Metric::SXor => Ok(ElementCost::exact(s_xor(field, e)?, "s-xor")),
        Metric::DXor => Ok(ElementCost::exact(d_xor(field, e)?, "d-xor")),
        Metric::Catalog => Ok(ElementCost::exact(catalog_xor(field, e)?, "catalog")),
        Metric::Default => {
            if field.r() <= 4 {
                Ok(ElementCost::exact(s_xor(field, e)?, "s-xor"))
            } else if let Ok(x) = catalog_xor(field, e) {
                Ok(ElementCost::exact(x, "catalog"))
            } else {
                Ok(ElementCost {
                    xor: d_xor(field, e)?,
                    metric: "d-xor",
                    bound: true,
                })
            }
        }
    }
}

pub fn block_cost(b: &BinaryMatrix, metric: Metric) -> Result<ElementCost> {
    match metric {
        Metric::SXor => Ok(ElementCost::exact(s_xor_binary(b)?, "s-xor")),
        Metric::DXor => Ok(ElementCost::exact(d_xor_binary(b)?, "d-xor")),
        Metric::Catalog => Ok(ElementCost::exact(catalog_block_xor(b)?, "catalog")),
        Metric::Default => {
            if let Ok(x) = catalog_block_xor(b) {
                Ok(ElementCost::exact(x, "catalog"))
            } else if b.n_rows() <= 4 {
                Ok(ElementCost::exact(s_xor_binary(b)?, "s-xor"))
            } else {
                Ok(ElementCost {
                    xor: d_xor_binary(b)?,
                    metric: "d-xor",
                    bound: true,
                })
            }
        }
    }
}

pub fn matrix_cost(m: &Matrix, metric: Metric) -> Result<CostReport> {
    let n = m.order();
    let k = fixed_xor(m)?;
    let w = m.word_size();
    let mut entries = Vec::new();
    let mut bound = false;
    for i in 0..n {
        for j in 0..n {
            let c = match m {
                Matrix::Field(a) => {
                    let v = a.get(i, j);
                    if v == 0 {
                        continue;
                    }
                    element_cost(a.field(), v, metric)?
                }
                Matrix::Block(b) => {
                    let blk = b.get(i, j);
                    if blk.is_zero() {
                        continue;
                    }
                    block_cost(blk, metric)?
                }
            };
            bound |= c.bound;
            entries.push(EntryCost {
                row: i + 1,
                col: j + 1,
                xor: c.xor,
                metric: c.metric,
            });
        }
    }
    let total = entries.iter().map(|e| e.xor).sum::<usize>() + k * w;
    Ok(CostReport {
        fixed_xor: k,
        word_size: w,
        element_costs: entries,
        total,
        metric,
        bound,
    })
}

/// Cost of evaluating a product factor by factor: the sum of the factor costs.
pub fn composed_cost(factors: &[Matrix], metric: Metric) -> Result<usize> {
    factors
        .iter()
        .map(|f| matrix_cost(f, metric).map(|r| r.total))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{gdls, GdlsSpec, Permutation};
    use crate::linalg::{BlockMatrix, FieldMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn d_xor_examples() {
        let f = Field::gf16();
        assert_eq!(d_xor(&f, 1).unwrap(), 0);
        assert_eq!(d_xor(&f, 2).unwrap(), 1);
        assert_eq!(d_xor_binary(&gl8_c()).unwrap(), 1);
        assert!(d_xor(&f, 0).is_err());
        assert_eq!(d_xor_binary(&BinaryMatrix::zero(2, 2)), Err(Error::Singular));
    }

    #[test]
    fn s_xor_examples() {
        let f = Field::gf16();
        assert_eq!(s_xor(&f, 1).unwrap(), 0);
        assert_eq!(s_xor(&f, f.alpha_pow(1)).unwrap(), 1);
        assert_eq!(s_xor(&f, f.alpha_pow(-1)).unwrap(), 1);
        assert_eq!(s_xor(&f, f.alpha_pow(2)).unwrap(), 2);
        assert_eq!(s_xor(&f, f.alpha_pow(-2)).unwrap(), 2);
        assert!(s_xor(&Field::gf256(), 2).is_err());
        for e in 1..16u8 {
            assert!(s_xor(&f, e).unwrap() <= d_xor(&f, e).unwrap());
        }
    }

    #[test]
    fn bfs_covers_group() {
        // |GL(4,2)| / 4! = 20160 / 24
        assert_eq!(coset_graph(4).nodes.len(), 840);
        assert_eq!(coset_graph(3).nodes.len(), 168 / 6);
    }

    #[test]
    fn factorization_rebuilds_matrix() {
        let f = Field::gf16();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let e = rng.gen_range(1..16u8);
            let target = f.mul_matrix(e);
            let steps = s_xor_factorization(&target).unwrap();
            assert_eq!(steps.len(), s_xor(&f, e).unwrap());
            let mut acc = BinaryMatrix::identity(4);
            for (i, j) in steps {
                let mut g = BinaryMatrix::identity(4);
                g.set(i, j, true);
                acc = acc.mul(&g).unwrap();
            }
            let mut a = acc.rows().to_vec();
            let mut b = target.rows().to_vec();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn catalog_values() {
        let f = Field::gf256();
        assert_eq!(catalog_xor(&f, f.alpha_pow(1)).unwrap(), 3);
        assert_eq!(catalog_xor(&f, f.alpha_pow(2)).unwrap(), 4);
        assert_eq!(catalog_xor(&f, f.alpha_pow(-1)).unwrap(), 3);
        assert_eq!(catalog_xor(&f, f.alpha_pow(-2)).unwrap(), 4);
        assert_eq!(catalog_xor(&f, 1).unwrap(), 0);
        assert!(catalog_xor(&f, f.alpha_pow(3)).is_err());
        let e = element_cost(&f, f.alpha_pow(3), Metric::Default).unwrap();
        assert!(e.bound);
    }

    #[test]
    fn stored_block_values() {
        let c8 = gl8_c8();
        assert_eq!(catalog_block_xor(&c8).unwrap(), 2);
        assert_eq!(catalog_block_xor(&c8.pow(2).unwrap()).unwrap(), 4);
        assert_eq!(catalog_block_xor(&c8.pow(-1).unwrap()).unwrap(), 2);
        assert_eq!(catalog_block_xor(&gl8_c().pow(-2).unwrap()).unwrap(), 2);
        assert!(catalog_block_xor(&gl8_c().pow(3).unwrap()).is_err());
    }

    #[test]
    fn fixed_xor_examples() {
        let f = Field::gf16();
        let spec = GdlsSpec::parse(&f, "rho1=[2,3,4,1];d1=1,1,1,1;d2=0,1,0,1").unwrap();
        let b = Matrix::Field(gdls(&f, &spec).unwrap());
        assert_eq!(fixed_xor(&b).unwrap(), 2);
        assert_eq!(matrix_cost(&b, Metric::Default).unwrap().total, 8);
        let i = Matrix::Field(FieldMatrix::identity(&f, 4));
        assert_eq!(fixed_xor(&i).unwrap(), 0);
        let z = Matrix::Field(FieldMatrix::zero(&f, 2, 2));
        assert_eq!(fixed_xor(&z), Err(Error::AllZeroRow(1)));
    }

    #[test]
    fn permutation_matrices_are_free() {
        let f = Field::gf16();
        let p = Matrix::Field(Permutation::new(&[3, 1, 4, 2]).unwrap().field_matrix(&f));
        for metric in [Metric::Default, Metric::SXor, Metric::DXor] {
            assert_eq!(matrix_cost(&p, metric).unwrap().total, 0);
        }
        let pb = Matrix::Block(BlockMatrix::identity(3, 8));
        assert_eq!(matrix_cost(&pb, Metric::Catalog).unwrap().total, 0);
    }

    #[test]
    fn decomposition_format() {
        let f = Field::gf16();
        let a2 = GdlsSpec::parse(&f, "rho1=[5,1,2,3,4];rho2=[3,4,5,1,2];d1=1,1,1,1,1;d2=0,1,0,1,a")
            .unwrap();
        let m = Matrix::Field(gdls(&f, &a2).unwrap());
        let r = matrix_cost(&m, Metric::Default).unwrap();
        assert_eq!(r.total, 13);
        assert_eq!(r.decomposition(), "(1) + 3·4 = 13");
        assert_eq!(composed_cost(&[m.clone(), m], Metric::Default).unwrap(), 26);
    }
}
