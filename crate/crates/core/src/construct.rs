//! Permutations and the structured matrix families: DLS, GDLS, circulant,
//! left-circulant, Toeplitz, Hankel, Hadamard and companion matrices.
//!
//! Permutations are written 1-based in one-line notation at the boundary and
//! stored 0-based. The permutation matrix of ρ has a 1 at (ρ(j), j), so it
//! sends e_j to e_ρ(j), and `matrix(p.compose(q)) = matrix(p)·matrix(q)`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{BinaryMatrix, FieldMatrix};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Permutation {
    /// From 1-based one-line notation.
    pub fn new(images: &[usize]) -> Result<Self> {
        if images.iter().any(|&i| i == 0) {
            return Err(Error::InvalidPermutation(format!("{images:?} is not 1-based")));
        }
        Self::from_zero_based(images.iter().map(|i| i - 1).collect())
    }

    pub fn from_zero_based(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                let one: Vec<usize> = images.iter().map(|x| x + 1).collect();
                return Err(Error::InvalidPermutation(format!("{one:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// [2, 3, …, n, 1].
    pub fn shift(n: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    /// [n, 1, 2, …, n−1].
    pub fn shift_back(n: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| (i + n - 1) % n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of the 0-based point `k`.
    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    /// `self · other`, i.e. k ↦ self(other(k)).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::InvalidPermutation(format!(
                "composing sizes {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&k| self.images[k]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (k, &i) in self.images.iter().enumerate() {
            inv[i] = k;
        }
        Permutation { images: inv }
    }

    pub fn field_matrix(&self, field: &Field) -> FieldMatrix {
        let n = self.len();
        let mut m = FieldMatrix::zero(field, n, n);
        for j in 0..n {
            m.set(self.images[j], j, 1);
        }
        m
    }

    pub fn binary_matrix(&self) -> BinaryMatrix {
        let n = self.len();
        let mut m = BinaryMatrix::zero(n, n);
        for j in 0..n {
            m.set(self.images[j], j, true);
        }
        m
    }

    pub fn is_derangement(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &i)| k != i)
    }

    /// Cycles of length ≥ 2, each starting at its smallest point (0-based).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut k = self.images[start];
            while k != start {
                seen[k] = true;
                cyc.push(k);
                k = self.images[k];
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Cycle lengths in decreasing order, fixed points included as 1s.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat(1).take(self.len() - moved));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn is_n_cycle(&self) -> bool {
        let n = self.len();
        n > 0 && self.cycle_type() == [n]
    }

    pub fn are_conjugate(&self, other: &Self) -> bool {
        self.len() == other.len() && self.cycle_type() == other.cycle_type()
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// `[3,4,2,1]` or `3,4,2,1`, 1-based.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let images = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad permutation {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(&images)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::new(&v).map_err(serde::de::Error::custom)
    }
}

/// Fixed-point-free permutations of size n in lexicographic order.
pub fn derangements(n: usize) -> impl Iterator<Item = Permutation> {
    permutations(n).filter(Permutation::is_derangement)
}

/// All permutations of size n in lexicographic order.
pub fn permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut next = Some((0..n).collect::<Vec<usize>>());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut a = cur.clone();
        // standard next-permutation step
        if let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) {
            let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
            a.swap(i - 1, j);
            a[i..].reverse();
            next = Some(a);
        }
        Some(Permutation { images: cur })
    })
}

fn check_len(what: &str, len: usize, n: usize) -> Result<()> {
    if len != n {
        return Err(Error::InvalidSpec(format!("{what} has length {len}, expected {n}")));
    }
    Ok(())
}

/// DLS(ρ; D1, D2) = P·D1 + D2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlsSpec {
    pub rho: Permutation,
    pub d1: Vec<u8>,
    pub d2: Vec<u8>,
}

impl DlsSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.rho.len();
        check_len("d1", self.d1.len(), n)?;
        check_len("d2", self.d2.len(), n)?;
        if !self.rho.is_derangement() {
            return Err(Error::InvalidSpec(format!("{} has a fixed point", self.rho)));
        }
        if self.d1.contains(&0) {
            return Err(Error::InvalidSpec("d1 must be nonsingular".into()));
        }
        Ok(())
    }

    /// As a GDLS with ρ2 = identity.
    pub fn to_gdls(&self) -> GdlsSpec {
        GdlsSpec {
            rho1: self.rho.clone(),
            rho2: Permutation::identity(self.rho.len()),
            d1: self.d1.clone(),
            d2: self.d2.clone(),
        }
    }

    /// Parses `rho=[3,4,2,1];d1=a,1,1,1;d2=1,0,a^2,0`.
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let kv = parse_kv(s)?;
        let spec = DlsSpec {
            rho: kv_get(&kv, "rho")?.parse()?,
            d1: parse_diag(field, kv_get(&kv, "d1")?)?,
            d2: parse_diag(field, kv_get(&kv, "d2")?)?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// GDLS(ρ1, ρ2; D1, D2) = P1·D1 + P2·D2 with ρ1(k) ≠ ρ2(k) for every k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdlsSpec {
    pub rho1: Permutation,
    pub rho2: Permutation,
    pub d1: Vec<u8>,
    pub d2: Vec<u8>,
}

impl GdlsSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.rho1.len();
        check_len("rho2", self.rho2.len(), n)?;
        check_len("d1", self.d1.len(), n)?;
        check_len("d2", self.d2.len(), n)?;
        if let Some(k) = (0..n).find(|&k| self.rho1.apply(k) == self.rho2.apply(k)) {
            return Err(Error::InvalidSpec(format!(
                "rho1 and rho2 agree at position {}",
                k + 1
            )));
        }
        if self.d1.contains(&0) {
            return Err(Error::InvalidSpec("d1 must be nonsingular".into()));
        }
        Ok(())
    }

    /// Parses `rho1=[..];rho2=[..];d1=..;d2=..`; `rho2` defaults to the identity.
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let kv = parse_kv(s)?;
        let rho1: Permutation = kv_get(&kv, "rho1")?.parse()?;
        let rho2 = match kv.iter().find(|(k, _)| k == "rho2") {
            Some((_, v)) => v.parse()?,
            None => Permutation::identity(rho1.len()),
        };
        let spec = GdlsSpec {
            rho1,
            rho2,
            d1: parse_diag(field, kv_get(&kv, "d1")?)?,
            d2: parse_diag(field, kv_get(&kv, "d2")?)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Number of nonzero entries of D2, which is the fixed XOR of the matrix.
    pub fn fixed_xor(&self) -> usize {
        self.d2.iter().filter(|&&v| v != 0).count()
    }
}

fn parse_kv(s: &str) -> Result<Vec<(String, String)>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in {p:?}")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn kv_get<'a>(kv: &'a [(String, String)], key: &str) -> Result<&'a str> {
    kv.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| Error::Parse(format!("missing {key}")))
}

/// Comma-separated field elements, e.g. `a,1,0,a^-2`.
pub fn parse_diag(field: &Field, s: &str) -> Result<Vec<u8>> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|t| field.parse_element(t))
        .collect()
}

pub fn dls(field: &Field, spec: &DlsSpec) -> Result<FieldMatrix> {
    spec.validate()?;
    let n = spec.rho.len();
    let mut m = FieldMatrix::zero(field, n, n);
    for j in 0..n {
        m.set(spec.rho.apply(j), j, spec.d1[j]);
        m.set(j, j, spec.d2[j]);
    }
    Ok(m)
}

pub fn gdls(field: &Field, spec: &GdlsSpec) -> Result<FieldMatrix> {
    spec.validate()?;
    let n = spec.rho1.len();
    let mut m = FieldMatrix::zero(field, n, n);
    for j in 0..n {
        m.set(spec.rho1.apply(j), j, spec.d1[j]);
        m.set(spec.rho2.apply(j), j, spec.d2[j]);
    }
    Ok(m)
}

/// Circ(x1, …, xn): each row is the previous one shifted right.
pub fn circulant(field: &Field, row: &[u8]) -> Result<FieldMatrix> {
    let n = row.len();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            data.push(row[(j + n - i) % n]);
        }
    }
    FieldMatrix::new(field, n, n, data)
}

/// Each row is the previous one shifted left.
pub fn left_circulant(field: &Field, row: &[u8]) -> Result<FieldMatrix> {
    let n = row.len();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            data.push(row[(i + j) % n]);
        }
    }
    FieldMatrix::new(field, n, n, data)
}

/// The reversal used to turn a circulant into a left-circulant:
/// row 1 is e1 and row i is e_(n+2−i).
pub fn reversal(n: usize) -> Permutation {
    Permutation {
        images: (0..n).map(|i| (n - i) % n).collect(),
    }
}

pub fn toeplitz(field: &Field, first_row: &[u8], first_col: &[u8]) -> Result<FieldMatrix> {
    let n = first_row.len();
    if first_col.len() != n || n == 0 {
        return Err(Error::InvalidSpec("toeplitz row and column lengths differ".into()));
    }
    if first_row[0] != first_col[0] {
        return Err(Error::InvalidSpec("toeplitz corner entries disagree".into()));
    }
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            data.push(if j >= i { first_row[j - i] } else { first_col[i - j] });
        }
    }
    FieldMatrix::new(field, n, n, data)
}

pub fn hankel(field: &Field, first_row: &[u8], last_col: &[u8]) -> Result<FieldMatrix> {
    let n = first_row.len();
    if last_col.len() != n || n == 0 {
        return Err(Error::InvalidSpec("hankel row and column lengths differ".into()));
    }
    if first_row[n - 1] != last_col[0] {
        return Err(Error::InvalidSpec("hankel corner entries disagree".into()));
    }
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let s = i + j;
            data.push(if s < n { first_row[s] } else { last_col[s + 1 - n] });
        }
    }
    FieldMatrix::new(field, n, n, data)
}

/// Entry (i, j) is x_(i ⊕ j) with 0-based indices.
pub fn hadamard(field: &Field, first_row: &[u8]) -> Result<FieldMatrix> {
    let n = first_row.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidSpec(format!("hadamard order {n} is not a power of two")));
    }
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            data.push(first_row[i ^ j]);
        }
    }
    FieldMatrix::new(field, n, n, data)
}

/// The 8×8 companion matrix of x^8 + x^2 + 1 in row-position notation
/// `[[2],[3],[4],[5],[6],[7],[8],[1,3]]`.
pub fn gl8_c() -> BinaryMatrix {
    BinaryMatrix::from_positions(&[
        vec![2],
        vec![3],
        vec![4],
        vec![5],
        vec![6],
        vec![7],
        vec![8],
        vec![1, 3],
    ])
    .expect("valid positions")
}

/// `[[8],[1,2],[2,8],[3],[4],[5],[6],[7]]`, minimal polynomial x^8 + x^7 + x^2 + x + 1.
pub fn gl8_c8() -> BinaryMatrix {
    BinaryMatrix::from_positions(&[
        vec![8],
        vec![1, 2],
        vec![2, 8],
        vec![3],
        vec![4],
        vec![5],
        vec![6],
        vec![7],
    ])
    .expect("valid positions")
}

/// Companion matrix of x^n + c_(n−1)x^(n−1) + … + c_0, given `[c_0, …, c_(n−1)]`:
/// ones on the superdiagonal and the coefficients in the last row.
pub fn companion(field: &Field, coeffs: &[u8]) -> Result<FieldMatrix> {
    let n = coeffs.len();
    if n == 0 {
        return Err(Error::InvalidSpec("empty companion polynomial".into()));
    }
    let mut m = FieldMatrix::zero(field, n, n);
    for i in 0..n - 1 {
        m.set(i, i + 1, 1);
    }
    for (j, &c) in coeffs.iter().enumerate() {
        if !field.contains(c as u32) {
            return Err(Error::ElementOutOfRange {
                value: c as u32,
                size: field.size() as u32,
            });
        }
        m.set(n - 1, j, c);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v).unwrap()
    }

    #[test]
    fn composition_example() {
        let r1 = p(&[2, 3, 4, 5, 1, 6]);
        let r2 = p(&[1, 4, 3, 2, 6, 5]);
        assert_eq!(r1.compose(&r2).unwrap(), p(&[2, 5, 4, 3, 6, 1]));
        assert_eq!(r2.compose(&r1).unwrap(), p(&[4, 3, 2, 6, 1, 5]));
        assert_eq!(r1.inverse(), p(&[5, 1, 2, 3, 4, 6]));
        assert!(r1.compose(&p(&[1, 2])).is_err());
    }

    #[test]
    fn permutation_matrix_example() {
        let m = p(&[4, 2, 3, 1]).binary_matrix();
        assert_eq!(m.to_positions(), vec![vec![4], vec![2], vec![3], vec![1]]);
        let f = Field::gf16();
        let pm = p(&[2, 3, 4, 1]).field_matrix(&f);
        assert_eq!(pm.inverse().unwrap(), pm.transpose());
    }

    #[test]
    fn matrix_of_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..8 {
            for _ in 0..20 {
                let a = Permutation::random(n, &mut rng);
                let b = Permutation::random(n, &mut rng);
                let lhs = a.compose(&b).unwrap().binary_matrix();
                let rhs = a.binary_matrix().mul(&b.binary_matrix()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn cycle_facts() {
        let r = p(&[3, 2, 4, 1, 5]);
        assert_eq!(r.cycles(), vec![vec![0, 2, 3]]);
        assert_eq!(r.cycle_type(), vec![3, 1, 1]);
        assert!(!r.is_n_cycle());
        assert!(!r.is_derangement());
        for n in 2..8 {
            assert!(Permutation::shift(n).is_n_cycle());
            assert!(Permutation::shift(n).is_derangement());
            assert!(Permutation::shift(n).are_conjugate(&Permutation::shift_back(n)));
        }
        assert!(!p(&[2, 1, 4, 3]).are_conjugate(&p(&[2, 3, 4, 1])));
    }

    #[test]
    fn derangement_counts() {
        let counts: Vec<usize> = (2..=6).map(|n| derangements(n).count()).collect();
        assert_eq!(counts, vec![1, 2, 9, 44, 265]);
        assert_eq!(derangements(2).next().unwrap(), p(&[2, 1]));
        assert_eq!(permutations(4).count(), 24);
    }

    #[test]
    fn dls_example_pattern() {
        // symbolic check through distinct values a..f = 2..7
        let f = Field::gf16();
        let spec = DlsSpec {
            rho: p(&[3, 4, 2, 1]),
            d1: vec![2, 3, 4, 5],
            d2: vec![6, 0, 7, 0],
        };
        let m = dls(&f, &spec).unwrap();
        assert_eq!(
            m.to_rows(),
            vec![vec![6, 0, 0, 5], vec![0, 0, 4, 0], vec![2, 0, 7, 0], vec![0, 3, 0, 0]]
        );
        assert_eq!(gdls(&f, &spec.to_gdls()).unwrap(), m);
        assert!(dls(&f, &DlsSpec { rho: p(&[2, 1, 4, 3]), ..spec.clone() }).is_ok());
        assert!(dls(&f, &DlsSpec { rho: p(&[1, 3, 4, 2]), ..spec.clone() }).is_err());
        assert!(dls(&f, &DlsSpec { d1: vec![0, 1, 1, 1], ..spec }).is_err());
    }

    #[test]
    fn gdls_printed_matrix() {
        let f = Field::gf16();
        let spec = GdlsSpec::parse(&f, "rho1=[2,3,4,1];d1=1,1,1,1;d2=0,1,0,1").unwrap();
        let b = gdls(&f, &spec).unwrap();
        assert_eq!(
            b.to_rows(),
            vec![vec![0, 0, 0, 1], vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1]]
        );
        assert_eq!(spec.fixed_xor(), 2);
        let bad = GdlsSpec::parse(&f, "rho1=[2,3,4,1];rho2=[2,1,3,4];d1=1,1,1,1;d2=0,1,0,1");
        assert!(bad.is_err());
    }

    #[test]
    fn families() {
        let f = Field::gf16();
        let row = [0u8, 2, 1, 3];
        let c = circulant(&f, &row).unwrap();
        assert_eq!(c.row(1), &[3, 0, 2, 1]);
        let l = left_circulant(&f, &row).unwrap();
        assert_eq!(reversal(4).field_matrix(&f).mul(&c).unwrap(), l);
        assert_eq!(l, l.transpose());
        let first_col: Vec<u8> = (0..4).map(|i| c.get(i, 0)).collect();
        assert_eq!(toeplitz(&f, &row, &first_col).unwrap(), c);
        let last_col: Vec<u8> = (0..4).map(|i| l.get(i, 3)).collect();
        assert_eq!(hankel(&f, &row, &last_col).unwrap(), l);
        let h = hadamard(&f, &row).unwrap();
        assert_eq!(h.row(2), &[1, 3, 0, 2]);
        assert!(hadamard(&f, &[1, 2, 3]).is_err());
        assert!(toeplitz(&f, &[1, 2], &[2, 1]).is_err());
    }

    #[test]
    fn companion_example() {
        let f = Field::gf16();
        let c = companion(&f, &[1, 2, 0, 0]).unwrap();
        assert_eq!(
            c.to_rows(),
            vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 2, 0, 0]]
        );
    }
}
