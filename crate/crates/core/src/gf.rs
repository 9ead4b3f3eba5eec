//! Arithmetic in GF(2^r), r ≤ 8.
//!
//! A [`Field`] is built from an irreducible modulus given as a bit-mask
//! (`0x13` is x^4 + x + 1). Elements are plain `u8` values in the polynomial
//! basis {1, α, …, α^(r-1)}, where α is the class of x. When α is primitive,
//! multiplication goes through log/antilog tables; otherwise it falls back to
//! carry-less multiplication followed by reduction.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::BinaryMatrix;

/// Carry-less product of two polynomials over GF(2).
pub fn clmul(a: u32, b: u32) -> u32 {
    let mut acc = 0;
    for i in 0..16 {
        if b >> i & 1 == 1 {
            acc ^= a << i;
        }
    }
    acc
}

fn degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u32, m: u32) -> u32 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// True iff `poly` (of degree exactly `r`) has no nontrivial factor over GF(2).
pub fn is_irreducible(poly: u32, r: u32) -> bool {
    if r == 0 || degree(poly) != r as i32 {
        return false;
    }
    // trial division by every polynomial of degree 1..=r/2
    (1..=r / 2).all(|d| ((1u32 << d)..(1u32 << (d + 1))).all(|f| poly_rem(poly, f) != 0))
}

struct LogTables {
    // exp is doubled so that exp[log a + log b] needs no reduction
    exp: Vec<u8>,
    log: Vec<u16>,
}

struct FieldInner {
    r: u32,
    modulus: u32,
    logs: Option<LogTables>,
    inv: Vec<u8>,
}

/// GF(2^r) together with its modulus. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.r == other.0.r && self.0.modulus == other.0.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})/{:#x}", self.0.r, self.0.modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:#x}", self.0.r, self.0.modulus)
    }
}

impl Field {
    pub fn new(r: u32, modulus: u32) -> Result<Self> {
        if !(1..=8).contains(&r) {
            return Err(Error::UnsupportedDegree(r));
        }
        if degree(modulus) != r as i32 {
            return Err(Error::InvalidModulus {
                modulus,
                degree: r,
                reason: "degree does not match",
            });
        }
        if modulus & 1 == 0 {
            return Err(Error::InvalidModulus {
                modulus,
                degree: r,
                reason: "constant term is zero",
            });
        }
        if !is_irreducible(modulus, r) {
            return Err(Error::InvalidModulus {
                modulus,
                degree: r,
                reason: "reducible over GF(2)",
            });
        }
        let size = 1usize << r;
        let mul_slow = |a: u32, b: u32| poly_rem(clmul(a, b), modulus) as u8;

        // α = x, i.e. the element 2 (or 1 in GF(2), where x ≡ 1)
        let alpha = poly_rem(2, modulus);
        let mut exp = Vec::with_capacity(2 * size);
        let mut log = vec![0u16; size];
        let mut x = 1u32;
        let mut primitive = true;
        for i in 0..size - 1 {
            if i > 0 && x == 1 {
                primitive = false;
                break;
            }
            exp.push(x as u8);
            log[x as usize] = i as u16;
            x = mul_slow(x, alpha) as u32;
        }
        let logs = if primitive && x == 1 {
            let period = exp.clone();
            exp.extend_from_slice(&period);
            Some(LogTables { exp, log })
        } else {
            None
        };

        let mut inv = vec![0u8; size];
        for a in 1..size as u32 {
            if inv[a as usize] != 0 {
                continue;
            }
            for b in 1..size as u32 {
                if mul_slow(a, b) == 1 {
                    inv[a as usize] = b as u8;
                    inv[b as usize] = a as u8;
                    break;
                }
            }
        }
        Ok(Field(Arc::new(FieldInner {
            r,
            modulus,
            logs,
            inv,
        })))
    }

    /// Field whose degree is read off the modulus.
    pub fn from_modulus(modulus: u32) -> Result<Self> {
        let d = degree(modulus);
        if d < 1 {
            return Err(Error::InvalidModulus {
                modulus,
                degree: 0,
                reason: "constant modulus",
            });
        }
        Field::new(d as u32, modulus)
    }

    /// GF(2^4)/0x13.
    pub fn gf16() -> Self {
        Field::new(4, 0x13).expect("x^4+x+1 is irreducible")
    }

    /// GF(2^8)/0x1c3.
    pub fn gf256() -> Self {
        Field::new(8, 0x1c3).expect("x^8+x^7+x^6+x+1 is irreducible")
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    pub fn modulus(&self) -> u32 {
        self.0.modulus
    }

    pub fn size(&self) -> usize {
        1 << self.0.r
    }

    pub fn alpha(&self) -> u8 {
        poly_rem(2, self.0.modulus) as u8
    }

    /// Whether α generates the multiplicative group.
    pub fn alpha_is_primitive(&self) -> bool {
        self.0.logs.is_some()
    }

    pub fn contains(&self, v: u32) -> bool {
        (v as usize) < self.size()
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.logs {
            Some(t) => t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize],
            None => self.mul_clmul(a, b),
        }
    }

    /// Multiplication by carry-less product and reduction, without tables.
    pub fn mul_clmul(&self, a: u8, b: u8) -> u8 {
        poly_rem(clmul(a as u32, b as u32), self.0.modulus) as u8
    }

    /// Multiplicative inverse; `inv(0)` is reported as 0 by this raw accessor.
    #[inline]
    pub fn inv_raw(&self, a: u8) -> u8 {
        self.0.inv[a as usize]
    }

    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            Err(Error::ZeroInverse)
        } else {
            Ok(self.0.inv[a as usize])
        }
    }

    pub fn pow(&self, a: u8, e: i64) -> Result<u8> {
        if e < 0 && a == 0 {
            return Err(Error::ZeroNegativePower);
        }
        let mut base = if e < 0 { self.inv_raw(a) } else { a };
        let mut k = e.unsigned_abs();
        let mut acc = 1u8;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// α^e.
    pub fn alpha_pow(&self, e: i64) -> u8 {
        self.pow(self.alpha(), e).expect("α is nonzero")
    }

    /// Discrete log base α when α is primitive.
    pub fn log_alpha(&self, a: u8) -> Option<u32> {
        if a == 0 {
            return None;
        }
        self.0.logs.as_ref().map(|t| t.log[a as usize] as u32)
    }

    /// The r×r binary matrix of x ↦ a·x in the polynomial basis.
    ///
    /// Column j holds the coordinates of a·α^j, so for every x the matrix-vector
    /// product (bit i of the vector = coefficient of α^i) equals `mul(a, x)`.
    pub fn mul_matrix(&self, a: u8) -> BinaryMatrix {
        let r = self.0.r as usize;
        let mut m = BinaryMatrix::zero(r, r);
        for j in 0..r {
            let col = self.mul(a, 1 << j);
            for i in 0..r {
                if col >> i & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        FieldElement::new(self, value)
    }

    pub fn format_element(&self, v: u8) -> String {
        format!("{v:#x}")
    }

    /// Parses an element written either in hex (`0x13`) or as a polynomial in
    /// α (`a^3+a+1`, `a^-2`, `1`, `0`). Decimal integers are accepted as raw
    /// values.
    pub fn parse_element(&self, s: &str) -> Result<u8> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad field element {s:?}"));
        let value = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            u32::from_str_radix(hex, 16).map_err(|_| bad())?
        } else if s.chars().all(|c| c.is_ascii_digit()) && !s.is_empty() {
            s.parse::<u32>().map_err(|_| bad())?
        } else {
            let mut acc = 0u8;
            for term in s.split('+') {
                let term = term.trim();
                let t = match term {
                    "a" | "α" | "alpha" => self.alpha(),
                    "1" => 1,
                    "0" => 0,
                    _ => {
                        let exp = term
                            .strip_prefix("a^")
                            .or_else(|| term.strip_prefix("α^"))
                            .or_else(|| term.strip_prefix("alpha^"))
                            .ok_or_else(bad)?;
                        let exp = exp.trim_matches(|c| c == '{' || c == '}' || c == '(' || c == ')');
                        let e: i64 = exp.parse().map_err(|_| bad())?;
                        self.alpha_pow(e)
                    }
                };
                acc ^= t;
            }
            acc as u32
        };
        if !self.contains(value) {
            return Err(Error::ElementOutOfRange {
                value,
                size: self.size() as u32,
            });
        }
        Ok(value as u8)
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `r:0xPOLY` or a bare hex modulus.
    fn from_str(s: &str) -> Result<Self> {
        let parse_hex = |h: &str| {
            let h = h.trim();
            let digits = h.strip_prefix("0x").or_else(|| h.strip_prefix("0X")).unwrap_or(h);
            u32::from_str_radix(digits, 16).map_err(|_| Error::Parse(format!("bad modulus {h:?}")))
        };
        match s.split_once(':') {
            Some((r, poly)) => {
                let r: u32 = r
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad degree in {s:?}")))?;
                Field::new(r, parse_hex(poly)?)
            }
            None => Field::from_modulus(parse_hex(s)?),
        }
    }
}

/// A value together with the field it lives in.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: u8,
    field: Field,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x} in {:?}", self.value, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.value)
    }
}

impl FieldElement {
    pub fn new(field: &Field, value: u32) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::ElementOutOfRange {
                value,
                size: field.size() as u32,
            });
        }
        Ok(FieldElement {
            value: value as u8,
            field: field.clone(),
        })
    }

    pub fn value(&self) -> u8 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    fn with(&self, value: u8) -> Self {
        FieldElement {
            value,
            field: self.field.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.value ^ other.value))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(self.with(self.field.pow(self.value, e)?))
    }

    pub fn mul_matrix(&self) -> BinaryMatrix {
        self.field.mul_matrix(self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn add_examples() {
        let f = Field::gf16();
        let e = |v| f.element(v).unwrap();
        assert_eq!(e(0x3).add(&e(0x3)).unwrap().value(), 0x0);
        assert_eq!(e(0x2).add(&e(0x1)).unwrap().value(), 0x3);
        assert_eq!(e(0x9).add(&e(0xd)).unwrap().value(), 0x4);
    }

    #[test]
    fn mul_examples() {
        let f = Field::gf16();
        let a = f.alpha();
        assert_eq!(f.mul(a, f.alpha_pow(3)), 0x3);
        assert_eq!(f.mul(0x2, 0x9), 0x1);
        for x in 0..16 {
            assert_eq!(f.mul(x, 1), x);
        }
    }

    #[test]
    fn mismatched_fields() {
        let a = Field::gf16().element(3).unwrap();
        let b = Field::gf256().element(3).unwrap();
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(..))));
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn inverse_examples() {
        let f = Field::gf16();
        assert_eq!(f.inv(1).unwrap(), 1);
        assert_eq!(f.inv(2).unwrap(), 9);
        assert_eq!(f.inv(4).unwrap(), 0xd);
        assert_eq!(f.mul(4, 0xd), 1);
        assert_eq!(f.inv(0), Err(Error::ZeroInverse));
    }

    #[test]
    fn pow_examples() {
        let f = Field::gf16();
        let a = f.alpha();
        assert_eq!(f.pow(a, 0).unwrap(), 1);
        assert_eq!(f.pow(a, 4).unwrap(), 3);
        assert_eq!(f.pow(a, 15).unwrap(), 1);
        assert_eq!(f.pow(a, -1).unwrap(), 9);
        assert_eq!(f.pow(0, -1), Err(Error::ZeroNegativePower));
        assert_eq!(f.pow(0, 0).unwrap(), 1);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(0x13, 4));
        assert!(is_irreducible(0x1c3, 8));
        assert!(is_irreducible(0x11b, 8));
        assert!(!is_irreducible(0x11, 4));
        assert!(!is_irreducible(0x15, 4)); // (x^2+x+1)^2
        assert!(Field::new(4, 0x11).is_err());
        assert!(Field::new(4, 0x12).is_err());
        assert!(Field::new(9, 0x211).is_err());
    }

    #[test]
    fn mul_matrix_examples() {
        let f = Field::gf16();
        assert_eq!(f.mul_matrix(1), BinaryMatrix::identity(4));
        assert!(f.mul_matrix(0).is_zero());
        let c = f.mul_matrix(f.alpha());
        assert_eq!(c.weight(), 5);
        for x in 0..16u8 {
            assert_eq!(c.apply(x as u64) as u8, f.mul(2, x));
        }
    }

    #[test]
    fn log_tables_agree_with_clmul() {
        for (r, m) in [(1, 0x3), (2, 0x7), (3, 0xb), (4, 0x13), (4, 0x1f), (8, 0x1c3), (8, 0x11b)] {
            let f = Field::new(r, m).unwrap();
            for a in 0..f.size() as u32 {
                for b in 0..f.size() as u32 {
                    assert_eq!(f.mul(a as u8, b as u8), f.mul_clmul(a as u8, b as u8));
                }
            }
        }
        // x^4+x^3+x^2+x+1: α has order 5
        assert!(!Field::new(4, 0x1f).unwrap().alpha_is_primitive());
        assert!(Field::gf16().alpha_is_primitive());
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in [Field::gf16(), Field::gf256(), Field::new(4, 0x1f).unwrap()] {
            let q = f.size() as u32;
            for _ in 0..10_000 {
                let (a, b, c) = (
                    rng.gen_range(0..q) as u8,
                    rng.gen_range(0..q) as u8,
                    rng.gen_range(0..q) as u8,
                );
                assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn alpha_generates_gf16() {
        let f = Field::gf16();
        let mut seen: Vec<u8> = (0..15).map(|i| f.alpha_pow(i)).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 15);
    }

    #[test]
    fn mul_matrix_is_homomorphism() {
        let f = Field::gf256();
        for a in (0..=255u8).step_by(7) {
            for b in (0..=255u8).step_by(11) {
                let lhs = f.mul_matrix(a).mul(&f.mul_matrix(b)).unwrap();
                assert_eq!(lhs, f.mul_matrix(f.mul(a, b)));
            }
        }
    }

    #[test]
    fn parse_notation() {
        let f = Field::gf16();
        assert_eq!(f.parse_element("0x3").unwrap(), 3);
        assert_eq!(f.parse_element("a+1").unwrap(), 3);
        assert_eq!(f.parse_element("a^-1").unwrap(), 9);
        assert_eq!(f.parse_element("a^3+a+1").unwrap(), 0xb);
        assert!(f.parse_element("0x13").is_err());
        let g: Field = "4:0x13".parse().unwrap();
        assert_eq!(g, f);
        let h: Field = "0x1c3".parse().unwrap();
        assert_eq!(h.r(), 8);
    }
}
