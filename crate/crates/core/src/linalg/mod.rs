//! Matrix algebra over GF(2^r) and over blocks of binary matrices, plus the
//! JSON interchange format shared by the CLI and the catalog.

mod binary;
mod block;
mod field;

pub use binary::{kernel_vector, rank_of_rows, BinaryMatrix};
pub use block::BlockMatrix;
pub use field::FieldMatrix;
pub(crate) use field::{kernel_in_place, rank_in_place};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gf::Field;

/// Either kind of square matrix the rest of the crate works with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matrix {
    Field(FieldMatrix),
    Block(BlockMatrix),
}

impl Matrix {
    pub fn order(&self) -> usize {
        match self {
            Matrix::Field(m) => m.order(),
            Matrix::Block(m) => m.order(),
        }
    }

    pub fn pow(&self, k: u64) -> Result<Matrix> {
        Ok(match self {
            Matrix::Field(m) => Matrix::Field(m.pow(k)?),
            Matrix::Block(m) => Matrix::Block(m.pow(k)?),
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        match (self, other) {
            (Matrix::Field(a), Matrix::Field(b)) => Ok(Matrix::Field(a.mul(b)?)),
            (Matrix::Block(a), Matrix::Block(b)) => Ok(Matrix::Block(a.mul(b)?)),
            _ => Err(Error::Dimension("cannot multiply field and block matrices".into())),
        }
    }

    pub fn transpose(&self) -> Matrix {
        match self {
            Matrix::Field(m) => Matrix::Field(m.transpose()),
            Matrix::Block(m) => Matrix::Block(m.transpose()),
        }
    }

    pub fn nonzero_count(&self) -> usize {
        match self {
            Matrix::Field(m) => m.nonzero_count(),
            Matrix::Block(m) => m.nonzero_count(),
        }
    }

    pub fn is_involutory(&self) -> bool {
        match self {
            Matrix::Field(m) => m.is_involutory(),
            Matrix::Block(m) => m.is_involutory(),
        }
    }

    pub fn is_orthogonal(&self) -> bool {
        match self {
            Matrix::Field(m) => m.is_orthogonal(),
            Matrix::Block(m) => m.is_orthogonal(),
        }
    }

    /// Rank over the base field; block matrices report binary rank of the expansion.
    pub fn rank(&self) -> Result<usize> {
        match self {
            Matrix::Field(m) => Ok(m.rank()),
            Matrix::Block(m) => Ok(m.expand()?.rank()),
        }
    }

    pub fn is_nonsingular(&self) -> Result<bool> {
        Ok(match self {
            Matrix::Field(m) => m.rank() == m.order(),
            Matrix::Block(m) => m.expand()?.rank() == m.order() * m.block_size(),
        })
    }

    /// Word size used by the cost model: r for fields, m for blocks.
    pub fn word_size(&self) -> usize {
        match self {
            Matrix::Field(m) => m.field().r() as usize,
            Matrix::Block(m) => m.block_size(),
        }
    }

    pub fn as_field(&self) -> Option<&FieldMatrix> {
        match self {
            Matrix::Field(m) => Some(m),
            Matrix::Block(_) => None,
        }
    }

    pub fn as_block(&self) -> Option<&BlockMatrix> {
        match self {
            Matrix::Block(m) => Some(m),
            Matrix::Field(_) => None,
        }
    }
}

impl From<FieldMatrix> for Matrix {
    fn from(m: FieldMatrix) -> Self {
        Matrix::Field(m)
    }
}

impl From<BlockMatrix> for Matrix {
    fn from(m: BlockMatrix) -> Self {
        Matrix::Block(m)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    r: u32,
    poly: String,
}

#[derive(Serialize, Deserialize)]
struct RingJson {
    m: usize,
}

impl Serialize for FieldMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            field: FieldJson,
            rows: Vec<Vec<String>>,
        }
        let f = self.field();
        Out {
            field: FieldJson {
                r: f.r(),
                poly: format!("{:#x}", f.modulus()),
            },
            rows: self
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|&v| f.format_element(v)).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl Serialize for BlockMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            ring: RingJson,
            rows: Vec<Vec<Vec<Vec<usize>>>>,
        }
        let n = self.order();
        Out {
            ring: RingJson {
                m: self.block_size(),
            },
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let b = self.get(i, j);
                            if b.is_zero() {
                                Vec::new()
                            } else {
                                b.to_positions()
                            }
                        })
                        .collect()
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Matrix::Field(m) => m.serialize(s),
            Matrix::Block(m) => m.serialize(s),
        }
    }
}

fn parse_field_value(v: &Value) -> Result<Field> {
    let spec: FieldJson = serde_json::from_value(v.clone())?;
    let digits = spec.poly.trim_start_matches("0x").trim_start_matches("0X");
    let poly = u32::from_str_radix(digits, 16)
        .map_err(|_| Error::Parse(format!("bad modulus {:?}", spec.poly)))?;
    Field::new(spec.r, poly)
}

fn parse_element_value(f: &Field, v: &Value) -> Result<u8> {
    match v {
        Value::String(s) => f.parse_element(s),
        Value::Number(n) => {
            let x = n
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("bad element {n}")))?;
            if x >= f.size() as u64 {
                return Err(Error::ElementOutOfRange {
                    value: x as u32,
                    size: f.size() as u32,
                });
            }
            Ok(x as u8)
        }
        other => Err(Error::Parse(format!("bad element {other}"))),
    }
}

/// Parses rows of field elements (hex strings, α-notation or integers).
pub fn field_rows_from_value(f: &Field, rows: &Value) -> Result<Vec<Vec<u8>>> {
    let rows = rows
        .as_array()
        .ok_or_else(|| Error::Parse("rows must be an array".into()))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("row must be an array".into()))?
                .iter()
                .map(|v| parse_element_value(f, v))
                .collect()
        })
        .collect()
}

impl Matrix {
    /// Reads the JSON interchange format (field or ring flavour).
    pub fn from_json_value(v: &Value) -> Result<Matrix> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("matrix must be a JSON object".into()))?;
        let rows = obj
            .get("rows")
            .ok_or_else(|| Error::Parse("missing \"rows\"".into()))?;
        if let Some(fv) = obj.get("field") {
            let f = parse_field_value(fv)?;
            let rows = field_rows_from_value(&f, rows)?;
            let m = FieldMatrix::from_rows(&f, &rows)?;
            if !m.is_square() {
                return Err(Error::NotSquare {
                    rows: m.n_rows(),
                    cols: m.n_cols(),
                });
            }
            Ok(Matrix::Field(m))
        } else if let Some(rv) = obj.get("ring") {
            let ring: RingJson = serde_json::from_value(rv.clone())?;
            let rows: Vec<Vec<Vec<Vec<usize>>>> = serde_json::from_value(rows.clone())?;
            let blocks = rows
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|b| {
                            if b.is_empty() {
                                Ok(BinaryMatrix::zero(ring.m, ring.m))
                            } else if b.len() != ring.m {
                                Err(Error::Dimension(format!(
                                    "block has {} rows, expected {}",
                                    b.len(),
                                    ring.m
                                )))
                            } else {
                                BinaryMatrix::from_positions(&b)
                            }
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::Block(BlockMatrix::from_rows(ring.m, blocks)?))
        } else {
            Err(Error::Parse("matrix needs a \"field\" or \"ring\" key".into()))
        }
    }

    pub fn from_json_str(s: &str) -> Result<Matrix> {
        Self::from_json_value(&serde_json::from_str(s)?)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Matrix::from_json_value(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_json_round_trip() {
        let f = Field::gf16();
        let m = FieldMatrix::from_rows(&f, &[vec![0, 2], vec![1, 0xb]]).unwrap();
        let s = crate::canonical_json(&m).unwrap();
        assert!(s.contains("\"poly\": \"0x13\""));
        assert!(s.contains("\"0xb\""));
        let back = Matrix::from_json_str(&s).unwrap();
        assert_eq!(back, Matrix::Field(m));
        assert_eq!(crate::canonical_json(&back).unwrap(), s);
    }

    #[test]
    fn ring_json_round_trip() {
        let src = r#"{"ring":{"m":2},"rows":[[[[1],[2]],[]],[[],[[2],[1,2]]]]}"#;
        let m = Matrix::from_json_str(src).unwrap();
        let b = m.as_block().unwrap();
        assert_eq!(b.get(0, 0), &BinaryMatrix::identity(2));
        assert!(b.get(0, 1).is_zero());
        let again = Matrix::from_json_str(&crate::canonical_json(&m).unwrap()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn notation_accepted_in_json() {
        let src = r#"{"field":{"r":4,"poly":"0x13"},"rows":[["a","a^-1"],["1",0]]}"#;
        let m = Matrix::from_json_str(src).unwrap();
        assert_eq!(m.as_field().unwrap().to_rows(), vec![vec![2, 9], vec![1, 0]]);
        assert!(Matrix::from_json_str(r#"{"rows":[]}"#).is_err());
    }
}
