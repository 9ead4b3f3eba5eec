//! Near-MDS and recursive near-MDS diffusion matrices over GF(2^r) and over
//! rings of binary matrices: construction, branch numbers, XOR cost, search
//! and a verified catalog.

pub mod error;
pub mod gf;
pub mod linalg;
pub mod construct;
pub mod branch;
pub mod cost;
pub mod catalog;
pub mod search;
pub mod cli;

pub use error::{Error, Result};
pub use gf::{Field, FieldElement};
pub use linalg::{BinaryMatrix, BlockMatrix, FieldMatrix, Matrix};

/// Pretty JSON with object keys sorted, so equal values print identically.
pub fn canonical_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)?)
}
