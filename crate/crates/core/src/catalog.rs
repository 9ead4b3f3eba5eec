//! Registry of known matrices with their claimed properties, and a runner
//! that rebuilds each one from its construction and checks every claim.
//!
//! The shipped registry lives in `data/catalog.json`; other files in the same
//! format can be loaded with [`Catalog::from_json_str`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branch::{is_k_nmds, is_mds, is_nmds};
use crate::construct::{
    circulant, companion, dls, gdls, gl8_c, gl8_c8, left_circulant, DlsSpec, GdlsSpec, Permutation,
};
use crate::cost::{composed_cost, Metric};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{BinaryMatrix, BlockMatrix, FieldMatrix, Matrix};

const BUILTIN: &str = include_str!("../data/catalog.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Recursive,
    Nonrecursive,
    Structural,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recursive" => Ok(Kind::Recursive),
            "nonrecursive" => Ok(Kind::Nonrecursive),
            "structural" => Ok(Kind::Structural),
            _ => Err(Error::Parse(format!("unknown entry kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Field,
    Ring,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdlsJson {
    pub rho1: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho2: Option<Vec<usize>>,
    pub d1: Vec<String>,
    pub d2: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<Vec<Vec<String>>>,
}

/// Name of a stored binary matrix (`C`, `C8`) or explicit row positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Named(String),
    Positions(Vec<Vec<usize>>),
}

impl AlphaSpec {
    pub fn matrix(&self) -> Result<BinaryMatrix> {
        match self {
            AlphaSpec::Named(n) if n == "C" => Ok(gl8_c()),
            AlphaSpec::Named(n) if n == "C8" => Ok(gl8_c8()),
            AlphaSpec::Named(n) => Err(Error::InvalidSpec(format!("unknown binary matrix {n:?}"))),
            AlphaSpec::Positions(p) => BinaryMatrix::from_positions(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Construction {
    Gdls(GdlsJson),
    Dls {
        rho: Vec<usize>,
        d1: Vec<String>,
        d2: Vec<String>,
    },
    Rows {
        rows: Vec<Vec<String>>,
    },
    Circulant {
        row: Vec<String>,
    },
    LeftCirculant {
        row: Vec<String>,
    },
    Companion {
        coeffs: Vec<String>,
    },
    /// Product of named GDLS factors; `sequence` items may carry a power (`B2^2`).
    Product {
        factors: BTreeMap<String, GdlsJson>,
        sequence: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        printed: Option<Vec<Vec<String>>>,
    },
    /// Another entry with α^e replaced by A^e for a binary matrix A.
    Lift { source: String, alpha: AlphaSpec },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmds: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mds: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involutory: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthogonal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    /// B^k is NMDS.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Metric>,
    #[serde(default)]
    pub flags: Flags,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: Kind,
    /// `r:0xPOLY`; absent for ring entries, which inherit it from their source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub construction: Construction,
    #[serde(default)]
    pub expected: Expected,
    pub provenance: String,
}

impl CatalogEntry {
    pub fn domain(&self) -> Domain {
        match self.construction {
            Construction::Lift { .. } => Domain::Ring,
            _ => Domain::Field,
        }
    }
}

/// A rebuilt entry.
#[derive(Debug, Clone)]
pub struct Built {
    pub matrix: Matrix,
    /// Factors in multiplication order, repeats expanded; `[matrix]` when not a product.
    pub factors: Vec<Matrix>,
    /// Printed form stored alongside the construction, if any.
    pub printed: Option<Matrix>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Filter {
    pub id: Option<String>,
    pub order: Option<usize>,
    pub kind: Option<Kind>,
    pub domain: Option<Domain>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub order: usize,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// NMDS status of B^j for j below the claimed k; informational only.
    pub smaller_k: Vec<(u64, bool)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub order: usize,
    pub input_bits: usize,
    pub kind: Kind,
    pub iterations: Option<u64>,
    pub xor: usize,
    pub id: String,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

fn parse_elems(f: &Field, v: &[String]) -> Result<Vec<u8>> {
    v.iter().map(|s| f.parse_element(s)).collect()
}

fn parse_rows(f: &Field, rows: &[Vec<String>]) -> Result<FieldMatrix> {
    let rows = rows
        .iter()
        .map(|r| parse_elems(f, r))
        .collect::<Result<Vec<_>>>()?;
    FieldMatrix::from_rows(f, &rows)
}

fn gdls_spec(f: &Field, g: &GdlsJson) -> Result<GdlsSpec> {
    let rho1 = Permutation::new(&g.rho1)?;
    let rho2 = match &g.rho2 {
        Some(p) => Permutation::new(p)?,
        None => Permutation::identity(rho1.len()),
    };
    Ok(GdlsSpec {
        rho1,
        rho2,
        d1: parse_elems(f, &g.d1)?,
        d2: parse_elems(f, &g.d2)?,
    })
}

/// `B2^3` → ("B2", 3).
fn split_power(s: &str) -> Result<(&str, usize)> {
    match s.split_once('^') {
        Some((name, e)) => {
            let e = e
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad exponent in {s:?}")))?;
            Ok((name, e))
        }
        None => Ok((s, 1)),
    }
}

fn signed_log(f: &Field, v: u8) -> Result<i64> {
    let e = f.log_alpha(v).ok_or_else(|| {
        Error::InvalidSpec(format!("{v:#x} is not a power of a primitive alpha in {f}"))
    })? as i64;
    let order = f.size() as i64 - 1;
    Ok(if 2 * e > order { e - order } else { e })
}

/// Replaces each entry α^e by A^e (exponent taken in (−(q−1)/2, (q−1)/2]).
pub fn lift_field_matrix(a: &FieldMatrix, alpha: &BinaryMatrix) -> Result<BlockMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.n_rows(),
            cols: a.n_cols(),
        });
    }
    let m = alpha.n_rows();
    let blocks = a
        .data()
        .iter()
        .map(|&v| {
            if v == 0 {
                Ok(BinaryMatrix::zero(m, m))
            } else {
                alpha.pow(signed_log(a.field(), v)?)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    BlockMatrix::new(a.order(), m, blocks)
}

fn product(factors: &[Matrix]) -> Result<Matrix> {
    let mut it = factors.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::InvalidSpec("empty product".into()))?
        .clone();
    it.try_fold(first, |acc, f| acc.mul(f))
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::from_json_str(BUILTIN).expect("shipped catalog parses")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let c: Catalog = serde_json::from_str(s)?;
        let mut seen = std::collections::HashSet::new();
        for e in &c.entries {
            if !seen.insert(e.id.as_str()) {
                return Err(Error::InvalidSpec(format!("duplicate catalog id {}", e.id)));
            }
        }
        Ok(c)
    }

    pub fn get(&self, id: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::InvalidSpec(format!("no catalog entry {id:?}")))
    }

    pub fn field_of(&self, entry: &CatalogEntry) -> Result<Field> {
        match (&entry.field, &entry.construction) {
            (Some(f), _) => f.parse(),
            (None, Construction::Lift { source, .. }) => self.field_of(self.get(source)?),
            (None, _) => Err(Error::InvalidSpec(format!("{} has no field", entry.id))),
        }
    }

    pub fn build(&self, entry: &CatalogEntry) -> Result<Built> {
        let single = |m: FieldMatrix| Built {
            matrix: Matrix::Field(m.clone()),
            factors: vec![Matrix::Field(m)],
            printed: None,
        };
        if let Construction::Lift { source, alpha } = &entry.construction {
            let a = alpha.matrix()?;
            let src = self.build(self.get(source)?)?;
            let factors = src
                .factors
                .iter()
                .map(|f| match f {
                    Matrix::Field(fm) => Ok(Matrix::Block(lift_field_matrix(fm, &a)?)),
                    Matrix::Block(_) => Err(Error::InvalidSpec("cannot lift a block matrix".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Built {
                matrix: product(&factors)?,
                factors,
                printed: None,
            });
        }
        let f = self.field_of(entry)?;
        Ok(match &entry.construction {
            Construction::Gdls(g) => {
                let mut b = single(gdls(&f, &gdls_spec(&f, g)?)?);
                if let Some(p) = &g.printed {
                    b.printed = Some(Matrix::Field(parse_rows(&f, p)?));
                }
                b
            }
            Construction::Dls { rho, d1, d2 } => single(dls(
                &f,
                &DlsSpec {
                    rho: Permutation::new(rho)?,
                    d1: parse_elems(&f, d1)?,
                    d2: parse_elems(&f, d2)?,
                },
            )?),
            Construction::Rows { rows } => single(parse_rows(&f, rows)?),
            Construction::Circulant { row } => single(circulant(&f, &parse_elems(&f, row)?)?),
            Construction::LeftCirculant { row } => {
                single(left_circulant(&f, &parse_elems(&f, row)?)?)
            }
            Construction::Companion { coeffs } => single(companion(&f, &parse_elems(&f, coeffs)?)?),
            Construction::Product {
                factors,
                sequence,
                printed,
            } => {
                let mut built = BTreeMap::new();
                for (name, g) in factors {
                    built.insert(name.as_str(), Matrix::Field(gdls(&f, &gdls_spec(&f, g)?)?));
                }
                let mut seq = Vec::new();
                for item in sequence {
                    let (name, e) = split_power(item)?;
                    let m = built
                        .get(name)
                        .ok_or_else(|| Error::InvalidSpec(format!("unknown factor {name:?}")))?;
                    seq.extend(std::iter::repeat(m.clone()).take(e));
                }
                Built {
                    matrix: product(&seq)?,
                    factors: seq,
                    printed: printed
                        .as_ref()
                        .map(|p| parse_rows(&f, p).map(Matrix::Field))
                        .transpose()?,
                }
            }
            Construction::Lift { .. } => unreachable!("handled above"),
        })
    }

    pub fn order_of(&self, entry: &CatalogEntry) -> Result<usize> {
        Ok(self.build(entry)?.matrix.order())
    }

    /// Entries matching the filter, ordered by (order, kind, id).
    pub fn list(&self, filter: &Filter) -> Result<Vec<&CatalogEntry>> {
        let mut out = Vec::new();
        for e in &self.entries {
            let order = self.order_of(e)?;
            let keep = filter.id.as_ref().map_or(true, |id| &e.id == id)
                && filter.order.map_or(true, |o| o == order)
                && filter.kind.map_or(true, |k| k == e.kind)
                && filter.domain.map_or(true, |d| d == e.domain());
            if keep {
                out.push((order, e));
            }
        }
        out.sort_by(|a, b| (a.0, a.1.kind, &a.1.id).cmp(&(b.0, b.1.kind, &b.1.id)));
        Ok(out.into_iter().map(|(_, e)| e).collect())
    }

    pub fn verify_entry(&self, entry: &CatalogEntry) -> EntryReport {
        match self.verify_inner(entry) {
            Ok(r) => r,
            Err(e) => EntryReport {
                id: entry.id.clone(),
                order: 0,
                pass: false,
                checks: Vec::new(),
                smaller_k: Vec::new(),
                error: Some(e.to_string()),
            },
        }
    }

    fn verify_inner(&self, entry: &CatalogEntry) -> Result<EntryReport> {
        let built = self.build(entry)?;
        let m = &built.matrix;
        let exp = &entry.expected;
        let mut checks = Vec::new();
        let mut push = |name: &str, expected: String, actual: String| {
            let pass = expected == actual;
            checks.push(Check {
                name: name.to_string(),
                expected,
                actual,
                pass,
            });
        };
        if let Some(p) = &built.printed {
            push("printed", "equal".into(), if p == m { "equal" } else { "differs" }.into());
        }
        let mut smaller_k = Vec::new();
        if let Some(k) = exp.k {
            let v = is_k_nmds(m, k)?;
            push(&format!("{k}-NMDS"), "true".into(), v.is_nmds.to_string());
            for j in 1..k {
                smaller_k.push((j, is_k_nmds(m, j)?.is_nmds));
            }
        }
        let flags = &exp.flags;
        if let Some(want) = flags.nmds {
            push("nmds", want.to_string(), is_nmds(m)?.is_nmds.to_string());
        }
        if let Some(want) = flags.mds {
            push("mds", want.to_string(), is_mds(m)?.to_string());
        }
        if let Some(want) = flags.involutory {
            push("involutory", want.to_string(), m.is_involutory().to_string());
        }
        if let Some(want) = flags.orthogonal {
            push("orthogonal", want.to_string(), m.is_orthogonal().to_string());
        }
        if let Some(want) = flags.singular {
            push("singular", want.to_string(), (!m.is_nonsingular()?).to_string());
        }
        if let Some(cost) = exp.cost {
            let metric = exp.metric.unwrap_or(Metric::Default);
            let actual = composed_cost(&built.factors, metric)?;
            push("cost", cost.to_string(), actual.to_string());
        }
        Ok(EntryReport {
            id: entry.id.clone(),
            order: m.order(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            smaller_k,
            error: None,
        })
    }

    /// Verifies the selected entries in parallel; the report is ordered by id.
    pub fn verify(&self, filter: &Filter) -> Result<Vec<EntryReport>> {
        let entries = self.list(filter)?;
        let mut reports: Vec<EntryReport> =
            entries.par_iter().map(|e| self.verify_entry(e)).collect();
        reports.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(reports)
    }

    /// A copy of `entry` with α replaced by `alpha`, as a ring entry.
    pub fn lift_to_ring(&self, entry: &CatalogEntry, alpha: AlphaSpec) -> Result<CatalogEntry> {
        let lifted = CatalogEntry {
            id: format!("{}-lift", entry.id),
            kind: entry.kind,
            field: None,
            construction: Construction::Lift {
                source: entry.id.clone(),
                alpha,
            },
            expected: Expected {
                k: entry.expected.k,
                cost: None,
                metric: None,
                flags: entry.expected.flags.clone(),
            },
            provenance: format!("{} lifted to binary blocks", entry.id),
        };
        // fail early on entries that cannot be lifted
        let mut probe = self.clone();
        probe.entries.push(lifted.clone());
        probe.build(&lifted)?;
        Ok(lifted)
    }

    /// Rows of the order / input / type / iterations / XOR summary.
    pub fn summary(&self) -> Result<Vec<SummaryRow>> {
        let mut rows = Vec::new();
        for e in self.list(&Filter::default())? {
            if e.kind == Kind::Structural {
                continue;
            }
            let Some(_) = e.expected.cost else { continue };
            let built = self.build(e)?;
            let metric = e.expected.metric.unwrap_or(Metric::Default);
            rows.push(SummaryRow {
                order: built.matrix.order(),
                input_bits: built.matrix.word_size(),
                kind: e.kind,
                iterations: e.expected.k,
                xor: composed_cost(&built.factors, metric)?,
                id: e.id.clone(),
            });
        }
        rows.sort_by(|a, b| {
            (a.order, a.input_bits, a.kind, std::cmp::Reverse(a.xor), &a.id).cmp(&(
                b.order,
                b.input_bits,
                b.kind,
                std::cmp::Reverse(b.xor),
                &b.id,
            ))
        });
        Ok(rows)
    }
}

pub fn summary_markdown(rows: &[SummaryRow]) -> String {
    let mut s = String::from("| order | input | type | iterations | XOR | entry |\n|---|---|---|---|---|---|\n");
    for r in rows {
        let kind = match r.kind {
            Kind::Recursive => "recursive",
            Kind::Nonrecursive => "nonrecursive",
            Kind::Structural => "structural",
        };
        let it = r.iterations.map_or("-".to_string(), |k| k.to_string());
        let _ = writeln!(
            s,
            "| {} | {}-bit | {kind} | {it} | {} | {} |",
            r.order, r.input_bits, r.xor, r.id
        );
    }
    s
}

pub fn verify_markdown(reports: &[EntryReport]) -> String {
    let mut s = String::from("| entry | n | result | details |\n|---|---|---|---|\n");
    for r in reports {
        let details = match &r.error {
            Some(e) => e.clone(),
            None => r
                .checks
                .iter()
                .map(|c| {
                    if c.pass {
                        format!("{}={}", c.name, c.actual)
                    } else {
                        format!("{}: expected {} got {}", c.name, c.expected, c.actual)
                    }
                })
                .collect::<Vec<_>>()
                .join(", "),
        };
        let _ = writeln!(
            s,
            "| {} | {} | {} | {details} |",
            r.id,
            r.order,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters() {
        let c = Catalog::builtin();
        let order7 = c
            .list(&Filter {
                order: Some(7),
                kind: Some(Kind::Recursive),
                domain: Some(Domain::Field),
                ..Filter::default()
            })
            .unwrap();
        let ids: Vec<&str> = order7.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, vec!["rec-n7-B1", "rec-n7-B2", "rec-n7-B3"]);
        let nonrec = c
            .list(&Filter {
                kind: Some(Kind::Nonrecursive),
                domain: Some(Domain::Field),
                ..Filter::default()
            })
            .unwrap();
        assert_eq!(nonrec.len(), 5);
        assert_eq!(c.list(&Filter::default()).unwrap().len(), c.entries.len());
    }

    #[test]
    fn order4_entry_verifies() {
        let c = Catalog::builtin();
        let r = c.verify_entry(c.get("rec-n4-B").unwrap());
        assert!(r.pass, "{r:?}");
        assert_eq!(r.smaller_k, vec![(1, false), (2, false)]);
    }

    #[test]
    fn printed_product_matches() {
        let c = Catalog::builtin();
        let b = c.build(c.get("nonrec-n5-M").unwrap()).unwrap();
        assert_eq!(b.printed.as_ref(), Some(&b.matrix));
        assert_eq!(b.factors.len(), 4);
    }

    #[test]
    fn lift_identity_entries() {
        let f = Field::gf16();
        let i = FieldMatrix::identity(&f, 3);
        assert_eq!(
            lift_field_matrix(&i, &gl8_c()).unwrap(),
            BlockMatrix::identity(3, 8)
        );
        let c = Catalog::builtin();
        let lifted = c
            .lift_to_ring(c.get("rec-n5-A2").unwrap(), AlphaSpec::Named("C".into()))
            .unwrap();
        assert_eq!(lifted.domain(), Domain::Ring);
    }

    #[test]
    fn rejects_duplicates() {
        let s = r#"{"entries":[
            {"id":"x","kind":"structural","field":"4:0x13","construction":{"type":"rows","rows":[["1"]]},"provenance":""},
            {"id":"x","kind":"structural","field":"4:0x13","construction":{"type":"rows","rows":[["1"]]},"provenance":""}]}"#;
        assert!(Catalog::from_json_str(s).is_err());
    }
}
