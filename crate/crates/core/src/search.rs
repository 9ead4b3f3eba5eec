//! Searches: the reduced DLS domain behind the existence table, seeded random
//! GDLS sampling, the K = 1 and binary branch-number checks, and scans over
//! structured matrix families.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branch::{self, all_combinations};
use crate::construct::{self, DlsSpec, GdlsSpec, Permutation};
use crate::cost::{self, Metric};
use crate::{Error, Field, FieldMatrix, Matrix, Result};

pub const DEFAULT_SEED: u64 = 0x6e6d_6473;
pub const DEFAULT_FIELD: &str = "4:0x13";
/// Iterations of a random GDLS campaign when no budget is given.
pub const DEFAULT_RANDOM_BUDGET: u64 = 10_000;
/// Largest K = 1 domain enumerated without an explicit budget.
pub const DEFAULT_K1_CAP: u64 = 100_000_000;
/// Default cap for family scans (members for `any`, search nodes otherwise).
pub const DEFAULT_FAMILY_CAP: u64 = 1 << 24;
const MAX_LISTED: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ReducedDls,
    RandomGdls,
    ExhaustiveK1,
    BinaryBranchBound,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced-dls" => Ok(Mode::ReducedDls),
            "random-gdls" => Ok(Mode::RandomGdls),
            "exhaustive-k1" => Ok(Mode::ExhaustiveK1),
            "binary-branch-bound" => Ok(Mode::BinaryBranchBound),
            _ => Err(Error::Parse(format!("unknown search mode {s:?}"))),
        }
    }
}

fn default_field() -> String {
    DEFAULT_FIELD.to_string()
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// `r:0xpoly` for a field.
pub fn field_spec(field: &Field) -> String {
    format!("{}:{:#x}", field.r(), field.modulus())
}

/// Parameters of one search. Also the TOML campaign file format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchCampaign {
    pub mode: Mode,
    pub n: usize,
    /// Fixed XOR K, the number of nonzero D2 entries.
    #[serde(default)]
    pub l: usize,
    #[serde(default = "default_field")]
    pub field: String,
    /// Empty means {n−1, n}.
    #[serde(default)]
    pub k_set: Vec<u64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

impl SearchCampaign {
    pub fn new(mode: Mode, n: usize, l: usize, field: &Field) -> Self {
        SearchCampaign {
            mode,
            n,
            l,
            field: field_spec(field),
            k_set: Vec::new(),
            seed: DEFAULT_SEED,
            budget: None,
        }
    }

    pub fn with_k(mut self, ks: &[u64]) -> Self {
        self.k_set = ks.to_vec();
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        let c: SearchCampaign = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        c.field()?;
        Ok(c)
    }

    pub fn field(&self) -> Result<Field> {
        self.field.parse()
    }

    /// Sorted exponents to test.
    pub fn k_values(&self) -> Vec<u64> {
        let mut ks = if self.k_set.is_empty() {
            vec![self.n.saturating_sub(1) as u64, self.n as u64]
        } else {
            self.k_set.clone()
        };
        ks.retain(|&k| k > 0);
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// Cells the existence table marks as long-running: n = 7, 8 over
    /// GF(2^8) and n = 8 with l = 4 over GF(2^4).
    pub fn is_heavy(&self) -> bool {
        let r = self.field().map(|f| f.r()).unwrap_or(0);
        self.mode == Mode::ReducedDls && ((r == 8 && self.n >= 7) || (self.n >= 8 && self.l >= 4))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Exists,
    Dne,
    Unresolved,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Exists => "Exists",
            Outcome::Dne => "DNE",
            Outcome::Unresolved => "Unresolved",
        }
    }
}

/// A matrix the search accepted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    /// Position in the enumeration, or the iteration of a random search.
    pub index: u64,
    pub k: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    pub rows: Vec<Vec<String>>,
}

/// Verdict for one (n, l, k, field) combination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub n: usize,
    pub l: usize,
    pub k: u64,
    pub field: String,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Hit>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub campaign: SearchCampaign,
    pub candidates_examined: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_size: Option<u64>,
    pub exhaustive: bool,
    pub cells: Vec<Cell>,
    pub hits: Vec<Hit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_branch: Option<usize>,
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl SearchReport {
    fn empty(campaign: &SearchCampaign) -> Self {
        SearchReport {
            campaign: campaign.clone(),
            candidates_examined: 0,
            domain_size: None,
            exhaustive: false,
            cells: Vec::new(),
            hits: Vec::new(),
            max_branch: None,
            wall_clock: Duration::ZERO,
        }
    }

    pub fn has_unresolved(&self) -> bool {
        self.cells.iter().any(|c| c.outcome == Outcome::Unresolved)
            || (self.campaign.mode == Mode::RandomGdls && self.hits.is_empty())
    }

    pub fn outcome(&self, k: u64) -> Option<Outcome> {
        self.cells.iter().find(|c| c.k == k).map(|c| c.outcome)
    }

    pub fn to_markdown(&self) -> String {
        let c = &self.campaign;
        let mut out = format!(
            "mode `{}`, n = {}, l = {}, field {}, examined {}{}\n\n",
            serde_json::to_value(c.mode).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            c.n,
            c.l,
            c.field,
            self.candidates_examined,
            if self.exhaustive { " (exhaustive)" } else { "" }
        );
        if let Some(b) = self.max_branch {
            let _ = writeln!(out, "max branch number {b}, bound {}\n", binary_branch_bound(c.n));
        }
        if !self.cells.is_empty() {
            out.push_str("| n | l | k | field | outcome | witness |\n|---|---|---|---|---|---|\n");
            for cell in &self.cells {
                let w = cell
                    .witness
                    .as_ref()
                    .map(|h| h.spec.clone().unwrap_or_else(|| format!("{:?}", h.rows)))
                    .or_else(|| cell.reason.clone())
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} |",
                    cell.n,
                    cell.l,
                    cell.k,
                    cell.field,
                    cell.outcome.label(),
                    w
                );
            }
        }
        if !self.hits.is_empty() {
            out.push_str("\n| index | k | cost | matrix |\n|---|---|---|---|\n");
            for h in &self.hits {
                let cost = h.cost.map(|c| c.to_string()).unwrap_or_default();
                let m = h.spec.clone().unwrap_or_else(|| format!("{:?}", h.rows));
                let _ = writeln!(out, "| {} | {} | {} | {} |", h.index, h.k, cost, m);
            }
        }
        out
    }
}

fn field_label(spec: &str) -> String {
    match spec.split_once(':') {
        Some((r, _)) => format!("GF(2^{r})"),
        None => spec.to_string(),
    }
}

/// The existence grid: one row per (n, k), one column per (l, field).
pub fn existence_markdown(cells: &[Cell]) -> String {
    let mut cols: Vec<(usize, u32, String)> = Vec::new();
    let mut rows: Vec<(usize, u64)> = Vec::new();
    for c in cells {
        let r = c.field.parse::<Field>().map(|f| f.r()).unwrap_or(0);
        let col = (c.l, r, c.field.clone());
        if !cols.contains(&col) {
            cols.push(col);
        }
        if !rows.contains(&(c.n, c.k)) {
            rows.push((c.n, c.k));
        }
    }
    cols.sort();
    rows.sort();
    let mut out = String::from("| n | k |");
    for (l, _, f) in &cols {
        let _ = write!(out, " K={l} {} |", field_label(f));
    }
    out.push_str("\n|---|---|");
    out.push_str(&"---|".repeat(cols.len()));
    out.push('\n');
    for &(n, k) in &rows {
        let _ = write!(out, "| {n} | {k} |");
        for (l, _, f) in &cols {
            let v = cells
                .iter()
                .find(|c| c.n == n && c.k == k && c.l == *l && &c.field == f)
                .map(|c| c.outcome.label())
                .unwrap_or("--");
            let _ = write!(out, " {v} |");
        }
        out.push('\n');
    }
    out
}

/// Worker count and checkpoint file for a campaign run.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub jobs: Option<usize>,
    pub checkpoint: Option<PathBuf>,
}

/// Runs any campaign, dispatching on its mode.
pub fn run_campaign(c: &SearchCampaign, opts: &RunOptions) -> Result<SearchReport> {
    let go = || -> Result<SearchReport> {
        let start = Instant::now();
        let mut report = match c.mode {
            Mode::ReducedDls => reduced_dls(c, opts.checkpoint.as_deref()),
            Mode::RandomGdls => {
                let field = c.field()?;
                random_gdls_search(c, &default_entry_set(&field), &GdlsStructure::new(c.n))
            }
            Mode::ExhaustiveK1 => k1_campaign(c),
            Mode::BinaryBranchBound => binary_branch_campaign(c),
        }?;
        report.wall_clock = start.elapsed();
        Ok(report)
    };
    match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidSpec(e.to_string()))?
            .install(go),
        None => go(),
    }
}

fn rows_hex(m: &FieldMatrix) -> Vec<Vec<String>> {
    let f = m.field();
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|&v| f.format_element(v)).collect())
        .collect()
}

fn diag_string(field: &Field, d: &[u8]) -> String {
    d.iter().map(|&v| field.format_element(v)).collect::<Vec<_>>().join(",")
}

pub fn dls_string(field: &Field, spec: &DlsSpec) -> String {
    format!(
        "rho={};d1={};d2={}",
        spec.rho,
        diag_string(field, &spec.d1),
        diag_string(field, &spec.d2)
    )
}

pub fn gdls_string(field: &Field, spec: &GdlsSpec) -> String {
    format!(
        "rho1={};rho2={};d1={};d2={}",
        spec.rho1,
        spec.rho2,
        diag_string(field, &spec.d1),
        diag_string(field, &spec.d2)
    )
}

pub fn derangement_count(n: usize) -> u128 {
    let (mut a, mut b) = (1u128, 0u128);
    if n == 0 {
        return a;
    }
    for i in 2..=n as u128 {
        let c = (i - 1) * (a + b);
        a = b;
        b = c;
    }
    b
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// D(n)·C(n,l)·(2^r)^(n+l): every DLS matrix with l nonzero D2 entries,
/// zero values included.
pub fn unreduced_domain_size(n: usize, l: usize, r: u32) -> u128 {
    derangement_count(n) * binomial(n, l) * (1u128 << (r as usize * (n + l)))
}

/// The reduced domain: ρ = [2,3,…,n,1], D1 = diag(a,1,…,1), D2 with l
/// nonzero entries. Ordered by support (lexicographic), then a, then the
/// D2 values as a base-(q−1) counter with the last support position fastest.
struct DlsDomain {
    n: usize,
    q1: u64,
    patterns: Vec<Vec<usize>>,
    unit_size: u64,
}

impl DlsDomain {
    fn new(n: usize, l: usize, field: &Field) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("DLS order must be at least 2, got {n}")));
        }
        if l > n {
            return Err(Error::InvalidSpec(format!("l = {l} exceeds n = {n}")));
        }
        let q1 = field.size() as u64 - 1;
        if q1 == 0 {
            return Err(Error::InvalidSpec("field has no nonzero elements".into()));
        }
        let unit_size = q1
            .checked_pow(l as u32)
            .ok_or_else(|| Error::SizeGuard("reduced domain too large".into()))?;
        Ok(DlsDomain {
            n,
            q1,
            patterns: all_combinations(n, l),
            unit_size,
        })
    }

    /// A unit is one (support, a) pair; units are the parallel work items.
    fn units(&self) -> u64 {
        self.patterns.len() as u64 * self.q1
    }

    fn size(&self) -> Option<u64> {
        self.units().checked_mul(self.unit_size)
    }

    fn spec(&self, unit: u64, offset: u64) -> DlsSpec {
        let pattern = &self.patterns[(unit / self.q1) as usize];
        let mut d1 = vec![1u8; self.n];
        d1[0] = (unit % self.q1 + 1) as u8;
        let mut d2 = vec![0u8; self.n];
        let mut o = offset;
        for &pos in pattern.iter().rev() {
            d2[pos] = (o % self.q1 + 1) as u8;
            o /= self.q1;
        }
        DlsSpec {
            rho: Permutation::shift(self.n),
            d1,
            d2,
        }
    }
}

/// Every spec of the reduced domain, in enumeration order.
pub fn reduced_dls_domain(n: usize, l: usize, field: &Field) -> Result<impl Iterator<Item = DlsSpec>> {
    let dom = std::sync::Arc::new(DlsDomain::new(n, l, field)?);
    Ok((0..dom.units()).flat_map(move |u| {
        let d = dom.clone();
        (0..d.unit_size).map(move |o| d.spec(u, o))
    }))
}

/// C(n,l)·(q−1)^(1+l).
pub fn reduced_domain_size(n: usize, l: usize, field: &Field) -> Result<u64> {
    DlsDomain::new(n, l, field)?
        .size()
        .ok_or_else(|| Error::SizeGuard("reduced domain too large".into()))
}

/// F1: a k-th power with fewer than n²−n nonzero entries cannot be NMDS.
pub fn passes_density_filter(m: &FieldMatrix) -> bool {
    let n = m.order();
    m.nonzero_count() + n >= n * n
}

/// F2: DLS powers below n−2 are never NMDS.
pub fn dls_power_can_be_nmds(n: usize, k: u64) -> bool {
    k + 2 >= n as u64
}

/// The exponents in `ks` (sorted) for which M^k passes F1 and is NMDS.
fn nmds_powers(m: &FieldMatrix, ks: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let Some(&kmax) = ks.last() else {
        return out;
    };
    let mut p = m.clone();
    let mut e = 1u64;
    loop {
        if ks.contains(&e) && passes_density_filter(&p) && branch::field_is_nmds(&p) {
            out.push(e);
        }
        if e == kmax {
            break;
        }
        p = p.mul(m).expect("square");
        e += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Checkpoint {
    campaign: SearchCampaign,
    next_unit: u64,
    hits: Vec<Option<(u64, u64)>>,
}

fn load_checkpoint(path: &Path, c: &SearchCampaign, nk: usize) -> Result<Option<Checkpoint>> {
    if !path.exists() {
        return Ok(None);
    }
    let cp: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if cp.campaign != *c || cp.hits.len() != nk {
        return Err(Error::InvalidSpec(format!(
            "checkpoint {} belongs to a different campaign",
            path.display()
        )));
    }
    Ok(Some(cp))
}

fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string(cp)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Exhaustive k-NMDS search over the reduced DLS domain.
pub fn search_k_nmds_dls(c: &SearchCampaign) -> Result<SearchReport> {
    run_campaign(c, &RunOptions::default())
}

fn reduced_dls(c: &SearchCampaign, checkpoint: Option<&Path>) -> Result<SearchReport> {
    if c.mode != Mode::ReducedDls {
        return Err(Error::InvalidSpec("campaign mode is not reduced-dls".into()));
    }
    let field = c.field()?;
    let n = c.n;
    let dom = DlsDomain::new(n, c.l, &field)?;
    let ks = c.k_values();
    if ks.is_empty() {
        return Err(Error::InvalidSpec("k_set is empty".into()));
    }
    if let Some(&k) = ks.iter().find(|&&k| k > n as u64) {
        return Err(Error::InvalidSpec(format!(
            "the reduced domain only covers k ≤ n, got k = {k}"
        )));
    }
    let active: Vec<u64> = ks.iter().copied().filter(|&k| dls_power_can_be_nmds(n, k)).collect();

    let units = dom.units();
    let budget_units = match c.budget {
        Some(b) => units.min(b / dom.unit_size),
        None => units,
    };
    let mut hits: Vec<Option<(u64, u64)>> = vec![None; active.len()];
    let mut next = 0u64;
    if let Some(path) = checkpoint {
        if let Some(cp) = load_checkpoint(path, c, active.len())? {
            hits = cp.hits;
            next = cp.next_unit;
        }
    }
    let best: Vec<AtomicU64> = hits
        .iter()
        .map(|h| AtomicU64::new(h.map_or(u64::MAX, |(u, _)| u)))
        .collect();
    let chunk = (rayon::current_num_threads() as u64 * 4).max(1);

    while next < budget_units && !active.is_empty() {
        if hits.iter().all(|h| matches!(h, Some((u, _)) if *u < next)) {
            break;
        }
        let end = (next + chunk).min(budget_units);
        let found: Vec<(u64, Vec<Option<u64>>)> = (next..end)
            .into_par_iter()
            .map(|u| (u, scan_unit(&dom, &field, u, &active, &best)))
            .collect();
        for (u, res) in found {
            for (i, r) in res.into_iter().enumerate() {
                if let Some(o) = r {
                    if hits[i].map_or(true, |(hu, _)| u < hu) {
                        hits[i] = Some((u, o));
                    }
                }
            }
        }
        next = end;
        if let Some(path) = checkpoint {
            save_checkpoint(
                path,
                &Checkpoint {
                    campaign: c.clone(),
                    next_unit: next,
                    hits: hits.clone(),
                },
            )?;
        }
    }

    let all_found = !active.is_empty() && hits.iter().all(Option::is_some);
    let examined_units = if active.is_empty() {
        0
    } else if all_found {
        hits.iter().map(|h| h.expect("found").0).max().unwrap_or(0) + 1
    } else {
        budget_units
    };
    let complete = budget_units == units;
    let fs = field_spec(&field);
    let cells = ks
        .iter()
        .map(|&k| {
            let mut cell = Cell {
                n,
                l: c.l,
                k,
                field: fs.clone(),
                outcome: Outcome::Dne,
                reason: None,
                witness: None,
            };
            match active.iter().position(|&a| a == k) {
                None => cell.reason = Some(format!("DLS powers below n−2 = {} are never NMDS", n - 2)),
                Some(i) => match hits[i] {
                    Some((u, o)) => {
                        let spec = dom.spec(u, o);
                        let m = construct::dls(&field, &spec).expect("valid spec");
                        cell.outcome = Outcome::Exists;
                        cell.witness = Some(Hit {
                            index: u * dom.unit_size + o,
                            k,
                            cost: None,
                            spec: Some(dls_string(&field, &spec)),
                            rows: rows_hex(&m),
                        });
                    }
                    None if complete => cell.reason = Some("reduced domain exhausted".into()),
                    None => {
                        cell.outcome = Outcome::Unresolved;
                        cell.reason = Some("budget reached".into());
                    }
                },
            }
            cell
        })
        .collect();
    Ok(SearchReport {
        campaign: c.clone(),
        candidates_examined: examined_units * dom.unit_size,
        domain_size: dom.size(),
        exhaustive: complete && !all_found,
        cells,
        hits: Vec::new(),
        max_branch: None,
        wall_clock: Duration::ZERO,
    })
}

/// First hit offset in one unit for each exponent. Gives up once every
/// exponent already has a hit in an earlier unit.
fn scan_unit(dom: &DlsDomain, field: &Field, unit: u64, ks: &[u64], best: &[AtomicU64]) -> Vec<Option<u64>> {
    let mut found = vec![None; ks.len()];
    let settled = |i: usize| best[i].load(Ordering::Relaxed) < unit;
    for off in 0..dom.unit_size {
        if off % 64 == 0 && (0..ks.len()).all(settled) {
            break;
        }
        let pending: Vec<u64> = (0..ks.len())
            .filter(|&i| found[i].is_none() && !settled(i))
            .map(|i| ks[i])
            .collect();
        if pending.is_empty() {
            break;
        }
        let m = construct::dls(field, &dom.spec(unit, off)).expect("valid spec");
        for k in nmds_powers(&m, &pending) {
            let i = ks.iter().position(|&x| x == k).expect("k in set");
            found[i] = Some(off);
            best[i].fetch_min(unit, Ordering::Relaxed);
        }
    }
    found
}

/// How random GDLS candidates are shaped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdlsStructure {
    pub rho1: Permutation,
    /// Drawn at random, disagreeing with ρ1 everywhere, when unset.
    pub rho2: Option<Permutation>,
    /// At most this many entries other than 1.
    pub max_nonunit: Option<usize>,
    pub max_hits: usize,
}

impl GdlsStructure {
    /// ρ1 = [n, 1, 2, …, n−1].
    pub fn new(n: usize) -> Self {
        GdlsStructure {
            rho1: Permutation::shift_back(n),
            rho2: None,
            max_nonunit: None,
            max_hits: 32,
        }
    }
}

/// {1, α, α^-1, α^2, α^-2}, deduplicated.
pub fn default_entry_set(field: &Field) -> Vec<u8> {
    let mut out = Vec::new();
    for e in [0i64, 1, -1, 2, -2] {
        let v = field.alpha_pow(e);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn random_gdls_candidate(
    c: &SearchCampaign,
    entries: &[u8],
    st: &GdlsStructure,
    iteration: u64,
) -> GdlsSpec {
    let n = c.n;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    rng.set_stream(iteration);
    let rho2 = match &st.rho2 {
        Some(p) => p.clone(),
        None => loop {
            let p = Permutation::random(n, &mut rng);
            if (0..n).all(|k| p.apply(k) != st.rho1.apply(k)) {
                break p;
            }
        },
    };
    let mut support = index::sample(&mut rng, n, c.l).into_vec();
    support.sort_unstable();
    let slots = n + c.l;
    let values: Vec<u8> = match st.max_nonunit {
        None => (0..slots).map(|_| *entries.choose(&mut rng).expect("entries")).collect(),
        Some(max) => {
            let others: Vec<u8> = entries.iter().copied().filter(|&v| v != 1).collect();
            let mut vals = vec![1u8; slots];
            if !others.is_empty() {
                let count = rng.gen_range(0..=max.min(slots));
                for p in index::sample(&mut rng, slots, count) {
                    vals[p] = *others.choose(&mut rng).expect("nonempty");
                }
            }
            vals
        }
    };
    let mut d2 = vec![0u8; n];
    for (t, &pos) in support.iter().enumerate() {
        d2[pos] = values[n + t];
    }
    GdlsSpec {
        rho1: st.rho1.clone(),
        rho2,
        d1: values[..n].to_vec(),
        d2,
    }
}

/// Seeded random GDLS search. Hits are sorted by (cost, iteration), one per
/// distinct matrix, reporting the smallest working exponent.
pub fn random_gdls_search(c: &SearchCampaign, entries: &[u8], st: &GdlsStructure) -> Result<SearchReport> {
    let field = c.field()?;
    let n = c.n;
    if n < 2 || c.l > n || st.rho1.len() != n {
        return Err(Error::InvalidSpec(format!("bad GDLS shape n = {n}, l = {}", c.l)));
    }
    if entries.is_empty() || entries.iter().any(|&v| v == 0 || !field.contains(v as u32)) {
        return Err(Error::InvalidSpec("entry set must hold nonzero field elements".into()));
    }
    if let Some(p) = &st.rho2 {
        GdlsSpec {
            rho1: st.rho1.clone(),
            rho2: p.clone(),
            d1: vec![1; n],
            d2: vec![0; n],
        }
        .validate()?;
    }
    let ks = c.k_values();
    let budget = c.budget.unwrap_or(DEFAULT_RANDOM_BUDGET);
    let mut report = SearchReport::empty(c);
    report.candidates_examined = budget;
    if budget == 0 {
        return Ok(report);
    }
    let mut found: Vec<(u64, u64, GdlsSpec, FieldMatrix)> = (0..budget)
        .into_par_iter()
        .filter_map(|it| {
            let spec = random_gdls_candidate(c, entries, st, it);
            let m = construct::gdls(&field, &spec).ok()?;
            nmds_powers(&m, &ks).first().map(|&k| (it, k, spec, m))
        })
        .collect();
    found.sort_by_key(|h| h.0);
    let mut seen = HashSet::new();
    let mut hits = Vec::new();
    for (it, k, spec, m) in found {
        if !seen.insert(m.data().to_vec()) {
            continue;
        }
        let cost = cost::matrix_cost(&Matrix::Field(m.clone()), Metric::Default)?.total;
        hits.push(Hit {
            index: it,
            k,
            cost: Some(cost),
            spec: Some(gdls_string(&field, &spec)),
            rows: rows_hex(&m),
        });
    }
    hits.sort_by_key(|h| (h.cost, h.index));
    hits.truncate(st.max_hits);
    report.hits = hits;
    Ok(report)
}

/// Supports with n+1 cells covering every row and column, the doubled row
/// moved to the top by a simultaneous row/column permutation.
fn k1_supports(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let rest = n - 1;
    let total = (n as u64).pow(rest as u32);
    for pair in all_combinations(n, 2) {
        for code in 0..total {
            let mut cells = vec![(0, pair[0]), (0, pair[1])];
            let mut c = code;
            for i in 1..n {
                cells.push((i, (c % n as u64) as usize));
                c /= n as u64;
            }
            let mut covered = vec![false; n];
            for &(_, j) in &cells {
                covered[j] = true;
            }
            if covered.iter().all(|&b| b) {
                out.push(cells);
            }
        }
    }
    out
}

struct K1Domain {
    n: usize,
    q1: u64,
    supports: Vec<Vec<(usize, usize)>>,
    per_support: u64,
}

impl K1Domain {
    fn new(n: usize, field: &Field) -> Result<Self> {
        if !(2..=6).contains(&n) {
            return Err(Error::SizeGuard(format!("K = 1 check supports 2 ≤ n ≤ 6, got {n}")));
        }
        let q1 = field.size() as u64 - 1;
        let per_support = q1
            .checked_pow(n as u32 + 1)
            .ok_or_else(|| Error::SizeGuard("K = 1 domain too large".into()))?;
        Ok(K1Domain {
            n,
            q1,
            supports: k1_supports(n),
            per_support,
        })
    }

    fn size(&self) -> Option<u64> {
        (self.supports.len() as u64).checked_mul(self.per_support)
    }

    fn matrix(&self, field: &Field, index: u64) -> FieldMatrix {
        let cells = &self.supports[(index / self.per_support) as usize];
        let mut o = index % self.per_support;
        let mut m = FieldMatrix::zero(field, self.n, self.n);
        for &(i, j) in cells.iter().rev() {
            m.set(i, j, (o % self.q1 + 1) as u8);
            o /= self.q1;
        }
        m
    }
}

fn k1_campaign(c: &SearchCampaign) -> Result<SearchReport> {
    let field = c.field()?;
    let n = c.n;
    let dom = K1Domain::new(n, &field)?;
    let size = dom.size().ok_or_else(|| Error::SizeGuard("K = 1 domain too large".into()))?;
    let ks: Vec<u64> = if c.k_set.is_empty() { (1..=n as u64).collect() } else { c.k_values() };
    let exhaustive = size <= c.budget.unwrap_or(DEFAULT_K1_CAP);
    let samples = if exhaustive { size } else { c.budget.unwrap_or(0) };
    let eval = |idx: u64| {
        let m = dom.matrix(&field, idx);
        let good = nmds_powers(&m, &ks);
        (!good.is_empty()).then_some((idx, good, m))
    };
    let mut found: Vec<(u64, Vec<u64>, FieldMatrix)> = if exhaustive {
        (0..size).into_par_iter().filter_map(eval).collect()
    } else {
        (0..samples)
            .into_par_iter()
            .filter_map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
                rng.set_stream(s);
                eval(rng.gen_range(0..size))
            })
            .collect()
    };
    found.sort_by_key(|f| f.0);
    let fs = field_spec(&field);
    let hit = |(idx, _, m): &(u64, Vec<u64>, FieldMatrix), k: u64| Hit {
        index: *idx,
        k,
        cost: None,
        spec: None,
        rows: rows_hex(m),
    };
    let cells = ks
        .iter()
        .map(|&k| {
            let w = found.iter().find(|f| f.1.contains(&k));
            Cell {
                n,
                l: 1,
                k,
                field: fs.clone(),
                outcome: match (w, exhaustive) {
                    (Some(_), _) => Outcome::Exists,
                    (None, true) => Outcome::Dne,
                    (None, false) => Outcome::Unresolved,
                },
                reason: None,
                witness: w.map(|f| hit(f, k)),
            }
        })
        .collect();
    let hits = found.iter().take(MAX_LISTED).map(|f| hit(f, f.1[0])).collect();
    Ok(SearchReport {
        campaign: c.clone(),
        candidates_examined: samples,
        domain_size: Some(size),
        exhaustive,
        cells,
        hits,
        max_branch: None,
        wall_clock: Duration::ZERO,
    })
}

/// True iff no K = 1 matrix of order n over `field` has an NMDS power
/// M^k with k ≤ n. Exhaustive; errors when the domain exceeds the default cap.
pub fn exhaustive_k1_check(n: usize, field: &Field) -> Result<bool> {
    let dom = K1Domain::new(n, field)?;
    match dom.size() {
        Some(s) if s <= DEFAULT_K1_CAP => {}
        _ => return Err(Error::SizeGuard(format!("K = 1 domain for n = {n} over {field} is too large"))),
    }
    let c = SearchCampaign::new(Mode::ExhaustiveK1, n, 1, field);
    Ok(k1_campaign(&c)?.hits.is_empty())
}

/// ⌊(2n+4)/3⌋, the largest possible branch number of an n×n binary matrix.
pub fn binary_branch_bound(n: usize) -> usize {
    (2 * n + 4) / 3
}

fn binary_matrix(field: &Field, n: usize, bits: u64) -> FieldMatrix {
    let data = (0..n * n).map(|b| (bits >> b & 1) as u8).collect();
    FieldMatrix::new(field, n, n, data).expect("shape")
}

/// Largest differential branch number over all n×n binary matrices, with
/// the first matrix attaining it.
pub fn max_binary_branch_witness(n: usize) -> Result<(usize, FieldMatrix)> {
    if n == 0 || n > 4 {
        return Err(Error::SizeGuard(format!("binary branch scan needs 1 ≤ n ≤ 4, got {n}")));
    }
    let f2 = Field::new(1, 0x3)?;
    let total = 1u64 << (n * n);
    let betas: Vec<usize> = (0..total)
        .into_par_iter()
        .map(|bits| {
            let m = Matrix::Field(binary_matrix(&f2, n, bits));
            branch::branch_differential(&m).map(|(b, _)| b).unwrap_or(0)
        })
        .collect();
    let best = *betas.iter().max().expect("nonempty");
    let at = betas.iter().position(|&b| b == best).expect("present") as u64;
    Ok((best, binary_matrix(&f2, n, at)))
}

pub fn max_binary_branch(n: usize) -> Result<usize> {
    Ok(max_binary_branch_witness(n)?.0)
}

fn binary_branch_campaign(c: &SearchCampaign) -> Result<SearchReport> {
    let (best, m) = max_binary_branch_witness(c.n)?;
    let mut report = SearchReport::empty(c);
    report.candidates_examined = 1 << (c.n * c.n);
    report.exhaustive = true;
    report.max_branch = Some(best);
    report.hits.push(Hit {
        index: 0,
        k: 1,
        cost: None,
        spec: None,
        rows: rows_hex(&m),
    });
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Circulant,
    LeftCirculant,
    Toeplitz,
    Hankel,
    Hadamard,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circulant" => Ok(Family::Circulant),
            "left-circulant" => Ok(Family::LeftCirculant),
            "toeplitz" => Ok(Family::Toeplitz),
            "hankel" => Ok(Family::Hankel),
            "hadamard" => Ok(Family::Hadamard),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

impl Family {
    pub fn params(self, n: usize) -> usize {
        match self {
            Family::Toeplitz | Family::Hankel => 2 * n - 1,
            _ => n,
        }
    }

    /// Which parameter sits at (i, j). Toeplitz parameters are the first
    /// row then the first column below the corner; Hankel ones run along
    /// the anti-diagonals.
    fn param_at(self, n: usize, i: usize, j: usize) -> usize {
        match self {
            Family::Circulant => (j + n - i) % n,
            Family::LeftCirculant => (i + j) % n,
            Family::Toeplitz => {
                if j >= i {
                    j - i
                } else {
                    n - 1 + i - j
                }
            }
            Family::Hankel => i + j,
            Family::Hadamard => i ^ j,
        }
    }

    fn check(self, n: usize) -> Result<()> {
        if n == 0 || (self == Family::Hadamard && !n.is_power_of_two()) {
            return Err(Error::InvalidSpec(format!("no {self:?} matrix of order {n}")));
        }
        Ok(())
    }

    pub fn build(self, field: &Field, params: &[u8]) -> Result<FieldMatrix> {
        let n = match self {
            Family::Toeplitz | Family::Hankel => (params.len() + 1) / 2,
            _ => params.len(),
        };
        self.check(n)?;
        if params.len() != self.params(n) {
            return Err(Error::Dimension(format!(
                "{self:?} of order {n} takes {} parameters",
                self.params(n)
            )));
        }
        let data = (0..n * n).map(|t| params[self.param_at(n, t / n, t % n)]).collect();
        FieldMatrix::new(field, n, n, data)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    Involutory,
    Orthogonal,
    Any,
}

impl FromStr for Predicate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "involutory" => Ok(Predicate::Involutory),
            "orthogonal" => Ok(Predicate::Orthogonal),
            "any" => Ok(Predicate::Any),
            _ => Err(Error::Parse(format!("unknown predicate {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: Family,
    pub n: usize,
    pub field: String,
    pub predicate: Predicate,
    pub exhaustive: bool,
    /// Family members generated (or search nodes visited for the
    /// structural predicates).
    pub examined: u64,
    /// Members satisfying the predicate.
    pub satisfying: u64,
    pub nmds_count: u64,
    /// Parameter vectors of the NMDS members, first few in sorted order.
    pub nmds: Vec<Vec<String>>,
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl FamilyReport {
    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "{:?} order {} over {}, predicate {:?}: {} satisfying, {} NMDS ({}, {} examined)\n",
            self.family,
            self.n,
            self.field,
            self.predicate,
            self.satisfying,
            self.nmds_count,
            if self.exhaustive { "exhaustive" } else { "partial" },
            self.examined
        );
        for p in &self.nmds {
            let _ = writeln!(out, "- ({})", p.join(", "));
        }
        out
    }
}

/// Σ x_a·x_b over `terms` = `rhs`, in characteristic 2 (so repeated
/// terms cancel in pairs).
struct Quadratic {
    terms: Vec<(usize, usize)>,
    rhs: u8,
}

struct Solver<'a> {
    field: &'a Field,
    q: usize,
    eqs: Vec<Quadratic>,
    eqs_of: Vec<Vec<usize>>,
    open: Vec<usize>,
    value: Vec<u8>,
    set: Vec<bool>,
    nodes: u64,
    limit: u64,
    aborted: bool,
    solutions: Vec<Vec<u8>>,
}

impl<'a> Solver<'a> {
    /// Equations M·M = I (involutory) or M·Mᵀ = I (orthogonal) over the
    /// family parameters.
    fn new(field: &'a Field, family: Family, n: usize, predicate: Predicate, limit: u64) -> Self {
        let nvars = family.params(n);
        let mut eqs = Vec::new();
        for i in 0..n {
            let j0 = if predicate == Predicate::Orthogonal { i } else { 0 };
            for j in j0..n {
                let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
                for k in 0..n {
                    let a = family.param_at(n, i, k);
                    let b = match predicate {
                        Predicate::Orthogonal => family.param_at(n, j, k),
                        _ => family.param_at(n, k, j),
                    };
                    *count.entry((a.min(b), a.max(b))).or_default() += 1;
                }
                let terms: Vec<_> = count.into_iter().filter(|&(_, c)| c % 2 == 1).map(|(t, _)| t).collect();
                eqs.push(Quadratic {
                    terms,
                    rhs: (i == j) as u8,
                });
            }
        }
        let mut eqs_of = vec![Vec::new(); nvars];
        let mut open = Vec::with_capacity(eqs.len());
        for (e, eq) in eqs.iter().enumerate() {
            let mut vars: Vec<usize> = eq.terms.iter().flat_map(|&(a, b)| [a, b]).collect();
            vars.sort_unstable();
            vars.dedup();
            open.push(vars.len());
            for v in vars {
                eqs_of[v].push(e);
            }
        }
        Solver {
            field,
            q: field.size(),
            eqs,
            eqs_of,
            open,
            value: vec![0; nvars],
            set: vec![false; nvars],
            nodes: 0,
            limit,
            aborted: false,
            solutions: Vec::new(),
        }
    }

    fn holds(&self, e: usize) -> bool {
        let eq = &self.eqs[e];
        let s = eq
            .terms
            .iter()
            .fold(0u8, |acc, &(a, b)| acc ^ self.field.mul(self.value[a], self.value[b]));
        s == eq.rhs
    }

    fn solve(&mut self) {
        if (0..self.eqs.len()).any(|e| self.open[e] == 0 && !self.holds(e)) {
            return;
        }
        self.dfs();
    }

    fn dfs(&mut self) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
            return;
        }
        // branch on the variable with the fewest consistent values
        let mut best: Option<(usize, Vec<u8>)> = None;
        for v in 0..self.value.len() {
            if self.set[v] {
                continue;
            }
            let tight: Vec<usize> = self.eqs_of[v].iter().copied().filter(|&e| self.open[e] == 1).collect();
            let mut dom = Vec::new();
            for x in 0..self.q {
                self.value[v] = x as u8;
                if tight.iter().all(|&e| self.holds(e)) {
                    dom.push(x as u8);
                }
            }
            self.value[v] = 0;
            if dom.is_empty() {
                return;
            }
            if best.as_ref().map_or(true, |(_, d)| dom.len() < d.len()) {
                best = Some((v, dom));
            }
        }
        let Some((v, dom)) = best else {
            self.solutions.push(self.value.clone());
            return;
        };
        self.set[v] = true;
        for &e in &self.eqs_of[v] {
            self.open[e] -= 1;
        }
        for x in dom {
            self.value[v] = x;
            self.dfs();
        }
        self.value[v] = 0;
        for &e in &self.eqs_of[v] {
            self.open[e] += 1;
        }
        self.set[v] = false;
    }
}

/// Classifies family members by NMDS status. Involutory and orthogonal
/// members are found exactly by solving M² = I or M·Mᵀ = I over the family
/// parameters; `any` enumerates all members when they fit in `budget` and
/// samples `budget` of them otherwise.
pub fn structured_family_scan(
    family: Family,
    n: usize,
    field: &Field,
    predicate: Predicate,
    budget: Option<u64>,
    seed: u64,
) -> Result<FamilyReport> {
    family.check(n)?;
    let start = Instant::now();
    let cap = budget.unwrap_or(DEFAULT_FAMILY_CAP);
    let p = family.params(n);
    let q = field.size() as u64;
    let (members, examined, exhaustive): (Vec<Vec<u8>>, u64, bool) = match predicate {
        Predicate::Involutory | Predicate::Orthogonal => {
            let mut s = Solver::new(field, family, n, predicate, cap);
            s.solve();
            (std::mem::take(&mut s.solutions), s.nodes.min(cap), !s.aborted)
        }
        Predicate::Any => {
            let total = q.checked_pow(p as u32).filter(|&t| t <= cap);
            let decode = |mut idx: u64| {
                let mut v = vec![0u8; p];
                for x in v.iter_mut().rev() {
                    *x = (idx % q) as u8;
                    idx /= q;
                }
                v
            };
            match total {
                Some(t) => ((0..t).map(decode).collect(), t, true),
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let v = (0..cap).map(|_| (0..p).map(|_| rng.gen_range(0..q) as u8).collect()).collect();
                    (v, cap, false)
                }
            }
        }
    };
    let mut nmds: Vec<Vec<u8>> = members
        .par_iter()
        .filter(|params| branch::field_is_nmds(&family.build(field, params).expect("shape")))
        .cloned()
        .collect();
    nmds.sort();
    let nmds_count = nmds.len() as u64;
    Ok(FamilyReport {
        family,
        n,
        field: field_spec(field),
        predicate,
        exhaustive,
        examined,
        satisfying: members.len() as u64,
        nmds_count,
        nmds: nmds
            .iter()
            .take(MAX_LISTED)
            .map(|v| v.iter().map(|&x| field.format_element(x)).collect())
            .collect(),
        wall_clock: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_sizes() {
        let f = Field::gf16();
        assert_eq!(reduced_domain_size(4, 2, &f).unwrap(), 20250);
        assert_eq!(reduced_dls_domain(4, 2, &f).unwrap().count(), 20250);
        assert_eq!(reduced_dls_domain(4, 0, &f).unwrap().count(), 15);
        assert_eq!(unreduced_domain_size(6, 3, 4), 265 * 20 * (1u128 << 36));
        assert_eq!(derangement_count(4), 9);
        assert_eq!(derangement_count(6), 265);
    }

    #[test]
    fn domain_order_and_shape() {
        let f = Field::gf16();
        let specs: Vec<_> = reduced_dls_domain(4, 2, &f).unwrap().take(17).collect();
        assert_eq!(specs[0].rho.one_based(), vec![2, 3, 4, 1]);
        assert_eq!(specs[0].d1, vec![1, 1, 1, 1]);
        assert_eq!(specs[0].d2, vec![1, 1, 0, 0]);
        assert_eq!(specs[1].d2, vec![1, 2, 0, 0]);
        assert_eq!(specs[15].d2, vec![2, 1, 0, 0]);
        let all: Vec<_> = reduced_dls_domain(3, 1, &f).unwrap().collect();
        let distinct: HashSet<_> = all.iter().map(|s| (s.d1.clone(), s.d2.clone())).collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|s| s.d1[1..].iter().all(|&v| v == 1)));
        assert!(all.iter().all(|s| s.d2.iter().filter(|&&v| v != 0).count() == 1));
    }

    #[test]
    fn small_order_four_cell() {
        let f = Field::gf16();
        let c = SearchCampaign::new(Mode::ReducedDls, 4, 2, &f);
        let r = search_k_nmds_dls(&c).unwrap();
        assert_eq!(r.outcome(3), Some(Outcome::Exists));
        assert_eq!(r.outcome(4), Some(Outcome::Exists));
        for cell in &r.cells {
            let spec = DlsSpec::parse(&f, cell.witness.as_ref().unwrap().spec.as_ref().unwrap()).unwrap();
            let m = Matrix::Field(construct::dls(&f, &spec).unwrap());
            assert!(branch::is_k_nmds(&m, cell.k).unwrap().is_nmds);
        }
    }

    #[test]
    fn theorem_prunes_small_powers() {
        let f = Field::gf16();
        let c = SearchCampaign::new(Mode::ReducedDls, 5, 2, &f).with_k(&[1, 2]);
        let r = search_k_nmds_dls(&c).unwrap();
        assert_eq!(r.candidates_examined, 0);
        assert!(r.cells.iter().all(|c| c.outcome == Outcome::Dne));
    }

    #[test]
    fn budget_gives_unresolved() {
        let f = Field::gf16();
        let c = SearchCampaign::new(Mode::ReducedDls, 5, 2, &f).with_budget(1000);
        let r = search_k_nmds_dls(&c).unwrap();
        assert!(r.cells.iter().all(|c| c.outcome == Outcome::Unresolved));
        assert!(r.has_unresolved());
        assert!(!r.exhaustive);
    }

    #[test]
    fn rejects_powers_above_n() {
        let f = Field::gf16();
        let c = SearchCampaign::new(Mode::ReducedDls, 4, 2, &f).with_k(&[5]);
        assert!(search_k_nmds_dls(&c).is_err());
    }

    #[test]
    fn zero_budget_random_search_is_empty() {
        let f = Field::gf16();
        let c = SearchCampaign::new(Mode::RandomGdls, 4, 2, &f).with_k(&[3]).with_budget(0);
        let r = random_gdls_search(&c, &default_entry_set(&f), &GdlsStructure::new(4)).unwrap();
        assert!(r.hits.is_empty() && r.cells.is_empty());
    }

    #[test]
    fn entry_set() {
        let f = Field::gf16();
        assert_eq!(default_entry_set(&f), vec![1, 2, 9, 4, 0xd]);
    }

    #[test]
    fn random_candidates_respect_structure() {
        let f = Field::gf16();
        let c = SearchCampaign::new(Mode::RandomGdls, 5, 3, &f);
        let st = GdlsStructure::new(5);
        for it in 0..200 {
            let s = random_gdls_candidate(&c, &default_entry_set(&f), &st, it);
            s.validate().unwrap();
            assert_eq!(s.rho1.one_based(), vec![5, 1, 2, 3, 4]);
            assert_eq!(s.fixed_xor(), 3);
        }
        let a = random_gdls_candidate(&c, &default_entry_set(&f), &st, 7);
        let b = random_gdls_candidate(&c, &default_entry_set(&f), &st, 7);
        assert_eq!(a, b);
    }

    #[test]
    fn k1_support_count() {
        // n = 3: pairs in row 0 times maps of rows 1, 2 covering the rest
        assert_eq!(k1_supports(3).len(), 3 * 5);
        for s in k1_supports(4) {
            assert_eq!(s.len(), 5);
        }
    }

    #[test]
    fn binary_branch_small() {
        assert_eq!(max_binary_branch(2).unwrap(), 2);
        assert_eq!(max_binary_branch(3).unwrap(), 3);
        assert!(max_binary_branch(5).is_err());
    }

    #[test]
    fn family_parameters_match_builders() {
        let f = Field::gf16();
        let x = [1u8, 2, 3, 4, 5];
        assert_eq!(Family::Circulant.build(&f, &x).unwrap(), construct::circulant(&f, &x).unwrap());
        assert_eq!(
            Family::LeftCirculant.build(&f, &x).unwrap(),
            construct::left_circulant(&f, &x).unwrap()
        );
        let t = [1u8, 2, 3, 4, 5, 6, 7, 8, 9];
        assert_eq!(
            Family::Toeplitz.build(&f, &t).unwrap(),
            construct::toeplitz(&f, &t[..5], &[1, 6, 7, 8, 9]).unwrap()
        );
        assert_eq!(
            Family::Hankel.build(&f, &t).unwrap(),
            construct::hankel(&f, &t[..5], &t[4..]).unwrap()
        );
        assert_eq!(
            Family::Hadamard.build(&f, &x[..4]).unwrap(),
            construct::hadamard(&f, &x[..4]).unwrap()
        );
        assert!(Family::Hadamard.build(&f, &x).is_err());
    }

    #[test]
    fn involutory_solver_matches_brute_force_order_three() {
        let f = Field::gf16();
        for family in [Family::Circulant, Family::LeftCirculant, Family::Toeplitz, Family::Hankel] {
            let p = family.params(3);
            let mut brute = Vec::new();
            for idx in 0..16u64.pow(p as u32) {
                let v: Vec<u8> = (0..p).map(|t| (idx >> (4 * t) & 0xf) as u8).collect();
                let m = family.build(&f, &v).unwrap();
                if m.is_involutory() {
                    brute.push(v);
                }
            }
            brute.sort();
            let mut s = Solver::new(&f, family, 3, Predicate::Involutory, u64::MAX);
            s.solve();
            let mut sol = s.solutions.clone();
            sol.sort();
            assert_eq!(sol, brute, "{family:?}");
        }
    }

    #[test]
    fn circulant_order_four_involutory_nmds() {
        let f = Field::gf16();
        let r = structured_family_scan(Family::Circulant, 4, &f, Predicate::Involutory, None, 0).unwrap();
        assert!(r.exhaustive);
        assert!(r.nmds.contains(&vec!["0x0".into(), "0x1".into(), "0x1".into(), "0x1".into()]));
    }

    #[test]
    fn existence_grid_layout() {
        assert_eq!(existence_markdown(&[]), "| n | k |\n|---|---|\n");
        let cell = |n, l, k, field: &str, outcome| Cell {
            n,
            l,
            k,
            field: field.into(),
            outcome,
            reason: None,
            witness: None,
        };
        let md = existence_markdown(&[
            cell(5, 3, 4, "4:0x13", Outcome::Exists),
            cell(5, 2, 4, "4:0x13", Outcome::Dne),
            cell(4, 2, 3, "8:0x1c3", Outcome::Exists),
        ]);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines[0], "| n | k | K=2 GF(2^4) | K=2 GF(2^8) | K=3 GF(2^4) |");
        assert_eq!(lines[2], "| 4 | 3 | -- | Exists | -- |");
        assert_eq!(lines[3], "| 5 | 4 | DNE | -- | Exists |");
    }

    #[test]
    fn campaign_toml() {
        let c = SearchCampaign::from_toml(
            "mode = \"reduced-dls\"\nn = 5\nl = 3\nfield = \"4:0x13\"\nk_set = [5, 4]\nseed = 7\nbudget = 100\n",
        )
        .unwrap();
        assert_eq!(c.mode, Mode::ReducedDls);
        assert_eq!(c.k_values(), vec![4, 5]);
        assert_eq!(c.budget, Some(100));
        let d = SearchCampaign::from_toml("mode = \"random-gdls\"\nn = 4\n").unwrap();
        assert_eq!(d.k_values(), vec![3, 4]);
        assert_eq!(d.seed, DEFAULT_SEED);
        assert!(SearchCampaign::from_toml("mode = \"x\"\nn = 4\n").is_err());
        assert!(SearchCampaign::from_toml("mode = \"random-gdls\"\nn = 4\nbogus = 1\n").is_err());
    }
}
