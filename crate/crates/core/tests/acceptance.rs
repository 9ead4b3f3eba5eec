//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//!     cargo test --release --test acceptance

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nmds::branch::{branch_differential, is_k_nmds, is_nmds};
use nmds::catalog::{Catalog, Filter};
use nmds::construct::{self, circulant, reversal, DlsSpec};
use nmds::cost::{d_xor, s_xor};
use nmds::search::{
    binary_branch_bound, exhaustive_k1_check, max_binary_branch, run_campaign, structured_family_scan, Family,
    Mode, Outcome, Predicate, RunOptions, SearchCampaign,
};
use nmds::{Field, FieldMatrix, Matrix};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

// ---- independent oracles -------------------------------------------------

/// Shift-and-add multiplication modulo `poly` of degree `r`.
fn gmul(mut a: u32, mut b: u32, poly: u32, r: u32) -> u32 {
    let mut p = 0;
    while b != 0 {
        if b & 1 == 1 {
            p ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> r & 1 == 1 {
            a ^= poly;
        }
    }
    p
}

struct Table {
    q: usize,
    mul: Vec<u8>,
}

impl Table {
    fn new(r: u32, poly: u32) -> Self {
        let q = 1usize << r;
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                mul[a * q + b] = gmul(a as u32, b as u32, poly, r) as u8;
            }
        }
        Table { q, mul }
    }

    fn m(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }
}

/// min over nonzero x of w(x) + w(Mx). Inputs are scaled so the first
/// nonzero coordinate is 1; the tail runs as an odometer and Mx is updated
/// one column at a time.
fn oracle_branch(t: &Table, n: usize, rows: &[Vec<u8>]) -> usize {
    let q = t.q as u8;
    let cols: Vec<Vec<u8>> = (0..n).map(|j| (0..n).map(|i| rows[i][j]).collect()).collect();
    let mut best = usize::MAX;
    for lead in 0..n {
        let mut x = vec![0u8; n];
        x[lead] = 1;
        let mut y = cols[lead].clone();
        'odometer: loop {
            let w = x.iter().chain(&y).filter(|&&v| v != 0).count();
            best = best.min(w);
            for p in (lead + 1..n).rev() {
                let old = x[p];
                let new = if old + 1 == q { 0 } else { old + 1 };
                for i in 0..n {
                    y[i] ^= t.m(old ^ new, cols[p][i]);
                }
                x[p] = new;
                if new != 0 {
                    continue 'odometer;
                }
            }
            break;
        }
    }
    best
}

// ---- criteria --------------------------------------------------------------

fn criterion_1() -> Check {
    let start = Instant::now();
    let expected: &[(&str, Option<u64>, usize)] = &[
        ("rec-n4-B", Some(3), 8),
        ("rec-n4-B-gf256", Some(3), 16),
        ("rec-n5-A1", Some(4), 14),
        ("rec-n5-A2", Some(5), 13),
        ("rec-n6-B1", Some(5), 14),
        ("rec-n6-B2", Some(6), 13),
        ("rec-n7-B1", Some(5), 22),
        ("rec-n7-B2", Some(6), 20),
        ("rec-n7-B3", Some(7), 18),
        ("rec-n8-B1", Some(7), 42),
        ("rec-n8-B2", Some(8), 39),
        ("rec-n5-A1-gl8", Some(4), 26),
        ("rec-n5-A2-gl8", Some(5), 25),
        ("rec-n6-B1-gl8", Some(5), 26),
        ("rec-n6-B2-gl8", Some(6), 25),
        ("rec-n7-B1-gl8", Some(5), 38),
        ("rec-n7-B2-gl8", Some(6), 36),
        ("rec-n7-B3-gl8", Some(7), 34),
        ("rec-n8-B1-gl8", Some(7), 40),
        ("rec-n8-B2-gl8", Some(8), 38),
        ("nonrec-n4-M", None, 24),
        ("nonrec-n5-M", None, 50),
        ("nonrec-n6-M", None, 65),
        ("nonrec-n7-M", None, 96),
        ("nonrec-n8-M", None, 108),
        ("nonrec-n4-M-gl8", None, 48),
        ("nonrec-n5-M-gl8", None, 98),
        ("nonrec-n6-M-gl8", None, 125),
        ("nonrec-n7-M-gl8", None, 176),
        ("nonrec-n8-M-gl8", None, 204),
    ];
    let cat = Catalog::builtin();
    let reports = cat.verify(&Filter::default()).map_err(e)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.id.as_str()).collect();
    ensure(failed.is_empty(), format!("failing entries {failed:?}"))?;
    for &(id, k, cost) in expected {
        let entry = cat.get(id).map_err(e)?;
        ensure(entry.expected.k == k, format!("{id}: stored k {:?}", entry.expected.k))?;
        ensure(entry.expected.cost == Some(cost), format!("{id}: stored cost {:?}", entry.expected.cost))?;
        let r = reports.iter().find(|r| r.id == id).ok_or(format!("{id} not verified"))?;
        let cost_check = r.checks.iter().find(|c| c.name == "cost").ok_or(format!("{id}: no cost check"))?;
        ensure(cost_check.actual == cost.to_string(), format!("{id}: cost {}", cost_check.actual))?;
        if k.is_none() {
            let nmds = r.checks.iter().find(|c| c.name == "nmds").ok_or(format!("{id}: no nmds check"))?;
            ensure(nmds.actual == "true", format!("{id}: not NMDS"))?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, format!("took {secs:.1}s"))?;
    Ok(format!("{} entries verified, {} claims matched, {secs:.1}s", reports.len(), expected.len()))
}

fn criterion_2() -> Check {
    let gf16 = Field::gf16();
    let gf256 = Field::gf256();
    let plan = [
        (4, 2, &gf16, Outcome::Exists),
        (4, 2, &gf256, Outcome::Exists),
        (5, 2, &gf16, Outcome::Dne),
        (5, 3, &gf16, Outcome::Exists),
        (6, 2, &gf16, Outcome::Dne),
    ];
    let mut lines = Vec::new();
    for (n, l, f, want) in plan {
        let c = SearchCampaign::new(Mode::ReducedDls, n, l, f);
        let r = run_campaign(&c, &RunOptions::default()).map_err(e)?;
        for k in [n as u64 - 1, n as u64] {
            let cell = r.cells.iter().find(|c| c.k == k).ok_or("missing cell")?;
            ensure(cell.outcome == want, format!("n={n} l={l} {f} k={k}: {:?}", cell.outcome))?;
            if let Some(w) = &cell.witness {
                let spec = DlsSpec::parse(f, w.spec.as_deref().unwrap_or("")).map_err(e)?;
                ensure(spec.d2.iter().filter(|&&v| v != 0).count() == l, "witness has wrong K")?;
                ensure(spec.rho.is_n_cycle(), "witness ρ is not an n-cycle")?;
                let m = Matrix::Field(construct::dls(f, &spec).map_err(e)?);
                ensure(is_k_nmds(&m, k).map_err(e)?.is_nmds, format!("witness for k={k} fails"))?;
            }
        }
        lines.push(format!("n={n} K={l} GF(2^{}): {}", f.r(), want.label()));
    }
    Ok(lines.join("; "))
}

fn criterion_3() -> Check {
    for spec in ["1:0x3", "2:0x7"] {
        let f: Field = spec.parse().map_err(e)?;
        for n in [4, 5] {
            ensure(exhaustive_k1_check(n, &f).map_err(e)?, format!("K=1 n={n} over {spec} found a matrix"))?;
        }
    }
    for (n, want) in [(2, 2), (3, 3), (4, 4)] {
        let b = max_binary_branch(n).map_err(e)?;
        ensure(b == want && b <= binary_branch_bound(n), format!("binary n={n}: {b}"))?;
    }

    // circulants of order 5: the solver against brute force over all 16^5 rows
    let f = Field::gf16();
    let t = Table::new(4, 0x13);
    let mut brute = BTreeSet::new();
    for idx in 0..1u32 << 20 {
        let x: Vec<u8> = (0..5).map(|i| (idx >> (4 * i) & 0xf) as u8).collect();
        // M² = I for a circulant: Σ_k x_k x_(j−k) = δ_j0
        let ok = (0..5).all(|j| {
            let s = (0..5).fold(0u8, |acc, k| acc ^ t.m(x[k], x[(j + 5 - k) % 5]));
            s == (j == 0) as u8
        });
        if ok {
            brute.insert(x);
        }
    }
    let scan = structured_family_scan(Family::Circulant, 5, &f, Predicate::Involutory, None, 0).map_err(e)?;
    ensure(scan.exhaustive, "circulant scan not exhaustive")?;
    ensure(scan.satisfying == brute.len() as u64, format!("involutory circulants {} vs {}", scan.satisfying, brute.len()))?;
    let brute_nmds = brute
        .iter()
        .filter(|x| is_nmds(&Matrix::Field(circulant(&f, x).unwrap())).unwrap().is_nmds)
        .count();
    ensure(scan.nmds_count == 0 && brute_nmds == 0, "involutory NMDS circulant of order 5")?;

    let mut toeplitz = Vec::new();
    for n in [5, 6] {
        let s = structured_family_scan(Family::Toeplitz, n, &f, Predicate::Involutory, None, 0).map_err(e)?;
        ensure(s.exhaustive, format!("toeplitz n={n} not exhaustive"))?;
        ensure(s.nmds_count == 0, format!("toeplitz n={n}: {} NMDS", s.nmds_count))?;
        toeplitz.push(s.satisfying);
    }
    Ok(format!(
        "K=1 n=4,5 over GF(2), GF(4) none; max binary branch 2,3,4; {} involutory circulants n=5, none NMDS; involutory Toeplitz n=5: {}, n=6: {}, none NMDS",
        brute.len(),
        toeplitz[0],
        toeplitz[1]
    ))
}

fn criterion_4() -> Check {
    // every binary 4×4 matrix
    let f2: Field = "1:0x3".parse().map_err(e)?;
    let t2 = Table::new(1, 0x3);
    let mut bad = 0;
    for bits in 0u32..1 << 16 {
        let rows: Vec<Vec<u8>> = (0..4).map(|i| (0..4).map(|j| (bits >> (4 * i + j) & 1) as u8).collect()).collect();
        let m = Matrix::Field(FieldMatrix::from_rows(&f2, &rows).map_err(e)?);
        if branch_differential(&m).map_err(e)?.0 != oracle_branch(&t2, 4, &rows) {
            bad += 1;
        }
    }
    ensure(bad == 0, format!("{bad} binary disagreements"))?;

    let f = Field::gf16();
    let t = Table::new(4, 0x13);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad16 = 0;
    for i in 0..10_000 {
        let n = 3 + i % 3;
        // half dense, half with many zeros so small branch numbers show up
        let zero_p = if i % 2 == 0 { 0.0 } else { 0.35 };
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| if rng.gen_bool(zero_p) { 0 } else { rng.gen_range(0..16) })
                    .collect()
            })
            .collect();
        let m = Matrix::Field(FieldMatrix::from_rows(&f, &rows).map_err(e)?);
        if branch_differential(&m).map_err(e)?.0 != oracle_branch(&t, n, &rows) {
            bad16 += 1;
        }
    }
    ensure(bad16 == 0, format!("{bad16} GF(2^4) disagreements"))?;
    Ok("65536 binary 4×4 and 10000 GF(2^4) matrices, 0 disagreements".into())
}

fn rand_nonzero(rng: &mut ChaCha8Rng) -> u8 {
    rng.gen_range(1..16)
}

/// n×n over GF(2^4) with one zero per row and column on a random
/// permutation pattern, so NMDS cases are common.
fn near_dense(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> FieldMatrix {
    let p = construct::Permutation::random(n, rng);
    let mut m = FieldMatrix::zero(f, n, n);
    for i in 0..n {
        for j in 0..n {
            if p.apply(j) != i || rng.gen_bool(0.1) {
                m.set(i, j, rand_nonzero(rng));
            }
        }
    }
    m
}

fn permute(f: &Field, m: &FieldMatrix, rp: &construct::Permutation, cp: &construct::Permutation) -> FieldMatrix {
    let n = m.order();
    let mut out = FieldMatrix::zero(f, n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(rp.apply(i), cp.apply(j), m.get(i, j));
        }
    }
    out
}

fn scale(f: &Field, m: &FieldMatrix, left: &[u8], right: &[u8]) -> FieldMatrix {
    let n = m.order();
    let mut out = m.clone();
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, f.mul(f.mul(left[i], m.get(i, j)), right[j]));
        }
    }
    out
}

fn criterion_5() -> Check {
    let f = Field::gf16();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let nmds = |m: &FieldMatrix| is_nmds(&Matrix::Field(m.clone())).unwrap().is_nmds;
    let knmds = |m: &FieldMatrix, k| is_k_nmds(&Matrix::Field(m.clone()), k).unwrap().is_nmds;
    let mut violations = Vec::new();
    let mut positives = [0usize; 6];
    let trials = 1000;
    for _ in 0..trials {
        let n = rng.gen_range(3..=5);
        let m = near_dense(&f, n, &mut rng);
        let base = nmds(&m);
        positives[0] += base as usize;
        if nmds(&m.transpose()) != base {
            violations.push("transpose");
        }
        let d1: Vec<u8> = (0..n).map(|_| rand_nonzero(&mut rng)).collect();
        let d2: Vec<u8> = (0..n).map(|_| rand_nonzero(&mut rng)).collect();
        if nmds(&scale(&f, &m, &d1, &d2)) != base {
            violations.push("scaling");
        }
        let p = construct::Permutation::random(n, &mut rng);
        let q = construct::Permutation::random(n, &mut rng);
        if nmds(&permute(&f, &m, &p, &q)) != base {
            violations.push("permutation");
        }
    }
    // inverse: 1000 nonsingular samples
    let mut done = 0;
    while done < trials {
        let n = rng.gen_range(3..=5);
        let m = near_dense(&f, n, &mut rng);
        let Ok(inv) = m.inverse() else { continue };
        done += 1;
        let base = nmds(&m);
        positives[1] += base as usize;
        if nmds(&inv) != base {
            violations.push("inverse");
        }
    }
    // k-NMDS under diagonal and permutation similarity, on sparse GDLS matrices
    let mut k_trials = 0;
    while k_trials < trials {
        let n = rng.gen_range(3..=5);
        let rho1 = construct::Permutation::random(n, &mut rng);
        let rho2 = construct::Permutation::random(n, &mut rng);
        if (0..n).any(|i| rho1.apply(i) == rho2.apply(i)) {
            continue;
        }
        let spec = construct::GdlsSpec {
            rho1,
            rho2,
            d1: (0..n).map(|_| rand_nonzero(&mut rng)).collect(),
            d2: (0..n).map(|_| if rng.gen_bool(0.4) { 0 } else { rand_nonzero(&mut rng) }).collect(),
        };
        let m = construct::gdls(&f, &spec).map_err(e)?;
        k_trials += 1;
        let k = rng.gen_range(n as u64 - 2..=n as u64 + 1).max(1);
        let base = knmds(&m, k);
        positives[2] += base as usize;
        let d: Vec<u8> = (0..n).map(|_| rand_nonzero(&mut rng)).collect();
        let dinv: Vec<u8> = d.iter().map(|&v| f.inv(v).unwrap()).collect();
        if knmds(&scale(&f, &m, &d, &dinv), k) != base {
            violations.push("diagonal similarity");
        }
        let p = construct::Permutation::random(n, &mut rng);
        if knmds(&permute(&f, &m, &p, &p), k) != base {
            violations.push("permutation similarity");
        }
    }
    ensure(violations.is_empty(), format!("violations: {violations:?}"))?;
    ensure(positives.iter().take(3).all(|&p| p > 0), "no positive samples")?;
    Ok(format!(
        "{trials} checks per transformation, 0 violations (NMDS samples: {}, {}, k-NMDS samples: {})",
        positives[0], positives[1], positives[2]
    ))
}

fn criterion_6() -> Check {
    let cat = Catalog::builtin();
    let get = |id: &str| -> Result<FieldMatrix, String> {
        let m = cat.build(cat.get(id).map_err(e)?).map_err(e)?.matrix;
        m.as_field().cloned().ok_or_else(|| format!("{id} is not a field matrix"))
    };
    for n in [5, 6, 8] {
        let c = get(&format!("circ-n{n}-orthogonal"))?;
        ensure(c.is_orthogonal(), format!("circulant n={n} not orthogonal"))?;
        ensure(is_nmds(&Matrix::Field(c.clone())).map_err(e)?.is_nmds, format!("circulant n={n} not NMDS"))?;
        // reversal permutation times the orthogonal circulant
        let r = reversal(n).field_matrix(c.field());
        let l = r.mul(&c).map_err(e)?;
        ensure(l == get(&format!("lcirc-n{n}-involutory"))?, format!("n={n}: R·C is not the stored left-circulant"))?;
        ensure(l.is_involutory(), format!("left-circulant n={n} not involutory"))?;
        ensure(is_nmds(&Matrix::Field(l)).map_err(e)?.is_nmds, format!("left-circulant n={n} not NMDS"))?;
    }
    let comp = Matrix::Field(get("companion-n4")?);
    ensure(is_k_nmds(&comp, 10).map_err(e)?.is_nmds, "companion not 10-NMDS")?;
    Ok("orthogonal circulants n=5,6,8 NMDS; reversal left-circulants involutory NMDS; companion 10-NMDS".into())
}

/// Smallest t such that a product of t column additions equals `target`
/// up to a row permutation, by trying every sequence of length ≤ `max`.
fn oracle_s_xor(target: &[u8], r: usize, max: usize) -> Option<usize> {
    let mut sorted_target = target.to_vec();
    sorted_target.sort_unstable();
    let gens: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..r).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut layer: Vec<Vec<u8>> = vec![(0..r).map(|i| 1u8 << i).collect()];
    for t in 0..=max {
        if layer.iter().any(|m| {
            let mut s = m.clone();
            s.sort_unstable();
            s == sorted_target
        }) {
            return Some(t);
        }
        layer = layer
            .iter()
            .flat_map(|m| {
                gens.iter().map(move |&(i, j)| m.iter().map(|&row| row ^ ((row >> i & 1) << j)).collect())
            })
            .collect();
    }
    None
}

/// Rows of the multiplication-by-e matrix as bit masks; column j is e·α^j.
fn oracle_mul_rows(e: u8, r: usize, poly: u32) -> Vec<u8> {
    let mut rows = vec![0u8; r];
    for j in 0..r {
        let col = gmul(e as u32, 1 << j, poly, r as u32);
        for (i, row) in rows.iter_mut().enumerate() {
            *row |= ((col >> i & 1) as u8) << j;
        }
    }
    rows
}

fn criterion_7() -> Check {
    let f = Field::gf16();
    for (e_exp, want) in [(1i64, 1usize), (-1, 1), (2, 2), (-2, 2)] {
        let v = f.alpha_pow(e_exp);
        let got = s_xor(&f, v).map_err(e)?;
        ensure(got == want, format!("s_xor(α^{e_exp}) = {got}"))?;
        let rows = oracle_mul_rows(v, 4, 0x13);
        ensure(oracle_s_xor(&rows, 4, 3) == Some(want), format!("oracle disagrees at α^{e_exp}"))?;
    }
    for v in 1..16u8 {
        let d = d_xor(&f, v).map_err(e)?;
        let ones: u32 = oracle_mul_rows(v, 4, 0x13).iter().map(|r| r.count_ones()).sum();
        ensure(d == ones as usize - 4, format!("d_xor({v:#x}) = {d}"))?;
        ensure(s_xor(&f, v).map_err(e)? <= d, format!("s_xor({v:#x}) > d_xor"))?;
    }
    Ok("s-XOR α, α^-1, α², α^-2 = 1, 1, 2, 2; s-XOR ≤ d-XOR on all 15 nonzero elements".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("catalog reproduction", criterion_1),
        ("existence grid at desk scale", criterion_2),
        ("impossibility checks", criterion_3),
        ("branch number oracle equivalence", criterion_4),
        ("invariance suite", criterion_5),
        ("positive structural examples", criterion_6),
        ("cost model consistency", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
