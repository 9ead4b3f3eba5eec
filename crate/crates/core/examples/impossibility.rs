//! Exhaustive checks behind the non-existence results: K = 1 matrices,
//! binary branch numbers, and the DLS power bound.
//!
//!     cargo run --release --example impossibility

use nmds::search::{
    binary_branch_bound, exhaustive_k1_check, max_binary_branch, run_campaign, Mode, RunOptions,
    SearchCampaign,
};
use nmds::Field;

fn main() -> nmds::Result<()> {
    for spec in ["1:0x3", "2:0x7"] {
        let f: Field = spec.parse()?;
        for n in [3, 4, 5] {
            println!("K=1, n={n} over {f}: no k-NMDS for k ≤ n: {}", exhaustive_k1_check(n, &f)?);
        }
    }
    // at n = 3 the check finds matrices, e.g. [[0,1,0],[0,0,1],[1,1,0]]
    let c = SearchCampaign::new(Mode::ExhaustiveK1, 3, 1, &"1:0x3".parse()?);
    let r = run_campaign(&c, &RunOptions::default())?;
    println!("n=3 hits: {:?}", r.hits.iter().map(|h| &h.rows).collect::<Vec<_>>());

    for n in 2..=4 {
        println!("max binary branch n={n}: {} (bound {})", max_binary_branch(n)?, binary_branch_bound(n));
    }

    let f = Field::gf16();
    let c = SearchCampaign::new(Mode::ReducedDls, 6, 3, &f).with_k(&[1, 2, 3]);
    for cell in run_campaign(&c, &RunOptions::default())?.cells {
        println!("DLS n=6 k={}: {} ({})", cell.k, cell.outcome.label(), cell.reason.unwrap_or_default());
    }
    Ok(())
}
