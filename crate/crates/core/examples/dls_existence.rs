//! Rebuilds the desk-scale part of the DLS existence grid.
//!
//! cargo run --release --example dls_existence [-- --with-n6-l3]

use nmds::search::{existence_markdown, run_campaign, Mode, RunOptions, SearchCampaign};
use nmds::Field;

fn main() -> anyhow::Result<()> {
    let extra = std::env::args().any(|a| a == "--with-n6-l3");
    let gf16 = Field::gf16();
    let gf256 = Field::gf256();
    let mut cells = Vec::new();
    let mut plan = vec![
        (4, 2, &gf16),
        (4, 2, &gf256),
        (5, 2, &gf16),
        (5, 3, &gf16),
        (6, 2, &gf16),
    ];
    if extra {
        plan.push((6, 3, &gf16));
    }
    for (n, l, field) in plan {
        let c = SearchCampaign::new(Mode::ReducedDls, n, l, field);
        let r = run_campaign(&c, &RunOptions::default())?;
        eprintln!(
            "n={n} l={l} {field}: {} candidates in {:.2?}",
            r.candidates_examined, r.wall_clock
        );
        for cell in &r.cells {
            if let Some(w) = &cell.witness {
                eprintln!("  k={} witness {}", cell.k, w.spec.as_deref().unwrap_or(""));
            }
        }
        cells.extend(r.cells);
    }
    print!("{}", existence_markdown(&cells));
    Ok(())
}
