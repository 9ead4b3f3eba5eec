//! Seeded random GDLS search for cheap recursive NMDS matrices.
//!
//!     cargo run --release --example random_gdls [-- N L K ITERATIONS]

use nmds::search::{default_entry_set, random_gdls_search, GdlsStructure, Mode, SearchCampaign};
use nmds::Field;

fn main() -> nmds::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n, l, k, iters) = match args[..] {
        [n, l, k, it] => (n as usize, l as usize, k, it),
        _ => (5, 3, 5, 50_000),
    };
    let f = Field::gf16();
    let c = SearchCampaign::new(Mode::RandomGdls, n, l, &f)
        .with_k(&[k])
        .with_budget(iters);
    let mut shape = GdlsStructure::new(n);
    shape.max_nonunit = Some(2);
    shape.max_hits = 10;
    let r = random_gdls_search(&c, &default_entry_set(&f), &shape)?;
    println!("{} iterations, {} distinct hits kept", iters, r.hits.len());
    print!("{}", r.to_markdown());
    Ok(())
}
