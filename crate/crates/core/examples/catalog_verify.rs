//! Rebuilds every shipped catalog matrix and checks its claims.
//!
//!     cargo run --release --example catalog_verify

use nmds::catalog::{verify_markdown, Catalog, Filter};

fn main() -> nmds::Result<()> {
    let catalog = Catalog::builtin();
    let reports = catalog.verify(&Filter::default())?;
    print!("{}", verify_markdown(&reports));
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("\n{} entries, {failed} failed", reports.len());
    Ok(())
}
