//! Involutory and orthogonal members of circulant, Toeplitz and Hankel
//! families, classified by NMDS status.
//!
//!     cargo run --release --example structured_families

use nmds::search::{structured_family_scan, Family, Predicate};
use nmds::Field;

fn main() -> nmds::Result<()> {
    let f = Field::gf16();
    let runs = [
        (Family::Circulant, 4, Predicate::Involutory),
        (Family::Circulant, 5, Predicate::Involutory),
        (Family::Circulant, 5, Predicate::Orthogonal),
        (Family::LeftCirculant, 5, Predicate::Involutory),
        (Family::Toeplitz, 5, Predicate::Involutory),
        (Family::Toeplitz, 6, Predicate::Involutory),
        (Family::Hadamard, 4, Predicate::Involutory),
    ];
    for (family, n, p) in runs {
        let r = structured_family_scan(family, n, &f, p, None, 0)?;
        print!("{}", r.to_markdown().lines().next().unwrap_or_default());
        println!("  [{:.1?}]", r.wall_clock);
        if let Some(first) = r.nmds.first() {
            println!("    first NMDS member ({})", first.join(", "));
        }
    }
    Ok(())
}
