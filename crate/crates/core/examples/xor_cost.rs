//! XOR cost: d-XOR, s-XOR from the coset search, and full matrix reports.
//!
//!     cargo run --example xor_cost

use nmds::catalog::Catalog;
use nmds::cost::{d_xor, matrix_cost, s_xor, s_xor_factorization, Metric};
use nmds::Field;

fn main() -> nmds::Result<()> {
    let f = Field::gf16();
    println!("| element | d-XOR | s-XOR |\n|---|---|---|");
    for v in 1..16u8 {
        println!("| {:#x} | {} | {} |", v, d_xor(&f, v)?, s_xor(&f, v)?);
    }
    let a2 = f.alpha_pow(2);
    println!("\nα² as column additions: {:?}", s_xor_factorization(&f.mul_matrix(a2))?);

    let cat = Catalog::builtin();
    for id in ["rec-n4-B", "rec-n7-B1", "rec-n8-B2"] {
        let m = cat.build(cat.get(id)?)?.matrix;
        let r = matrix_cost(&m, Metric::Default)?;
        println!("{id}: {}", r.decomposition());
    }
    Ok(())
}
