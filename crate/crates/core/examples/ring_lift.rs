//! Lifting field matrices to 8×8 binary blocks by replacing α with C.
//!
//!     cargo run --release --example ring_lift

use nmds::branch::is_k_nmds;
use nmds::catalog::{lift_field_matrix, AlphaSpec, Catalog};
use nmds::construct::{gl8_c, gl8_c8};
use nmds::cost::{matrix_cost, Metric};
use nmds::Matrix;

fn main() -> nmds::Result<()> {
    let cat = Catalog::builtin();
    let c = gl8_c();
    println!("C = {:?}", c.to_positions());
    println!("C8 = {:?}", gl8_c8().to_positions());

    for (id, k) in [("rec-n5-A2", 5), ("rec-n6-B2", 6), ("rec-n7-B3", 7)] {
        let src = cat.build(cat.get(id)?)?.matrix;
        let lifted = Matrix::Block(lift_field_matrix(src.as_field().unwrap(), &c)?);
        let nmds = is_k_nmds(&lifted, k)?.is_nmds;
        let cost = matrix_cost(&lifted, Metric::Default)?;
        println!("{id} over GL(8,2): {k}-NMDS {nmds}, XOR {}", cost.decomposition());
    }

    // the same through catalog entries
    let entry = cat.lift_to_ring(cat.get("rec-n8-B2")?, AlphaSpec::Named("C8".into()))?;
    println!("{} → {:?}", entry.id, entry.construction);
    Ok(())
}
