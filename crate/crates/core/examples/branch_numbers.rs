//! Branch numbers, the NMDS test and k-NMDS powers.
//!
//!     cargo run --example branch_numbers

use nmds::branch::{branch_bruteforce, branch_numbers, is_k_nmds, is_nmds, verdict};
use nmds::construct::{circulant, dls, DlsSpec};
use nmds::{Field, Matrix};

fn main() -> nmds::Result<()> {
    let f = Field::gf16();

    // a singular circulant that is still NMDS
    let c = Matrix::Field(circulant(&f, &[0, 2, 1, 3])?);
    let r = branch_numbers(&c)?;
    println!("Circ(0,α,1,α+1): β_d = {}, β_l = {}, det = {:#x}", r.beta_d, r.beta_l, c.as_field().unwrap().det()?);
    println!("  brute force agrees: {}", branch_bruteforce(&c)? == r);
    println!("  {}", serde_json::to_string(&verdict(&c)?).unwrap());

    let b = Matrix::Field(dls(&f, &DlsSpec::parse(&f, "rho=[2,3,4,1];d1=1,1,1,1;d2=1,0,1,0")?)?);
    for k in 1..=4 {
        let v = is_k_nmds(&b, k)?;
        println!("B^{k}: NMDS {}  certificate {:?}", v.is_nmds, v.certificate);
    }

    let id = Matrix::Field(nmds::FieldMatrix::identity(&f, 4));
    println!("I_4 NMDS: {}", is_nmds(&id)?.is_nmds);
    Ok(())
}
