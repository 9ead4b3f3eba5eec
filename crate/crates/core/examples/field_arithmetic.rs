//! GF(2^4) and GF(2^8) arithmetic, element parsing and multiplication matrices.
//!
//!     cargo run --example field_arithmetic

use nmds::Field;

fn main() -> nmds::Result<()> {
    let f = Field::gf16();
    let a = f.alpha();
    println!("{f}: α = {:#x}, primitive: {}", a, f.alpha_is_primitive());
    for e in ["a", "a^-1", "a^2", "a^-2", "a^3+a+1"] {
        let v = f.parse_element(e)?;
        println!("{e:>8} = {:#x}  log α = {:?}  inverse {:#x}", v, f.log_alpha(v), f.inv(v)?);
    }
    println!("α·α^-1 = {:#x}", f.mul(a, f.alpha_pow(-1)));
    println!("multiplication by α, column j = α·α^j:\n{:?}", f.mul_matrix(a));

    // the AES modulus has a non-primitive α; the Rijndael-style multiply still works
    let aes: Field = "8:0x11b".parse()?;
    println!("{aes}: α primitive: {}", aes.alpha_is_primitive());
    println!("0x57·0x83 = {:#x}", aes.mul(0x57, 0x83));

    let g = Field::gf256();
    println!("{g}: α^-2 = {:#x}", g.alpha_pow(-2));
    Ok(())
}
