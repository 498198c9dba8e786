//! Capped p-adic numbers: the square-root branch congruent to 1 and the
//! Fermat quotient.
//!
//! cargo run --example padic_sqrt

use arith_chern::padics::{padic_fermat_quotient, padic_inv, padic_sqrt_branch, PadicRing};
use arith_chern::ring::{Rational, Ring};

fn main() -> arith_chern::Result<()> {
    let ring = PadicRing::new(3, 8)?;
    let quarter = ring.from_rational(&Rational::new(1.into(), 4.into()));
    let root = padic_sqrt_branch(&quarter)?;
    println!("Z_3 to 8 digits");
    println!("sqrt(1/4) = {root} (the branch = 1 mod 3, so -1/2)");
    println!("check      {}", ring.mul(&root, &root));
    let b = padic_inv(&root)?;
    println!("b = 1/sqrt(1/4) = {b}");
    println!("(b - b^3)/3 = {}", padic_fermat_quotient(&b)?);
    Ok(())
}
