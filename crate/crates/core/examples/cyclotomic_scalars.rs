//! Arithmetic in Z[1/M, zeta_N] and the Frobenius attached to a prime.
//!
//! cargo run --example cyclotomic_scalars

use arith_chern::scalars::{CycScalar, RingConfig};

fn main() -> arith_chern::Result<()> {
    let config = RingConfig::new(2, 5)?;
    let z = CycScalar::zeta_pow(&config, 1);
    let a = CycScalar::parse(&config, "1/2 + 3*z - z^3")?;

    println!("ring: Z[1/{}, zeta_{}], rank {}", config.m(), config.n(), config.phi_n());
    println!("a        = {a}");
    println!("a * z    = {}", a.mul(&z)?);
    println!("z^5      = {}", z.pow(5));
    println!("a^-1     = {}", a.inverse().expect("nonzero"));

    for p in [3, 7, 11] {
        let fa = a.frobenius(p)?;
        println!("p = {p:>2}: sigma(a) = {fa}");
        println!("        delta(a) = {}", a.fermat_quotient(p)?);
    }
    Ok(())
}
