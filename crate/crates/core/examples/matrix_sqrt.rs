//! Square roots of unipotent series matrices by the binomial series.
//!
//! cargo run --example matrix_sqrt

use arith_chern::matseries::SeriesMatrix;
use arith_chern::ring::Rational;
use arith_chern::scalars::CycRing;
use arith_chern::series::matrix_var_names;

fn main() -> arith_chern::Result<()> {
    let ring = CycRing::rational();
    let order = 3;
    // X = 1 + T is the generic matrix; U = X - 1 has zero constant terms.
    let x = SeriesMatrix::generic(&ring, 2, order)?;
    let id = SeriesMatrix::identity(&ring, 2, 4, order)?;
    let u = x.sub(&id)?;
    let half = Rational::new(1.into(), 2.into());
    let root = u.binomial_power(&half)?;
    let names = matrix_var_names(2);
    println!("sqrt(1 + T) modulo (T)^{}:", order + 1);
    println!("{}", root.render(&names));
    let back = root.mat_mul(&root)?;
    println!("squares back to 1 + T: {}", back.equals(&x));
    Ok(())
}
