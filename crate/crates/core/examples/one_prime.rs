//! One-prime mixed curvature over Z_p, compared with its closed form.
//!
//! cargo run --example one_prime

use arith_chern::chern::FormMatrix;
use arith_chern::oneprime::{lhs_engine, rhs_sunny};

fn main() -> arith_chern::Result<()> {
    let forms = [
        ("q = 1", FormMatrix::rational(1, &[&[1]])?),
        ("q = 2", FormMatrix::rational(1, &[&[2]])?),
        ("q = [[0,2],[-2,0]]", FormMatrix::rational(-1, &[&[0, 2], &[-2, 0]])?),
    ];
    let (p, k) = (3, 6);
    for (name, q) in forms {
        let closed = rhs_sunny(&q, p, k)?;
        let engine = lhs_engine(&q, p, 2, k)?;
        println!("{name}, p = {p}:");
        println!("  closed form {:?}", closed.symmetric_rows(k as i64 - 1));
        println!("  engine      {:?}", engine.constant.symmetric_rows(k as i64 - 1));
    }
    Ok(())
}
