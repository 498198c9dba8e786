//! Reduction of the curvature to a 2x2 corner, where it becomes a commutator
//! of polynomial maps, and the same for three primes.
//!
//! cargo run --example corner_reduction

use arith_chern::chern::{chern_lift, FormMatrix, SplitKind};
use arith_chern::reduced::{corner_commutator, corner_consistency, corner_three_commutator, g_poly, Sign};

fn main() -> arith_chern::Result<()> {
    for kind in [SplitKind::SplitSymEven, SplitKind::Symplectic] {
        let q = FormMatrix::split(kind, 4)?;
        let lift = chern_lift(&q, 3, 4)?;
        println!("{}: corner consistent with the n = 4 lift: {}", kind.name(), corner_consistency(&q, &lift)?);
    }
    let c = corner_commutator(3, 5, Sign::Upper);
    println!("[phi_3, phi_5](v) on the corner: {} terms, equals g_35: {}", c.len(), c == g_poly(&[3, 5], Sign::Upper)?);
    let t = corner_three_commutator(3, 5, 7, Sign::Upper);
    println!("35 phi_357(v) equals g_753: {}", t == g_poly(&[7, 5, 3], Sign::Upper)?);
    Ok(())
}
