//! The curvature of two lifts as a JSON report.
//!
//! cargo run --example curvature

use arith_chern::chern::{FormMatrix, SplitKind};
use arith_chern::curvature::{curvature2, curvature3, graded_piece};

fn main() -> arith_chern::Result<()> {
    for (kind, n) in [(SplitKind::SplitSymEven, 2), (SplitKind::Symplectic, 2), (SplitKind::SplitSymOdd, 1)] {
        let q = FormMatrix::split(kind, n)?;
        let r = curvature2(&q, 3, 5, 4)?;
        println!("{} n={n}: zero to order 4: {}", kind.name(), r.is_zero());
    }

    let q = FormMatrix::split(SplitKind::SplitSymEven, 4)?;
    let r = curvature2(&q, 3, 5, 2)?;
    println!("n=4: degree-2 part vanishes: {}", graded_piece(&r, 2)?.is_zero());

    let q = FormMatrix::split(SplitKind::SplitSymEven, 2)?;
    let r = curvature3(&q, 3, 5, 7, 1)?;
    print!("{}", r.render_text());
    Ok(())
}
