//! The mixed curvature of a lift with the coefficient Frobenius.
//!
//! cargo run --example mixed_curvature

use arith_chern::chern::{FormMatrix, SplitKind};
use arith_chern::curvature::{curvature11, graded_piece, mixed_congruence_check};

fn main() -> arith_chern::Result<()> {
    let q = FormMatrix::split(SplitKind::SplitSymEven, 2)?;
    for (p, p2) in [(3, 5), (3, 3)] {
        let r = curvature11(&q, p, p2, 2)?;
        println!("({p},{p2}) leading degree {:?}, congruence {}", r.leading_degree(), mixed_congruence_check(&q, &r)?);
        println!("degree-1 part zero: {}", graded_piece(&r, 1)?.is_zero());
        print!("{}", r.render_text());
    }
    Ok(())
}
