//! The unitary group U_1 as a quotient ring, where lifts for p and p' fail to commute.
//!
//! cargo run --example unitary

use arith_chern::unitary::{coefficient_contradiction, uc_commutator, uc_lift_p};

fn main() -> arith_chern::Result<()> {
    for (p, p2) in [(3, 5), (3, 3), (5, 5)] {
        let c = coefficient_contradiction(p, p2);
        println!(
            "({p},{p2}): alpha coefficients {} vs {}, first difference in degree {:?}",
            c.lhs_alpha, c.rhs_alpha, c.first_difference
        );
        let comm = uc_commutator(p, p2, 3)?;
        println!("        commutator witness: {}", comm.witness().unwrap_or_else(|| "none".into()));
    }
    let lift = uc_lift_p(3, 4)?;
    println!("lift image of alpha: {}", lift.alpha);
    println!("relation preserved: {}", lift.relation_image()?.is_zero());
    Ok(())
}
