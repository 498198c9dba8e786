//! The Frobenius lift attached to a form q and its structural checks.
//!
//! cargo run --example chern_lift

use arith_chern::chern::{
    chern_globality, chern_lift, globality_check, linear_part_check, value_at_identity, verify_bq_diagram,
    verify_hq_diagram, FormMatrix, SplitKind,
};
use arith_chern::series::matrix_var_names;

fn main() -> arith_chern::Result<()> {
    let q = FormMatrix::split(SplitKind::Symplectic, 2)?;
    let lift = chern_lift(&q, 3, 2)?;
    println!("q = {}", q.to_json());
    println!("Phi_3(1 + T) - 1 modulo (T)^3:");
    println!("{}", lift.phi0().render(&matrix_var_names(2)));
    println!("value at 1: {:?}", value_at_identity(&lift));
    println!("linear part: {}", linear_part_check(&lift));
    println!("form diagram: {}", verify_hq_diagram(&q, &lift)?);
    println!("bilinear diagram: {}", verify_bq_diagram(&q, &lift)?);
    println!("globality: {}", globality_check(&lift));

    // A non-split alternating form: the lift does not fix the identity.
    let bad = FormMatrix::rational(-1, &[&[0, 2], &[-2, 0]])?;
    println!("\nq = {}", bad.to_json());
    println!("fixes 1: {}", chern_globality(&bad, 3, 2)?);
    Ok(())
}
