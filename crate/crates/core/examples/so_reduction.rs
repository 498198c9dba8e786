//! The orthogonal-group lift through its action on a 3x3 unipotent matrix.
//!
//! cargo run --example so_reduction

use arith_chern::reduced::{so_curvature, so_torus_check, unipotent_check, unipotent_composition, unipotent_var_names};

fn main() -> arith_chern::Result<()> {
    println!("torus (r = 1): {}", so_torus_check(3, 5, 5)?);
    println!("r = 1 curvature vanishes: {}", so_curvature(3, 5, 1, 4)?.is_zero());
    println!("unipotent action for p = 3: {}", unipotent_check(3)?);
    let (v, comm) = unipotent_composition(3, 5)?;
    println!("composition: {v}");
    println!("commutator on v: {} terms, leading degree {:?}", comm.len(), comm.leading_degree());
    println!("{}", comm.render(&unipotent_var_names()));
    Ok(())
}
