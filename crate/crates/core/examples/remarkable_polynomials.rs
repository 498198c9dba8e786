//! The polynomials f_p, their compositions, and the commutator congruences.
//!
//! cargo run --example remarkable_polynomials

use arith_chern::reduced::{compose_fp, congruence_extract, fp_poly, g_poly, triple_congruences, Sign};

fn main() -> arith_chern::Result<()> {
    println!("f_3(v, w), upper sign = {}", fp_poly(3, Sign::Upper));
    println!("f_3(v, w), lower sign = {}", fp_poly(3, Sign::Lower));
    let f = compose_fp(&[3, 5], Sign::Upper)?;
    println!("f_35 has {} terms, degree {:?}", f.len(), f.degree());
    let g = g_poly(&[3, 5], Sign::Upper)?;
    println!("g_35 has {} terms", g.len());

    for sign in [Sign::Upper, Sign::Lower] {
        for (p, p2) in [(3, 5), (5, 7), (3, 11)] {
            println!("{}", congruence_extract(&[p, p2], sign)?.render());
        }
    }
    for c in triple_congruences(&[3, 5, 7]).iter().filter(|c| c.primes[0] != c.primes[1]).take(6) {
        println!("{}", c.render());
    }
    Ok(())
}
