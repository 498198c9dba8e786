//! The one-prime mixed curvature `(1/p)[phi_p, phibar_p]` over `Z_p`, where
//! `phibar_p(x) = x^(p)` and both lifts act trivially on `Z_p`.

use std::fmt;

use crate::chern::{phi_at, FormMatrix, SqrtMode, Verdict};
use crate::matseries::{binomial, constant_inverse, SeriesMatrix};
use crate::padics::{padic_fermat_quotient, PadicRing, PadicScalar};
use crate::ring::{Rational, Ring};
use crate::series::{matrix_var_names, Series};
use crate::{Error, Result};

/// A square matrix of p-adic numbers sharing `p` and the cap `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadicMatrix {
    ring: PadicRing,
    n: usize,
    entries: Vec<PadicScalar>,
}

impl PadicMatrix {
    pub fn from_rows(ring: &PadicRing, rows: Vec<Vec<PadicScalar>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("p-adic matrix rows must have equal length".into()));
        }
        Ok(PadicMatrix { ring: ring.clone(), n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_rationals(ring: &PadicRing, rows: &[Vec<Rational>]) -> Result<Self> {
        Self::from_rows(ring, rows.iter().map(|r| r.iter().map(|q| ring.from_rational(q)).collect()).collect())
    }

    pub fn identity(ring: &PadicRing, n: usize) -> Self {
        let entries = (0..n * n).map(|k| if k / n == k % n { ring.one() } else { ring.zero() }).collect();
        PadicMatrix { ring: ring.clone(), n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &PadicRing {
        &self.ring
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicScalar {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<PadicScalar>> {
        self.entries.chunks(self.n).map(<[PadicScalar]>::to_vec).collect()
    }

    pub fn map(&self, f: impl Fn(&PadicScalar) -> Result<PadicScalar>) -> Result<Self> {
        let entries = self.entries.iter().map(f).collect::<Result<_>>()?;
        Ok(PadicMatrix { entries, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = &self.ring;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| r.add(a, b)).collect();
        PadicMatrix { entries, ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PadicMatrix { entries: self.entries.iter().map(PadicScalar::neg).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        let r = &self.ring;
        PadicMatrix { entries: self.entries.iter().map(|a| r.mul(a, c)).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (n, r) = (self.n, &self.ring);
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = r.zero();
                for k in 0..n {
                    acc = r.add(&acc, &r.mul(self.get(i, k), other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        PadicMatrix { entries, ..self.clone() }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = constant_inverse(&self.ring, &self.rows()).ok_or(Error::Singular)?;
        Self::from_rows(&self.ring, inv)
    }

    pub fn is_zero_mod(&self, m: i64) -> bool {
        let z = self.ring.zero();
        self.entries.iter().all(|a| a.eq_mod(&z, m))
    }

    pub fn eq_mod(&self, other: &Self, m: i64) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a.eq_mod(b, m))
    }

    /// Smallest absolute precision over the entries.
    pub fn certified_digits(&self) -> i64 {
        self.entries.iter().map(PadicScalar::prec).min().unwrap_or(i64::MAX)
    }

    /// Entries as symmetric integer representatives modulo `p^m`.
    pub fn symmetric_rows(&self, m: i64) -> Vec<Vec<String>> {
        self.rows()
            .iter()
            .map(|r| {
                r.iter().map(|a| a.to_symmetric_integer(m).map_or_else(|| a.to_string(), |x| x.to_string())).collect()
            })
            .collect()
    }
}

impl fmt::Display for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(PadicScalar::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn rational_rows(q: &FormMatrix, p: u64) -> Result<Vec<Vec<Rational>>> {
    if q.config().n() != 1 {
        return Err(Error::Usage("the one-prime computation takes forms with rational entries (N = 1)".into()));
    }
    q.config().check_prime(p)?;
    Ok(q.entries().iter().map(|r| r.iter().map(|a| a.as_rational().cloned().expect("N = 1")).collect()).collect())
}

/// `-delta_pbar((1 + p (q^(p))^-1 delta_p q)^(-1/2))` with `delta_pbar(a) = (a - a^p)/p`.
pub fn rhs_sunny(q: &FormMatrix, p: u64, k: u32) -> Result<PadicMatrix> {
    let rows = rational_rows(q, p)?;
    let ring = PadicRing::new(p, k)?;
    let qm = PadicMatrix::from_rationals(&ring, &rows)?;
    let qp = qm.map(|a| Ok(a.pow(p)))?;
    let dq = qm.map(padic_fermat_quotient)?;
    let u = qp.inverse()?.mul(&dq).scale(&ring.from_int(p as i64));
    // val(u^i) >= i, so terms beyond i = k vanish at this precision.
    let half = Rational::new((-1).into(), 2.into());
    let id = PadicMatrix::identity(&ring, q.n());
    let mut acc = id.scale(&ring.from_rational(&binomial(&half, k as usize)));
    for i in (0..k as usize).rev() {
        acc = id.scale(&ring.from_rational(&binomial(&half, i))).add(&u.mul(&acc));
    }
    Ok(acc.map(padic_fermat_quotient)?.neg())
}

/// Engine side of the one-prime curvature.
#[derive(Debug, Clone)]
pub struct OnePrimeLhs {
    /// `(1/p)(Phi_p(x)^(p) - Phi_p(x^(p)))` at `x = 1 + T`.
    pub series: SeriesMatrix<PadicRing>,
    /// The value at `x = 1`.
    pub constant: PadicMatrix,
}

/// Builds `Phi_p` over `Z_p` at precision `k` and forms `(1/p)[phi_p, phibar_p](x)`.
pub fn lhs_engine(q: &FormMatrix, p: u64, order: u32, k: u32) -> Result<OnePrimeLhs> {
    let rows = rational_rows(q, p)?;
    let ring = PadicRing::new(p, k)?;
    let qrows: Vec<Vec<PadicScalar>> = rows.iter().map(|r| r.iter().map(|a| ring.from_rational(a)).collect()).collect();
    let n = q.n();
    let x = SeriesMatrix::generic(&ring, n, order)?;
    let terms = (k + order) as usize + 2;
    let phi = phi_at(&x, &qrows, &qrows, p, SqrtMode::Convergent(terms))?;
    let xp_minus_1 = x.entrywise_power_p(p).sub(&SeriesMatrix::identity(&ring, n, n * n, order)?)?;
    let a = phi.entrywise_power_p(p);
    let b = phi.substitute(xp_minus_1.entries())?;
    let diff = a.sub(&b)?;
    let names = matrix_var_names(n);
    let entries = diff.entries().iter().map(|e| e.div_exact_int(p, &[p], &names)).collect::<Result<Vec<_>>>()?;
    let series = SeriesMatrix::from_entries(n, entries)?;
    let constant = PadicMatrix::from_rows(&ring, series.constant_terms())?;
    Ok(OnePrimeLhs { series, constant })
}

/// For `n = 1`: the engine series equals `Phi(1) (1 + T)^(p^2)` modulo `p^(k-1)`.
pub fn n1_identity_check(q: &Rational, p: u64, order: u32, k: u32) -> Result<Verdict> {
    let form = FormMatrix::new(
        &crate::scalars::RingConfig::rational(),
        1,
        vec![vec![crate::scalars::CycScalar::from_rational(&crate::scalars::RingConfig::rational(), q.clone())]],
    )?;
    let lhs = lhs_engine(&form, p, order, k)?;
    let ring = PadicRing::new(p, k)?;
    let c = rhs_sunny(&form, p, k)?.get(0, 0).clone();
    let x = Series::var(&ring, 1, order, 0)?.add_constant(&ring.one());
    let want = x.pow(p * p).scale(&c);
    let got = lhs.series.get(0, 0);
    let m = k as i64 - 1;
    for d in 0..=order {
        let mono = crate::series::Monomial::var_pow(0, d as u8);
        let (a, b) = (got.coeff(&mono)?, want.coeff(&mono)?);
        if !a.eq_mod(&b, m) {
            return Ok(Verdict::fail(format!("coefficient of T^{d}: engine {a} vs {b} modulo {p}^{m}")));
        }
    }
    Ok(Verdict::pass())
}

/// Compares `rhs_sunny` with the engine value at the identity modulo `p^(k-1)`.
pub fn agreement_check(q: &FormMatrix, p: u64, order: u32, k: u32) -> Result<Verdict> {
    let rhs = rhs_sunny(q, p, k)?;
    let lhs = lhs_engine(q, p, order, k)?;
    let m = k as i64 - 1;
    if rhs.eq_mod(&lhs.constant, m) {
        Ok(Verdict::pass_with(format!("value {:?} modulo {p}^{m}", rhs.symmetric_rows(m))))
    } else {
        Ok(Verdict::fail(format!(
            "closed form {:?} vs engine {:?} modulo {p}^{m}",
            rhs.symmetric_rows(m),
            lhs.constant.symmetric_rows(m)
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::SplitKind;

    fn scalar(v: i64) -> FormMatrix {
        FormMatrix::rational(1, &[&[v]]).unwrap()
    }

    #[test]
    fn trivial_for_unit_forms() {
        assert!(rhs_sunny(&scalar(1), 3, 5).unwrap().is_zero_mod(4));
        assert!(rhs_sunny(&scalar(-1), 5, 5).unwrap().is_zero_mod(4));
        for kind in [SplitKind::Symplectic, SplitKind::SplitSymEven] {
            let q = FormMatrix::split(kind, 2).unwrap();
            assert!(rhs_sunny(&q, 3, 5).unwrap().is_zero_mod(4));
        }
    }

    #[test]
    fn q_two_gives_minus_two() {
        let r = rhs_sunny(&scalar(2), 3, 5).unwrap();
        assert_eq!(r.symmetric_rows(4), vec![vec!["-2".to_string()]]);
        let q = FormMatrix::rational(-1, &[&[0, 2], &[-2, 0]]).unwrap();
        let r = rhs_sunny(&q, 3, 5).unwrap();
        assert_eq!(
            r.symmetric_rows(4),
            vec![vec!["-2".to_string(), "0".to_string()], vec!["0".to_string(), "-2".to_string()]]
        );
    }

    #[test]
    fn engine_agrees_with_closed_form() {
        assert!(agreement_check(&scalar(2), 3, 2, 5).unwrap().holds);
        let q = FormMatrix::rational(-1, &[&[0, 2], &[-2, 0]]).unwrap();
        assert!(agreement_check(&q, 3, 1, 5).unwrap().holds);
    }

    #[test]
    fn constant_term_is_stable_in_order() {
        let a = lhs_engine(&scalar(2), 3, 1, 5).unwrap().constant;
        let b = lhs_engine(&scalar(2), 3, 3, 5).unwrap().constant;
        assert!(a.eq_mod(&b, 4));
    }

    #[test]
    fn n1_identity() {
        let two = Rational::from_integer(2.into());
        assert!(n1_identity_check(&two, 3, 3, 4).unwrap().holds);
        assert!(n1_identity_check(&Rational::from_integer((-1).into()), 3, 3, 4).unwrap().holds);
    }

    #[test]
    fn n1_series_vanishes_exactly_for_roots_of_unity() {
        let config = crate::scalars::RingConfig::rational();
        let qs = [(1, 1), (-1, 1), (2, 1), (3, 1), (1, 2)];
        for p in [3u64, 5] {
            for (num, den) in qs {
                if num % p as i64 == 0 {
                    continue;
                }
                let q = Rational::new(num.into(), den.into());
                let form = FormMatrix::new(
                    &config,
                    1,
                    vec![vec![crate::scalars::CycScalar::from_rational(&config, q.clone())]],
                )
                .unwrap();
                let lhs = lhs_engine(&form, p, 3, 5).unwrap();
                let zero = PadicRing::new(p, 5).unwrap().zero();
                let vanishes = lhs.series.get(0, 0).terms().iter().all(|(_, c)| c.eq_mod(&zero, 4));
                assert_eq!(vanishes, den == 1 && num.abs() == 1, "q = {q}, p = {p}");
            }
        }
    }

    #[test]
    fn cyclotomic_forms_are_rejected() {
        let config = crate::scalars::RingConfig::new(2, 3).unwrap();
        let q = FormMatrix::split_in(&config, SplitKind::SplitSymOdd, 1).unwrap();
        assert!(matches!(rhs_sunny(&q, 5, 4), Err(Error::Usage(_))));
    }
}
