//! The coordinate ring of `U_1` as `Z[1/2][[alpha]][beta] / (2 alpha + alpha^2 + beta^2)`,
//! the lifts acting on it, and their mixed curvature.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::chern::{chern_lift, FormMatrix, Verdict};
use crate::curvature::{divide_certified, report_from_values, CurvatureKind, CurvatureReport};
use crate::matseries::{binomial, SeriesMatrix};
use crate::ring::{Rational, Ring};
use crate::scalars::CycRing;
use crate::series::{var_names, Monomial, Series};
use crate::{Error, Result};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `g0 + g1 beta` with `g0, g1` truncated series in `alpha`.
#[derive(Clone, PartialEq, Eq)]
pub struct UCElem {
    g0: Vec<Rational>,
    g1: Vec<Rational>,
}

impl fmt::Debug for UCElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UCElem({self})")
    }
}

/// `c0 + c1 a + ...` truncated at `a^(order+1)`.
fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len();
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl UCElem {
    pub fn zero(order: u32) -> Self {
        let z = vec![Rational::zero(); order as usize + 1];
        UCElem { g0: z.clone(), g1: z }
    }

    pub fn constant(order: u32, c: Rational) -> Self {
        let mut e = Self::zero(order);
        e.g0[0] = c;
        e
    }

    pub fn one(order: u32) -> Self {
        Self::constant(order, Rational::one())
    }

    pub fn alpha(order: u32) -> Self {
        let mut e = Self::zero(order);
        if order >= 1 {
            e.g0[1] = Rational::one();
        }
        e
    }

    pub fn beta(order: u32) -> Self {
        let mut e = Self::zero(order);
        e.g1[0] = Rational::one();
        e
    }

    /// Builds `g0 + g1 beta` from coefficient lists, padding or truncating to the order.
    pub fn from_parts(order: u32, g0: &[Rational], g1: &[Rational]) -> Self {
        let mut e = Self::zero(order);
        for (dst, src) in [(&mut e.g0, g0), (&mut e.g1, g1)] {
            for (d, s) in dst.iter_mut().zip(src) {
                *d = s.clone();
            }
        }
        e
    }

    pub fn order(&self) -> u32 {
        self.g0.len() as u32 - 1
    }

    pub fn g0(&self) -> &[Rational] {
        &self.g0
    }

    pub fn g1(&self) -> &[Rational] {
        &self.g1
    }

    pub fn is_zero(&self) -> bool {
        self.g0.iter().chain(&self.g1).all(Zero::is_zero)
    }

    /// True when the `beta` component vanishes.
    pub fn is_alpha_only(&self) -> bool {
        self.g1.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(UCElem { g0: poly_add(&self.g0, &other.g0), g1: poly_add(&self.g1, &other.g1) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        UCElem { g0: self.g0.iter().map(|x| -x).collect(), g1: self.g1.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UCElem { g0: self.g0.iter().map(|x| x * c).collect(), g1: self.g1.iter().map(|x| x * c).collect() }
    }

    pub fn add_constant(&self, c: &Rational) -> Self {
        let mut e = self.clone();
        e.g0[0] += c;
        e
    }

    /// Product, reduced with `beta^2 = -2 alpha - alpha^2`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order();
        let mut beta_sq = vec![Rational::zero(); order as usize + 1];
        if order >= 1 {
            beta_sq[1] = rat(-2, 1);
        }
        if order >= 2 {
            beta_sq[2] = rat(-1, 1);
        }
        let g0 = poly_add(&poly_mul(&self.g0, &other.g0), &poly_mul(&poly_mul(&self.g1, &other.g1), &beta_sq));
        let g1 = poly_add(&poly_mul(&self.g0, &other.g1), &poly_mul(&self.g1, &other.g0));
        Ok(UCElem { g0, g1 })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same order");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same order");
            }
        }
        acc
    }

    /// `self^s` by the binomial series; `self` must be `1 + u` with `u(0, 0) = 0`.
    /// Since `u^2` lies in `(alpha)`, `2 * order + 2` terms are exact.
    pub fn binomial_power(&self, s: &Rational) -> Result<Self> {
        if !self.g0[0].is_one() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order();
        let u = self.add_constant(&rat(-1, 1));
        let mut acc = Self::zero(order);
        let mut term = Self::one(order);
        for i in 0..=(2 * order as usize + 2) {
            acc = acc.add(&term.scale(&binomial(s, i)))?;
            term = term.mul(&u)?;
            if term.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// The element as a series in `alpha, beta`, dropping terms above total degree `order`.
    pub fn to_series(&self, ring: &CycRing, order: u32) -> Result<Series<CycRing>> {
        let mut terms = Vec::new();
        for (k, c) in self.g0.iter().enumerate() {
            if !c.is_zero() && k as u32 <= order {
                terms.push((Monomial::from_exponents(&[k as u8, 0])?, ring.from_rational(c)));
            }
        }
        for (k, c) in self.g1.iter().enumerate() {
            if !c.is_zero() && (k as u32) < order {
                terms.push((Monomial::from_exponents(&[k as u8, 1])?, ring.from_rational(c)));
            }
        }
        Series::from_terms(ring, 2, order, terms)
    }

    /// The first coefficient where the two elements differ.
    pub fn first_difference(&self, other: &Self) -> Option<(String, Rational, Rational)> {
        for (part, (a, b)) in [(0, (&self.g0, &other.g0)), (1, (&self.g1, &other.g1))] {
            for (k, (x, y)) in a.iter().zip(b.iter()).enumerate() {
                if x != y {
                    return Some((mono_name(k, part), x.clone(), y.clone()));
                }
            }
        }
        None
    }

    /// Keeps the coefficients of `alpha^k` and `alpha^k beta` for `k < m`.
    pub fn truncate_alpha(&self, m: usize) -> Self {
        let mut e = self.clone();
        for v in [&mut e.g0, &mut e.g1] {
            for x in v.iter_mut().skip(m) {
                *x = Rational::zero();
            }
        }
        e
    }
}

fn mono_name(k: usize, beta: usize) -> String {
    let a = match k {
        0 => None,
        1 => Some("alpha".to_string()),
        _ => Some(format!("alpha^{k}")),
    };
    let b = (beta == 1).then(|| "beta".to_string());
    let parts: Vec<String> = [a, b].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for UCElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (part, v) in [(0, &self.g0), (1, &self.g1)] {
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let name = mono_name(k, part);
                let abs = c.abs();
                let body = match (name.as_str(), abs.is_one()) {
                    ("1", _) => abs.to_string(),
                    (_, true) => name,
                    _ => format!("{abs}*{name}"),
                };
                let sign = if c.is_negative() { "-" } else { "+" };
                if first {
                    write!(f, "{}{body}", if c.is_negative() { "-" } else { "" })?;
                } else {
                    write!(f, " {sign} {body}")?;
                }
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `2a + a^2 + b^2`.
pub fn relation_value(a: &UCElem, b: &UCElem) -> Result<UCElem> {
    a.scale(&rat(2, 1)).add(&a.mul(a)?)?.add(&b.mul(b)?)
}

/// `K_p(a, b) = (((1+a)^2 + b^2)^p / ((1+a)^(2p) + b^(2p)))^(1/2)` without
/// simplifying the numerator, so it is meaningful at points off the relation.
pub fn k_factor(p: u64, a: &UCElem, b: &UCElem) -> Result<UCElem> {
    let one_a = a.add_constant(&Rational::one());
    let num = one_a.mul(&one_a)?.add(&b.mul(b)?)?.pow(p);
    let den = one_a.pow(2 * p).add(&b.pow(2 * p))?;
    let ratio = num.mul(&den.binomial_power(&rat(-1, 1))?)?;
    ratio.binomial_power(&rat(1, 2))
}

/// `((1+a)^p K_p(a,b) - 1, b^p K_p(a,b))`.
pub fn lift_formula(p: u64, a: &UCElem, b: &UCElem) -> Result<(UCElem, UCElem)> {
    let k = k_factor(p, a, b)?;
    let ap = a.add_constant(&Rational::one()).pow(p).mul(&k)?.add_constant(&rat(-1, 1));
    let bp = b.pow(p).mul(&k)?;
    Ok((ap, bp))
}

/// An endomorphism given by the images of `alpha` and `beta`.
#[derive(Debug, Clone)]
pub struct UcLift {
    pub p: u64,
    pub alpha: UCElem,
    pub beta: UCElem,
}

impl UcLift {
    /// `g0(phi(alpha)) + g1(phi(alpha)) phi(beta)`. Requires `phi(alpha)` in `(alpha)`.
    pub fn apply(&self, x: &UCElem) -> Result<UCElem> {
        if !self.alpha.is_alpha_only() || !self.alpha.g0()[0].is_zero() {
            return Err(Error::Usage("the image of alpha must lie in the ideal (alpha)".into()));
        }
        let order = x.order();
        let horner = |g: &[Rational]| -> Result<UCElem> {
            let mut acc = UCElem::zero(order);
            for c in g.iter().rev() {
                acc = acc.mul(&self.alpha)?.add_constant(c);
            }
            Ok(acc)
        };
        horner(x.g0())?.add(&horner(x.g1())?.mul(&self.beta)?)
    }

    /// `2 phi(alpha) + phi(alpha)^2 + phi(beta)^2`.
    pub fn relation_image(&self) -> Result<UCElem> {
        relation_value(&self.alpha, &self.beta)
    }
}

/// The lift at `p` on the quotient. The numerator of `K_p` reduces to 1 there.
pub fn uc_lift_p(p: u64, order: u32) -> Result<UcLift> {
    crate::ring::check_odd_prime(p)?;
    let (a, b) = (UCElem::alpha(order), UCElem::beta(order));
    let one_a = a.add_constant(&Rational::one());
    if one_a.mul(&one_a)?.add(&b.mul(&b)?)? != UCElem::one(order) {
        return Err(Error::Inconsistent("(1 + alpha)^2 + beta^2 does not reduce to 1".into()));
    }
    let (alpha, beta) = lift_formula(p, &a, &b)?;
    Ok(UcLift { p, alpha, beta })
}

/// The trivial lift `alpha -> (1+alpha)^p - 1`, `beta -> beta^p`. It does not
/// preserve the relation, so it is only composed on the left of `uc_lift_p`.
pub fn uc_lift_pbar(p: u64, order: u32) -> Result<UcLift> {
    crate::ring::check_odd_prime(p)?;
    let alpha = UCElem::alpha(order).add_constant(&Rational::one()).pow(p).add_constant(&rat(-1, 1));
    Ok(UcLift { p, alpha, beta: UCElem::beta(order).pow(p) })
}

/// `[phi_p, phibar_p']` on `alpha` and `beta`, before division.
#[derive(Debug, Clone)]
pub struct UcCommutator {
    pub p: u64,
    pub p2: u64,
    pub alpha: UCElem,
    pub beta: UCElem,
}

impl UcCommutator {
    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    /// The lowest nonzero coefficient, `alpha` image first.
    pub fn witness(&self) -> Option<String> {
        let order = self.alpha.order();
        for (name, e) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            if let Some((m, c, _)) = e.first_difference(&UCElem::zero(order)) {
                return Some(format!("image of {name}, coefficient of {m}: {c}"));
            }
        }
        None
    }
}

/// `phi_p(phibar_p'(x)) - phibar_p'(phi_p(x))` for `x = alpha, beta`. The
/// second composite substitutes the trivial images into the lift formula.
pub fn uc_commutator(p: u64, p2: u64, order: u32) -> Result<UcCommutator> {
    let lp = uc_lift_p(p, order)?;
    let bar = uc_lift_pbar(p2, order)?;
    let a1 = lp.apply(&bar.alpha)?;
    let b1 = lp.apply(&bar.beta)?;
    let (a2, b2) = lift_formula(p, &bar.alpha, &bar.beta)?;
    Ok(UcCommutator { p, p2, alpha: a1.sub(&a2)?, beta: b1.sub(&b2)? })
}

/// Passes when the commutator is nonzero, with the witness coefficient.
pub fn uc_commutator_check(p: u64, p2: u64, order: u32) -> Result<Verdict> {
    if order < 2 {
        return Err(Error::Usage("the unitary commutator check needs order >= 2".into()));
    }
    let c = uc_commutator(p, p2, order)?;
    Ok(match c.witness() {
        Some(w) => Verdict::pass_with(w),
        None => Verdict::fail(format!("the commutator vanishes up to alpha^{order}")),
    })
}

/// The mixed curvature as a report on the matrix `[[alpha, beta], [-beta, alpha]]`.
pub fn unitary_report(p: u64, p2: u64, order: u32) -> Result<CurvatureReport> {
    let c = uc_commutator(p, p2, order)?;
    let ring = CycRing::rational();
    let a = c.alpha.to_series(&ring, order)?;
    let b = c.beta.to_series(&ring, order)?;
    let raw = SeriesMatrix::from_entries(2, vec![a.clone(), b.clone(), b.neg(), a])?;
    let names = var_names(&["alpha", "beta"]);
    let divisor = if p == p2 { p } else { p * p2 };
    let mut witnesses = vec![p, p2];
    witnesses.dedup();
    let values = divide_certified(&raw, divisor, &witnesses, &names)?;
    Ok(report_from_values(CurvatureKind::Unitary, vec![p, p2], values, divisor, names))
}

/// Coefficients of `alpha` in `(1+a)^(2pp') - (2a+a^2)^(pp')` and in
/// `((1+a)^(2p) - (2a+a^2)^p)^p' ((1+a)^(2p') - (2a+a^2)^p')^p`, expanded exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contradiction {
    pub lhs_alpha: BigInt,
    pub rhs_alpha: BigInt,
    /// Lowest degree where the two polynomials differ.
    pub first_difference: Option<usize>,
}

fn ipoly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn ipoly_pow(a: &[BigInt], e: u64) -> Vec<BigInt> {
    let mut acc = vec![BigInt::one()];
    for _ in 0..e {
        acc = ipoly_mul(&acc, a);
    }
    acc
}

fn ipoly_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()).collect()
}

/// `(1+a)^(2k) - (2a+a^2)^k`.
fn unit_norm(k: u64) -> Vec<BigInt> {
    let one_a = [BigInt::one(), BigInt::one()];
    let f = [BigInt::zero(), BigInt::from(2), BigInt::one()];
    ipoly_sub(&ipoly_pow(&one_a, 2 * k), &ipoly_pow(&f, k))
}

pub fn coefficient_contradiction(p: u64, p2: u64) -> Contradiction {
    let lhs = unit_norm(p * p2);
    let rhs = ipoly_mul(&ipoly_pow(&unit_norm(p), p2), &ipoly_pow(&unit_norm(p2), p));
    let diff = ipoly_sub(&lhs, &rhs);
    Contradiction {
        lhs_alpha: lhs[1].clone(),
        rhs_alpha: rhs[1].clone(),
        first_difference: diff.iter().position(|c| !c.is_zero()),
    }
}

/// Evaluates the engine lift for `q = 1`, `n = 2`, at `[[1+alpha, beta], [-beta, 1+alpha]]`
/// and compares with `uc_lift_p` in the quotient. A bivariate truncation at
/// total degree `order` determines the quotient modulo `alpha^m`,
/// `m = (order + 1) / 2`, so only those coefficients are compared.
pub fn embedding_consistency(p: u64, order: u32) -> Result<Verdict> {
    let q = FormMatrix::identity(2)?;
    let lift = chern_lift(&q, p, order)?;
    let ring = CycRing::rational();
    let a = Series::var(&ring, 2, order, 0)?;
    let b = Series::var(&ring, 2, order, 1)?;
    let images = [a.clone(), b.clone(), b.neg(), a];
    let phi = lift.phi0().substitute(&images)?;
    if !phi.get(1, 1).equals(phi.get(0, 0)) || !phi.get(1, 0).equals(&phi.get(0, 1).neg()) {
        return Ok(Verdict::fail("the image leaves the block form [[a, b], [-b, a]]"));
    }
    let m = (order as usize).div_ceil(2);
    let uc_order = order.max(1);
    let reduce = |s: &Series<CycRing>| -> Result<UCElem> { reduce_series(s, uc_order) };
    let engine_a = reduce(phi.get(0, 0))?.truncate_alpha(m);
    let engine_b = reduce(phi.get(0, 1))?.truncate_alpha(m);
    let uc = uc_lift_p(p, uc_order)?;
    for (name, got, want) in
        [("alpha", engine_a, uc.alpha.truncate_alpha(m)), ("beta", engine_b, uc.beta.truncate_alpha(m))]
    {
        if let Some((mono, x, y)) = got.first_difference(&want) {
            return Ok(Verdict::fail(format!("image of {name}, coefficient of {mono}: engine {x} vs quotient {y}")));
        }
    }
    Ok(Verdict::pass_with(format!("agreement modulo alpha^{m}")))
}

/// Reduces a series in `alpha, beta` to canonical form.
pub fn reduce_series(s: &Series<CycRing>, order: u32) -> Result<UCElem> {
    let a = UCElem::alpha(order);
    let b = UCElem::beta(order);
    let mut acc = UCElem::zero(order);
    for (m, c) in s.terms() {
        let c = c.as_rational().ok_or_else(|| Error::Usage("coefficients must be rational".into()))?;
        let t = a.pow(m.exponent(0) as u64).mul(&b.pow(m.exponent(1) as u64))?;
        acc = acc.add(&t.scale(c))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn beta_squared() {
        let b = UCElem::beta(3);
        assert_eq!(b.mul(&b).unwrap(), UCElem::from_parts(3, &[rat(0, 1), rat(-2, 1), rat(-1, 1)], &[]));
        let one_a = UCElem::alpha(3).add_constant(&Rational::one());
        assert_eq!(one_a.mul(&one_a).unwrap().add(&b.mul(&b).unwrap()).unwrap(), UCElem::one(3));
    }

    #[test]
    fn alpha_only_products() {
        let x = UCElem::from_parts(3, &[rat(1, 1), rat(2, 1)], &[]);
        let y = UCElem::from_parts(3, &[rat(3, 1), rat(0, 1), rat(1, 2)], &[]);
        let want = UCElem::from_parts(3, &[rat(3, 1), rat(6, 1), rat(1, 2), rat(1, 1)], &[]);
        assert_eq!(x.mul(&y).unwrap(), want);
    }

    #[test]
    fn lift_fixes_identity_and_relation() {
        for p in [3, 5, 7] {
            let l = uc_lift_p(p, 5).unwrap();
            assert!(l.alpha.g0()[0].is_zero() && l.beta.g0()[0].is_zero() && l.alpha.g1()[0].is_zero());
            assert!(l.alpha.is_alpha_only());
            assert!(l.relation_image().unwrap().is_zero());
        }
    }

    #[test]
    fn trivial_lift_images() {
        let l = uc_lift_pbar(3, 2).unwrap();
        assert_eq!(l.alpha, UCElem::from_parts(2, &[rat(0, 1), rat(3, 1), rat(3, 1)], &[]));
        // beta^3 = beta (-2 alpha - alpha^2)
        assert_eq!(l.beta, UCElem::from_parts(2, &[], &[rat(0, 1), rat(-2, 1), rat(-1, 1)]));
        assert!(!l.relation_image().unwrap().is_zero());
    }

    #[test]
    fn contradiction_coefficients() {
        for (p, p2) in [(3, 5), (3, 3), (5, 5)] {
            let c = coefficient_contradiction(p, p2);
            assert_eq!(c.lhs_alpha, BigInt::from(2 * p * p2));
            assert_eq!(c.rhs_alpha, BigInt::from(4 * p * p2));
            assert_eq!(c.first_difference, Some(1));
        }
    }

    #[test]
    fn commutator_is_nonzero() {
        for (p, p2) in [(3, 5), (3, 3)] {
            let v = uc_commutator_check(p, p2, 3).unwrap();
            assert!(v.holds, "{v}");
        }
    }

    #[test]
    fn unitary_report_divides() {
        let r = unitary_report(3, 5, 3).unwrap();
        assert!(!r.is_zero());
        assert_eq!(r.divisor, 15);
    }

    #[test]
    fn engine_embedding() {
        assert!(embedding_consistency(3, 5).unwrap().holds);
    }

    proptest! {
        #[test]
        fn apply_is_multiplicative(c in proptest::collection::vec(-4i64..5, 8)) {
            let l = uc_lift_p(3, 4).unwrap();
            let x = UCElem::from_parts(4, &[rat(c[0], 1), rat(c[1], 2)], &[rat(c[2], 1), rat(c[3], 1)]);
            let y = UCElem::from_parts(4, &[rat(c[4], 1), rat(c[5], 1)], &[rat(c[6], 3), rat(c[7], 1)]);
            let lhs = l.apply(&x.mul(&y).unwrap()).unwrap();
            let rhs = l.apply(&x).unwrap().mul(&l.apply(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn square_root_squares_back(c in proptest::collection::vec(-4i64..5, 4)) {
            let x = UCElem::from_parts(4, &[rat(1, 1), rat(c[0], 1), rat(c[1], 1)], &[rat(c[2], 1), rat(c[3], 1)]);
            let r = x.binomial_power(&rat(1, 2)).unwrap();
            prop_assert_eq!(r.mul(&r).unwrap(), x);
        }
    }
}
