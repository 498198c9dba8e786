//! p-adic numbers at capped absolute precision.
//!
//! A value is `unit * p^val + O(p^prec)` with `p ∤ unit`, or a zero known
//! modulo `p^prec` (stored as `unit = 0`, `val = prec`). Every result carries
//! the absolute precision its inputs justify, never more than the cap `k`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::ring::{check_odd_prime, int_valuation, rational_valuation, Rational, Ring, Valuation};
use crate::{Error, Result};

fn ppow(p: u64, e: i64) -> BigInt {
    num_traits::pow(BigInt::from(p), e.max(0) as usize)
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

#[derive(Clone, PartialEq, Eq)]
pub struct PadicScalar {
    p: u64,
    cap: i64,
    prec: i64,
    val: i64,
    unit: BigInt,
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Padic({self})")
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit.is_zero() {
            write!(f, "0 + O({}^{})", self.p, self.prec)
        } else {
            write!(f, "{} * {}^{} + O({}^{})", self.unit, self.p, self.val, self.p, self.prec)
        }
    }
}

impl PadicScalar {
    /// Builds `x * p^shift` known to absolute precision `prec`, normalizing.
    fn normalized(p: u64, cap: i64, prec: i64, x: BigInt, shift: i64) -> Self {
        let prec = prec.min(cap);
        if x.is_zero() || shift >= prec {
            return PadicScalar { p, cap, prec, val: prec, unit: BigInt::zero() };
        }
        let m = ppow(p, prec - shift);
        let x = x.mod_floor(&m);
        if x.is_zero() {
            return PadicScalar { p, cap, prec, val: prec, unit: BigInt::zero() };
        }
        let v = int_valuation(&x, p).expect("nonzero");
        let unit = x / ppow(p, v);
        PadicScalar { p, cap, prec, val: shift + v, unit }
    }

    pub fn zero(p: u64, k: u32) -> Self {
        PadicScalar { p, cap: k as i64, prec: k as i64, val: k as i64, unit: BigInt::zero() }
    }

    pub fn from_int(p: u64, k: u32, v: i64) -> Self {
        Self::normalized(p, k as i64, k as i64, BigInt::from(v), 0)
    }

    pub fn from_rational(p: u64, k: u32, q: &Rational) -> Self {
        let cap = k as i64;
        match rational_valuation(q, p) {
            Valuation::Infinity => Self::zero(p, k),
            Valuation::Finite(v) => {
                if v >= cap {
                    return Self::zero(p, k);
                }
                let vn = int_valuation(q.numer(), p).unwrap_or(0);
                let vd = int_valuation(q.denom(), p).unwrap_or(0);
                let m = ppow(p, cap - v);
                let num = (q.numer() / ppow(p, vn)).mod_floor(&m);
                let den = (q.denom() / ppow(p, vd)).mod_floor(&m);
                let unit = (num * inverse_mod(&den, &m)).mod_floor(&m);
                PadicScalar { p, cap, prec: cap, val: v, unit }
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The precision cap shared by the computation.
    pub fn cap(&self) -> u32 {
        self.cap as u32
    }

    /// Absolute precision: the value is known modulo `p^prec`.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.val)
        }
    }

    /// The valuation, with a zero reporting its precision.
    fn val_or_prec(&self) -> i64 {
        self.val
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    fn exhausted(self) -> Result<Self> {
        if self.prec <= 0 && self.is_zero() {
            return Err(Error::PrecisionExhausted);
        }
        Ok(self)
    }

    fn add_raw(&self, other: &Self, negate: bool) -> Self {
        let prec = self.prec.min(other.prec);
        let m = self.val.min(other.val);
        let a = &self.unit * ppow(self.p, self.val - m);
        let b = &other.unit * ppow(self.p, other.val - m);
        let x = if negate { a - b } else { a + b };
        Self::normalized(self.p, self.cap.max(other.cap), prec, x, m)
    }

    fn mul_raw(&self, other: &Self) -> Self {
        let prec = (self.prec + other.val_or_prec()).min(other.prec + self.val_or_prec());
        let cap = self.cap.max(other.cap);
        if self.is_zero() || other.is_zero() {
            let prec = prec.min(cap);
            return PadicScalar { p: self.p, cap, prec, val: prec, unit: BigInt::zero() };
        }
        Self::normalized(self.p, cap, prec, &self.unit * &other.unit, self.val + other.val)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.add_raw(other, false).exhausted()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.add_raw(other, true).exhausted()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.mul_raw(other).exhausted()
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = ppow(self.p, self.prec - self.val);
        PadicScalar { unit: (-&self.unit).mod_floor(&m), ..self.clone() }
    }

    pub fn pow(&self, e: u64) -> Self {
        PadicRing::with_cap(self.p, self.cap).pow(self, e)
    }

    /// Exact division by a nonzero integer; each factor of `p` costs a digit.
    pub fn div_int(&self, d: u64) -> Self {
        assert!(d != 0, "division by zero");
        let e = int_valuation(&BigInt::from(d), self.p).unwrap_or(0);
        let rest = d / self.p.pow(e as u32);
        if self.is_zero() {
            let prec = self.prec - e;
            return PadicScalar { prec, val: prec, ..self.clone() };
        }
        let r = self.prec - self.val;
        let m = ppow(self.p, r);
        let unit = (&self.unit * inverse_mod(&BigInt::from(rest), &m)).mod_floor(&m);
        PadicScalar { p: self.p, cap: self.cap, prec: self.prec - e, val: self.val - e, unit }
    }

    /// Congruence modulo `p^m`, checked against the known precision.
    pub fn eq_mod(&self, other: &Self, m: i64) -> bool {
        let d = self.add_raw(other, true);
        d.is_zero() || d.val >= m
    }

    /// The canonical integer representative modulo `p^prec`, when integral.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some(&self.unit * ppow(self.p, self.val))
    }

    /// Representative in the symmetric range `(-p^m/2, p^m/2]`, when integral.
    pub fn to_symmetric_integer(&self, m: i64) -> Option<BigInt> {
        let x = self.to_integer()?;
        let modulus = ppow(self.p, m);
        let r = x.mod_floor(&modulus);
        if &r * 2 > modulus {
            Some(r - modulus)
        } else {
            Some(r)
        }
    }
}

/// Multiplicative inverse with relative precision preserved.
pub fn padic_inv(a: &PadicScalar) -> Result<PadicScalar> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let r = a.prec - a.val;
    let m = ppow(a.p, r);
    let unit = inverse_mod(&a.unit, &m);
    let prec = (a.prec - 2 * a.val).min(a.cap);
    Ok(PadicScalar::normalized(a.p, a.cap, prec, unit, -a.val))
}

/// The square root congruent to 1 mod p, by Newton iteration.
pub fn padic_sqrt_branch(a: &PadicScalar) -> Result<PadicScalar> {
    let p = a.p;
    let one_mod_p = !a.is_zero() && a.val == 0 && (&a.unit % BigInt::from(p)).is_one();
    if !one_mod_p || a.prec < 1 {
        return Err(Error::NotOneModP { value: a.to_string(), p });
    }
    let m = ppow(p, a.prec);
    let inv2 = inverse_mod(&BigInt::from(2), &m);
    let mut x = BigInt::one();
    let mut digits = 1;
    while digits < a.prec {
        // x <- x - (x^2 - a) / (2x)
        let f = (&x * &x - &a.unit).mod_floor(&m);
        let step = (f * inverse_mod(&x, &m) * &inv2).mod_floor(&m);
        x = (x - step).mod_floor(&m);
        digits *= 2;
    }
    Ok(PadicScalar::normalized(p, a.cap, a.prec, x, 0))
}

/// The p-derivation of the identity Frobenius lift, `(a - a^p) / p`.
pub fn padic_fermat_quotient(a: &PadicScalar) -> Result<PadicScalar> {
    if !a.is_zero() && a.val < 0 {
        return Err(Error::NegativeValuation(a.val));
    }
    let d = a.add_raw(&a.pow(a.p), true);
    Ok(d.div_int(a.p))
}

/// [`Ring`] implementation for `Q_p` at cap `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicRing {
    p: u64,
    k: u32,
}

impl PadicRing {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if k == 0 {
            return Err(Error::PrecisionExhausted);
        }
        Ok(PadicRing { p, k })
    }

    fn with_cap(p: u64, cap: i64) -> Self {
        PadicRing { p, k: cap as u32 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

impl Ring for PadicRing {
    type Elem = PadicScalar;

    fn zero(&self) -> PadicScalar {
        PadicScalar::zero(self.p, self.k)
    }

    fn from_int(&self, v: i64) -> PadicScalar {
        PadicScalar::from_int(self.p, self.k, v)
    }

    fn from_rational(&self, q: &Rational) -> PadicScalar {
        PadicScalar::from_rational(self.p, self.k, q)
    }

    fn add(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a.add_raw(b, false)
    }

    fn sub(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a.add_raw(b, true)
    }

    fn neg(&self, a: &PadicScalar) -> PadicScalar {
        a.neg()
    }

    fn mul(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a.mul_raw(b)
    }

    fn is_zero(&self, a: &PadicScalar) -> bool {
        a.is_zero()
    }

    fn inv(&self, a: &PadicScalar) -> Option<PadicScalar> {
        padic_inv(a).ok()
    }

    fn sigma(&self, a: &PadicScalar, _p: u64) -> PadicScalar {
        a.clone()
    }

    fn valuation(&self, a: &PadicScalar, _p: u64) -> Valuation {
        a.valuation()
    }

    fn div_int(&self, a: &PadicScalar, d: u64) -> PadicScalar {
        a.div_int(d)
    }

    fn same_ring(&self, other: &Self) -> bool {
        self == other
    }

    fn render(&self, a: &PadicScalar) -> String {
        a.to_string()
    }

    fn pivot_rank(&self, a: &PadicScalar) -> i64 {
        if a.is_zero() {
            i64::MAX
        } else {
            a.val
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn int(p: u64, k: u32, v: i64) -> PadicScalar {
        PadicScalar::from_int(p, k, v)
    }

    #[test]
    fn ring_ops() {
        let two = int(3, 3, 2);
        assert_eq!(two.add(&two).unwrap().to_integer().unwrap(), BigInt::from(4));
        let quarter = PadicScalar::from_rational(3, 3, &q(1, 4));
        let prod = quarter.mul(&int(3, 3, 4)).unwrap();
        assert!(prod.eq_mod(&int(3, 3, 1), 3));
        let five = int(5, 4, 5);
        let prod = five.mul(&int(5, 4, 2)).unwrap();
        assert_eq!(prod.valuation(), Valuation::Finite(1));
        assert_eq!(prod.unit(), &BigInt::from(2));
    }

    #[test]
    fn mismatched_primes() {
        assert_eq!(int(3, 3, 1).add(&int(5, 3, 1)), Err(Error::PrimeMismatch(3, 5)));
    }

    #[test]
    fn inverse_examples() {
        let inv = padic_inv(&int(3, 3, 2)).unwrap();
        assert_eq!(inv.to_integer().unwrap(), BigInt::from(14));
        assert_eq!(padic_inv(&int(3, 3, 1)).unwrap().to_integer().unwrap(), BigInt::one());
        assert_eq!(padic_inv(&int(3, 3, 0)), Err(Error::DivisionByZero));
        let inv9 = padic_inv(&int(3, 5, 9)).unwrap();
        assert_eq!(inv9.valuation(), Valuation::Finite(-2));
    }

    #[test]
    fn sqrt_examples() {
        let r = padic_sqrt_branch(&int(3, 3, 4)).unwrap();
        assert_eq!(r.to_integer().unwrap(), BigInt::from(25));
        assert_eq!(padic_sqrt_branch(&int(3, 3, 1)).unwrap().to_integer().unwrap(), BigInt::one());
        assert!(matches!(padic_sqrt_branch(&int(3, 3, 2)), Err(Error::NotOneModP { .. })));
        assert!(padic_sqrt_branch(&int(3, 3, 3)).is_err());
    }

    #[test]
    fn fermat_quotient_examples() {
        let d = padic_fermat_quotient(&int(3, 5, -2)).unwrap();
        assert!(d.eq_mod(&int(3, 5, 2), 4));
        assert_eq!(d.prec(), 4);
        assert!(padic_fermat_quotient(&int(3, 5, 1)).unwrap().is_zero());
        assert!(padic_fermat_quotient(&int(3, 5, 0)).unwrap().is_zero());
        let third = PadicScalar::from_rational(3, 5, &q(1, 3));
        assert_eq!(padic_fermat_quotient(&third), Err(Error::NegativeValuation(-1)));
    }

    #[test]
    fn precision_bookkeeping() {
        // 9 * (1 + O(3^4)) is known mod 3^6 but capped at k = 5
        let nine = int(3, 5, 9);
        let x = int(3, 5, 1).div_int(1);
        assert_eq!(nine.mul(&x).unwrap().prec(), 5);
        // dividing by p loses one digit
        assert_eq!(int(3, 5, 3).div_int(3).prec(), 4);
        // subtracting equal values leaves a zero at the shared precision
        let z = x.sub(&x).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.prec(), 5);
        assert_eq!(int(3, 5, 7).to_string(), "7 * 3^0 + O(3^5)");
        assert_eq!(int(3, 5, 0).to_string(), "0 + O(3^5)");
    }

    #[test]
    fn exhausted_precision_is_an_error() {
        let a = PadicScalar::from_rational(3, 2, &q(1, 9));
        let tiny = PadicScalar::zero(3, 2);
        // 0 + O(3^2) times 1/9 is known to no digits
        assert_eq!(tiny.mul(&a), Err(Error::PrecisionExhausted));
    }

    fn one_mod_p(p: u64) -> impl Strategy<Value = i64> {
        (-10_000i64..10_000).prop_map(move |t| 1 + p as i64 * t)
    }

    proptest! {
        #[test]
        fn sqrt_squares_back(p in prop::sample::select(vec![3u64, 5, 7, 11]), a in (-10_000i64..10_000)) {
            let a = 1 + p as i64 * a;
            let x = int(p, 6, a);
            let r = padic_sqrt_branch(&x).unwrap();
            prop_assert!(r.mul(&r).unwrap().eq_mod(&x, 6));
            prop_assert!(r.eq_mod(&int(p, 6, 1), 1));
        }

        #[test]
        fn sqrt_of_one_mod_three(a in one_mod_p(3)) {
            let x = int(3, 8, a);
            let r = padic_sqrt_branch(&x).unwrap();
            prop_assert!(r.mul(&r).unwrap().eq_mod(&x, 8));
        }

        #[test]
        fn fermat_quotient_sum_law(p in prop::sample::select(vec![3u64, 5, 7]), a in -500i64..500, b in -500i64..500) {
            let k = 6;
            let (x, y) = (int(p, k, a), int(p, k, b));
            let lhs = padic_fermat_quotient(&x.add(&y).unwrap()).unwrap();
            let mut rhs = padic_fermat_quotient(&x).unwrap().add(&padic_fermat_quotient(&y).unwrap()).unwrap();
            let ring = PadicRing::new(p, k).unwrap();
            for i in 1..p {
                let c = crate::ring::binomial_rational(&Rational::from_integer(p.into()), i as usize) / Rational::from_integer(p.into());
                let term = ring.mul(&ring.from_rational(&c), &ring.mul(&ring.pow(&x, i), &ring.pow(&y, p - i)));
                rhs = rhs.sub(&term).unwrap();
            }
            prop_assert!(lhs.eq_mod(&rhs, k as i64 - 1));
        }

        #[test]
        fn fermat_divisibility(p in prop::sample::select(vec![3u64, 5, 7, 11]), a in -100_000i64..100_000) {
            let x = int(p, 5, a);
            let d = x.sub(&x.pow(p)).unwrap();
            prop_assert!(d.valuation().is_at_least(1));
        }
    }
}
