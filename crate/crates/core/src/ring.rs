//! Coefficient rings for the series engine.
//!
//! Series and matrices are generic over a [`Ring`] object that owns whatever
//! context its elements need (the cyclotomic modulus, the p-adic precision
//! cap). Elements are plain values; every operation goes through the ring.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rationals used throughout.
pub type Rational = BigRational;

/// A p-adic valuation, with `Infinity` for zero. Orders as expected:
/// every finite valuation is below `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinity => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn from_int(&self, v: i64) -> Self::Elem;
    fn from_rational(&self, q: &Rational) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// The Frobenius automorphism of the coefficient ring attached to `p`.
    fn sigma(&self, a: &Self::Elem, p: u64) -> Self::Elem;

    fn valuation(&self, a: &Self::Elem, p: u64) -> Valuation;

    /// Exact division by a nonzero integer.
    fn div_int(&self, a: &Self::Elem, d: u64) -> Self::Elem;

    /// True when both ring objects describe the same ring.
    fn same_ring(&self, other: &Self) -> bool;

    fn render(&self, a: &Self::Elem) -> String;

    fn one(&self) -> Self::Elem {
        self.from_int(1)
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Pivot preference for elimination on constant matrices; lower is better.
    fn pivot_rank(&self, _a: &Self::Elem) -> i64 {
        0
    }
}

/// p-adic valuation of an integer; `None` for zero.
pub fn int_valuation(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

pub fn rational_valuation(q: &Rational, p: u64) -> Valuation {
    match int_valuation(q.numer(), p) {
        None => Valuation::Infinity,
        Some(vn) => Valuation::Finite(vn - int_valuation(q.denom(), p).unwrap_or(0)),
    }
}

/// Renders a rational as `num` or `num/den`.
pub fn render_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rational::from_integer(n))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_odd_prime(p: u64) -> crate::Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(crate::Error::NotOddPrime(p));
    }
    Ok(())
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exponent of the prime `p` in `n`.
pub fn multiplicity(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Generalized binomial coefficient `C(s, i)` by the falling-factorial recurrence.
pub fn binomial_rational(s: &Rational, i: usize) -> Rational {
    let mut c = Rational::one();
    for k in 0..i {
        let k = Rational::from_integer(BigInt::from(k));
        c = c * (s - &k) / (k + Rational::one());
    }
    c
}
