//! Exact arithmetic in `Z[1/M, z]`, `z` a primitive N-th root of unity.
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(N)-1)` with
//! rational coordinates, fully reduced modulo the N-th cyclotomic
//! polynomial. For `N = 1` an element is a single rational.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ring::{parse_rational, rational_valuation, render_rational, Rational, Ring, Valuation};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct RingConfig {
    m: u64,
    n: u64,
    /// Coefficients of the N-th cyclotomic polynomial, constant term first.
    cyclotomic: Vec<BigInt>,
    /// `z^j` reduced, for `0 <= j < N`.
    zpow: Vec<Vec<Rational>>,
}

impl PartialEq for RingConfig {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.n == other.n
    }
}

impl Eq for RingConfig {}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// The N-th cyclotomic polynomial, by dividing `x^N - 1` by `Phi_d` for every
/// proper divisor `d` of `N`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = poly_div_exact(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

impl RingConfig {
    pub fn new(m: u64, n: u64) -> Result<Arc<Self>> {
        if m == 0 || !m.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!("M = {m} must be a positive even integer")));
        }
        if n == 0 {
            return Err(Error::InvalidConfig("N must be positive".into()));
        }
        let cyclotomic = cyclotomic_polynomial(n);
        let phi = cyclotomic.len() - 1;
        let mut zpow = Vec::with_capacity(n as usize);
        let mut cur = vec![Rational::zero(); phi];
        cur[0] = Rational::one();
        for _ in 0..n {
            zpow.push(cur.clone());
            // multiply by z and reduce the overflow coefficient
            let top = cur[phi - 1].clone();
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = Rational::zero();
            if !top.is_zero() {
                for i in 0..phi {
                    cur[i] -= &top * Rational::from_integer(cyclotomic[i].clone());
                }
            }
        }
        Ok(Arc::new(RingConfig { m, n, cyclotomic, zpow }))
    }

    /// The rational ring `Z[1/2]`.
    pub fn rational() -> Arc<Self> {
        Self::new(2, 1).expect("valid config")
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn phi_n(&self) -> usize {
        self.cyclotomic.len() - 1
    }

    pub fn cyclotomic_coeffs(&self) -> &[BigInt] {
        &self.cyclotomic
    }

    pub fn check_prime(&self, p: u64) -> Result<()> {
        crate::ring::check_odd_prime(p)?;
        let mn = self.m * self.n;
        if mn.is_multiple_of(p) {
            return Err(Error::PrimeDividesLevel { p, mn });
        }
        Ok(())
    }

    fn reduce(&self, mut coeffs: Vec<Rational>) -> Vec<Rational> {
        let phi = self.phi_n();
        while coeffs.len() > phi {
            let c = coeffs.pop().expect("nonempty");
            if c.is_zero() {
                continue;
            }
            let shift = coeffs.len() - phi;
            for i in 0..phi {
                coeffs[shift + i] -= &c * Rational::from_integer(self.cyclotomic[i].clone());
            }
        }
        coeffs.resize(phi, Rational::zero());
        coeffs
    }
}

/// An element of `Z[1/M, z]`.
#[derive(Clone)]
pub struct CycScalar {
    coords: Vec<Rational>,
    config: Arc<RingConfig>,
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycScalar({self})")
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config && self.coords == other.coords
    }
}

impl CycScalar {
    pub fn from_rational(config: &Arc<RingConfig>, q: Rational) -> Self {
        let mut coords = vec![Rational::zero(); config.phi_n()];
        coords[0] = q;
        CycScalar { coords, config: config.clone() }
    }

    pub fn from_int(config: &Arc<RingConfig>, v: i64) -> Self {
        Self::from_rational(config, Rational::from_integer(v.into()))
    }

    pub fn zero(config: &Arc<RingConfig>) -> Self {
        Self::from_int(config, 0)
    }

    pub fn one(config: &Arc<RingConfig>) -> Self {
        Self::from_int(config, 1)
    }

    /// `z^k` for any integer `k`.
    pub fn zeta_pow(config: &Arc<RingConfig>, k: i64) -> Self {
        let j = k.rem_euclid(config.n as i64) as usize;
        CycScalar { coords: config.zpow[j].clone(), config: config.clone() }
    }

    /// Builds an element from power-basis coefficients of any length.
    pub fn from_coeffs(config: &Arc<RingConfig>, coeffs: Vec<Rational>) -> Self {
        CycScalar { coords: config.reduce(coeffs), config: config.clone() }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn config(&self) -> &Arc<RingConfig> {
        &self.config
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.config != other.config {
            return Err(Error::ConfigMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn neg(&self) -> Self {
        CycScalar { coords: self.coords.iter().map(|c| -c).collect(), config: self.config.clone() }
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        CycScalar { coords, config: self.config.clone() }
    }

    fn sub_unchecked(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        CycScalar { coords, config: self.config.clone() }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.coords.len() == 1 {
            return CycScalar { coords: vec![&self.coords[0] * &other.coords[0]], config: self.config.clone() };
        }
        let phi = self.coords.len();
        let mut prod = vec![Rational::zero(); 2 * phi - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(&self.config, prod)
    }

    pub fn pow(&self, e: u64) -> Self {
        CycRing::new(self.config.clone()).pow(self, e)
    }

    fn scale(&self, q: &Rational) -> Self {
        CycScalar { coords: self.coords.iter().map(|c| c * q).collect(), config: self.config.clone() }
    }

    /// The Galois automorphism `z -> z^p`; the identity on rationals.
    pub fn frobenius(&self, p: u64) -> Result<Self> {
        self.config.check_prime(p)?;
        Ok(self.frobenius_unchecked(p))
    }

    fn frobenius_unchecked(&self, p: u64) -> Self {
        if self.coords.len() == 1 {
            return self.clone();
        }
        let n = self.config.n;
        let phi = self.coords.len();
        let mut out = vec![Rational::zero(); phi];
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = ((i as u64 * p) % n) as usize;
            for (k, z) in self.config.zpow[j].iter().enumerate() {
                if !z.is_zero() {
                    out[k] += c * z;
                }
            }
        }
        CycScalar { coords: out, config: self.config.clone() }
    }

    /// The Fermat quotient `(sigma_p(a) - a^p) / p`.
    pub fn fermat_quotient(&self, p: u64) -> Result<Self> {
        let s = self.frobenius(p)?;
        let d = s.sub_unchecked(&self.pow(p));
        Ok(d.scale(&Rational::new(BigInt::one(), BigInt::from(p))))
    }

    /// Minimum of the coordinate valuations.
    pub fn val_p(&self, p: u64) -> Valuation {
        self.coords.iter().map(|c| rational_valuation(c, p)).min().unwrap_or(Valuation::Infinity)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.coords.len() == 1 {
            return Some(Self::from_rational(&self.config, self.coords[0].recip()));
        }
        // Solve a * x = 1 with the multiplication matrix of a.
        let phi = self.coords.len();
        let config = &self.config;
        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::zero(); phi + 1]; phi];
        for j in 0..phi {
            let basis = CycScalar { coords: config.zpow[j].clone(), config: config.clone() };
            let col = self.mul_unchecked(&basis);
            for i in 0..phi {
                rows[i][j] = col.coords[i].clone();
            }
        }
        rows[0][phi] = Rational::one();
        for c in 0..phi {
            let piv = (c..phi).find(|&r| !rows[r][c].is_zero())?;
            rows.swap(c, piv);
            let inv = rows[c][c].recip();
            for x in rows[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..phi {
                if r != c && !rows[r][c].is_zero() {
                    let f = rows[r][c].clone();
                    for k in c..=phi {
                        let t = &f * &rows[c][k];
                        rows[r][k] -= t;
                    }
                }
            }
        }
        Some(CycScalar { coords: rows.into_iter().map(|r| r[phi].clone()).collect(), config: config.clone() })
    }

    /// Parses `c0 + c1*z + c2*z^2 ...`; terms may repeat and appear in any order.
    pub fn parse(config: &Arc<RingConfig>, input: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse { input: input.to_string(), reason: reason.to_string() };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && bytes[i - 1] != b'^'
                && bytes[i - 1] != b'*'
                && bytes[i - 1] != b'/'
            {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut acc = Self::zero(config);
        for term in terms {
            let (sign, body) = match term.as_bytes()[0] {
                b'-' => (-1, &term[1..]),
                b'+' => (1, &term[1..]),
                _ => (1, term),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef, zpart) = match body.find('z') {
                None => (body, None),
                Some(idx) => {
                    let c = body[..idx].trim_end_matches('*');
                    (if c.is_empty() { "1" } else { c }, Some(&body[idx + 1..]))
                }
            };
            let mut q = parse_rational(coef).ok_or_else(|| err("bad coefficient"))?;
            if sign < 0 {
                q = -q;
            }
            let k: i64 = match zpart {
                None => 0,
                Some("") => 1,
                Some(rest) => rest.strip_prefix('^').and_then(|e| e.parse().ok()).ok_or_else(|| err("bad exponent"))?,
            };
            acc = acc.add_unchecked(&Self::zeta_pow(config, k).scale(&q));
        }
        Ok(acc)
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", render_rational(&abs))?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{}*", render_rational(&abs))?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Product in `Z[1/M, z]`.
pub fn cyc_mul(a: &CycScalar, b: &CycScalar) -> Result<CycScalar> {
    a.mul(b)
}

pub fn cyc_frobenius(a: &CycScalar, p: u64) -> Result<CycScalar> {
    a.frobenius(p)
}

pub fn fermat_quotient(a: &CycScalar, p: u64) -> Result<CycScalar> {
    a.fermat_quotient(p)
}

pub fn val_p(a: &CycScalar, p: u64) -> Valuation {
    a.val_p(p)
}

/// [`Ring`] implementation over `Z[1/M, z]`.
#[derive(Debug, Clone)]
pub struct CycRing {
    config: Arc<RingConfig>,
}

impl CycRing {
    pub fn new(config: Arc<RingConfig>) -> Self {
        CycRing { config }
    }

    pub fn rational() -> Self {
        CycRing { config: RingConfig::rational() }
    }

    pub fn config(&self) -> &Arc<RingConfig> {
        &self.config
    }

    /// True when every denominator of `a` is built from primes dividing `M`.
    pub fn denominators_invertible(&self, a: &CycScalar) -> Option<BigInt> {
        let mut m = BigInt::from(self.config.m);
        for c in &a.coords {
            let mut d = c.denom().clone();
            loop {
                let g = d.gcd(&m);
                if g.is_one() {
                    break;
                }
                d /= &g;
            }
            if !d.is_one() {
                return Some(d);
            }
            m = BigInt::from(self.config.m);
        }
        None
    }
}

impl Ring for CycRing {
    type Elem = CycScalar;

    fn zero(&self) -> CycScalar {
        CycScalar::zero(&self.config)
    }

    fn from_int(&self, v: i64) -> CycScalar {
        CycScalar::from_int(&self.config, v)
    }

    fn from_rational(&self, q: &Rational) -> CycScalar {
        CycScalar::from_rational(&self.config, q.clone())
    }

    fn add(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        a.add_unchecked(b)
    }

    fn sub(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        a.sub_unchecked(b)
    }

    fn neg(&self, a: &CycScalar) -> CycScalar {
        a.neg()
    }

    fn mul(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        a.mul_unchecked(b)
    }

    fn add_assign(&self, a: &mut CycScalar, b: &CycScalar) {
        for (x, y) in a.coords.iter_mut().zip(&b.coords) {
            *x += y;
        }
    }

    fn is_zero(&self, a: &CycScalar) -> bool {
        a.is_zero()
    }

    fn eq(&self, a: &CycScalar, b: &CycScalar) -> bool {
        a.coords == b.coords
    }

    fn inv(&self, a: &CycScalar) -> Option<CycScalar> {
        a.inverse()
    }

    fn sigma(&self, a: &CycScalar, p: u64) -> CycScalar {
        a.frobenius_unchecked(p)
    }

    fn valuation(&self, a: &CycScalar, p: u64) -> Valuation {
        a.val_p(p)
    }

    fn div_int(&self, a: &CycScalar, d: u64) -> CycScalar {
        a.scale(&Rational::new(BigInt::one(), BigInt::from(d)))
    }

    fn same_ring(&self, other: &Self) -> bool {
        self.config == other.config
    }

    fn render(&self, a: &CycScalar) -> String {
        a.to_string()
    }
}
