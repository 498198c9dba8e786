//! Sparse truncated power series in up to 64 variables.
//!
//! A [`Series`] lives in `R[[T_1..T_m]] / (T)^(order+1)`. Terms are kept in
//! graded-lex order (total degree ascending, then exponent vectors
//! descending) with no stored zeros, so structural equality is canonical.

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::ring::{multiplicity, Ring, Valuation};
use crate::{Error, Result};

pub const MAX_ARITY: usize = 64;

/// Exponent vector with its cached total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u16,
    exps: [u8; MAX_ARITY],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { deg: 0, exps: [0; MAX_ARITY] }
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u8) -> Self {
        let mut m = Self::one();
        m.exps[i] = e;
        m.deg = e as u16;
        m
    }

    pub fn from_exponents(exps: &[u8]) -> Result<Self> {
        if exps.len() > MAX_ARITY {
            return Err(Error::ArityTooLarge(exps.len()));
        }
        let mut m = Self::one();
        m.exps[..exps.len()].copy_from_slice(exps);
        m.deg = exps.iter().map(|&e| e as u16).sum();
        Ok(m)
    }

    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    pub fn exponent(&self, i: usize) -> u8 {
        self.exps[i]
    }

    pub fn exponents(&self, arity: usize) -> &[u8] {
        &self.exps[..arity]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e += *o;
        }
        Monomial { deg: self.deg + other.deg, exps }
    }

    /// The last variable with a positive exponent.
    fn last_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    fn without_one(&self, i: usize) -> Self {
        let mut m = *self;
        m.exps[i] -= 1;
        m.deg -= 1;
        m
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.deg == 0 {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        parts.join("*")
    }

    /// Parses a rendering produced by [`Monomial::render`].
    pub fn parse(s: &str, names: &[String]) -> Option<Self> {
        let mut m = Self::one();
        if s == "1" {
            return Some(m);
        }
        for factor in s.split('*') {
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (n, e.parse::<u8>().ok()?),
                None => (factor, 1),
            };
            let i = names.iter().position(|x| x == name)?;
            m.exps[i] = m.exps[i].checked_add(e)?;
            m.deg += e as u16;
        }
        Some(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.last_var().map_or(0, |i| i + 1);
        write!(f, "Monomial{:?}", &self.exps[..last])
    }
}

/// Variable names `T_ij` for the entries of an n×n matrix, row-major, 1-based.
pub fn matrix_var_names(n: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            if n < 10 {
                names.push(format!("T_{i}{j}"));
            } else {
                names.push(format!("T_{i},{j}"));
            }
        }
    }
    names
}

pub fn var_names(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[derive(Clone)]
pub struct Series<R: Ring> {
    ring: R,
    arity: usize,
    order: u32,
    terms: Vec<(Monomial, R::Elem)>,
}

impl<R: Ring> fmt::Debug for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.arity).map(|i| format!("x{i}")).collect();
        write!(f, "Series[m={}, order={}]({})", self.arity, self.order, self.render(&names))
    }
}

impl<R: Ring> Series<R> {
    pub fn zero(ring: &R, arity: usize, order: u32) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        if order > u8::MAX as u32 {
            return Err(Error::DegreeOutOfRange { degree: order, order: u8::MAX as u32 });
        }
        Ok(Series { ring: ring.clone(), arity, order, terms: Vec::new() })
    }

    pub fn constant(ring: &R, arity: usize, order: u32, c: R::Elem) -> Result<Self> {
        let mut s = Self::zero(ring, arity, order)?;
        if !ring.is_zero(&c) {
            s.terms.push((Monomial::one(), c));
        }
        Ok(s)
    }

    pub fn one(ring: &R, arity: usize, order: u32) -> Result<Self> {
        Self::constant(ring, arity, order, ring.one())
    }

    /// The variable `T_i` (0-based).
    pub fn var(ring: &R, arity: usize, order: u32, i: usize) -> Result<Self> {
        if i >= arity {
            return Err(Error::ShapeMismatch(format!("variable {i} out of range for arity {arity}")));
        }
        Self::from_terms(ring, arity, order, vec![(Monomial::var(i), ring.one())])
    }

    /// Builds a series, summing repeated monomials and dropping terms above the order.
    pub fn from_terms(ring: &R, arity: usize, order: u32, terms: Vec<(Monomial, R::Elem)>) -> Result<Self> {
        let mut s = Self::zero(ring, arity, order)?;
        if let Some((m, _)) = terms.iter().find(|(m, _)| m.last_var().is_some_and(|v| v >= arity)) {
            return Err(Error::ShapeMismatch(format!("{m:?} uses variables beyond arity {arity}")));
        }
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        for (m, c) in terms {
            if m.degree() <= order {
                match acc.get_mut(&m) {
                    Some(e) => ring.add_assign(e, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        s.terms = Self::finish(ring, acc);
        Ok(s)
    }

    fn finish(ring: &R, acc: FxHashMap<Monomial, R::Elem>) -> Vec<(Monomial, R::Elem)> {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        terms.sort_unstable_by_key(|a| a.0);
        terms
    }

    fn with_terms(&self, terms: Vec<(Monomial, R::Elem)>) -> Self {
        Series { ring: self.ring.clone(), arity: self.arity, order: self.order, terms }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, R::Elem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ShapeMismatch(format!("arity {} vs {}", self.arity, other.arity)));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        if !self.ring.same_ring(&other.ring) {
            return Err(Error::ConfigMismatch);
        }
        Ok(())
    }

    pub fn coeff(&self, m: &Monomial) -> Result<R::Elem> {
        if m.degree() > self.order {
            return Err(Error::DegreeOutOfRange { degree: m.degree(), order: self.order });
        }
        Ok(self.coeff_or_zero(m))
    }

    fn coeff_or_zero(&self, m: &Monomial) -> R::Elem {
        match self.terms.binary_search_by(|(k, _)| k.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.zero(),
        }
    }

    pub fn constant_term(&self) -> R::Elem {
        match self.terms.first() {
            Some((m, c)) if m.deg == 0 => c.clone(),
            _ => self.ring.zero(),
        }
    }

    pub fn has_zero_constant(&self) -> bool {
        self.terms.first().is_none_or(|(m, _)| m.deg > 0)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let (m, c) = &other.terms[j];
                    out.push((*m, if negate { ring.neg(c) } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let (m, a) = &self.terms[i];
                    let b = &other.terms[j].1;
                    let c = if negate { ring.sub(a, b) } else { ring.add(a, b) };
                    if !ring.is_zero(&c) {
                        out.push((*m, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        self.with_terms(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.merge(other, true))
    }

    pub fn neg(&self) -> Self {
        self.with_terms(self.terms.iter().map(|(m, c)| (*m, self.ring.neg(c))).collect())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let ring = &self.ring;
        let terms = self.terms.iter().map(|(m, a)| (*m, ring.mul(a, c))).filter(|(_, a)| !ring.is_zero(a)).collect();
        self.with_terms(terms)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&self.ring.from_int(k))
    }

    /// Adds `c` to the constant term.
    pub fn add_constant(&self, c: &R::Elem) -> Self {
        let one = Self::constant(&self.ring, self.arity, self.order, c.clone()).expect("valid shape");
        self.merge(&one, false)
    }

    /// Product truncated at the common order.
    pub fn mul_trunc(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let ring = &self.ring;
        let order = self.order as u16;
        if self.terms.is_empty() || other.terms.is_empty() {
            return self.with_terms(Vec::new());
        }
        let (a, b) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        for (ma, ca) in &a.terms {
            let room = order - ma.deg;
            for (mb, cb) in &b.terms {
                if mb.deg > room {
                    break;
                }
                let m = ma.mul(mb);
                let c = ring.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(e) => ring.add_assign(e, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        self.with_terms(Self::finish(ring, acc))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(&self.ring, self.arity, self.order).expect("valid shape");
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Substitutes `T_i -> images[i]`. The result lives in the images' ring
    /// shape; images must have zero constant terms so truncation stays exact.
    pub fn substitute(&self, images: &[Series<R>]) -> Result<Self> {
        if images.len() != self.arity {
            return Err(Error::ShapeMismatch(format!("{} images for arity {}", images.len(), self.arity)));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        for (i, img) in images.iter().enumerate() {
            first.same_shape(img)?;
            if !img.has_zero_constant() {
                return Err(Error::NonzeroConstantImage(i));
            }
        }
        if first.order > self.order {
            return Err(Error::OrderMismatch(self.order, first.order));
        }
        let order = first.order;
        let ring = &first.ring;
        let mut cache: FxHashMap<Monomial, Series<R>> = FxHashMap::default();
        cache.insert(Monomial::one(), Series::one(ring, first.arity, order)?);
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        for (m, c) in &self.terms {
            if m.degree() > order {
                break;
            }
            let img = monomial_image(m, images, &mut cache);
            for (mi, ci) in &img.terms {
                let t = ring.mul(c, ci);
                match acc.get_mut(mi) {
                    Some(e) => ring.add_assign(e, &t),
                    None => {
                        acc.insert(*mi, t);
                    }
                }
            }
        }
        let mut out = Series::zero(ring, first.arity, order)?;
        out.terms = Self::finish(ring, acc);
        Ok(out)
    }

    /// Applies the coefficient Frobenius `sigma_p` to every coefficient.
    pub fn galois_map(&self, p: u64) -> Self {
        let ring = &self.ring;
        self.with_terms(self.terms.iter().map(|(m, c)| (*m, ring.sigma(c, p))).collect())
    }

    /// Divides by `d`, first checking that every coefficient is divisible by
    /// the part of `d` supported on the witness primes.
    pub fn div_exact_int(&self, d: u64, witnesses: &[u64], names: &[String]) -> Result<Self> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        for &p in witnesses {
            let need = multiplicity(d, p) as i64;
            if need == 0 {
                continue;
            }
            for (m, c) in &self.terms {
                if !self.ring.valuation(c, p).is_at_least(need) {
                    return Err(Error::DivisibilityViolation { prime: p, monomial: m.render(names) });
                }
            }
        }
        let ring = &self.ring;
        Ok(self.with_terms(self.terms.iter().map(|(m, c)| (*m, ring.div_int(c, d))).collect()))
    }

    /// Minimum coefficient valuation at `p`.
    pub fn min_valuation(&self, p: u64) -> Valuation {
        self.terms.iter().map(|(_, c)| self.ring.valuation(c, p)).min().unwrap_or(Valuation::Infinity)
    }

    /// Drops all terms of total degree above `order` and lowers the order.
    pub fn truncate(&self, order: u32) -> Result<Self> {
        if order > self.order {
            return Err(Error::OrderMismatch(self.order, order));
        }
        let terms = self.terms.iter().filter(|(m, _)| m.degree() <= order).cloned().collect();
        Ok(Series { ring: self.ring.clone(), arity: self.arity, order, terms })
    }

    /// Keeps the terms of total degree at most `d`, at the same order.
    pub fn keep_degree_at_most(&self, d: u32) -> Self {
        self.with_terms(self.terms.iter().filter(|(m, _)| m.degree() <= d).cloned().collect())
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.with_terms(self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect())
    }

    pub fn leading_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Lowest-order term, the witness of nonvanishing.
    pub fn leading_term(&self) -> Option<&(Monomial, R::Elem)> {
        self.terms.first()
    }

    pub fn map_coeffs<S: Ring>(&self, ring: &S, f: impl Fn(&R::Elem) -> S::Elem) -> Series<S> {
        let terms = self.terms.iter().map(|(m, c)| (*m, f(c))).filter(|(_, c)| !ring.is_zero(c)).collect();
        Series { ring: ring.clone(), arity: self.arity, order: self.order, terms }
    }

    /// Re-embeds into a ring with more variables, keeping the indices.
    pub fn widen(&self, arity: usize) -> Result<Self> {
        if arity < self.arity || arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        Ok(Series { ring: self.ring.clone(), arity, order: self.order, terms: self.terms.clone() })
    }

    /// The first monomial (graded-lex) where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Monomial, R::Elem, R::Elem)> {
        let d = self.merge(other, true);
        d.terms.first().map(|(m, _)| (*m, self.coeff_or_zero(m), other.coeff_or_zero(m)))
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.arity == other.arity && self.order == other.order && self.merge(other, true).is_zero()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let cs = self.ring.render(c);
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.deg == 0 {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&m.render(names));
            } else {
                out.push_str(&format!("{body}*{}", m.render(names)));
            }
        }
        out
    }
}

fn monomial_image<R: Ring>(
    m: &Monomial,
    images: &[Series<R>],
    cache: &mut FxHashMap<Monomial, Series<R>>,
) -> Series<R> {
    if let Some(s) = cache.get(m) {
        return s.clone();
    }
    let v = m.last_var().expect("constant monomial is cached");
    let parent = m.without_one(v);
    let p = monomial_image(&parent, images, cache);
    let img = p.mul_unchecked(&images[v]);
    cache.insert(*m, img.clone());
    img
}

impl<R: Ring> PartialEq for Series<R>
where
    R::Elem: PartialEq,
{
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.order == other.order && self.terms == other.terms
    }
}
