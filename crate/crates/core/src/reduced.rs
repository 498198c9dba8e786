//! The two-variable polynomials `f_p`, `g_{pp'}`, `g_{pp'p''}` and the
//! dimension reductions that expose curvature cheaply: the upper-right corner,
//! unipotent matrices in `SO`, and the `n = 2` symplectic closed form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::chern::{chern_lift, phi_at, FormMatrix, FrobLift, SqrtMode, Verdict};
use crate::curvature::{commutator_on_generators, curvature_of_lifts, CurvatureKind, CurvatureReport};
use crate::matseries::SeriesMatrix;
use crate::ring::{Rational, Ring};
use crate::scalars::CycRing;
use crate::series::{matrix_var_names, var_names, Series};
use crate::{Error, Result};

/// Upper sign for symmetric forms, lower for alternating ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Upper,
    Lower,
}

impl Sign {
    pub fn from_form_sign(s: i32) -> Self {
        if s < 0 {
            Sign::Lower
        } else {
            Sign::Upper
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Upper => 1,
            Sign::Lower => -1,
        }
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An exact polynomial in `v, w` with rational coefficients.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(a: u32, b: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        BiPoly { terms }
    }

    pub fn v() -> Self {
        Self::monomial(1, 0, Rational::one())
    }

    pub fn w() -> Self {
        Self::monomial(0, 1, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `v^a w^b`.
    pub fn coeff(&self, a: u32, b: u32) -> Rational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|(a, b)| a + b);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    fn insert_add(terms: &mut BTreeMap<(u32, u32), Rational>, k: (u32, u32), c: Rational) {
        let e = terms.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            terms.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&k, c) in &other.terms {
            Self::insert_add(&mut terms, k, c.clone());
        }
        BiPoly { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(&k, x)| (k, x * c)).collect() }
    }

    /// Integer numerators over the lcm of the denominators.
    fn integral(&self) -> (Vec<((u32, u32), BigInt)>, BigInt) {
        let l = self.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let nums = self.terms.iter().map(|(&k, c)| (k, c.numer() * (&l / c.denom()))).collect();
        (nums, l)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (xs, lx) = self.integral();
        let (ys, ly) = other.integral();
        let mut acc: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for ((a, b), x) in &xs {
            for ((c, d), y) in &ys {
                *acc.entry((a + c, b + d)).or_default() += x * y;
            }
        }
        let den = lx * ly;
        let terms =
            acc.into_iter().filter(|(_, n)| !n.is_zero()).map(|(k, n)| (k, Rational::new(n, den.clone()))).collect();
        BiPoly { terms }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `P(w, v)`.
    pub fn swap(&self) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&(a, b), c)| ((b, a), c.clone())).collect() }
    }

    /// `P(x, y)` for polynomials `x, y`.
    pub fn substitute(&self, x: &BiPoly, y: &BiPoly) -> BiPoly {
        let max_a = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_b = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let xs = powers(x, max_a);
        let ys = powers(y, max_b);
        let mut acc = BiPoly::zero();
        for (&(a, b), c) in &self.terms {
            acc = acc.add(&xs[a as usize].mul(&ys[b as usize]).scale(c));
        }
        acc
    }

    /// Coefficients of `P(v, 1)` in degrees `0..=k`.
    pub fn low_coefficients_at_w_one(&self, k: u32) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); k as usize + 1];
        for (&(a, _), c) in &self.terms {
            if a <= k {
                out[a as usize] += c;
            }
        }
        out
    }

    /// `P(v_image, w_image)` as a truncated series.
    pub fn to_series<R: Ring>(&self, v: &Series<R>, w: &Series<R>) -> Result<Series<R>> {
        let ring = v.ring();
        let mut acc = Series::zero(ring, v.arity(), v.order())?;
        for (&(a, b), c) in &self.terms {
            let t = v.pow(a as u64).mul_trunc(&w.pow(b as u64))?;
            acc = acc.add(&t.scale(&ring.from_rational(c)))?;
        }
        Ok(acc)
    }

    pub fn render(&self, v: &str, w: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|x, y| (x.0 + x.1).cmp(&(y.0 + y.1)).then(y.0.cmp(&x.0)));
        let mut out = String::new();
        for (idx, k) in keys.iter().enumerate() {
            let c = &self.terms[k];
            let mono = render_mono(k.0, k.1, v, w);
            let neg = c.is_negative();
            let abs = c.abs();
            let body = match (mono.is_empty(), abs.is_one()) {
                (true, _) => abs.to_string(),
                (false, true) => mono,
                (false, false) => format!("{abs}*{mono}"),
            };
            match (idx, neg) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("v", "w"))
    }
}

fn render_mono(a: u32, b: u32, v: &str, w: &str) -> String {
    let part = |name: &str, e: u32| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    [part(v, a), part(w, b)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

fn powers(x: &BiPoly, max: u32) -> Vec<BiPoly> {
    let mut out = vec![BiPoly::constant(Rational::one())];
    for i in 1..=max as usize {
        out.push(out[i - 1].mul(x));
    }
    out
}

/// `f_p(v, w) = (s (s v + w)^p + v^p - s w^p) / 2` with `s = +-1`.
pub fn fp_poly(p: u64, sign: Sign) -> BiPoly {
    fp_of(p, sign, &BiPoly::v(), &BiPoly::w())
}

/// `f_p(x, y)` evaluated at polynomials.
fn fp_of(p: u64, sign: Sign, x: &BiPoly, y: &BiPoly) -> BiPoly {
    let s = Rational::from_integer(sign.value().into());
    let e = p as u32;
    x.scale(&s).add(y).pow(e).scale(&s).add(&x.pow(e)).sub(&y.pow(e).scale(&s)).scale(&rat(1, 2))
}

/// Applies `f` at the innermost prime first: `[a, b]` gives `f_b(f_a(v,w), f_a(w,v))`.
fn nest(inner_to_outer: &[u64], sign: Sign) -> BiPoly {
    let mut cur = BiPoly::v();
    for &p in inner_to_outer {
        cur = fp_of(p, sign, &cur, &cur.swap());
    }
    cur
}

/// `f_{pp'} = f_{p'}(f_p(v,w), f_p(w,v))` for two primes and
/// `f_{pp'p''} = f_p(f_{p'}(f_{p''}(..), ..), ..)` for three.
pub fn compose_fp(primes: &[u64], sign: Sign) -> Result<BiPoly> {
    match *primes {
        [p] => Ok(fp_poly(p, sign)),
        [p, p2] => Ok(nest(&[p, p2], sign)),
        [p, p2, p3] => Ok(nest(&[p3, p2, p], sign)),
        _ => Err(Error::Usage(format!("compose_fp takes 1 to 3 primes, got {}", primes.len()))),
    }
}

/// `g_{pp'} = f_{pp'} - f_{p'p}` and
/// `g_{pp'p''} = f_{pp'p''} - f_{p'pp''} - f_{p''pp'} + f_{p''p'p}`.
pub fn g_poly(primes: &[u64], sign: Sign) -> Result<BiPoly> {
    match *primes {
        [p, p2] => Ok(compose_fp(&[p, p2], sign)?.sub(&compose_fp(&[p2, p], sign)?)),
        [p, p2, p3] => Ok(compose_fp(&[p, p2, p3], sign)?
            .sub(&compose_fp(&[p2, p, p3], sign)?)
            .sub(&compose_fp(&[p3, p, p2], sign)?)
            .add(&compose_fp(&[p3, p2, p], sign)?)),
        _ => Err(Error::Usage(format!("g_poly takes 2 or 3 primes, got {}", primes.len()))),
    }
}

/// The triple congruence for every ordered triple drawn from `primes`, sharing
/// compositions between triples.
pub fn triple_congruences(primes: &[u64]) -> Vec<Congruence> {
    let sign = Sign::Upper;
    let mut inner: BTreeMap<(u64, u64), BiPoly> = BTreeMap::new();
    let mut full: BTreeMap<(u64, u64, u64), BiPoly> = BTreeMap::new();
    for &c in primes {
        for &b in primes {
            let two = inner.entry((c, b)).or_insert_with(|| nest(&[c, b], sign)).clone();
            for &a in primes {
                full.insert((a, b, c), fp_of(a, sign, &two, &two.swap()));
            }
        }
    }
    let mut out = Vec::new();
    for &p in primes {
        for &p2 in primes {
            for &p3 in primes {
                let g = full[&(p, p2, p3)].sub(&full[&(p2, p, p3)]).sub(&full[&(p3, p, p2)]).add(&full[&(p3, p2, p)]);
                let low = g.scale(&rat(2, 1)).low_coefficients_at_w_one(2);
                out.push(Congruence { primes: vec![p, p2, p3], low, expected: expected_triple_coefficient(p, p2, p3) });
            }
        }
    }
    out
}

/// Expected `v^2` coefficient of `g_{pp'}(v, 1)`: `+-(pp'/16)(p' - p)`.
pub fn expected_pair_coefficient(p: u64, p2: u64, sign: Sign) -> Rational {
    let (p, p2) = (p as i64, p2 as i64);
    rat(sign.value() * p * p2 * (p2 - p), 16)
}

/// Expected `v^2` coefficient of `2 g_{pp'p''}(v, 1)` (upper sign):
/// `-(pp'p''/32)(p'' - 2)(p' - p)`.
pub fn expected_triple_coefficient(p: u64, p2: u64, p3: u64) -> Rational {
    let (p, p2, p3) = (p as i64, p2 as i64, p3 as i64);
    rat(-p * p2 * p3 * (p3 - 2) * (p2 - p), 32)
}

/// Outcome of comparing a `g` polynomial modulo `v^3` at `w = 1`.
#[derive(Debug, Clone)]
pub struct Congruence {
    pub primes: Vec<u64>,
    /// Coefficients of `v^0, v^1, v^2` (doubled for triples).
    pub low: Vec<Rational>,
    pub expected: Rational,
}

impl Congruence {
    pub fn holds(&self) -> bool {
        self.low[0].is_zero() && self.low[1].is_zero() && self.low[2] == self.expected
    }

    pub fn render(&self) -> String {
        let ps: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        let lhs = if self.primes.len() == 3 { "2g" } else { "g" };
        let got = BiPoly::monomial(0, 0, self.low[0].clone())
            .add(&BiPoly::monomial(1, 0, self.low[1].clone()))
            .add(&BiPoly::monomial(2, 0, self.low[2].clone()));
        let want = BiPoly::monomial(2, 0, self.expected.clone());
        format!("{lhs}_({})(v,1) = {} mod v^3, expected {}", ps.join(","), got, want)
    }
}

/// `g(v, 1) mod v^3` against the closed-form coefficient. Triples use the upper sign.
pub fn congruence_extract(primes: &[u64], sign: Sign) -> Result<Congruence> {
    let g = g_poly(primes, sign)?;
    let (low, expected) = match *primes {
        [p, p2] => (g.low_coefficients_at_w_one(2), expected_pair_coefficient(p, p2, sign)),
        [p, p2, p3] => {
            if sign != Sign::Upper {
                return Err(Error::Usage("the triple congruence is stated for the upper sign".into()));
            }
            let low = g.scale(&rat(2, 1)).low_coefficients_at_w_one(2);
            (low, expected_triple_coefficient(p, p2, p3))
        }
        _ => unreachable!("g_poly checked the arity"),
    };
    Ok(Congruence { primes: primes.to_vec(), low, expected })
}

/// The corner endomorphism `P(v, w) -> P(f_p(v,w), f_p(w,v))`.
pub fn corner_apply(poly: &BiPoly, p: u64, sign: Sign) -> BiPoly {
    let f = fp_poly(p, sign);
    poly.substitute(&f, &f.swap())
}

/// `[phi_a, phi_b](v)` on the corner, composed one map at a time.
pub fn corner_commutator(a: u64, b: u64, sign: Sign) -> BiPoly {
    let v = BiPoly::v();
    corner_apply(&corner_apply(&v, b, sign), a, sign).sub(&corner_apply(&corner_apply(&v, a, sign), b, sign))
}

/// `p'p'' phi_{pp'p''}(v) = phi_p([phi_p', phi_p''](v)) - [phi_p', phi_p''](phi_p(v))`
/// on the corner, composed one map at a time.
pub fn corner_three_commutator(p: u64, p2: u64, p3: u64, sign: Sign) -> BiPoly {
    let inner = corner_commutator(p2, p3, sign);
    let outer = corner_apply(&inner, p, sign);
    let fp = fp_poly(p, sign);
    let a = corner_apply(&corner_apply(&fp, p3, sign), p2, sign);
    let b = corner_apply(&corner_apply(&fp, p2, sign), p3, sign);
    outer.sub(&a.sub(&b))
}

/// `F_p(B)_ij = f_p(B_ij, B_ji)` over the `r^2` corner variables.
pub fn corner_f(p: u64, sign: Sign, r: usize, order: u32) -> Result<SeriesMatrix<CycRing>> {
    let ring = CycRing::rational();
    let f = fp_poly(p, sign);
    let mut entries = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            let bij = Series::var(&ring, r * r, order, i * r + j)?;
            let bji = Series::var(&ring, r * r, order, j * r + i)?;
            entries.push(f.to_series(&bij, &bji)?);
        }
    }
    SeriesMatrix::from_entries(r, entries)
}

pub fn corner_var_names(r: usize) -> Vec<String> {
    (1..=r).flat_map(|i| (1..=r).map(move |j| format!("B_{i}{j}"))).collect()
}

fn corner_images(n: usize, order: u32) -> Result<Vec<Series<CycRing>>> {
    let ring = CycRing::rational();
    let r = n / 2;
    let mut images = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            images.push(if i < r && j >= r {
                Series::var(&ring, r * r, order, i * r + (j - r))?
            } else {
                Series::zero(&ring, r * r, order)?
            });
        }
    }
    Ok(images)
}

fn corner_block(f: &SeriesMatrix<CycRing>, n: usize) -> Result<SeriesMatrix<CycRing>> {
    let r = n / 2;
    let mut m = SeriesMatrix::zero(f.ring(), n, f.arity(), f.order())?;
    for i in 0..r {
        for j in 0..r {
            m.set(i, j + r, f.get(i, j).clone())?;
        }
    }
    Ok(m)
}

fn check_corner_form(q: &FormMatrix) -> Result<()> {
    if !q.n().is_multiple_of(2) || q.config().n() != 1 {
        return Err(Error::Usage("the corner reduction needs a rational form with n = 2r".into()));
    }
    Ok(())
}

/// Substitutes `T -> [[0, B], [0, 0]]` into the lift and compares with `[[0, F_p(B)], [0, 0]]`.
pub fn corner_consistency(q: &FormMatrix, lift: &FrobLift<CycRing>) -> Result<Verdict> {
    check_corner_form(q)?;
    let n = q.n();
    let order = lift.order();
    let got = lift.phi0().substitute(&corner_images(n, order)?)?;
    let want = corner_block(&corner_f(lift.p(), Sign::from_form_sign(q.sign()), n / 2, order)?, n)?;
    Ok(describe(&got, &want, &corner_var_names(n / 2)))
}

/// Evaluates `Phi_p` directly at `1 + [[0, B], [0, 0]]`, at order `p` where
/// `F_p(B)` is exact.
pub fn corner_direct_check(q: &FormMatrix, p: u64) -> Result<Verdict> {
    check_corner_form(q)?;
    q.config().check_prime(p)?;
    let n = q.n();
    let order = p as u32;
    let ring = q.ring();
    let mut x = SeriesMatrix::identity(&ring, n, (n / 2) * (n / 2), order)?;
    for (k, img) in corner_images(n, order)?.into_iter().enumerate() {
        if !img.is_zero() {
            x.set(k / n, k % n, img)?;
        }
    }
    let phi = phi_at(&x, q.entries(), &q.frobenius(p)?, p, SqrtMode::Strict)?;
    let got = phi.sub(&SeriesMatrix::identity(&ring, n, x.arity(), order)?)?;
    let want = corner_block(&corner_f(p, Sign::from_form_sign(q.sign()), n / 2, order)?, n)?;
    Ok(describe(&got, &want, &corner_var_names(n / 2)))
}

fn describe(got: &SeriesMatrix<CycRing>, want: &SeriesMatrix<CycRing>, names: &[String]) -> Verdict {
    match got.first_difference(want) {
        None => Verdict::pass(),
        Some((i, j, m, a, b)) => Verdict::fail(format!(
            "entry ({}, {}), monomial {}: {} vs expected {}",
            i + 1,
            j + 1,
            m.render(names),
            a,
            b
        )),
    }
}

/// `Sigma_p(a) = a^(p) ((a^-1)^(p) a^(p))^(-1/2)`.
pub fn sigma_at<R: Ring>(a: &SeriesMatrix<R>, p: u64) -> Result<SeriesMatrix<R>> {
    let ap = a.entrywise_power_p(p);
    let w = a.mat_inverse()?.entrywise_power_p(p).mat_mul(&ap)?;
    let u = w.sub(&SeriesMatrix::identity(a.ring(), a.n(), a.arity(), a.order())?)?;
    ap.mat_mul(&u.binomial_power(&rat(-1, 2))?)
}

/// `Sigma_p(1 + A)` for the generic `r x r` matrix `A`.
pub fn sigma_so(p: u64, r: usize, order: u32) -> Result<SeriesMatrix<CycRing>> {
    crate::ring::check_odd_prime(p)?;
    sigma_at(&SeriesMatrix::generic(&CycRing::rational(), r, order)?, p)
}

pub fn so_var_names(r: usize) -> Vec<String> {
    (1..=r).flat_map(|i| (1..=r).map(move |j| format!("a_{i}{j}"))).collect()
}

/// The lift `a -> Sigma_p(a)` on the coordinates `A = a - 1`.
pub fn so_lift(p: u64, r: usize, order: u32) -> Result<FrobLift<CycRing>> {
    let s = sigma_so(p, r, order)?;
    let phi0 = s.sub(&SeriesMatrix::identity(s.ring(), r, r * r, order)?)?;
    FrobLift::new(p, phi0, false)
}

/// `(1/pp') [phi_p, phi_p']` for the lifts restricted to `SO_{2r}`.
pub fn so_curvature(p: u64, p2: u64, r: usize, order: u32) -> Result<CurvatureReport> {
    if p == p2 {
        return Err(Error::Usage(format!("the two primes must differ (got {p} twice)")));
    }
    curvature_of_lifts(CurvatureKind::So, &so_lift(p, r, order)?, &so_lift(p2, r, order)?, so_var_names(r))
}

/// For `r = 1`: `Sigma_p(a) = a^p`, and the lifts at `p` and `p2` commute.
pub fn so_torus_check(p: u64, p2: u64, order: u32) -> Result<Verdict> {
    let ring = CycRing::rational();
    let s = sigma_so(p, 1, order)?;
    let a = Series::var(&ring, 1, order, 0)?.add_constant(&ring.one());
    let want = a.pow(p);
    if let Some((m, x, y)) = s.get(0, 0).first_difference(&want) {
        return Ok(Verdict::fail(format!(
            "Sigma_{p}(a) differs from a^{p} at {}: {x} vs {y}",
            m.render(&so_var_names(1))
        )));
    }
    let c = commutator_on_generators(&so_lift(p, 1, order)?, &so_lift(p2, 1, order)?)?;
    Ok(if c.is_zero() { Verdict::pass() } else { Verdict::fail("the torus lifts do not commute") })
}

fn unipotent_setup(order: u32) -> Result<(CycRing, [Series<CycRing>; 3], SeriesMatrix<CycRing>)> {
    let ring = CycRing::rational();
    let u = Series::var(&ring, 3, order, 0)?;
    let v = Series::var(&ring, 3, order, 1)?;
    let w = Series::var(&ring, 3, order, 2)?;
    let mut a = SeriesMatrix::identity(&ring, 3, 3, order)?;
    a.set(0, 1, u.clone())?;
    a.set(0, 2, v.clone())?;
    a.set(1, 2, w.clone())?;
    Ok((ring, [u, v, w], a))
}

/// The images of `u, v, w` under `Sigma_p` on `[[1, u, v], [0, 1, w], [0, 0, 1]]`,
/// after checking that the rest of the matrix stays unipotent.
pub fn sigma_unipotent(p: u64, order: u32) -> Result<[Series<CycRing>; 3]> {
    let (ring, _, a) = unipotent_setup(order)?;
    let s = sigma_at(&a, p)?;
    for (i, j) in [(0, 0), (1, 1), (2, 2), (1, 0), (2, 0), (2, 1)] {
        let want = if i == j { Series::one(&ring, 3, order)? } else { Series::zero(&ring, 3, order)? };
        if !s.get(i, j).equals(&want) {
            return Err(Error::Inconsistent(format!(
                "Sigma_{p} leaves the unipotent group at entry ({}, {})",
                i + 1,
                j + 1
            )));
        }
    }
    Ok([s.get(0, 1).clone(), s.get(0, 2).clone(), s.get(1, 2).clone()])
}

pub fn unipotent_var_names() -> Vec<String> {
    var_names(&["u", "v", "w"])
}

/// Checks `Sigma_p` on the unipotent `3 x 3` matrix against
/// `[[1, u^p, f_p(v, uw - v)], [0, 1, w^p], [0, 0, 1]]`.
pub fn unipotent_check(p: u64) -> Result<Verdict> {
    let order = 2 * p as u32 + 2;
    let (_, [u, v, w], _) = unipotent_setup(order)?;
    let got = sigma_unipotent(p, order)?;
    let x = u.mul_trunc(&w)?.sub(&v)?;
    let want = [u.pow(p), fp_poly(p, Sign::Upper).to_series(&v, &x)?, w.pow(p)];
    Ok(compare_triples(&got, &want))
}

fn compare_triples(got: &[Series<CycRing>; 3], want: &[Series<CycRing>; 3]) -> Verdict {
    let names = unipotent_var_names();
    for (k, (g, e)) in got.iter().zip(want).enumerate() {
        if let Some((m, a, b)) = g.first_difference(e) {
            return Verdict::fail(format!("image of {}, monomial {}: {a} vs expected {b}", names[k], m.render(&names)));
        }
    }
    Verdict::pass()
}

/// `phi_p(phi_p'(v))` on the unipotent coordinates, composed from the
/// engine images; checked against `f_{pp'}(v, uw - v)`. Returns the
/// verdict and the commutator `[phi_p, phi_p'](v)`.
pub fn unipotent_composition(p: u64, p2: u64) -> Result<(Verdict, Series<CycRing>)> {
    let order = 2 * (p * p2) as u32;
    let (_, [u, v, w], _) = unipotent_setup(order)?;
    let ip = sigma_unipotent(p, order)?;
    let ip2 = sigma_unipotent(p2, order)?;
    let pp2 = ip2[1].substitute(&ip)?;
    let p2p = ip[1].substitute(&ip2)?;
    let x = u.mul_trunc(&w)?.sub(&v)?;
    let want = compose_fp(&[p, p2], Sign::Upper)?.to_series(&v, &x)?;
    let verdict = match pp2.first_difference(&want) {
        None => Verdict::pass(),
        Some((m, a, b)) => Verdict::fail(format!("monomial {}: {a} vs expected {b}", m.render(&unipotent_var_names()))),
    };
    let comm = pp2.sub(&p2p)?;
    let g = g_poly(&[p, p2], Sign::Upper)?.to_series(&v, &x)?;
    if !comm.equals(&g) {
        return Ok((Verdict::fail("the commutator differs from g_{pp'}(v, uw - v)"), comm));
    }
    Ok((verdict, comm))
}

fn det2(x: &SeriesMatrix<CycRing>) -> Result<Series<CycRing>> {
    x.get(0, 0).mul_trunc(x.get(1, 1))?.sub(&x.get(0, 1).mul_trunc(x.get(1, 0))?)
}

/// `s^e` for a series with constant term 1.
fn unit_power(s: &Series<CycRing>, e: &Rational) -> Result<Series<CycRing>> {
    let ring = s.ring().clone();
    let m = SeriesMatrix::from_entries(1, vec![s.add_constant(&ring.from_int(-1))])?;
    Ok(m.binomial_power(e)?.get(0, 0).clone())
}

/// `lambda_p(x) = (det(x^(p)) / det(x)^p)^(-1/2)` at `x = 1 + T`, `n = 2`.
pub fn lambda_closed_form(p: u64, order: u32) -> Result<Series<CycRing>> {
    crate::ring::check_odd_prime(p)?;
    let x = SeriesMatrix::generic(&CycRing::rational(), 2, order)?;
    let ratio = det2(&x.entrywise_power_p(p))?
        .mul_trunc(&unit_power(&det2(&x)?, &Rational::from_integer(BigInt::from(-(p as i64))))?)?;
    unit_power(&ratio, &rat(-1, 2))
}

/// The lift `x -> lambda_p(x) x^(p)`.
pub fn lambda_lift(p: u64, order: u32) -> Result<FrobLift<CycRing>> {
    let ring = CycRing::rational();
    let lam = lambda_closed_form(p, order)?;
    let x = SeriesMatrix::generic(&ring, 2, order)?;
    let entries = x.entrywise_power_p(p).entries().iter().map(|e| lam.mul_trunc(e)).collect::<Result<Vec<_>>>()?;
    let phi0 = SeriesMatrix::from_entries(2, entries)?.sub(&SeriesMatrix::identity(&ring, 2, 4, order)?)?;
    FrobLift::new(p, phi0, true)
}

/// Compares the engine lift for the split symplectic form with `lambda_p x^(p)`.
pub fn lambda_matches_chern(p: u64, order: u32) -> Result<Verdict> {
    let q = FormMatrix::split(crate::chern::SplitKind::Symplectic, 2)?;
    let engine = chern_lift(&q, p, order)?;
    let closed = lambda_lift(p, order)?;
    Ok(describe(engine.phi0(), closed.phi0(), &matrix_var_names(2)))
}

/// The `n = 2` commutation argument: `lambda_p'(x^(p)) lambda_p(x)^p'` equals
/// `(det(x^(pp')) / det(x)^(pp'))^(-1/2)`, and the closed-form lifts commute.
pub fn n2_symplectic_commutation(p: u64, p2: u64, order: u32) -> Result<Verdict> {
    let ring = CycRing::rational();
    let x = SeriesMatrix::generic(&ring, 2, order)?;
    let xp_minus_1 = x.entrywise_power_p(p).sub(&SeriesMatrix::identity(&ring, 2, 4, order)?)?;
    let cocycle = lambda_closed_form(p2, order)?
        .substitute(xp_minus_1.entries())?
        .mul_trunc(&lambda_closed_form(p, order)?.pow(p2))?;
    let pp2 = p * p2;
    let direct = unit_power(
        &det2(&x.entrywise_power_p(pp2))?
            .mul_trunc(&unit_power(&det2(&x)?, &Rational::from_integer(BigInt::from(-(pp2 as i64))))?)?,
        &rat(-1, 2),
    )?;
    if let Some((m, a, b)) = cocycle.first_difference(&direct) {
        return Ok(Verdict::fail(format!("cocycle identity fails at {}: {a} vs {b}", m.render(&matrix_var_names(2)))));
    }
    let c = commutator_on_generators(&lambda_lift(p, order)?, &lambda_lift(p2, order)?)?;
    Ok(if c.is_zero() {
        Verdict::pass()
    } else {
        describe(&c, &SeriesMatrix::zero(&ring, 2, 4, order)?, &matrix_var_names(2))
    })
}
