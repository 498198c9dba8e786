//! Square matrices whose entries are truncated power series.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use rayon::prelude::*;

use crate::ring::{binomial_rational, Rational, Ring};
use crate::series::{Monomial, Series};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SeriesMatrix<R: Ring> {
    n: usize,
    entries: Vec<Series<R>>,
}

impl<R: Ring> SeriesMatrix<R>
where
    R::Elem: Send + Sync,
{
    pub fn from_entries(n: usize, entries: Vec<Series<R>>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::ShapeMismatch(format!("{} entries for n = {n}", entries.len())));
        }
        let first = &entries[0];
        for e in &entries[1..] {
            if e.arity() != first.arity() {
                return Err(Error::ShapeMismatch("entries differ in arity".into()));
            }
            if e.order() != first.order() {
                return Err(Error::OrderMismatch(first.order(), e.order()));
            }
        }
        Ok(SeriesMatrix { n, entries })
    }

    pub fn zero(ring: &R, n: usize, arity: usize, order: u32) -> Result<Self> {
        let z = Series::zero(ring, arity, order)?;
        Self::from_entries(n, vec![z; n * n])
    }

    pub fn identity(ring: &R, n: usize, arity: usize, order: u32) -> Result<Self> {
        let mut m = Self::zero(ring, n, arity, order)?;
        for i in 0..n {
            m.entries[i * n + i] = Series::one(ring, arity, order)?;
        }
        Ok(m)
    }

    /// A matrix of constants, given row-major.
    pub fn constant(ring: &R, arity: usize, order: u32, rows: &[Vec<R::Elem>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::ShapeMismatch("constant matrix is not square".into()));
            }
            for c in row {
                entries.push(Series::constant(ring, arity, order, c.clone())?);
            }
        }
        Self::from_entries(n, entries)
    }

    /// The generic matrix `1 + T` in `n^2` variables `T_ij` (row-major).
    pub fn generic(ring: &R, n: usize, order: u32) -> Result<Self> {
        let arity = n * n;
        let mut m = Self::identity(ring, n, arity, order)?;
        for k in 0..arity {
            let t = Series::var(ring, arity, order, k)?;
            m.entries[k] = m.entries[k].add(&t)?;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &R {
        self.entries[0].ring()
    }

    pub fn arity(&self) -> usize {
        self.entries[0].arity()
    }

    pub fn order(&self) -> u32 {
        self.entries[0].order()
    }

    pub fn get(&self, i: usize, j: usize) -> &Series<R> {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Series<R>) -> Result<()> {
        let cur = self.get(i, j);
        if s.arity() != cur.arity() || s.order() != cur.order() {
            return Err(Error::ShapeMismatch("entry shape differs from matrix".into()));
        }
        self.entries[i * self.n + j] = s;
        Ok(())
    }

    pub fn entries(&self) -> &[Series<R>] {
        &self.entries
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!("matrix sizes {} and {}", self.n, other.n)));
        }
        if self.arity() != other.arity() {
            return Err(Error::ShapeMismatch(format!("arity {} vs {}", self.arity(), other.arity())));
        }
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(&Series<R>, &Series<R>) -> Result<Series<R>> + Sync + Send) -> Result<Self> {
        self.same_shape(other)?;
        let entries =
            self.entries.par_iter().zip(other.entries.par_iter()).map(|(a, b)| f(a, b)).collect::<Result<Vec<_>>>()?;
        Ok(SeriesMatrix { n: self.n, entries })
    }

    fn map(&self, f: impl Fn(&Series<R>) -> Series<R> + Sync + Send) -> Self {
        SeriesMatrix { n: self.n, entries: self.entries.par_iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entries[(k % n) * n + k / n].clone()).collect();
        SeriesMatrix { n, entries }
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let n = self.n;
        let entries = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let mut acc = Series::zero(self.ring(), self.arity(), self.order())?;
                for l in 0..n {
                    let (a, b) = (self.get(i, l), other.get(l, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul_trunc(b)?)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SeriesMatrix { n, entries })
    }

    /// Raises every entry to the p-th power.
    pub fn entrywise_power_p(&self, p: u64) -> Self {
        self.map(|a| a.pow(p))
    }

    /// Applies the coefficient Frobenius to every entry.
    pub fn galois_map(&self, p: u64) -> Self {
        self.map(|a| a.galois_map(p))
    }

    pub fn substitute(&self, images: &[Series<R>]) -> Result<Self> {
        let entries = self.entries.par_iter().map(|a| a.substitute(images)).collect::<Result<Vec<_>>>()?;
        Ok(SeriesMatrix { n: self.n, entries })
    }

    pub fn truncate(&self, order: u32) -> Result<Self> {
        let entries = self.entries.iter().map(|a| a.truncate(order)).collect::<Result<Vec<_>>>()?;
        Ok(SeriesMatrix { n: self.n, entries })
    }

    pub fn constant_terms(&self) -> Vec<Vec<R::Elem>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).constant_term()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Series::is_zero)
    }

    /// First entry and monomial (graded-lex within row-major order) where the
    /// matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize, Monomial, R::Elem, R::Elem)> {
        if self.n != other.n {
            return None;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if let Some((m, a, b)) = self.get(i, j).first_difference(other.get(i, j)) {
                    return Some((i, j, m, a, b));
                }
            }
        }
        None
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a.equals(b))
    }

    /// Inverse via `A = A0 (1 + E)`, `A^-1 = (sum_i (-E)^i) A0^-1`.
    pub fn mat_inverse(&self) -> Result<Self> {
        let ring = self.ring().clone();
        let (arity, order) = (self.arity(), self.order());
        let a0_inv = constant_inverse(&ring, &self.constant_terms()).ok_or(Error::Singular)?;
        let a0_inv = Self::constant(&ring, arity, order, &a0_inv)?;
        let a0 = Self::constant(&ring, arity, order, &self.constant_terms())?;
        let e = a0_inv.mat_mul(&self.sub(&a0)?)?;
        let id = Self::identity(&ring, self.n, arity, order)?;
        let mut s = id.clone();
        for _ in 0..order {
            s = id.sub(&e.mat_mul(&s)?)?;
        }
        s.mat_mul(&a0_inv)
    }

    /// `(1 + U)^s` by the binomial series; `U` must have zero constant terms,
    /// which makes the sum finite at the truncation order.
    pub fn binomial_power(&self, s: &Rational) -> Result<Self> {
        if self.entries.iter().any(|e| !e.has_zero_constant()) {
            return Err(Error::NonzeroConstantTerm);
        }
        self.binomial_sum(s, self.order() as usize + 1)
    }

    /// `sum_{i < terms} C(s, i) U^i` without the constant-term check, for
    /// arguments that converge p-adically.
    pub fn binomial_power_convergent(&self, s: &Rational, terms: usize) -> Result<Self> {
        self.binomial_sum(s, terms)
    }

    fn binomial_sum(&self, s: &Rational, terms: usize) -> Result<Self> {
        let ring = self.ring().clone();
        let id = Self::identity(&ring, self.n, self.arity(), self.order())?;
        if terms == 0 {
            return Self::zero(&ring, self.n, self.arity(), self.order());
        }
        // Horner: S = C(s,0) + U (C(s,1) + U (C(s,2) + ...))
        let mut acc = id.scale(&ring.from_rational(&binomial(s, terms - 1)));
        for i in (0..terms - 1).rev() {
            acc = id.scale(&ring.from_rational(&binomial(s, i))).add(&self.mat_mul(&acc)?)?;
        }
        Ok(acc)
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                out.push_str(&format!("[{},{}] {}\n", i + 1, j + 1, self.get(i, j).render(names)));
            }
        }
        out
    }
}

type BinomialMemo = RwLock<HashMap<(Rational, usize), Rational>>;

/// Memoized generalized binomial coefficient `C(s, i)`.
pub fn binomial(s: &Rational, i: usize) -> Rational {
    static MEMO: OnceLock<BinomialMemo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let key = (s.clone(), i);
    if let Some(c) = memo.read().expect("memo lock").get(&key) {
        return c.clone();
    }
    let c = binomial_rational(s, i);
    memo.write().expect("memo lock").insert(key, c.clone());
    c
}

/// Gauss-Jordan inverse of a constant matrix, pivoting on the lowest
/// [`Ring::pivot_rank`].
pub fn constant_inverse<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> Option<Vec<Vec<R::Elem>>> {
    let n = m.len();
    let mut a: Vec<Vec<R::Elem>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { ring.one() } else { ring.zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).filter(|&r| !ring.is_zero(&a[r][c])).min_by_key(|&r| ring.pivot_rank(&a[r][c]))?;
        a.swap(c, piv);
        let inv = ring.inv(&a[c][c])?;
        for x in a[c].iter_mut() {
            *x = ring.mul(x, &inv);
        }
        for r in 0..n {
            if r != c && !ring.is_zero(&a[r][c]) {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let t = ring.mul(&f, &a[c][k]);
                    a[r][k] = ring.sub(&a[r][k], &t);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::CycRing;
    use proptest::prelude::*;

    fn ring() -> CycRing {
        CycRing::rational()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn consts(rows: &[&[i64]], arity: usize, order: u32) -> SeriesMatrix<CycRing> {
        let r = ring();
        let rows: Vec<Vec<_>> = rows.iter().map(|row| row.iter().map(|&c| r.from_int(c)).collect()).collect();
        SeriesMatrix::constant(&r, arity, order, &rows).unwrap()
    }

    #[test]
    fn products() {
        let x = SeriesMatrix::generic(&ring(), 2, 3).unwrap();
        let id = SeriesMatrix::identity(&ring(), 2, 4, 3).unwrap();
        assert!(id.mat_mul(&x).unwrap().equals(&x));
        let xi = x.mat_inverse().unwrap();
        assert!(x.mat_mul(&xi).unwrap().equals(&id));
        let a = consts(&[&[1, 2], &[3, 4]], 1, 1);
        let b = consts(&[&[0, 1], &[1, 0]], 1, 1);
        assert!(a.mat_mul(&b).unwrap().equals(&consts(&[&[2, 1], &[4, 3]], 1, 1)));
    }

    #[test]
    fn entrywise_powers() {
        let x = SeriesMatrix::generic(&ring(), 2, 1).unwrap();
        let xp = x.entrywise_power_p(3);
        let expect = Series::var(&ring(), 4, 1, 0).unwrap().scale_int(3).add_constant(&ring().one());
        assert!(xp.get(0, 0).equals(&expect));
        let x = SeriesMatrix::generic(&ring(), 2, 3).unwrap();
        let t12 = Series::var(&ring(), 4, 3, 1).unwrap();
        assert!(x.entrywise_power_p(3).get(0, 1).equals(&t12.pow(3)));
        let qm = consts(&[&[0, 1], &[-1, 0]], 1, 2);
        assert!(qm.entrywise_power_p(3).equals(&qm));
    }

    #[test]
    fn inverses() {
        let id = SeriesMatrix::identity(&ring(), 3, 1, 2).unwrap();
        assert!(id.mat_inverse().unwrap().equals(&id));
        let j = consts(&[&[0, 1], &[-1, 0]], 1, 2);
        assert!(j.mat_inverse().unwrap().equals(&consts(&[&[0, -1], &[1, 0]], 1, 2)));
        let x = SeriesMatrix::generic(&ring(), 1, 2).unwrap();
        let t = Series::var(&ring(), 1, 2, 0).unwrap();
        let expect = t.pow(2).sub(&t).unwrap().add_constant(&ring().one());
        assert!(x.mat_inverse().unwrap().get(0, 0).equals(&expect));
        assert_eq!(consts(&[&[1, 2], &[2, 4]], 1, 2).mat_inverse().unwrap_err(), Error::Singular);
    }

    #[test]
    fn binomial_examples() {
        let z = SeriesMatrix::zero(&ring(), 2, 1, 3).unwrap();
        let id = SeriesMatrix::identity(&ring(), 2, 1, 3).unwrap();
        assert!(z.binomial_power(&q(1, 2)).unwrap().equals(&id));
        assert_eq!(binomial(&q(1, 2), 1), q(1, 2));
        assert_eq!(binomial(&q(1, 2), 2), q(-1, 8));
        assert_eq!(binomial(&q(1, 2), 3), q(1, 16));
        let t = SeriesMatrix::generic(&ring(), 1, 2)
            .unwrap()
            .sub(&SeriesMatrix::identity(&ring(), 1, 1, 2).unwrap())
            .unwrap();
        let r = t.binomial_power(&q(1, 2)).unwrap();
        let tv = Series::var(&ring(), 1, 2, 0).unwrap();
        let expect = tv
            .scale(&ring().from_rational(&q(1, 2)))
            .sub(&tv.pow(2).scale(&ring().from_rational(&q(1, 8))))
            .unwrap()
            .add_constant(&ring().one());
        assert!(r.get(0, 0).equals(&expect));
        assert_eq!(id.binomial_power(&q(1, 2)).unwrap_err(), Error::NonzeroConstantTerm);
    }

    fn arb_matrix(n: usize, arity: usize, order: u32, constant: bool) -> impl Strategy<Value = SeriesMatrix<CycRing>> {
        let entry = prop::collection::vec((prop::collection::vec(0u8..2, arity), -3i64..4), 0..4);
        prop::collection::vec(entry, n * n).prop_map(move |es| {
            let r = ring();
            let entries = es
                .into_iter()
                .map(|ts| {
                    let terms = ts
                        .into_iter()
                        .filter(|(e, _)| constant || e.iter().any(|&x| x > 0))
                        .map(|(e, c)| (Monomial::from_exponents(&e).unwrap(), r.from_int(c)))
                        .collect();
                    Series::from_terms(&r, arity, order, terms).unwrap()
                })
                .collect();
            SeriesMatrix::from_entries(n, entries).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn square_root_squares_back(u in arb_matrix(2, 3, 3, false)) {
            let id = SeriesMatrix::identity(&ring(), 2, 3, 3).unwrap();
            let r = u.binomial_power(&q(1, 2)).unwrap();
            prop_assert!(r.mat_mul(&r).unwrap().equals(&id.add(&u).unwrap()));
            let ri = u.binomial_power(&q(-1, 2)).unwrap();
            prop_assert!(r.mat_mul(&ri).unwrap().equals(&id));
        }

        #[test]
        fn inverse_both_sides(u in arb_matrix(2, 3, 3, false)) {
            let id = SeriesMatrix::identity(&ring(), 2, 3, 3).unwrap();
            let a = consts(&[&[2, 1], &[1, 1]], 3, 3).add(&u).unwrap();
            let ai = a.mat_inverse().unwrap();
            prop_assert!(a.mat_mul(&ai).unwrap().equals(&id));
            prop_assert!(ai.mat_mul(&a).unwrap().equals(&id));
        }

        #[test]
        fn entrywise_power_respects_diagonal_factors(a in arb_matrix(2, 2, 3, true), d1 in arb_matrix(1, 2, 3, true), d2 in arb_matrix(1, 2, 3, true)) {
            let mut d = SeriesMatrix::zero(&ring(), 2, 2, 3).unwrap();
            d.set(0, 0, d1.get(0, 0).clone()).unwrap();
            d.set(1, 1, d2.get(0, 0).clone()).unwrap();
            let lhs = a.mat_mul(&d).unwrap().entrywise_power_p(3);
            let rhs = a.entrywise_power_p(3).mat_mul(&d.entrywise_power_p(3)).unwrap();
            prop_assert!(lhs.equals(&rhs));
        }
    }
}
