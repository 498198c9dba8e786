//! Commutators of Frobenius lifts and the curvature reports built from them.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::chern::{chern_lift, trivial_lift, FormMatrix, FrobLift, Verdict};
use crate::matseries::SeriesMatrix;
use crate::ring::{Rational, Ring};
use crate::scalars::{CycRing, CycScalar, RingConfig};
use crate::series::{matrix_var_names, Monomial, Series};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureKind {
    /// `(1/pp') [phi_p, phi_p']`
    Curvature,
    /// `(1/p'p'') [phi_p, [phi_p', phi_p'']]`
    Three,
    /// Commutator with the trivial lift `x -> x^(p')`.
    Mixed,
    /// Curvature of the lifts restricted to `a -> diag(a, a^-t)`.
    So,
    /// Mixed curvature on the quotient ring of the unitary group `U_1`.
    Unitary,
}

impl CurvatureKind {
    pub fn name(self) -> &'static str {
        match self {
            CurvatureKind::Curvature => "curvature",
            CurvatureKind::Three => "three",
            CurvatureKind::Mixed => "mixed",
            CurvatureKind::So => "so",
            CurvatureKind::Unitary => "unitary",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "curvature" => CurvatureKind::Curvature,
            "three" => CurvatureKind::Three,
            "mixed" => CurvatureKind::Mixed,
            "so" => CurvatureKind::So,
            "unitary" => CurvatureKind::Unitary,
            _ => return None,
        })
    }
}

/// Curvature values on the generators, with the certified denominator.
#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub kind: CurvatureKind,
    pub primes: Vec<u64>,
    pub order: u32,
    pub var_names: Vec<String>,
    pub values: SeriesMatrix<CycRing>,
    /// The integer divided out after checking divisibility.
    pub divisor: u64,
}

impl CurvatureReport {
    pub fn n(&self) -> usize {
        self.values.n()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }

    pub fn leading_degree(&self) -> Option<u32> {
        self.values.entries().iter().filter_map(Series::leading_degree).min()
    }

    /// The first lowest-degree term, as `(i, j, monomial, coefficient)`.
    pub fn witness(&self) -> Option<(usize, usize, String, String)> {
        let d = self.leading_degree()?;
        let n = self.n();
        for (k, e) in self.values.entries().iter().enumerate() {
            if let Some((m, c)) = e.leading_term() {
                if m.degree() == d {
                    return Some((k / n + 1, k % n + 1, m.render(&self.var_names), c.to_string()));
                }
            }
        }
        None
    }

    pub fn to_json_value(&self) -> Value {
        let n = self.n();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut terms = Map::new();
                for (m, c) in self.values.get(i, j).terms() {
                    terms.insert(m.render(&self.var_names), json!(c.to_string()));
                }
                entries.push(json!({"i": i + 1, "j": j + 1, "terms": terms}));
            }
        }
        let mut v = json!({
            "kind": self.kind.name(),
            "n": n,
            "order": self.order,
            "leading_degree": self.leading_degree(),
            "entries": entries,
            "divisibility": "ok",
            "divisor": self.divisor,
            "variables": self.var_names,
        });
        for (key, p) in ["p", "p2", "p3"].iter().zip(&self.primes) {
            v[*key] = json!(p);
        }
        let config = self.values.ring().config();
        if config.n() != 1 || config.m() != 2 {
            v["M"] = json!(config.m());
            v["N"] = json!(config.n());
        }
        v
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Report(m.to_string());
        let v: Value = serde_json::from_str(text).map_err(|e| bad(&format!("invalid JSON: {e}")))?;
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .and_then(CurvatureKind::parse)
            .ok_or_else(|| bad("missing or unknown kind"))?;
        let field = |k: &str| v.get(k).and_then(Value::as_u64).ok_or_else(|| bad(&format!("missing field {k}")));
        let n = field("n")? as usize;
        let order = field("order")? as u32;
        let divisor = field("divisor")?;
        let primes = ["p", "p2", "p3"].iter().filter_map(|k| v.get(*k).and_then(Value::as_u64)).collect();
        let var_names: Vec<String> = v
            .get("variables")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing variables"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("variable names must be strings")))
            .collect::<Result<_>>()?;
        let m = v.get("M").and_then(Value::as_u64).unwrap_or(2);
        let nn = v.get("N").and_then(Value::as_u64).unwrap_or(1);
        let config = RingConfig::new(m, nn)?;
        let ring = CycRing::new(config.clone());
        let mut values = SeriesMatrix::zero(&ring, n, var_names.len(), order)?;
        for e in v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing entries"))? {
            let i = e.get("i").and_then(Value::as_u64).ok_or_else(|| bad("entry without i"))? as usize;
            let j = e.get("j").and_then(Value::as_u64).ok_or_else(|| bad("entry without j"))? as usize;
            if i == 0 || j == 0 || i > n || j > n {
                return Err(bad("entry index out of range"));
            }
            let mut terms = Vec::new();
            for (mono, c) in e.get("terms").and_then(Value::as_object).ok_or_else(|| bad("entry without terms"))? {
                let m = Monomial::parse(mono, &var_names).ok_or_else(|| bad(&format!("bad monomial {mono}")))?;
                let c = c.as_str().ok_or_else(|| bad("coefficients must be strings"))?;
                terms.push((m, CycScalar::parse(&config, c)?));
            }
            values.set(i - 1, j - 1, Series::from_terms(&ring, var_names.len(), order, terms)?)?;
        }
        Ok(CurvatureReport { kind, primes, order, var_names, values, divisor })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let primes: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        out.push_str(&format!(
            "kind: {}\nprimes: {}\nn: {}\norder: {}\ndivisor: {} (divisibility ok)\n",
            self.kind.name(),
            primes.join(", "),
            self.n(),
            self.order,
            self.divisor
        ));
        match self.leading_degree() {
            None => out.push_str("leading degree: none (zero modulo the truncation)\n"),
            Some(d) => {
                out.push_str(&format!("leading degree: {d}\n"));
                if let Some((i, j, m, c)) = self.witness() {
                    out.push_str(&format!("witness: entry ({i}, {j}), {m}: {c}\n"));
                }
            }
        }
        for i in 0..self.n() {
            for j in 0..self.n() {
                let e = self.values.get(i, j);
                if !e.is_zero() {
                    out.push_str(&format!("[{},{}] {}\n", i + 1, j + 1, e.render(&self.var_names)));
                }
            }
        }
        out
    }
}

impl fmt::Display for CurvatureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

/// `phi(f)`: the Galois action on coefficients followed by `T -> Phi0`.
pub fn apply_lift<R: Ring>(f: &Series<R>, lift: &FrobLift<R>) -> Result<Series<R>> {
    lift.apply(f)
}

/// Recomputes at `order + 2` and compares the truncation with `report`.
pub fn truncation_stable(report: &CurvatureReport, q: &FormMatrix) -> Result<Verdict> {
    let hi = report.order + 2;
    let p = &report.primes;
    let wide = match report.kind {
        CurvatureKind::Curvature => curvature2(q, p[0], p[1], hi)?,
        CurvatureKind::Three => curvature3(q, p[0], p[1], p[2], hi)?,
        CurvatureKind::Mixed => curvature11(q, p[0], p[1], hi)?,
        _ => return Err(Error::Usage("truncation stability is checked for form-based reports".into())),
    };
    let low = wide.values.truncate(report.order)?;
    Ok(match low.first_difference(&report.values) {
        None => Verdict::pass(),
        Some((i, j, m, a, b)) => Verdict::fail(format!(
            "entry ({}, {}), monomial {}: {} at order {} vs {}",
            i + 1,
            j + 1,
            m.render(&report.var_names),
            a,
            hi,
            b
        )),
    })
}

/// `phi_l1(phi_l2(T_ij)) - phi_l2(phi_l1(T_ij))` for every generator.
pub fn commutator_on_generators<R: Ring>(l1: &FrobLift<R>, l2: &FrobLift<R>) -> Result<SeriesMatrix<R>> {
    if l1.n() != l2.n() {
        return Err(Error::ShapeMismatch(format!("lifts on {}x{} and {}x{} matrices", l1.n(), l1.n(), l2.n(), l2.n())));
    }
    if l1.order() != l2.order() {
        return Err(Error::OrderMismatch(l1.order(), l2.order()));
    }
    let a = l1.apply_matrix(l2.phi0())?;
    let b = l2.apply_matrix(l1.phi0())?;
    a.sub(&b)
}

/// `[phi_a, phi_b]` applied to every entry of `m`.
pub fn commutator_applied<R: Ring>(a: &FrobLift<R>, b: &FrobLift<R>, m: &SeriesMatrix<R>) -> Result<SeriesMatrix<R>> {
    let ab = a.apply_matrix(&b.apply_matrix(m)?)?;
    let ba = b.apply_matrix(&a.apply_matrix(m)?)?;
    ab.sub(&ba)
}

/// Divides every entry by `d`, certifying divisibility by each witness prime.
pub fn divide_certified<R: Ring>(
    m: &SeriesMatrix<R>,
    d: u64,
    witnesses: &[u64],
    names: &[String],
) -> Result<SeriesMatrix<R>> {
    let entries = m.entries().iter().map(|e| e.div_exact_int(d, witnesses, names)).collect::<Result<Vec<_>>>()?;
    SeriesMatrix::from_entries(m.n(), entries)
}

fn report(
    kind: CurvatureKind,
    primes: Vec<u64>,
    raw: SeriesMatrix<CycRing>,
    divisor: u64,
    names: Vec<String>,
) -> Result<CurvatureReport> {
    let mut witnesses = primes.clone();
    witnesses.dedup();
    let values = divide_certified(&raw, divisor, &witnesses, &names)?;
    Ok(CurvatureReport { kind, order: values.order(), primes, var_names: names, values, divisor })
}

fn distinct(p: u64, p2: u64) -> Result<()> {
    if p == p2 {
        return Err(Error::Usage(format!("the two primes must differ (got {p} twice)")));
    }
    Ok(())
}

/// Curvature of two lifts given directly, divided by `pp'`.
pub fn curvature_of_lifts(
    kind: CurvatureKind,
    l1: &FrobLift<CycRing>,
    l2: &FrobLift<CycRing>,
    names: Vec<String>,
) -> Result<CurvatureReport> {
    let (p, p2) = (l1.p(), l2.p());
    let divisor = if p == p2 { p } else { p * p2 };
    report(kind, vec![p, p2], commutator_on_generators(l1, l2)?, divisor, names)
}

/// `(1/pp') [phi_p, phi_p']` on the generators.
pub fn curvature2(q: &FormMatrix, p: u64, p2: u64, order: u32) -> Result<CurvatureReport> {
    distinct(p, p2)?;
    let l1 = chern_lift(q, p, order)?;
    let l2 = chern_lift(q, p2, order)?;
    curvature_of_lifts(CurvatureKind::Curvature, &l1, &l2, matrix_var_names(q.n()))
}

/// `(1/p'p'') [phi_p, [phi_p', phi_p'']]` on the generators.
pub fn curvature3(q: &FormMatrix, p: u64, p2: u64, p3: u64, order: u32) -> Result<CurvatureReport> {
    distinct(p2, p3)?;
    let lp = chern_lift(q, p, order)?;
    let l2 = chern_lift(q, p2, order)?;
    let l3 = chern_lift(q, p3, order)?;
    let inner = commutator_on_generators(&l2, &l3)?;
    let raw = lp.apply_matrix(&inner)?.sub(&commutator_applied(&l2, &l3, lp.phi0())?)?;
    report(CurvatureKind::Three, vec![p, p2, p3], raw, p2 * p3, matrix_var_names(q.n()))
}

/// Commutator of the lift at `p` with the trivial lift at `p'`, divided by
/// `pp'` (or by `p` when the primes agree).
pub fn curvature11(q: &FormMatrix, p: u64, p2: u64, order: u32) -> Result<CurvatureReport> {
    let l1 = chern_lift(q, p, order)?;
    let l2 = trivial_lift(q.config(), p2, q.n(), order)?;
    curvature_of_lifts(CurvatureKind::Mixed, &l1, &l2, matrix_var_names(q.n()))
}

/// The values truncated to total degree at most `mu`.
pub fn graded_piece(report: &CurvatureReport, mu: u32) -> Result<SeriesMatrix<CycRing>> {
    if mu > report.order {
        return Err(Error::DegreeOutOfRange { degree: mu, order: report.order });
    }
    let entries = report.values.entries().iter().map(|e| e.keep_degree_at_most(mu)).collect();
    SeriesMatrix::from_entries(report.n(), entries)
}

fn var(ring: &CycRing, n: usize, order: u32, i: usize, j: usize) -> Series<CycRing> {
    Series::var(ring, n * n, order, i * n + j).expect("index in range")
}

/// `Q_i = sum_k (T_{k,i} T_{k+r,i+r} + sign * T_{k+r,i} T_{k,i+r})`, 0-based `i < r`.
pub fn q_poly(ring: &CycRing, n: usize, order: u32, i: usize, sign: i32) -> Result<Series<CycRing>> {
    let r = n / 2;
    let mut acc = Series::zero(ring, n * n, order)?;
    for k in 0..r {
        let a = var(ring, n, order, k, i).mul_trunc(&var(ring, n, order, k + r, i + r))?;
        let b = var(ring, n, order, k + r, i).mul_trunc(&var(ring, n, order, k, i + r))?;
        acc = acc.add(&a)?.add(&b.scale_int(sign as i64))?;
    }
    Ok(acc)
}

/// Checks the degree-2 part of the mixed curvature of a split form with
/// `n = 2r`: diagonal entries equal `c (Q_i - T_ii T_{i+r,i+r})` with
/// `c = 1/2` for distinct primes and `p/2` otherwise; the rest vanishes.
pub fn mixed_congruence_check(q: &FormMatrix, report: &CurvatureReport) -> Result<Verdict> {
    let n = q.n();
    if !n.is_multiple_of(2) || report.kind != CurvatureKind::Mixed || report.order < 2 {
        return Err(Error::Usage("the mixed congruence needs n = 2r, kind mixed and order >= 2".into()));
    }
    let ring = q.ring();
    let order = report.order;
    let (p, p2) = (report.primes[0], report.primes[1]);
    let c = if p == p2 { Rational::new((p as i64).into(), 2.into()) } else { Rational::new(1.into(), 2.into()) };
    let r = n / 2;
    let piece = graded_piece(report, 2)?;
    for i in 0..n {
        for j in 0..n {
            let want = if i == j {
                let k = i % r;
                let t = var(&ring, n, order, k, k).mul_trunc(&var(&ring, n, order, k + r, k + r))?;
                q_poly(&ring, n, order, k, q.sign())?.sub(&t)?.scale(&ring.from_rational(&c))
            } else {
                Series::zero(&ring, n * n, order)?
            };
            if let Some((m, a, b)) = piece.get(i, j).first_difference(&want) {
                return Ok(Verdict::fail(format!(
                    "entry ({}, {}), monomial {}: {} vs expected {}",
                    i + 1,
                    j + 1,
                    m.render(&report.var_names),
                    a,
                    b
                )));
            }
        }
    }
    Ok(Verdict::pass())
}

/// `Phi_p(1+T)` modulo `(T)^3` for a split form with `n = 2r` equals
/// `diag(X, Y) / 2` with
/// `X_ii = 2 + 2p T_ii - p T_ii T_{i+r,i+r} + 2 C(p,2) T_ii^2 + p Q_i` and `Y`
/// the same with `T_ii` and `T_{i+r,i+r}` exchanged.
pub fn second_order_shape_check(q: &FormMatrix, lift: &FrobLift<CycRing>) -> Result<Verdict> {
    let n = q.n();
    if !n.is_multiple_of(2) || lift.order() < 2 {
        return Err(Error::Usage("the second-order shape needs n = 2r and order >= 2".into()));
    }
    let ring = q.ring();
    let order = lift.order();
    let p = lift.p() as i64;
    let r = n / 2;
    let names = matrix_var_names(n);
    let phi = lift.phi()?;
    let half = ring.from_rational(&Rational::new(1.into(), 2.into()));
    for i in 0..n {
        for j in 0..n {
            let got = phi.get(i, j).keep_degree_at_most(2);
            let want = if i == j {
                let k = i % r;
                let (own, other) = if i < r { (k, k + r) } else { (k + r, k) };
                let t_own = var(&ring, n, order, own, own);
                let t_other = var(&ring, n, order, other, other);
                let x = t_own
                    .scale_int(2 * p)
                    .sub(&t_own.mul_trunc(&t_other)?.scale_int(p))?
                    .add(&t_own.pow(2).scale_int(p * (p - 1)))?
                    .add(&q_poly(&ring, n, order, k, q.sign())?.scale_int(p))?
                    .add_constant(&ring.from_int(2));
                x.scale(&half)
            } else {
                Series::zero(&ring, n * n, order)?
            };
            if let Some((m, a, b)) = got.first_difference(&want) {
                return Ok(Verdict::fail(format!(
                    "entry ({}, {}), monomial {}: {} vs expected {}",
                    i + 1,
                    j + 1,
                    m.render(&names),
                    a,
                    b
                )));
            }
        }
    }
    Ok(Verdict::pass())
}

/// True when some off-diagonal entry of `Phi0` has a nonzero term of degree at most `d`.
pub fn off_diagonal_below(lift: &FrobLift<CycRing>, d: u32) -> Option<String> {
    let n = lift.n();
    let names = matrix_var_names(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                if let Some((m, c)) = lift.phi0().get(i, j).keep_degree_at_most(d).leading_term() {
                    return Some(format!("entry ({}, {}), monomial {}: {}", i + 1, j + 1, m.render(&names), c));
                }
            }
        }
    }
    None
}

/// Converts a rational-coefficient series matrix into a report over `Z[1/2]`.
pub fn report_from_values(
    kind: CurvatureKind,
    primes: Vec<u64>,
    values: SeriesMatrix<CycRing>,
    divisor: u64,
    var_names: Vec<String>,
) -> CurvatureReport {
    CurvatureReport { kind, primes, order: values.order(), var_names, values, divisor }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::SplitKind;

    fn split(kind: SplitKind, n: usize) -> FormMatrix {
        FormMatrix::split(kind, n).unwrap()
    }

    #[test]
    fn commutator_of_a_lift_with_itself_vanishes() {
        let q = split(SplitKind::SplitSymEven, 2);
        let l = chern_lift(&q, 3, 3).unwrap();
        assert!(commutator_on_generators(&l, &l).unwrap().is_zero());
    }

    #[test]
    fn trivial_lifts_commute() {
        let config = RingConfig::rational();
        let a = trivial_lift(&config, 3, 2, 4).unwrap();
        let b = trivial_lift(&config, 5, 2, 4).unwrap();
        assert!(commutator_on_generators(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn one_dimensional_curvature_vanishes() {
        for q in [split(SplitKind::SplitSymOdd, 1), FormMatrix::rational(1, &[&[-1]]).unwrap()] {
            assert!(curvature2(&q, 3, 5, 5).unwrap().is_zero());
        }
    }

    #[test]
    fn two_dimensional_symplectic_curvature_vanishes() {
        let q = split(SplitKind::Symplectic, 2);
        let rep = curvature2(&q, 3, 5, 5).unwrap();
        assert!(rep.is_zero());
        assert_eq!(rep.leading_degree(), None);
    }

    #[test]
    fn even_split_curvature_vanishes_to_second_order() {
        for kind in [SplitKind::SplitSymEven, SplitKind::Symplectic] {
            let rep = curvature2(&split(kind, 4), 3, 5, 2).unwrap();
            assert!(graded_piece(&rep, 2).unwrap().is_zero());
        }
    }

    #[test]
    fn curvature_is_antisymmetric() {
        let q = split(SplitKind::SplitSymEven, 2);
        let a = curvature2(&q, 3, 5, 4).unwrap();
        let b = curvature2(&q, 5, 3, 4).unwrap();
        assert!(a.values.equals(&b.values.neg()));
    }

    #[test]
    fn equal_primes_are_rejected() {
        let q = split(SplitKind::SplitSymEven, 2);
        assert!(matches!(curvature2(&q, 3, 3, 2), Err(Error::Usage(_))));
        assert!(matches!(curvature3(&q, 3, 5, 5, 2), Err(Error::Usage(_))));
    }

    #[test]
    fn mixed_curvature_second_order() {
        for kind in [SplitKind::SplitSymEven, SplitKind::Symplectic] {
            let q = split(kind, 2);
            for (p, p2) in [(3, 5), (3, 3)] {
                let rep = curvature11(&q, p, p2, 2).unwrap();
                assert!(mixed_congruence_check(&q, &rep).unwrap().holds, "{kind:?} {p} {p2}");
                assert!(graded_piece(&rep, 1).unwrap().is_zero());
                assert!(!graded_piece(&rep, 2).unwrap().is_zero());
                assert_eq!(rep.leading_degree(), Some(2));
            }
        }
    }

    #[test]
    fn second_order_shape() {
        for kind in [SplitKind::SplitSymEven, SplitKind::Symplectic] {
            for n in [2, 4] {
                let q = split(kind, n);
                let lift = chern_lift(&q, 3, 3).unwrap();
                assert!(second_order_shape_check(&q, &lift).unwrap().holds);
                assert!(off_diagonal_below(&lift, 2).is_none());
            }
        }
        // not diagonal modulo (T)^4
        let q = split(SplitKind::SplitSymEven, 2);
        assert!(off_diagonal_below(&chern_lift(&q, 3, 3).unwrap(), 3).is_some());
    }

    #[test]
    fn three_curvature_with_repeated_inner_prime_vanishes() {
        let q = split(SplitKind::SplitSymEven, 2);
        let l = chern_lift(&q, 5, 3).unwrap();
        assert!(commutator_on_generators(&l, &l).unwrap().is_zero());
        let rep = curvature3(&q, 3, 5, 7, 3).unwrap();
        assert_eq!(rep.divisor, 35);
    }

    #[test]
    fn graded_piece_range() {
        let rep = curvature2(&split(SplitKind::Symplectic, 2), 3, 5, 2).unwrap();
        assert!(graded_piece(&rep, 0).unwrap().is_zero());
        assert!(matches!(graded_piece(&rep, 3), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn truncation_stability() {
        let q = split(SplitKind::SplitSymEven, 2);
        let rep = curvature11(&q, 3, 5, 2).unwrap();
        assert!(truncation_stable(&rep, &q).unwrap().holds);
    }

    #[test]
    fn apply_lift_is_multiplicative() {
        let q = split(SplitKind::SplitSymEven, 2);
        let l = chern_lift(&q, 3, 3).unwrap();
        let ring = q.ring();
        let f = var(&ring, 2, 3, 0, 1).add_constant(&ring.from_int(2));
        let g = var(&ring, 2, 3, 1, 1).mul_trunc(&var(&ring, 2, 3, 0, 0)).unwrap();
        let lhs = apply_lift(&f.mul_trunc(&g).unwrap(), &l).unwrap();
        let rhs = apply_lift(&f, &l).unwrap().mul_trunc(&apply_lift(&g, &l).unwrap()).unwrap();
        assert!(lhs.equals(&rhs));
        assert!(apply_lift(&var(&ring, 2, 3, 0, 1), &l).unwrap().equals(l.phi0().get(0, 1)));
    }

    #[test]
    fn report_json_round_trip() {
        let q = split(SplitKind::SplitSymEven, 2);
        let rep = curvature11(&q, 3, 5, 2).unwrap();
        let text = rep.to_json();
        let back = CurvatureReport::from_json(&text).unwrap();
        assert!(back.values.equals(&rep.values));
        assert_eq!(back.to_json(), text);
        let zero = curvature2(&split(SplitKind::Symplectic, 2), 3, 5, 2).unwrap();
        assert!(zero.to_json().contains("\"leading_degree\": null"));
    }
}
