//! Frobenius lifts attached to a symmetric or antisymmetric form `q`.
//!
//! With `x = 1 + T` the lift is
//! `Phi_p(x) = x^(p) {(x^(p)t phi_p(q) x^(p))^-1 (x^t q x)^(p)}^(1/2)`, where
//! `a^(p)` raises every entry to the p-th power and `phi_p(q)` applies the
//! coefficient Frobenius to `q`.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::matseries::{constant_inverse, SeriesMatrix};
use crate::ring::{render_rational, Rational, Ring};
use crate::scalars::{CycRing, CycScalar, RingConfig};
use crate::series::{matrix_var_names, Series};
use crate::{Error, Result};

/// Outcome of a verification, with a human-readable witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { holds: true, witness: None }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Verdict { holds: false, witness: Some(witness.into()) }
    }

    /// Passes with an informational note.
    pub fn pass_with(note: impl Into<String>) -> Self {
        Verdict { holds: true, witness: Some(note.into()) }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.holds, &self.witness) {
            (true, None) => write!(f, "holds"),
            (true, Some(w)) => write!(f, "holds ({w})"),
            (false, Some(w)) => write!(f, "fails: {w}"),
            (false, None) => write!(f, "fails"),
        }
    }
}

/// The split forms: `[[0,1_r],[-1_r,0]]`, `[[0,1_r],[1_r,0]]` and
/// `[[1,0,0],[0,0,1_r],[0,1_r,0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    Symplectic,
    SplitSymEven,
    SplitSymOdd,
}

impl SplitKind {
    pub fn name(self) -> &'static str {
        match self {
            SplitKind::Symplectic => "symplectic",
            SplitKind::SplitSymEven => "split-sym-even",
            SplitKind::SplitSymOdd => "split-sym-odd",
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            SplitKind::Symplectic => -1,
            _ => 1,
        }
    }
}

/// A form `q` with `q^t = sign * q`, invertible over `Z[1/M, z]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormMatrix {
    n: usize,
    sign: i32,
    entries: Vec<Vec<CycScalar>>,
    config: Arc<RingConfig>,
}

impl FormMatrix {
    pub fn new(config: &Arc<RingConfig>, sign: i32, entries: Vec<Vec<CycScalar>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidForm("matrix must be square and nonempty".into()));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidForm(format!("sign must be +1 or -1, got {sign}")));
        }
        if entries.iter().flatten().any(|c| c.config() != config) {
            return Err(Error::ConfigMismatch);
        }
        for i in 0..n {
            for j in 0..n {
                let t = if sign == 1 { entries[j][i].clone() } else { entries[j][i].neg() };
                if t != entries[i][j] {
                    return Err(Error::InvalidForm(format!("q^t != {sign}*q at entry ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let ring = CycRing::new(config.clone());
        if constant_inverse(&ring, &entries).is_none() {
            return Err(Error::InvalidForm("q is singular".into()));
        }
        Ok(FormMatrix { n, sign, entries, config: config.clone() })
    }

    /// A form with rational entries over `Z[1/2]`.
    pub fn rational(sign: i32, rows: &[&[i64]]) -> Result<Self> {
        let config = RingConfig::rational();
        let entries = rows.iter().map(|r| r.iter().map(|&c| CycScalar::from_int(&config, c)).collect()).collect();
        Self::new(&config, sign, entries)
    }

    pub fn split(kind: SplitKind, n: usize) -> Result<Self> {
        Self::split_in(&RingConfig::rational(), kind, n)
    }

    pub fn split_in(config: &Arc<RingConfig>, kind: SplitKind, n: usize) -> Result<Self> {
        let even = n.is_multiple_of(2);
        let ok = match kind {
            SplitKind::Symplectic | SplitKind::SplitSymEven => even && n >= 2,
            SplitKind::SplitSymOdd => !even,
        };
        if !ok {
            let expected = if matches!(kind, SplitKind::SplitSymOdd) { "odd" } else { "even positive" };
            return Err(Error::ParityMismatch { kind: kind.name().into(), expected: expected.into(), n });
        }
        let mut m = vec![vec![0i64; n]; n];
        let (offset, r) = match kind {
            SplitKind::SplitSymOdd => {
                m[0][0] = 1;
                (1, n / 2)
            }
            _ => (0, n / 2),
        };
        for i in 0..r {
            m[offset + i][offset + r + i] = 1;
            m[offset + r + i][offset + i] = kind.sign() as i64;
        }
        let entries = m.iter().map(|r| r.iter().map(|&c| CycScalar::from_int(config, c)).collect()).collect();
        Self::new(config, kind.sign(), entries)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        Self::rational(1, &refs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sign(&self) -> i32 {
        self.sign
    }

    pub fn config(&self) -> &Arc<RingConfig> {
        &self.config
    }

    pub fn entries(&self) -> &[Vec<CycScalar>] {
        &self.entries
    }

    pub fn ring(&self) -> CycRing {
        CycRing::new(self.config.clone())
    }

    /// `phi_p(q)`: the coefficient Frobenius applied entrywise.
    pub fn frobenius(&self, p: u64) -> Result<Vec<Vec<CycScalar>>> {
        self.entries.iter().map(|r| r.iter().map(|c| c.frobenius(p)).collect()).collect()
    }

    /// True when every entry is zero or a root of unity.
    pub fn entries_roots_of_unity_or_zero(&self) -> bool {
        let one = CycScalar::one(&self.config);
        let order = 2 * self.config.n();
        self.entries.iter().flatten().all(|c| c.is_zero() || c.pow(order) == one)
    }

    /// Parses `{"n":2, "sign":-1, "entries":[["0","1"],["-1","0"]]}` with optional `"M"`, `"N"`.
    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidForm(m.to_string());
        let v: Value = serde_json::from_str(text).map_err(|e| bad(&format!("invalid JSON: {e}")))?;
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing integer field n"))? as usize;
        let sign = v.get("sign").and_then(Value::as_i64).ok_or_else(|| bad("missing integer field sign"))?;
        let m = v.get("M").and_then(Value::as_u64).unwrap_or(2);
        let nn = v.get("N").and_then(Value::as_u64).unwrap_or(1);
        let config = RingConfig::new(m, nn)?;
        let rows = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing entries array"))?;
        if rows.len() != n {
            return Err(bad("entries do not match n"));
        }
        let mut entries = Vec::with_capacity(n);
        for row in rows {
            let row = row.as_array().ok_or_else(|| bad("entries must be an array of arrays"))?;
            let mut out = Vec::with_capacity(row.len());
            for c in row {
                let s = match c {
                    Value::String(s) => s.clone(),
                    Value::Number(x) => x.to_string(),
                    _ => return Err(bad("entries must be strings or integers")),
                };
                out.push(CycScalar::parse(&config, &s)?);
            }
            entries.push(out);
        }
        Self::new(&config, sign as i32, entries)
    }

    pub fn to_json(&self) -> String {
        let entries: Vec<Vec<String>> =
            self.entries.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        let mut v = json!({"n": self.n, "sign": self.sign, "entries": entries});
        if self.config.n() != 1 || self.config.m() != 2 {
            v["M"] = json!(self.config.m());
            v["N"] = json!(self.config.n());
        }
        v.to_string()
    }
}

/// A Frobenius lift `phi_p` on `R[[T]]`, determined by the images
/// `Phi0 = phi_p(T)` of the generators and the coefficient action.
#[derive(Debug, Clone)]
pub struct FrobLift<R: Ring> {
    p: u64,
    phi0: SeriesMatrix<R>,
    galois: bool,
}

impl<R: Ring> FrobLift<R> {
    pub fn new(p: u64, phi0: SeriesMatrix<R>, galois: bool) -> Result<Self> {
        if let Some(k) = phi0.entries().iter().position(|e| !e.has_zero_constant()) {
            return Err(Error::NotFixingIdentity(format!("entry {} of Phi0 has a nonzero constant term", k + 1)));
        }
        Ok(FrobLift { p, phi0, galois })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.phi0.n()
    }

    pub fn order(&self) -> u32 {
        self.phi0.order()
    }

    pub fn galois(&self) -> bool {
        self.galois
    }

    /// `Phi0 = Phi_p(1 + T) - 1`.
    pub fn phi0(&self) -> &SeriesMatrix<R> {
        &self.phi0
    }

    /// `Phi_p(1 + T)`.
    pub fn phi(&self) -> Result<SeriesMatrix<R>> {
        let m = &self.phi0;
        m.add(&SeriesMatrix::identity(m.ring(), m.n(), m.arity(), m.order())?)
    }

    /// Images of the generators, in variable order.
    pub fn images(&self) -> &[Series<R>] {
        self.phi0.entries()
    }

    /// Applies `phi_p` to a series: coefficient Frobenius, then `T -> Phi0`.
    pub fn apply(&self, f: &Series<R>) -> Result<Series<R>> {
        if f.arity() != self.phi0.arity() {
            return Err(Error::ShapeMismatch(format!(
                "series arity {} vs lift arity {}",
                f.arity(),
                self.phi0.arity()
            )));
        }
        if f.order() != self.order() {
            return Err(Error::OrderMismatch(f.order(), self.order()));
        }
        let g = if self.galois { f.galois_map(self.p) } else { f.clone() };
        g.substitute(self.images())
    }

    pub fn apply_matrix(&self, m: &SeriesMatrix<R>) -> Result<SeriesMatrix<R>> {
        let g = if self.galois { m.galois_map(self.p) } else { m.clone() };
        g.substitute(self.images())
    }

    /// The lift with both matrices truncated to a lower order.
    pub fn truncate(&self, order: u32) -> Result<Self> {
        Ok(FrobLift { p: self.p, phi0: self.phi0.truncate(order)?, galois: self.galois })
    }

    /// A copy with a replaced image matrix (used to build counterexamples).
    pub fn with_phi0(&self, phi0: SeriesMatrix<R>) -> Result<Self> {
        Self::new(self.p, phi0, self.galois)
    }
}

/// How the square root of `1 + u` is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtMode {
    /// `u` must have zero constant term; the series is finite at the truncation order.
    Strict,
    /// `u` may have a constant term that is small p-adically; sum this many terms.
    Convergent(usize),
}

/// Evaluates `Phi_p` at a matrix `x` of series.
pub fn phi_at<R: Ring>(
    x: &SeriesMatrix<R>,
    q: &[Vec<R::Elem>],
    phi_q: &[Vec<R::Elem>],
    p: u64,
    mode: SqrtMode,
) -> Result<SeriesMatrix<R>> {
    let ring = x.ring().clone();
    let (arity, order) = (x.arity(), x.order());
    let qm = SeriesMatrix::constant(&ring, arity, order, q)?;
    let phi_qm = SeriesMatrix::constant(&ring, arity, order, phi_q)?;
    let xp = x.entrywise_power_p(p);
    let lhs = xp.transpose().mat_mul(&phi_qm)?.mat_mul(&xp)?;
    let rhs = x.transpose().mat_mul(&qm)?.mat_mul(x)?.entrywise_power_p(p);
    let w = lhs.mat_inverse()?.mat_mul(&rhs)?;
    let u = w.sub(&SeriesMatrix::identity(&ring, x.n(), arity, order)?)?;
    let half = Rational::new(1.into(), 2.into());
    let root = match mode {
        SqrtMode::Strict => {
            if let Some(k) = u.entries().iter().position(|e| !e.has_zero_constant()) {
                let (i, j) = (k / x.n(), k % x.n());
                return Err(Error::NotFixingIdentity(format!(
                    "u(0) has entry ({}, {}) = {}",
                    i + 1,
                    j + 1,
                    ring.render(&u.get(i, j).constant_term())
                )));
            }
            u.binomial_power(&half)?
        }
        SqrtMode::Convergent(terms) => u.binomial_power_convergent(&half, terms)?,
    };
    xp.mat_mul(&root)
}

/// The lift attached to `q` at prime `p`, truncated at `order`.
pub fn chern_lift(q: &FormMatrix, p: u64, order: u32) -> Result<FrobLift<CycRing>> {
    q.config().check_prime(p)?;
    let ring = q.ring();
    let x = SeriesMatrix::generic(&ring, q.n(), order)?;
    let phi = phi_at(&x, q.entries(), &q.frobenius(p)?, p, SqrtMode::Strict)?;
    let phi0 = phi.sub(&SeriesMatrix::identity(&ring, q.n(), x.arity(), order)?)?;
    FrobLift::new(p, phi0, true)
}

/// The lift `x -> x^(p)` with the coefficient Frobenius.
pub fn trivial_lift(config: &Arc<RingConfig>, p: u64, n: usize, order: u32) -> Result<FrobLift<CycRing>> {
    config.check_prime(p)?;
    trivial_lift_over(&CycRing::new(config.clone()), p, n, order)
}

pub fn trivial_lift_over<R: Ring>(ring: &R, p: u64, n: usize, order: u32) -> Result<FrobLift<R>> {
    let x = SeriesMatrix::generic(ring, n, order)?;
    let phi0 = x.entrywise_power_p(p).sub(&SeriesMatrix::identity(ring, n, n * n, order)?)?;
    FrobLift::new(p, phi0, true)
}

fn describe_difference<R: Ring>(a: &SeriesMatrix<R>, b: &SeriesMatrix<R>, names: &[String]) -> Option<String> {
    a.first_difference(b).map(|(i, j, m, x, y)| {
        let ring = a.ring();
        format!(
            "entry ({}, {}), monomial {}: {} vs {}",
            i + 1,
            j + 1,
            m.render(names),
            ring.render(&x),
            ring.render(&y)
        )
    })
}

/// Checks `Phi^t phi_p(q) Phi = (x^t q x)^(p)` up to the truncation order.
pub fn verify_hq_diagram(q: &FormMatrix, lift: &FrobLift<CycRing>) -> Result<Verdict> {
    let (ring, n, order) = (q.ring(), q.n(), lift.order());
    let x = SeriesMatrix::generic(&ring, n, order)?;
    let qm = SeriesMatrix::constant(&ring, n * n, order, q.entries())?;
    let phi_q = SeriesMatrix::constant(&ring, n * n, order, &q.frobenius(lift.p())?)?;
    let phi = lift.phi()?;
    let lhs = phi.transpose().mat_mul(&phi_q)?.mat_mul(&phi)?;
    let rhs = x.transpose().mat_mul(&qm)?.mat_mul(&x)?.entrywise_power_p(lift.p());
    Ok(match describe_difference(&lhs, &rhs, &matrix_var_names(n)) {
        None => Verdict::pass(),
        Some(w) => Verdict::fail(w),
    })
}

/// Checks that `S = x^(p)t phi_p(q) Phi` satisfies `S^t = sign * S`.
pub fn verify_bq_diagram(q: &FormMatrix, lift: &FrobLift<CycRing>) -> Result<Verdict> {
    let (ring, n, order) = (q.ring(), q.n(), lift.order());
    let xp = SeriesMatrix::generic(&ring, n, order)?.entrywise_power_p(lift.p());
    let phi_q = SeriesMatrix::constant(&ring, n * n, order, &q.frobenius(lift.p())?)?;
    let s = xp.transpose().mat_mul(&phi_q)?.mat_mul(&lift.phi()?)?;
    let st = s.transpose();
    let target = if q.sign() == 1 { s } else { s.neg() };
    Ok(match describe_difference(&st, &target, &matrix_var_names(n)) {
        None => Verdict::pass(),
        Some(w) => Verdict::fail(w),
    })
}

/// True when every coefficient of `Phi0` lies in `Z[1/M, z]`.
pub fn globality_check(lift: &FrobLift<CycRing>) -> Verdict {
    let ring = lift.phi0().ring().clone();
    let names = matrix_var_names(lift.n());
    for (k, e) in lift.phi0().entries().iter().enumerate() {
        for (m, c) in e.terms() {
            if let Some(d) = ring.denominators_invertible(c) {
                let (i, j) = (k / lift.n(), k % lift.n());
                return Verdict::fail(format!(
                    "entry ({}, {}), monomial {}: coefficient {} has denominator factor {d}",
                    i + 1,
                    j + 1,
                    m.render(&names),
                    c
                ));
            }
        }
    }
    Verdict::pass()
}

/// Builds the lift and checks it is global along 1. A form whose lift does
/// not fix the identity fails here with the offending constant as witness.
pub fn chern_globality(q: &FormMatrix, p: u64, order: u32) -> Result<Verdict> {
    match chern_lift(q, p, order) {
        Ok(lift) => Ok(globality_check(&lift)),
        Err(Error::NotFixingIdentity(w)) => Ok(Verdict::fail(format!("lift does not fix 1: {w}"))),
        Err(e) => Err(e),
    }
}

/// For `q = 1`, `n = 2r`: `Phi_p` at `[[a, b], [-b, a]]` commutes with `[[0, 1], [-1, 0]]`.
pub fn centralizer_check(r: usize, p: u64, order: u32) -> Result<Verdict> {
    let q = FormMatrix::identity(2 * r)?;
    let ring = q.ring();
    let arity = 2 * r * r;
    let n = 2 * r;
    let mut x = SeriesMatrix::identity(&ring, n, arity, order)?;
    for i in 0..r {
        for j in 0..r {
            let a = Series::var(&ring, arity, order, i * r + j)?;
            let b = Series::var(&ring, arity, order, r * r + i * r + j)?;
            let diag = x.get(i, j).add(&a)?;
            x.set(i, j, diag.clone())?;
            x.set(r + i, r + j, diag)?;
            x.set(i, r + j, b.clone())?;
            x.set(r + i, j, b.neg())?;
        }
    }
    let phi = phi_at(&x, q.entries(), &q.frobenius(p)?, p, SqrtMode::Strict)?;
    let mut jrows = vec![vec![ring.zero(); n]; n];
    for i in 0..r {
        jrows[i][r + i] = ring.one();
        jrows[r + i][i] = ring.from_int(-1);
    }
    let jm = SeriesMatrix::constant(&ring, arity, order, &jrows)?;
    let names: Vec<String> = (0..r * r)
        .map(|k| format!("a_{}{}", k / r + 1, k % r + 1))
        .chain((0..r * r).map(|k| format!("b_{}{}", k / r + 1, k % r + 1)))
        .collect();
    Ok(match describe_difference(&phi.mat_mul(&jm)?, &jm.mat_mul(&phi)?, &names) {
        None => Verdict::pass(),
        Some(w) => Verdict::fail(w),
    })
}

/// `phi_p(x^t q x - q) = (x^t q x)^(p) - q^(p)`: the lift preserves the ideal of the form.
pub fn ideal_preservation_check(q: &FormMatrix, lift: &FrobLift<CycRing>) -> Result<Verdict> {
    let (ring, n, order) = (q.ring(), q.n(), lift.order());
    let x = SeriesMatrix::generic(&ring, n, order)?;
    let qm = SeriesMatrix::constant(&ring, n * n, order, q.entries())?;
    let xqx = x.transpose().mat_mul(&qm)?.mat_mul(&x)?;
    let lhs = lift.apply_matrix(&xqx.sub(&qm)?)?;
    let rhs = xqx.entrywise_power_p(lift.p()).sub(&qm.entrywise_power_p(lift.p()))?;
    Ok(match describe_difference(&lhs, &rhs, &matrix_var_names(n)) {
        None => Verdict::pass(),
        Some(w) => Verdict::fail(w),
    })
}

/// `Phi0 = diag(p T_11, ..., p T_nn)` modulo `(T)^2`.
pub fn linear_part_check(lift: &FrobLift<CycRing>) -> Verdict {
    let n = lift.n();
    let ring = lift.phi0().ring().clone();
    let names = matrix_var_names(n);
    for i in 0..n {
        for j in 0..n {
            let got = lift.phi0().get(i, j).keep_degree_at_most(1);
            let want = if i == j {
                Series::var(&ring, n * n, lift.order(), i * n + j).map(|t| t.scale_int(lift.p() as i64))
            } else {
                Series::zero(&ring, n * n, lift.order())
            };
            let want = want.expect("valid shape").keep_degree_at_most(1);
            if let Some((m, a, b)) = got.first_difference(&want) {
                return Verdict::fail(format!(
                    "entry ({}, {}), monomial {}: {} vs {}",
                    i + 1,
                    j + 1,
                    m.render(&names),
                    a,
                    b
                ));
            }
        }
    }
    Verdict::pass()
}

/// Value of `Phi_p` at `T = 0` (i.e. at `x = 1`), which is the identity for a lift fixing 1.
pub fn value_at_identity(lift: &FrobLift<CycRing>) -> Vec<Vec<String>> {
    let phi = lift.phi().expect("valid shape");
    phi.constant_terms().iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()
}

/// Renders a rational matrix row-major.
pub fn render_rows(rows: &[Vec<Rational>]) -> String {
    let inner: Vec<String> =
        rows.iter().map(|r| format!("[{}]", r.iter().map(render_rational).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", inner.join(", "))
}

/// True when rendered rows form the identity matrix.
pub fn is_identity_rows(rows: &[Vec<String>]) -> bool {
    rows.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, c)| c == if i == j { "1" } else { "0" }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_forms() {
        let s = FormMatrix::split(SplitKind::Symplectic, 2).unwrap();
        assert_eq!(s, FormMatrix::rational(-1, &[&[0, 1], &[-1, 0]]).unwrap());
        let e = FormMatrix::split(SplitKind::SplitSymEven, 2).unwrap();
        assert_eq!(e, FormMatrix::rational(1, &[&[0, 1], &[1, 0]]).unwrap());
        let o = FormMatrix::split(SplitKind::SplitSymOdd, 3).unwrap();
        assert_eq!(o, FormMatrix::rational(1, &[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]).unwrap());
        let o1 = FormMatrix::split(SplitKind::SplitSymOdd, 1).unwrap();
        assert_eq!(o1, FormMatrix::rational(1, &[&[1]]).unwrap());
        assert!(matches!(FormMatrix::split(SplitKind::Symplectic, 3), Err(Error::ParityMismatch { .. })));
        assert!(matches!(FormMatrix::split(SplitKind::SplitSymOdd, 4), Err(Error::ParityMismatch { .. })));
    }

    #[test]
    fn form_validation() {
        assert!(FormMatrix::rational(1, &[&[0, 1], &[-1, 0]]).is_err());
        assert!(FormMatrix::rational(1, &[&[1, 1], &[1, 1]]).is_err());
        assert!(FormMatrix::rational(2, &[&[1]]).is_err());
    }

    #[test]
    fn form_json_round_trip() {
        let text = r#"{"n":2, "sign":-1, "entries":[["0","1"],["-1","0"]]}"#;
        let q = FormMatrix::from_json(text).unwrap();
        assert_eq!(q, FormMatrix::split(SplitKind::Symplectic, 2).unwrap());
        assert_eq!(FormMatrix::from_json(&q.to_json()).unwrap(), q);
        let z = FormMatrix::from_json(r#"{"n":1,"sign":1,"entries":[["z"]],"N":3,"M":2}"#).unwrap();
        assert!(z.entries_roots_of_unity_or_zero());
        assert_eq!(FormMatrix::from_json(&z.to_json()).unwrap(), z);
        assert!(FormMatrix::from_json("{").is_err());
    }

    #[test]
    fn trivial_lift_examples() {
        let lift = trivial_lift(&RingConfig::rational(), 3, 1, 2).unwrap();
        assert_eq!(lift.phi0().get(0, 0).render(&matrix_var_names(1)), "3*T_11 + 3*T_11^2");
        let lift = trivial_lift(&RingConfig::rational(), 3, 2, 2).unwrap();
        assert!(lift.phi0().get(0, 1).is_zero());
        let lift = trivial_lift(&RingConfig::rational(), 3, 2, 3).unwrap();
        assert_eq!(lift.phi0().get(0, 1).render(&matrix_var_names(2)), "T_12^3");
        assert!(globality_check(&lift).holds);
    }

    #[test]
    fn lift_fixes_identity_and_is_diagonal_to_first_order() {
        for kind in [SplitKind::Symplectic, SplitKind::SplitSymEven] {
            let q = FormMatrix::split(kind, 2).unwrap();
            let lift = chern_lift(&q, 3, 3).unwrap();
            assert!(is_identity_rows(&value_at_identity(&lift)));
            assert!(linear_part_check(&lift).holds);
            assert!(verify_hq_diagram(&q, &lift).unwrap().holds);
            assert!(verify_bq_diagram(&q, &lift).unwrap().holds);
            assert!(globality_check(&lift).holds);
            assert!(ideal_preservation_check(&q, &lift).unwrap().holds);
        }
    }

    #[test]
    fn trivial_lift_breaks_the_form_diagram() {
        let q = FormMatrix::split(SplitKind::SplitSymEven, 2).unwrap();
        let lift = trivial_lift(q.config(), 3, 2, 2).unwrap();
        let v = verify_hq_diagram(&q, &lift).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap(), "entry (1, 2), monomial T_12*T_21: 0 vs 3");
    }

    #[test]
    fn perturbed_lift_breaks_symmetry() {
        let q = FormMatrix::split(SplitKind::Symplectic, 2).unwrap();
        let lift = chern_lift(&q, 3, 3).unwrap();
        let mut phi0 = lift.phi0().clone();
        let t = Series::var(&q.ring(), 4, 3, 0).unwrap().pow(2);
        phi0.set(0, 1, phi0.get(0, 1).add(&t).unwrap()).unwrap();
        let bad = lift.with_phi0(phi0).unwrap();
        assert!(!verify_bq_diagram(&q, &bad).unwrap().holds);
    }

    #[test]
    fn non_root_of_unity_form_is_not_global() {
        let q = FormMatrix::rational(-1, &[&[0, 2], &[-2, 0]]).unwrap();
        assert!(!q.entries_roots_of_unity_or_zero());
        assert!(matches!(chern_lift(&q, 3, 2), Err(Error::NotFixingIdentity(_))));
        let v = chern_globality(&q, 3, 2).unwrap();
        assert!(!v.holds);
        assert!(v.witness.unwrap().contains("u(0)"));
    }

    #[test]
    fn cyclotomic_form_lift() {
        // q = [[0, z], [z, 0]] over Z[1/2, z_3] with the coefficient Frobenius.
        let config = RingConfig::new(2, 3).unwrap();
        let z = CycScalar::zeta_pow(&config, 1);
        let zero = CycScalar::zero(&config);
        let q = FormMatrix::new(&config, 1, vec![vec![zero.clone(), z.clone()], vec![z, zero]]).unwrap();
        let lift = chern_lift(&q, 5, 2).unwrap();
        assert!(verify_hq_diagram(&q, &lift).unwrap().holds);
        assert!(verify_bq_diagram(&q, &lift).unwrap().holds);
        assert!(globality_check(&lift).holds);
    }

    #[test]
    fn prime_restrictions() {
        let q = FormMatrix::split(SplitKind::Symplectic, 2).unwrap();
        assert!(matches!(chern_lift(&q, 2, 2), Err(Error::NotOddPrime(2))));
        assert!(matches!(chern_lift(&q, 9, 2), Err(Error::NotOddPrime(9))));
    }

    #[test]
    fn centralizer() {
        assert!(centralizer_check(1, 3, 4).unwrap().holds);
        assert!(centralizer_check(2, 5, 2).unwrap().holds);
    }
}
