//! Command-line driver: single curvature computations and the verification suite.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 when a computed quantity
//! contradicts its expected value.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::chern::{
    centralizer_check, chern_globality, chern_lift, globality_check, is_identity_rows, linear_part_check,
    value_at_identity, verify_bq_diagram, verify_hq_diagram, FormMatrix, SplitKind,
};
use crate::curvature::{curvature11, curvature2, curvature3, graded_piece, mixed_congruence_check, CurvatureReport};
use crate::oneprime::{agreement_check, lhs_engine, n1_identity_check, rhs_sunny};
use crate::reduced::{
    compose_fp, congruence_extract, corner_consistency, corner_direct_check, corner_three_commutator, g_poly,
    lambda_matches_chern, n2_symplectic_commutation, so_curvature, so_torus_check, unipotent_check,
    unipotent_composition, Sign,
};
use crate::ring::{check_odd_prime, Rational};
use crate::unitary::{
    coefficient_contradiction, embedding_consistency, uc_commutator_check, uc_lift_p, unitary_report,
};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "chern", version, about = "Curvature of Frobenius-lift Chern connections on GL_n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one curvature report.
    Curvature(CurvatureArgs),
    /// Run verification targets.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Curvature,
    Three,
    Mixed,
    So,
    Unitary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Matrix size (for `so`, the size 2r of the orthogonal group).
    #[arg(long)]
    pub n: usize,
    /// split-sym, split-alt, split-odd, identity or file:PATH.
    #[arg(long, default_value = "split-sym")]
    pub q: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub p2: Option<u64>,
    #[arg(long)]
    pub p3: Option<u64>,
    /// Truncation order: series are computed modulo (T)^(order+1).
    #[arg(long)]
    pub order: u32,
    /// p-adic digits; with `--kind mixed` and equal primes this runs the one-prime computation over Z_p.
    #[arg(long)]
    pub precision: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `all` or a list of target ids.
    #[arg(long, num_args = 1.., default_value = "all")]
    pub suite: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub primes: Vec<u64>,
    #[arg(long)]
    pub json: bool,
    /// Print the target list and exit.
    #[arg(long)]
    pub list: bool,
}

/// Maps an error to the exit-code protocol.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DivisibilityViolation { .. } | Error::Inconsistent(_) | Error::NotFixingIdentity(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Curvature(a) => cmd_curvature(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Resolves the `--q` flag for a matrix of size `n`.
pub fn parse_form(name: &str, n: usize) -> Result<FormMatrix> {
    let split = |kind: SplitKind| FormMatrix::split(kind, n);
    let q = match name {
        "split-sym" if n.is_multiple_of(2) => split(SplitKind::SplitSymEven)?,
        "split-sym" | "split-odd" => split(SplitKind::SplitSymOdd)?,
        "split-alt" => split(SplitKind::Symplectic)?,
        "identity" => FormMatrix::identity(n)?,
        _ => match name.strip_prefix("file:") {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {path}: {e}")))?;
                FormMatrix::from_json(&text)?
            }
            None => return Err(Error::Usage(format!("unknown form {name:?}"))),
        },
    };
    if q.n() != n {
        return Err(Error::Usage(format!("the form has size {} but --n is {n}", q.n())));
    }
    Ok(q)
}

fn need(p: Option<u64>, flag: &str) -> Result<u64> {
    p.ok_or_else(|| Error::Usage(format!("this kind needs {flag}")))
}

pub fn cmd_curvature(a: &CurvatureArgs, out: &mut dyn Write) -> Result<i32> {
    for p in [Some(a.p), a.p2, a.p3].into_iter().flatten() {
        check_odd_prime(p)?;
    }
    if a.kind == KindArg::Mixed && a.precision.is_some() {
        return one_prime(a, out);
    }
    let report = match a.kind {
        KindArg::Curvature => curvature2(&parse_form(&a.q, a.n)?, a.p, need(a.p2, "--p2")?, a.order)?,
        KindArg::Three => curvature3(&parse_form(&a.q, a.n)?, a.p, need(a.p2, "--p2")?, need(a.p3, "--p3")?, a.order)?,
        KindArg::Mixed => curvature11(&parse_form(&a.q, a.n)?, a.p, a.p2.unwrap_or(a.p), a.order)?,
        KindArg::So => {
            if !a.n.is_multiple_of(2) || a.n == 0 {
                return Err(Error::Usage("--kind so takes an even --n = 2r".into()));
            }
            so_curvature(a.p, need(a.p2, "--p2")?, a.n / 2, a.order)?
        }
        KindArg::Unitary => {
            if a.n != 2 {
                return Err(Error::Usage("--kind unitary works on U_1 inside GL_2; pass --n 2".into()));
            }
            unitary_report(a.p, a.p2.unwrap_or(a.p), a.order)?
        }
    };
    emit(&report, a.format, out)?;
    Ok(0)
}

/// Serializes a report; JSON output is byte-stable.
pub fn report_emit(report: &CurvatureReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.render_text(),
    }
}

fn emit(report: &CurvatureReport, format: Format, out: &mut dyn Write) -> Result<()> {
    out.write_all(report_emit(report, format).as_bytes()).map_err(|e| Error::Usage(format!("write failed: {e}")))
}

fn one_prime(a: &CurvatureArgs, out: &mut dyn Write) -> Result<i32> {
    let k = a.precision.expect("checked by caller");
    if a.p2.is_some_and(|p2| p2 != a.p) {
        return Err(Error::Usage("the p-adic computation uses a single prime; drop --p2 or set it to --p".into()));
    }
    if k < 2 {
        return Err(Error::Usage("--precision must be at least 2".into()));
    }
    let q = parse_form(&a.q, a.n)?;
    let rhs = rhs_sunny(&q, a.p, k)?;
    let lhs = lhs_engine(&q, a.p, a.order, k)?;
    let m = k as i64 - 1;
    let agree = rhs.eq_mod(&lhs.constant, m);
    let value = lhs.constant.symmetric_rows(m);
    let closed = rhs.symmetric_rows(m);
    let text = match a.format {
        Format::Json => {
            let v = json!({
                "kind": "mixed",
                "mode": "p-adic",
                "n": a.n,
                "p": a.p,
                "order": a.order,
                "precision": k,
                "certified_digits": m,
                "value_at_identity": value,
                "closed_form": closed,
                "agreement": agree,
            });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Text => format!(
            "kind: mixed (p-adic, one prime)\np: {}\nn: {}\norder: {}\ncertified digits: {m}\nvalue at identity: {value:?}\nclosed form: {closed:?}\nagreement: {agree}\n",
            a.p, a.n, a.order
        ),
    };
    out.write_all(text.as_bytes()).map_err(|e| Error::Usage(format!("write failed: {e}")))?;
    Ok(if agree { 0 } else { 2 })
}

/// Result of one verification target.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

/// A named check with its expected outcome.
pub struct VerifyTarget {
    pub id: &'static str,
    pub statement: &'static str,
    run: fn(&[u64]) -> Result<Outcome>,
}

impl VerifyTarget {
    pub fn run(&self, primes: &[u64]) -> Outcome {
        match (self.run)(primes) {
            Ok(o) => o,
            Err(e) => Outcome::new(false, format!("error: {e}")),
        }
    }
}

fn pairs(primes: &[u64]) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        for &p2 in &primes[i + 1..] {
            out.push((p, p2));
        }
    }
    out
}

fn first_three(primes: &[u64]) -> Result<(u64, u64, u64)> {
    match *primes {
        [a, b, c, ..] => Ok((a, b, c)),
        _ => Err(Error::Usage("this target needs at least three primes".into())),
    }
}

/// Runs `f` over `items`, stopping at the first failure.
fn all_of<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> Result<Option<String>>) -> Result<Outcome> {
    let mut n = 0;
    for it in items {
        if let Some(w) = f(it)? {
            return Ok(Outcome::new(false, w));
        }
        n += 1;
    }
    Ok(Outcome::new(true, format!("{n} cases")))
}

fn t_pair_congruence(primes: &[u64]) -> Result<Outcome> {
    let mut lines = Vec::new();
    for (p, p2) in pairs(primes) {
        for sign in [Sign::Upper, Sign::Lower] {
            let c = congruence_extract(&[p, p2], sign)?;
            if !c.holds() {
                return Ok(Outcome::new(false, c.render()));
            }
            if sign == Sign::Upper {
                lines.push(c.render());
            }
        }
    }
    Ok(Outcome::new(true, lines.join("; ")))
}

fn t_triple_congruence(primes: &[u64]) -> Result<Outcome> {
    let (a, b, c) = first_three(primes)?;
    let perms = [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]];
    let mut lines = Vec::new();
    for t in perms {
        let c = congruence_extract(&t, Sign::Upper)?;
        if !c.holds() {
            return Ok(Outcome::new(false, c.render()));
        }
        lines.push(c.render());
    }
    Ok(Outcome::new(true, lines.join("; ")))
}

fn split_forms(n: usize) -> Vec<FormMatrix> {
    let kinds: &[SplitKind] =
        if n.is_multiple_of(2) { &[SplitKind::SplitSymEven, SplitKind::Symplectic] } else { &[SplitKind::SplitSymOdd] };
    kinds.iter().map(|&k| FormMatrix::split(k, n).expect("valid split form")).collect()
}

fn t_lift_sanity(primes: &[u64]) -> Result<Outcome> {
    let cases: Vec<(FormMatrix, u64)> =
        (1..=4).flat_map(split_forms).flat_map(|q| primes.iter().map(move |&p| (q.clone(), p))).collect();
    all_of(cases, |(q, p)| {
        let lift = chern_lift(&q, p, 4)?;
        let tag = format!("n={} sign={} p={p}", q.n(), q.sign());
        if !is_identity_rows(&value_at_identity(&lift)) {
            return Ok(Some(format!("{tag}: Phi_p(1) is not 1")));
        }
        for (name, v) in [
            ("linear part", linear_part_check(&lift)),
            ("form diagram", verify_hq_diagram(&q, &lift)?),
            ("bilinear diagram", verify_bq_diagram(&q, &lift)?),
            ("globality", globality_check(&lift)),
        ] {
            if !v.holds {
                return Ok(Some(format!("{tag}: {name}: {v}")));
            }
        }
        Ok(None)
    })
}

fn t_lift_obstruction(_: &[u64]) -> Result<Outcome> {
    let q = FormMatrix::rational(-1, &[&[0, 2], &[-2, 0]])?;
    let v = chern_globality(&q, 3, 2)?;
    Ok(match (v.holds, v.witness) {
        (false, Some(w)) => Outcome::new(true, format!("q = [[0, 2], [-2, 0]], p = 3: {w}")),
        _ => Outcome::new(false, "expected the lift to move the identity"),
    })
}

fn t_curvature_degree_two(primes: &[u64]) -> Result<Outcome> {
    let cases: Vec<(FormMatrix, (u64, u64))> = [2, 4]
        .into_iter()
        .flat_map(split_forms)
        .flat_map(|q| pairs(primes).into_iter().map(move |pp| (q.clone(), pp)))
        .collect();
    all_of(cases, |(q, (p, p2))| {
        let r = curvature2(&q, p, p2, 2)?;
        Ok((!graded_piece(&r, 2)?.is_zero())
            .then(|| format!("n={} sign={} ({p},{p2}): nonzero degree-2 part", q.n(), q.sign())))
    })
}

fn t_curvature_corner(primes: &[u64]) -> Result<Outcome> {
    for q in split_forms(4) {
        for &p in primes {
            let lift = chern_lift(&q, p, 4)?;
            for v in [corner_consistency(&q, &lift)?, corner_direct_check(&q, p)?] {
                if !v.holds {
                    return Ok(Outcome::new(false, format!("n=4 sign={} p={p}: {v}", q.sign())));
                }
            }
        }
    }
    let mut lines = Vec::new();
    for (p, p2) in pairs(primes) {
        let g = g_poly(&[p, p2], Sign::Upper)?;
        let c = congruence_extract(&[p, p2], Sign::Upper)?;
        if g.is_zero() || !c.holds() {
            return Ok(Outcome::new(false, format!("({p},{p2}): {}", c.render())));
        }
        lines.push(format!("g_({p},{p2}) has degree {}", g.degree().unwrap_or(0)));
    }
    Ok(Outcome::new(true, format!("corner reduction consistent at order 4; {}", lines.join(", "))))
}

fn t_curvature_low_rank(primes: &[u64]) -> Result<Outcome> {
    let alt2 = FormMatrix::split(SplitKind::Symplectic, 2)?;
    let sym1 = FormMatrix::split(SplitKind::SplitSymOdd, 1)?;
    for (p, p2) in pairs(primes).into_iter().take(1) {
        for order in [5, 7] {
            for q in [&alt2, &sym1] {
                let r = curvature2(q, p, p2, order)?;
                if !r.is_zero() {
                    return Ok(Outcome::new(false, format!("n={} ({p},{p2}) order {order}: nonzero curvature", q.n())));
                }
            }
        }
        for v in [lambda_matches_chern(p, 4)?, n2_symplectic_commutation(p, p2, 5)?] {
            if !v.holds {
                return Ok(Outcome::new(false, v.to_string()));
            }
        }
    }
    Ok(Outcome::new(true, "zero at orders 5 and 7; closed form matches and commutes"))
}

fn t_so_reduction(primes: &[u64]) -> Result<Outcome> {
    let (p, p2) = *pairs(primes).first().ok_or_else(|| Error::Usage("this target needs two primes".into()))?;
    for v in [so_torus_check(p, p2, 5)?, unipotent_check(p)?, unipotent_check(p2)?] {
        if !v.holds {
            return Ok(Outcome::new(false, v.to_string()));
        }
    }
    let (v, comm) = unipotent_composition(p, p2)?;
    if !v.holds || comm.is_zero() {
        return Ok(Outcome::new(false, format!("composition: {v}")));
    }
    let r = so_curvature(p, p2, 1, 5)?;
    if !r.is_zero() {
        return Ok(Outcome::new(false, "r = 1 curvature is nonzero"));
    }
    Ok(Outcome::new(
        true,
        format!("unipotent commutator g_({p},{p2})(v, uw - v) has {} terms; r = 1 curvature vanishes", comm.len()),
    ))
}

fn t_three_curvature(primes: &[u64]) -> Result<Outcome> {
    let (a, b, c) = first_three(primes)?;
    let direct = corner_three_commutator(a, b, c, Sign::Upper);
    let expected = g_poly(&[c, b, a], Sign::Upper)?;
    if direct != expected {
        return Ok(Outcome::new(false, format!("composed corner maps differ from g_({c},{b},{a})")));
    }
    let cert = congruence_extract(&[c, b, a], Sign::Upper)?;
    if !cert.holds() || cert.expected == Rational::from_integer(0.into()) {
        return Ok(Outcome::new(false, cert.render()));
    }
    Ok(Outcome::new(true, format!("corner identity holds; {}", cert.render())))
}

fn t_mixed_curvature(primes: &[u64]) -> Result<Outcome> {
    let p = primes[0];
    let mut cases = vec![(p, p)];
    cases.extend(pairs(primes).into_iter().take(1));
    let forms = split_forms(2);
    let cases: Vec<_> = forms.iter().flat_map(|q| cases.iter().map(move |&c| (q, c))).collect();
    all_of(cases, |(q, (p, p2))| {
        let r = curvature11(q, p, p2, 2)?;
        let v = mixed_congruence_check(q, &r)?;
        let tag = format!("sign={} ({p},{p2})", q.sign());
        if !v.holds {
            return Ok(Some(format!("{tag}: {v}")));
        }
        if !graded_piece(&r, 1)?.is_zero() || graded_piece(&r, 2)?.is_zero() {
            return Ok(Some(format!("{tag}: expected leading degree 2, got {:?}", r.leading_degree())));
        }
        Ok(None)
    })
}

fn t_unitary(primes: &[u64]) -> Result<Outcome> {
    let p = primes[0];
    let mut lines = Vec::new();
    let mut cases = vec![(p, p)];
    cases.extend(pairs(primes).into_iter().take(1));
    for (p, p2) in cases {
        let c = coefficient_contradiction(p, p2);
        if c.lhs_alpha == c.rhs_alpha {
            return Ok(Outcome::new(false, format!("({p},{p2}): alpha coefficients agree")));
        }
        let v = uc_commutator_check(p, p2, 3)?;
        if !v.holds {
            return Ok(Outcome::new(false, v.to_string()));
        }
        lines.push(format!("({p},{p2}): {} vs {}, {}", c.lhs_alpha, c.rhs_alpha, v.witness.unwrap_or_default()));
    }
    if !uc_lift_p(p, 5)?.relation_image()?.is_zero() {
        return Ok(Outcome::new(false, "the lift does not preserve the unitary relation"));
    }
    for v in [embedding_consistency(p, 5)?, centralizer_check(1, p, 3)?, centralizer_check(2, p, 2)?] {
        if !v.holds {
            return Ok(Outcome::new(false, v.to_string()));
        }
    }
    Ok(Outcome::new(true, lines.join("; ")))
}

fn t_one_prime(primes: &[u64]) -> Result<Outcome> {
    let two = FormMatrix::rational(1, &[&[2]])?;
    let alt = FormMatrix::rational(-1, &[&[0, 2], &[-2, 0]])?;
    let mut cases = vec![(two.clone(), 3, 5)];
    if primes.contains(&5) {
        cases.push((FormMatrix::rational(1, &[&[3]])?, 5, 4));
    }
    cases.push((alt, 3, 5));
    for (q, p, k) in &cases {
        let v = agreement_check(q, *p, 2, *k)?;
        if !v.holds {
            return Ok(Outcome::new(false, v.to_string()));
        }
    }
    let v = n1_identity_check(&Rational::from_integer(2.into()), 3, 3, 4)?;
    if !v.holds {
        return Ok(Outcome::new(false, v.to_string()));
    }
    for q in split_forms(2).into_iter().chain(split_forms(1)) {
        if !rhs_sunny(&q, 3, 5)?.is_zero_mod(4) {
            return Ok(Outcome::new(false, format!("split form of size {} gives a nonzero value", q.n())));
        }
    }
    let val = rhs_sunny(&two, 3, 5)?.symmetric_rows(4);
    Ok(Outcome::new(true, format!("q = 2, p = 3 gives {}; split forms give 0", val[0][0])))
}

fn t_remarkable_shape(primes: &[u64]) -> Result<Outcome> {
    all_of(pairs(primes), |(p, p2)| {
        let f = compose_fp(&[p, p2], Sign::Upper)?;
        let ok = f.is_homogeneous() && f.degree() == Some((p * p2) as u32);
        Ok((!ok).then(|| format!("f_({p},{p2}) is not homogeneous of degree {}", p * p2)))
    })
}

/// All targets, sorted by id.
pub fn targets() -> Vec<VerifyTarget> {
    let mut t = vec![
        VerifyTarget {
            id: "curvature-corner",
            statement: "for n >= 4 even the curvature is nonzero in degree pp' (corner reduction)",
            run: t_curvature_corner,
        },
        VerifyTarget {
            id: "curvature-degree-two",
            statement: "for n even and split q the curvature vanishes modulo (T)^3",
            run: t_curvature_degree_two,
        },
        VerifyTarget {
            id: "curvature-low-rank",
            statement: "the curvature vanishes for n = 1 and for n = 2 alternating",
            run: t_curvature_low_rank,
        },
        VerifyTarget {
            id: "lift-obstruction",
            statement: "a non-split alternating form gives a lift that moves the identity",
            run: t_lift_obstruction,
        },
        VerifyTarget {
            id: "lift-sanity",
            statement: "split lifts fix 1, are linear-diagonal and make both form diagrams commute",
            run: t_lift_sanity,
        },
        VerifyTarget {
            id: "mixed-curvature",
            statement: "the mixed curvature vanishes in degree 1 and not in degree 2",
            run: t_mixed_curvature,
        },
        VerifyTarget {
            id: "one-prime",
            statement: "one-prime mixed curvature at 1 matches the closed form and vanishes exactly for unit forms",
            run: t_one_prime,
        },
        VerifyTarget {
            id: "pair-congruence",
            statement: "g_pp'(v, 1) = +-(pp'/16)(p' - p) v^2 mod v^3",
            run: t_pair_congruence,
        },
        VerifyTarget {
            id: "remarkable-shape",
            statement: "f_pp' is homogeneous of degree pp'",
            run: t_remarkable_shape,
        },
        VerifyTarget {
            id: "so-reduction",
            statement: "the SO curvature vanishes for n = 2 and is nonzero through unipotents",
            run: t_so_reduction,
        },
        VerifyTarget {
            id: "three-curvature",
            statement: "the 3-curvature is nonzero on the corner for p != p'",
            run: t_three_curvature,
        },
        VerifyTarget {
            id: "triple-congruence",
            statement: "2 g_pp'p''(v, 1) = -(pp'p''/32)(p'' - 2)(p' - p) v^2 mod v^3",
            run: t_triple_congruence,
        },
        VerifyTarget {
            id: "unitary-mixed",
            statement: "the unitary mixed curvature is nonzero for all p, p'",
            run: t_unitary,
        },
    ];
    t.sort_by_key(|t| t.id);
    t
}

/// Runs the selected targets in parallel; results come back in id order.
pub fn run_targets(ids: &[String], primes: &[u64]) -> Result<Vec<(&'static str, Outcome)>> {
    let all = targets();
    let selected: Vec<&VerifyTarget> = if ids.iter().any(|s| s == "all") {
        all.iter().collect()
    } else {
        ids.iter()
            .map(|id| all.iter().find(|t| t.id == id).ok_or_else(|| Error::Usage(format!("unknown target {id:?}"))))
            .collect::<Result<_>>()?
    };
    let mut results: Vec<(&'static str, Outcome)> = selected.par_iter().map(|t| (t.id, t.run(primes))).collect();
    results.sort_by_key(|r| r.0);
    Ok(results)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Usage(format!("write failed: {e}"));
    if a.list {
        for t in targets() {
            writeln!(out, "{:<22} {}", t.id, t.statement).map_err(io)?;
        }
        return Ok(0);
    }
    let mut primes = a.primes.clone();
    primes.sort_unstable();
    primes.dedup();
    if primes.len() < 2 {
        return Err(Error::Usage("--primes needs at least two distinct primes".into()));
    }
    for &p in &primes {
        check_odd_prime(p)?;
    }
    let results = run_targets(&a.suite, &primes)?;
    let ok = results.iter().all(|r| r.1.passed);
    if a.json {
        let items: Vec<_> =
            results.iter().map(|(id, o)| json!({"id": id, "passed": o.passed, "detail": o.detail})).collect();
        let v = json!({"primes": primes, "passed": ok, "targets": items});
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable")).map_err(io)?;
    } else {
        for (id, o) in &results {
            writeln!(out, "{} {id}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail).map_err(io)?;
        }
        writeln!(out, "coverage:").map_err(io)?;
        let all = targets();
        for (id, _) in &results {
            let t = all.iter().find(|t| t.id == *id).expect("known id");
            writeln!(out, "  {id} -> {}", t.statement).map_err(io)?;
        }
    }
    Ok(if ok { 0 } else { 2 })
}
