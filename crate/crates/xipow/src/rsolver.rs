//! Satisfiability over the reals with the power predicate.

use crate::barrier::BaseDescriptor;
use crate::error::{err, ErrorKind, Result};
use crate::formula::{Formula, Rel};
use crate::poly::{Monomial, Poly, XI};
use crate::qe::{choose_points, qe_eliminate, QeEngine, TestPoint};
use crate::rat::{fmt_q, Z};
use crate::sign;
use crate::xz::{solve_xz, XzOptions, XzStats};
use num_traits::Signed;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub xz: XzOptions,
    pub qe: QeEngine,
}


/// x = ξ^exponent · residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarWitness {
    pub exponent: Option<i64>,
    pub residual: String,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub sat: bool,
    pub witness: BTreeMap<String, VarWitness>,
    pub stats: XzStats,
    pub residual_atoms: usize,
}

fn fresh(taken: &mut BTreeSet<String>, stem: &str) -> String {
    let mut i = 0;
    loop {
        let name = if i == 0 { stem.to_string() } else { format!("{stem}~{i}") };
        if taken.insert(name.clone()) {
            return name;
        }
        i += 1;
    }
}

/// Negation-free, quantifier-free body; power predicates only on variables.
pub fn normalize_body(phi: &Formula) -> Result<Formula> {
    let mut taken = phi.free_vars();
    taken.insert(XI.to_string());
    norm(phi, true, &mut taken, &BTreeMap::new())
}

/// `normalize_body` with its variables bound existentially at the top.
pub fn normalize_formula(phi: &Formula) -> Result<Formula> {
    let body = normalize_body(phi)?;
    let vars: Vec<String> = body.free_vars().into_iter().collect();
    Ok(Formula::exists(vars, body))
}

fn norm(f: &Formula, pos: bool, taken: &mut BTreeSet<String>, ren: &BTreeMap<String, String>) -> Result<Formula> {
    let rn = |p: &Poly| ren.iter().fold(p.clone(), |p, (a, b)| p.rename(a, b));
    Ok(match f {
        Formula::True | Formula::False => crate::formula::bool_formula((*f == Formula::True) == pos),
        Formula::Atom(a) => {
            let p = rn(&a.poly);
            match (pos, a.rel) {
                (true, r) => Formula::atom(p, r),
                (false, Rel::Lt) => Formula::or(vec![Formula::eq(p.clone()), Formula::lt(p.neg())]),
                (false, Rel::Eq) => Formula::or(vec![Formula::lt(p.clone()), Formula::lt(p.neg())]),
            }
        }
        Formula::Pow(p) => {
            let p = rn(p);
            let var = match p.terms().collect::<Vec<_>>().as_slice() {
                [(m, c)] if *c == &Z::from(1) && m.total_degree() == 1 && m.pairs().len() == 1 && !m.pairs()[0].0.eq(XI) => {
                    Some(m.pairs()[0].0.clone())
                }
                _ => None,
            };
            let (x, def) = match var {
                Some(x) => (Poly::var(&x), Formula::True),
                None => {
                    let y = fresh(taken, "p");
                    (Poly::var(&y), Formula::equal(&Poly::var(&y), &p))
                }
            };
            if pos {
                Formula::and(vec![def, Formula::Pow(x)])
            } else {
                // x ≤ 0 ∨ ∃y (pow(y) ∧ y < x < ξ·y)
                let y = Poly::var(&fresh(taken, "w"));
                Formula::and(vec![
                    def,
                    Formula::or(vec![
                        Formula::le(x.clone()),
                        Formula::and(vec![
                            Formula::Pow(y.clone()),
                            Formula::less(&y, &x),
                            Formula::less(&x, &Poly::xi().mul(&y)),
                        ]),
                    ]),
                ])
            }
        }
        Formula::And(xs) | Formula::Or(xs) => {
            let ys = xs.iter().map(|x| norm(x, pos, taken, ren)).collect::<Result<Vec<_>>>()?;
            if matches!(f, Formula::And(_)) == pos {
                Formula::and(ys)
            } else {
                Formula::or(ys)
            }
        }
        Formula::Not(x) => norm(x, !pos, taken, ren)?,
        Formula::Exists(vs, b) if pos => {
            let mut ren = ren.clone();
            for v in vs {
                let n = fresh(taken, v);
                ren.insert(v.clone(), n);
            }
            norm(b, pos, taken, &ren)?
        }
        Formula::Exists(..) | Formula::Forall(..) => {
            return err(ErrorKind::UniversalQuantifier, "only existential quantification is supported")
        }
    })
}

/// Base after small-base handling.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum PreparedBase {
    /// ξ = 1: every power is 1.
    PureReals,
    /// ξ > 1; `flipped` when the input base was below 1.
    Powers { base: BaseDescriptor, flipped: bool },
}

fn is_xi_var(p: &Poly) -> bool {
    p.vars().contains(XI)
}

/// Rewrites φ so that the base exceeds 1, or drops powers when it equals 1.
pub fn preprocess_base(phi: &Formula, base: &BaseDescriptor) -> Result<(Formula, PreparedBase)> {
    if let Some(rep) = &base.algebraic {
        if rep.sign() <= 0 {
            return err(ErrorKind::InvalidBase, format!("base {} is not positive", base.label()));
        }
    }
    Ok(match sign::cmp_one(base)? {
        Ordering::Greater => (phi.clone(), PreparedBase::Powers { base: base.clone(), flipped: false }),
        Ordering::Equal => {
            let one = Monomial::one();
            let f = phi.map_polys(&mut |p| p.substitute_monomial(XI, &one));
            let f = replace_pow(&f);
            (f.simplify_with(&mut |_| None), PreparedBase::PureReals)
        }
        Ordering::Less => {
            let inv = Monomial::xi_pow(-1);
            let f = phi.map_polys(&mut |p| if is_xi_var(p) { p.substitute_monomial(XI, &inv).laurent_normalized() } else { p.clone() });
            (f, PreparedBase::Powers { base: base.reciprocal()?, flipped: true })
        }
    })
}

fn replace_pow(f: &Formula) -> Formula {
    match f {
        Formula::Pow(p) => Formula::eq(p.sub(&Poly::one())),
        Formula::And(xs) => Formula::and(xs.iter().map(replace_pow).collect()),
        Formula::Or(xs) => Formula::or(xs.iter().map(replace_pow).collect()),
        Formula::Not(x) => Formula::not(replace_pow(x)),
        f => f.clone(),
    }
}

/// Variables split as x = u·v, or x = u when pow(x) is a top-level conjunct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub x: String,
    pub u: String,
    pub v: Option<String>,
}

fn top_pow_vars(f: &Formula) -> BTreeSet<String> {
    let conj: Vec<&Formula> = match f {
        Formula::And(xs) => xs.iter().collect(),
        f => vec![f],
    };
    conj.into_iter()
        .filter_map(|c| match c {
            Formula::Pow(p) => p.vars().into_iter().next(),
            _ => None,
        })
        .collect()
}

/// Replaces each x by u·v with v = 0 or 1 ≤ |v| < ξ; pow(x) becomes v = 1.
pub fn rewrite_step1(phi: &Formula) -> (Formula, Vec<Split>) {
    let mut taken = phi.symbols();
    let pinned = top_pow_vars(phi);
    let mut f = phi.clone();
    let mut splits = Vec::new();
    let mut ranges = Vec::new();
    for x in phi.free_vars() {
        let u = fresh(&mut taken, &format!("u_{x}"));
        if pinned.contains(&x) {
            f = subst_var(&f, &x, &Poly::var(&u), &Formula::True);
            splits.push(Split { x, u, v: None });
            continue;
        }
        let v = fresh(&mut taken, &format!("v_{x}"));
        let vp = Poly::var(&v);
        f = subst_var(&f, &x, &Poly::var(&u).mul(&vp), &Formula::eq(vp.sub(&Poly::one())));
        let one = Poly::one();
        ranges.push(Formula::or(vec![
            Formula::eq(vp.clone()),
            Formula::and(vec![Formula::less_eq(&one, &vp), Formula::less(&vp, &Poly::xi())]),
            Formula::and(vec![Formula::less_eq(&one, &vp.neg()), Formula::less(&vp.neg(), &Poly::xi())]),
        ]));
        splits.push(Split { x, u, v: Some(v) });
    }
    ranges.insert(0, f);
    (Formula::and(ranges), splits)
}

fn subst_var(f: &Formula, x: &str, by: &Poly, pow: &Formula) -> Formula {
    match f {
        Formula::Atom(a) => Formula::atom(a.poly.substitute_poly(x, by), a.rel),
        Formula::Pow(p) if p.vars().contains(x) => pow.clone(),
        Formula::And(xs) => Formula::and(xs.iter().map(|g| subst_var(g, x, by, pow)).collect()),
        Formula::Or(xs) => Formula::or(xs.iter().map(|g| subst_var(g, x, by, pow)).collect()),
        Formula::Not(g) => Formula::not(subst_var(g, x, by, pow)),
        g => g.clone(),
    }
}

fn tidy_with(base: Option<&BaseDescriptor>) -> impl FnMut(Formula) -> Result<Formula> + '_ {
    move |f: Formula| {
        let mut failure = None;
        let g = f.simplify_with(&mut |p: &Poly| match base {
            Some(b) if p.is_xi_only() => match sign::sign_xi(p, b) {
                Ok(s) => Some(s),
                Err(e) => {
                    failure.get_or_insert(e);
                    None
                }
            },
            _ => None,
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(g),
        }
    }
}

fn describe(points: &[(String, TestPoint)], v: &str) -> String {
    match points.iter().find(|(w, _)| w == v) {
        Some((_, tp)) => tp.to_string(),
        None => "unresolved".to_string(),
    }
}

/// Decides ∃x⃗ φ over the reals with ξ^Z.
pub fn solve(phi: &Formula, base: &BaseDescriptor, opts: &SolveOptions) -> Result<Verdict> {
    let body = normalize_body(phi)?;
    let (body, prepared) = preprocess_base(&body, base)?;
    match prepared {
        PreparedBase::PureReals => {
            let vars: Vec<String> = body.free_vars().into_iter().collect();
            let mut tidy = tidy_with(None);
            let g = qe_eliminate(&body, &vars, &opts.qe, &mut tidy)?;
            let g = g.simplify_with(&mut |_| None);
            let sat = match &g {
                Formula::True => true,
                Formula::False => false,
                _ => return err(ErrorKind::Precondition, format!("residue {g} is not ground")),
            };
            let mut witness = BTreeMap::new();
            if sat {
                let mut holds = |f: &Formula| Ok(f.simplify_with(&mut |_| None) == Formula::True);
                let pts = choose_points(&body, &vars, &mut holds)?.unwrap_or_default();
                for v in &vars {
                    witness.insert(v.clone(), VarWitness { exponent: Some(0), residual: describe(&pts, v) });
                }
            }
            Ok(Verdict { sat, witness, stats: XzStats::default(), residual_atoms: 0 })
        }
        PreparedBase::Powers { base: b, flipped } => {
            let (f1, splits) = rewrite_step1(&body);
            let vs: Vec<String> = splits.iter().filter_map(|s| s.v.clone()).collect();
            let mut tidy = tidy_with(Some(&b));
            let psi = qe_eliminate(&f1, &vs, &opts.qe, &mut tidy)?;
            let xz = solve_xz(&psi, &b, &opts.xz)?;
            let residual_atoms = psi.atoms().len();
            let mut witness = BTreeMap::new();
            if xz.sat {
                let mut g = f1.clone();
                for s in &splits {
                    let e = xz.witness.get(&s.u).copied().unwrap_or(0);
                    g = g.substitute(&s.u, &Monomial::xi_pow(e));
                }
                let mut holds = |f: &Formula| f.eval_with(&mut |p| sign::sign_xi(p, &b));
                let pts = choose_points(&g, &vs, &mut holds)?.unwrap_or_default();
                for s in &splits {
                    let e = xz.witness.get(&s.u).copied().unwrap_or(0);
                    let residual = match &s.v {
                        None => "1".to_string(),
                        Some(v) => describe(&pts, v),
                    };
                    witness.insert(s.x.clone(), VarWitness { exponent: Some(if flipped { -e } else { e }), residual });
                }
                if splits.iter().all(|s| s.v.is_none()) {
                    let mut g = body.clone();
                    for s in &splits {
                        g = g.substitute(&s.x, &Monomial::xi_pow(xz.witness.get(&s.u).copied().unwrap_or(0)));
                    }
                    let g = g.map_atoms(&mut |a| Formula::Atom(a.clone()));
                    let ok = strip_pows(&g).eval_with(&mut |p| sign::sign_xi(p, &b))?;
                    if !ok {
                        return err(ErrorKind::Precondition, "witness failed verification");
                    }
                }
            }
            Ok(Verdict { sat: xz.sat, witness, stats: xz.stats, residual_atoms })
        }
    }
}

fn strip_pows(f: &Formula) -> Formula {
    match f {
        Formula::Pow(_) => Formula::True,
        Formula::And(xs) => Formula::and(xs.iter().map(strip_pows).collect()),
        Formula::Or(xs) => Formula::or(xs.iter().map(strip_pows).collect()),
        Formula::Not(x) => Formula::not(strip_pows(x)),
        f => f.clone(),
    }
}

fn smt_int(c: &Z) -> String {
    if c.is_negative() {
        format!("(- {})", -c)
    } else {
        c.to_string()
    }
}

fn smt_rat(r: &crate::rat::Q) -> String {
    if r.is_integer() {
        smt_int(r.numer())
    } else {
        format!("(/ {} {})", smt_int(r.numer()), r.denom())
    }
}

fn smt_poly(p: &Poly, rename: &dyn Fn(&str) -> String) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .terms()
        .map(|(m, c)| {
            let mut fs = Vec::new();
            if !(c == &Z::from(1) && !m.is_one()) {
                fs.push(smt_int(c));
            }
            for (v, e) in m.pairs() {
                for _ in 0..*e {
                    fs.push(rename(v));
                }
            }
            if fs.len() == 1 {
                fs.pop().unwrap()
            } else {
                format!("(* {})", fs.join(" "))
            }
        })
        .collect();
    if terms.len() == 1 {
        terms[0].clone()
    } else {
        format!("(+ {})", terms.join(" "))
    }
}

fn smt_formula(f: &Formula, rename: &dyn Fn(&str) -> String) -> Result<String> {
    Ok(match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Atom(a) => {
            let p = a.poly.laurent_normalized();
            format!("({} {} 0)", a.rel.symbol(), smt_poly(&p, rename))
        }
        Formula::And(xs) | Formula::Or(xs) => {
            let op = if matches!(f, Formula::And(_)) { "and" } else { "or" };
            let parts = xs.iter().map(|x| smt_formula(x, rename)).collect::<Result<Vec<_>>>()?;
            format!("({op} {})", parts.join(" "))
        }
        Formula::Not(x) => format!("(not {})", smt_formula(x, rename)?),
        _ => return err(ErrorKind::Precondition, "emission needs a quantifier-free formula without pow"),
    })
}

/// SMT-LIB2 QF_NRA script asserting ψ with each u_i = ξ^{g_i} built by repeated squaring.
pub fn emit_etr(psi: &Formula, exps: &BTreeMap<String, i64>, base: &BaseDescriptor) -> Result<String> {
    let Some(rep) = &base.algebraic else {
        return err(ErrorKind::NonAlgebraicBase, format!("base {} has no algebraic representation", base.label()));
    };
    let bits = exps.values().map(|g| 64 - g.unsigned_abs().leading_zeros()).max().unwrap_or(0).max(1) as usize;
    let chain: Vec<String> = (0..bits).map(|i| format!("x{i}")).collect();
    let rename = |v: &str| if v == XI { "x0".to_string() } else { v.to_string() };
    let mut s = String::new();
    writeln!(s, "(set-logic QF_NRA)").unwrap();
    let mut names: BTreeSet<String> = chain.iter().cloned().collect();
    names.extend(psi.free_vars());
    names.extend(exps.keys().cloned());
    for n in &names {
        writeln!(s, "(declare-const {n} Real)").unwrap();
    }
    let q = Poly::from_upoly(&rep.q, XI);
    writeln!(s, "(assert (= {} 0))", smt_poly(&q, &rename)).unwrap();
    writeln!(s, "(assert (<= {} x0))", smt_rat(&rep.lo)).unwrap();
    writeln!(s, "(assert (<= x0 {}))", smt_rat(&rep.hi)).unwrap();
    for i in 1..bits {
        writeln!(s, "(assert (= x{i} (* x{} x{})))", i - 1, i - 1).unwrap();
    }
    for (u, g) in exps {
        let mag = g.unsigned_abs();
        let fs: Vec<&str> = (0..bits).filter(|i| mag >> i & 1 == 1).map(|i| chain[i].as_str()).collect();
        let prod = match fs.len() {
            0 => "1".to_string(),
            1 => fs[0].to_string(),
            _ => format!("(* {})", fs.join(" ")),
        };
        match g.cmp(&0) {
            Ordering::Equal => writeln!(s, "(assert (= {u} 1))"),
            Ordering::Greater => writeln!(s, "(assert (= {u} {prod}))"),
            Ordering::Less => writeln!(s, "(assert (= (* {u} {}) 1))", fs.join(" ")),
        }
        .unwrap();
    }
    writeln!(s, "(assert {})", smt_formula(psi, &rename)?).unwrap();
    writeln!(s, "(check-sat)").unwrap();
    Ok(s)
}

/// Human-readable exact value, for witness reporting.
pub fn describe_rational(r: &crate::rat::Q) -> String {
    fmt_q(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::parse_formula;

    fn run(src: &str, base: &BaseDescriptor) -> Verdict {
        solve(&parse_formula(src).unwrap(), base, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn named_instances() {
        let two = BaseDescriptor::natural(2).unwrap();
        let v = run("(exists (x) (and (pow x) (< 3 x) (< x 5)))", &two);
        assert!(v.sat);
        assert_eq!(v.witness["x"].exponent, Some(2));
        assert!(!run("(exists (x) (and (pow x) (= (^ x 2) 2)))", &two).sat);
        let v = run("(exists (x y) (and (pow x) (pow y) (= (+ x y) 12)))", &two);
        assert!(v.sat);
        let mut e: Vec<i64> = v.witness.values().map(|w| w.exponent.unwrap()).collect();
        e.sort();
        assert_eq!(e, vec![2, 3]);
        let half = BaseDescriptor::rational(&crate::rat::frac(1, 2)).unwrap();
        let v = run("(exists (x) (and (pow x) (< 2 x) (< x 5)))", &half);
        assert_eq!(v.witness["x"].exponent, Some(-2));
        let v = run("(exists (x) (and (pow x) (< 3 x) (< x 4)))", &BaseDescriptor::pi());
        assert_eq!(v.witness["x"].exponent, Some(1));
    }

    #[test]
    fn mixed_variables() {
        let two = BaseDescriptor::natural(2).unwrap();
        let v = run("(and (pow x) (< (+ x y) 3) (< 2 y))", &two);
        assert!(v.sat);
        assert!(!run("(and (pow x) (< x y) (< y 0))", &two).sat);
        let v = run("(and (< 3 x) (< x 4))", &two);
        assert!(v.sat);
    }

    #[test]
    fn normalization() {
        let f = parse_formula("(not (< x 0))").unwrap();
        let g = normalize_body(&f).unwrap();
        assert_eq!(g, Formula::or(vec![Formula::eq(Poly::var("x")), Formula::lt(Poly::var("x").neg())]));
        let f = parse_formula("(not (pow x))").unwrap();
        let g = normalize_body(&f).unwrap();
        assert_eq!(g.free_vars().len(), 2);
        let f = parse_formula("(forall (x) (< x 0))").unwrap();
        assert_eq!(normalize_body(&f).unwrap_err().kind, ErrorKind::UniversalQuantifier);
        let two = BaseDescriptor::natural(2).unwrap();
        assert!(run("(and (not (pow x)) (< 3 x) (< x 5))", &two).sat);
        assert!(!run("(and (not (pow x)) (= x 4))", &two).sat);
    }

    #[test]
    fn pure_reals() {
        let one = BaseDescriptor::natural(1).unwrap();
        assert!(run("(and (pow x) (= x 1))", &one).sat);
        assert!(!run("(and (pow x) (= x 2))", &one).sat);
    }

    #[test]
    fn emission() {
        let two = BaseDescriptor::natural(2).unwrap();
        let psi = parse_formula("(= (+ u -32) 0)").unwrap();
        let s = emit_etr(&psi, &BTreeMap::from([("u".to_string(), 5)]), &two).unwrap();
        assert!(s.contains("(assert (= x1 (* x0 x0)))"));
        assert!(s.contains("(assert (= u (* x0 x2)))"));
        assert!(s.ends_with("(check-sat)\n"));
        let s = emit_etr(&psi, &BTreeMap::from([("u".to_string(), -1)]), &two).unwrap();
        assert!(s.contains("(assert (= (* u x0) 1))"));
        let s = emit_etr(&psi, &BTreeMap::from([("u".to_string(), 0)]), &two).unwrap();
        assert!(s.contains("(assert (= u 1))"));
        assert_eq!(emit_etr(&psi, &BTreeMap::new(), &BaseDescriptor::pi()).unwrap_err().kind, ErrorKind::NonAlgebraicBase);
    }
}
