//! Quantifier elimination for variables of degree at most one.

use crate::error::{err, Error, ErrorKind, Result};
use crate::formula::{formula_from_json, formula_to_json, Atom, Formula, Rel};
use crate::poly::Poly;
use num_traits::Zero;
use serde_json::json;
use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::process::{Command, Stdio};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum QeEngine {
    #[default]
    Builtin,
    /// Shell command speaking the JSON delegate protocol.
    Exec(String),
}

impl QeEngine {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "builtin" => Ok(QeEngine::Builtin),
            _ => match s.strip_prefix("exec:") {
                Some(cmd) if !cmd.is_empty() => Ok(QeEngine::Exec(cmd.to_string())),
                _ => err(ErrorKind::Parse, format!("unknown qe engine {s}")),
            },
        }
    }
}

/// Symbolic test point for a variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TestPoint {
    NegInf,
    /// num/den
    Root(Poly, Poly),
    /// num/den + ε
    RootEps(Poly, Poly),
}

impl fmt::Display for TestPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let frac = |f: &mut fmt::Formatter<'_>, n: &Poly, d: &Poly| {
            if d == &Poly::one() {
                write!(f, "{n}")
            } else {
                write!(f, "({n})/({d})")
            }
        };
        match self {
            TestPoint::NegInf => write!(f, "-inf"),
            TestPoint::Root(n, d) => frac(f, n, d),
            TestPoint::RootEps(n, d) => {
                frac(f, n, d)?;
                write!(f, "+eps")
            }
        }
    }
}

/// Negation normal form over `<` and `=` atoms.
pub fn nnf(f: &Formula) -> Result<Formula> {
    nnf_signed(f, true)
}

fn nnf_signed(f: &Formula, pos: bool) -> Result<Formula> {
    Ok(match f {
        Formula::True | Formula::False => {
            if pos {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Atom(a) if pos => Formula::Atom(a.clone()),
        Formula::Atom(a) => match a.rel {
            Rel::Lt => Formula::or(vec![Formula::eq(a.poly.clone()), Formula::lt(a.poly.neg())]),
            Rel::Eq => Formula::or(vec![Formula::lt(a.poly.clone()), Formula::lt(a.poly.neg())]),
        },
        Formula::Pow(_) if pos => f.clone(),
        Formula::Pow(p) => return err(ErrorKind::Precondition, format!("negated pow({p}) must be normalized first")),
        Formula::And(xs) | Formula::Or(xs) => {
            let ys = xs.iter().map(|x| nnf_signed(x, pos)).collect::<Result<Vec<_>>>()?;
            if matches!(f, Formula::And(_)) == pos {
                Formula::and(ys)
            } else {
                Formula::or(ys)
            }
        }
        Formula::Not(x) => nnf_signed(x, !pos)?,
        Formula::Exists(..) | Formula::Forall(..) => {
            return err(ErrorKind::Precondition, "quantifier below the top level")
        }
    })
}

/// (a, b) with p = a·v + b.
pub fn linear_parts(p: &Poly, v: &str) -> Result<(Poly, Poly)> {
    let cs = p.coeffs_in(v);
    if cs.keys().any(|k| *k < 0 || *k > 1) {
        return err(ErrorKind::QeUnsupported, format!("{v} occurs nonlinearly in {p}"));
    }
    let get = |k| cs.get(&k).cloned().unwrap_or_else(Poly::zero);
    Ok((get(1), get(0)))
}

fn nonzero(a: &Poly) -> Formula {
    Formula::or(vec![Formula::lt(a.clone()), Formula::lt(a.neg())])
}

fn both_zero(c: &Poly, d: &Poly) -> Formula {
    Formula::and(vec![Formula::eq(c.clone()), Formula::eq(d.clone())])
}

fn substitute_atom(a: &Atom, v: &str, tp: &TestPoint) -> Result<Formula> {
    let (c, d) = linear_parts(&a.poly, v)?;
    if c.is_zero() {
        return Ok(Formula::Atom(a.clone()));
    }
    Ok(match tp {
        TestPoint::NegInf => match a.rel {
            Rel::Eq => both_zero(&c, &d),
            Rel::Lt => Formula::or(vec![Formula::lt(c.neg()), Formula::and(vec![Formula::eq(c.clone()), Formula::lt(d)])]),
        },
        TestPoint::Root(n, den) => {
            let e = c.mul(n).add(&d.mul(den));
            match a.rel {
                Rel::Eq => Formula::eq(e),
                Rel::Lt => Formula::lt(e.mul(den)),
            }
        }
        TestPoint::RootEps(n, den) => {
            let s = c.mul(n).add(&d.mul(den)).mul(den);
            match a.rel {
                Rel::Eq => both_zero(&c, &d),
                Rel::Lt => Formula::or(vec![Formula::lt(s.clone()), Formula::and(vec![Formula::eq(s), Formula::lt(c)])]),
            }
        }
    })
}

/// φ[v := tp] on an NNF formula.
pub fn substitute_point(phi: &Formula, v: &str, tp: &TestPoint) -> Result<Formula> {
    Ok(phi.try_map_atoms(&mut |a| substitute_atom(a, v, tp))?.simplify_with(&mut |_| None))
}

/// Guarded test points for v in an NNF formula.
pub fn test_points(phi: &Formula, v: &str) -> Result<Vec<(Formula, TestPoint)>> {
    let mut pts = BTreeSet::new();
    for a in phi.atoms() {
        let (c, d) = linear_parts(&a.poly, v)?;
        if c.is_zero() {
            continue;
        }
        let (mut n, mut den) = (d.neg(), c);
        if den.constant_value().is_some_and(|k| k < 0.into()) {
            n = n.neg();
            den = den.neg();
        }
        pts.insert(match a.rel {
            Rel::Eq => TestPoint::Root(n, den),
            Rel::Lt => TestPoint::RootEps(n, den),
        });
    }
    let mut out = vec![(Formula::True, TestPoint::NegInf)];
    for tp in pts {
        let guard = match &tp {
            TestPoint::Root(_, d) | TestPoint::RootEps(_, d) if d.is_constant() => Formula::True,
            TestPoint::Root(_, d) | TestPoint::RootEps(_, d) => nonzero(d),
            TestPoint::NegInf => Formula::True,
        };
        out.push((guard, tp));
    }
    Ok(out)
}

// an equation a·v + b = 0 with a constant, conjoined at the top
fn pinned_point(phi: &Formula, v: &str) -> Result<Option<TestPoint>> {
    let conj: Vec<&Formula> = match phi {
        Formula::And(xs) => xs.iter().collect(),
        f => vec![f],
    };
    for f in conj {
        if let Formula::Atom(a) = f {
            if a.rel == Rel::Eq {
                let (c, d) = linear_parts(&a.poly, v)?;
                if let Some(k) = c.constant_value() {
                    if !k.is_zero() {
                        return Ok(Some(if k < 0.into() {
                            TestPoint::Root(d, c.neg())
                        } else {
                            TestPoint::Root(d.neg(), c)
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// ∃v φ for a quantifier-free φ linear in v.
pub fn eliminate_var(phi: &Formula, v: &str) -> Result<Formula> {
    let phi = nnf(phi)?;
    if !phi.free_vars().contains(v) {
        return Ok(phi);
    }
    if let Formula::Or(xs) = &phi {
        return Ok(Formula::or(xs.iter().map(|x| eliminate_var(x, v)).collect::<Result<_>>()?));
    }
    if let Some(tp) = pinned_point(&phi, v)? {
        return substitute_point(&phi, v, &tp);
    }
    if let Formula::And(xs) = &phi {
        let pos = xs.iter().position(|x| matches!(x, Formula::Or(_)) && x.free_vars().contains(v));
        if let Some(i) = pos {
            let Formula::Or(ds) = &xs[i] else { unreachable!() };
            let mut out = Vec::new();
            for d in ds {
                let mut c = xs.clone();
                c[i] = d.clone();
                out.push(eliminate_var(&Formula::and(c), v)?);
            }
            return Ok(Formula::or(out));
        }
    }
    let mut out = Vec::new();
    for (guard, tp) in test_points(&phi, v)? {
        out.push(Formula::and(vec![guard, substitute_point(&phi, v, &tp)?]));
    }
    Ok(Formula::or(out))
}

/// ∃vars φ through the chosen engine; `tidy` runs after each builtin step.
pub fn qe_eliminate(
    phi: &Formula,
    vars: &[String],
    engine: &QeEngine,
    tidy: &mut dyn FnMut(Formula) -> Result<Formula>,
) -> Result<Formula> {
    if vars.is_empty() {
        return Ok(phi.clone());
    }
    match engine {
        QeEngine::Builtin => {
            let mut f = phi.clone();
            for v in vars.iter().rev() {
                f = tidy(eliminate_var(&f, v)?)?;
            }
            Ok(f)
        }
        QeEngine::Exec(cmd) => delegate(phi, vars, cmd),
    }
}

fn delegate(phi: &Formula, vars: &[String], cmd: &str) -> Result<Formula> {
    let fail = |d: String| Error::new(ErrorKind::DelegateFailure, d);
    let req = json!({"eliminate": vars, "formula": formula_to_json(phi)});
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| fail(e.to_string()))?;
    child
        .stdin
        .take()
        .expect("piped stdin")
        .write_all(req.to_string().as_bytes())
        .map_err(|e| fail(e.to_string()))?;
    let out = child.wait_with_output().map_err(|e| fail(e.to_string()))?;
    if !out.status.success() {
        return Err(fail(format!("{} exited with {}: {}", cmd, out.status, String::from_utf8_lossy(&out.stderr).trim())));
    }
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| fail(format!("bad response: {e}")))?;
    let f = v.get("formula").ok_or_else(|| fail("response lacks formula".into()))?;
    let f = formula_from_json(f).map_err(|e| fail(e.detail))?;
    if vars.iter().any(|x| f.free_vars().contains(x)) || !f.is_quantifier_free() {
        return Err(fail("response still mentions eliminated variables".into()));
    }
    Ok(f)
}

/// Test points for vs in order, each satisfying the remaining existential closure.
pub fn choose_points(
    phi: &Formula,
    vs: &[String],
    holds: &mut dyn FnMut(&Formula) -> Result<bool>,
) -> Result<Option<Vec<(String, TestPoint)>>> {
    let mut phi = nnf(phi)?;
    let mut out = Vec::new();
    for (i, v) in vs.iter().enumerate() {
        let mut psi = phi.clone();
        for w in vs[i + 1..].iter().rev() {
            psi = eliminate_var(&psi, w)?;
        }
        let mut chosen = None;
        for (guard, tp) in test_points(&psi, v)? {
            if holds(&Formula::and(vec![guard, substitute_point(&psi, v, &tp)?]))? {
                chosen = Some(tp);
                break;
            }
        }
        let Some(tp) = chosen else { return Ok(None) };
        phi = substitute_point(&phi, v, &tp)?;
        let exact = matches!(tp, TestPoint::Root(..));
        out.push((v.clone(), tp));
        if !exact {
            break;
        }
    }
    Ok(Some(out))
}
