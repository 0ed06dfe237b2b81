//! Formulas of the existential theory with the power predicate.

use crate::error::{err, Error, ErrorKind, Result};
use crate::poly::{Monomial, Poly};
use crate::rat::Z;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Rel {
    Lt,
    Eq,
}

impl Rel {
    pub fn holds(self, sign: i32) -> bool {
        match self {
            Rel::Lt => sign < 0,
            Rel::Eq => sign == 0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Eq => "=",
        }
    }
}

/// `poly rel 0`
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom {
    pub poly: Poly,
    pub rel: Rel,
}

impl Atom {
    pub fn new(poly: Poly, rel: Rel) -> Self {
        Atom { poly, rel }
    }
}

/// Multiplies the atom's polynomial by the monomial clearing its negative exponents.
pub fn laurent_normalize(a: &Atom) -> Atom {
    Atom::new(a.poly.laurent_normalized(), a.rel)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Pow(Poly),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn atom(poly: Poly, rel: Rel) -> Self {
        Formula::Atom(Atom::new(poly, rel))
    }

    /// p < 0
    pub fn lt(p: Poly) -> Self {
        Self::atom(p, Rel::Lt)
    }

    /// p = 0
    pub fn eq(p: Poly) -> Self {
        Self::atom(p, Rel::Eq)
    }

    /// p ≤ 0
    pub fn le(p: Poly) -> Self {
        Self::or(vec![Self::lt(p.clone()), Self::eq(p)])
    }

    /// a < b
    pub fn less(a: &Poly, b: &Poly) -> Self {
        Self::lt(a.sub(b))
    }

    /// a ≤ b
    pub fn less_eq(a: &Poly, b: &Poly) -> Self {
        Self::le(a.sub(b))
    }

    /// a = b
    pub fn equal(a: &Poly, b: &Poly) -> Self {
        Self::eq(a.sub(b))
    }

    pub fn pow_var(v: &str) -> Self {
        Formula::Pow(Poly::var(v))
    }

    /// Conjunction with flattening and constant absorption.
    pub fn and(items: Vec<Formula>) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(xs) => out.extend(xs),
                f => out.push(f),
            }
        }
        dedup(&mut out);
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction with flattening and constant absorption.
    pub fn or(items: Vec<Formula>) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(xs) => out.extend(xs),
                f => out.push(f),
            }
        }
        dedup(&mut out);
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => false,
            Formula::And(xs) | Formula::Or(xs) => xs.iter().all(|x| x.is_quantifier_free()),
            Formula::Not(x) => x.is_quantifier_free(),
            _ => true,
        }
    }

    /// Applies `f` to every atom, rebuilding connectives with simplification.
    pub fn map_atoms<F: FnMut(&Atom) -> Formula>(&self, f: &mut F) -> Formula {
        self.try_map_atoms(&mut |a| Ok::<_, Error>(f(a))).unwrap()
    }

    pub fn try_map_atoms<E, F: FnMut(&Atom) -> std::result::Result<Formula, E>>(
        &self,
        f: &mut F,
    ) -> std::result::Result<Formula, E> {
        Ok(match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(a)?,
            Formula::Pow(p) => Formula::Pow(p.clone()),
            Formula::And(xs) => {
                let mut out = Vec::with_capacity(xs.len());
                for x in xs {
                    let y = x.try_map_atoms(f)?;
                    if y == Formula::False {
                        return Ok(Formula::False);
                    }
                    out.push(y);
                }
                Formula::and(out)
            }
            Formula::Or(xs) => {
                let mut out = Vec::with_capacity(xs.len());
                for x in xs {
                    let y = x.try_map_atoms(f)?;
                    if y == Formula::True {
                        return Ok(Formula::True);
                    }
                    out.push(y);
                }
                Formula::or(out)
            }
            Formula::Not(x) => Formula::not(x.try_map_atoms(f)?),
            Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(b.try_map_atoms(f)?)),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(b.try_map_atoms(f)?)),
        })
    }

    /// Maps every polynomial, including power-predicate arguments.
    pub fn map_polys<F: FnMut(&Poly) -> Poly>(&self, f: &mut F) -> Formula {
        match self {
            Formula::Atom(a) => Formula::atom(f(&a.poly), a.rel),
            Formula::Pow(p) => Formula::Pow(f(p)),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.map_polys(f)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.map_polys(f)).collect()),
            Formula::Not(x) => Formula::not(x.map_polys(f)),
            Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(b.map_polys(f))),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(b.map_polys(f))),
            c => c.clone(),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.collect_atoms(out)),
            Formula::Not(x) | Formula::Exists(_, x) | Formula::Forall(_, x) => x.collect_atoms(out),
            _ => {}
        }
    }

    /// Every symbol occurring in a polynomial (bound or free), base included.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => out.extend(a.poly.vars()),
            Formula::Pow(p) => out.extend(p.vars()),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.collect_symbols(out)),
            Formula::Not(x) => x.collect_symbols(out),
            Formula::Exists(v, x) | Formula::Forall(v, x) => {
                out.extend(v.iter().cloned());
                x.collect_symbols(out)
            }
            _ => {}
        }
    }

    /// Free variables, the base symbol excluded.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&BTreeSet::new(), &mut out);
        out.remove(crate::poly::XI);
        out
    }

    fn collect_free(&self, bound: &BTreeSet<String>, out: &mut BTreeSet<String>) {
        let add = |p: &Poly, out: &mut BTreeSet<String>| {
            for v in p.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atom(a) => add(&a.poly, out),
            Formula::Pow(p) => add(p, out),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.collect_free(bound, out)),
            Formula::Not(x) => x.collect_free(bound, out),
            Formula::Exists(v, x) | Formula::Forall(v, x) => {
                let mut b = bound.clone();
                b.extend(v.iter().cloned());
                x.collect_free(&b, out)
            }
            _ => {}
        }
    }

    /// Replaces x by a monomial and Laurent-normalizes every atom.
    pub fn substitute(&self, x: &str, m: &Monomial) -> Formula {
        match self {
            Formula::Atom(a) => {
                Formula::Atom(laurent_normalize(&Atom::new(a.poly.substitute_monomial(x, m), a.rel)))
            }
            Formula::Pow(p) => Formula::Pow(p.substitute_monomial(x, m)),
            Formula::And(xs) => Formula::and(xs.iter().map(|f| f.substitute(x, m)).collect()),
            Formula::Or(xs) => Formula::or(xs.iter().map(|f| f.substitute(x, m)).collect()),
            Formula::Not(f) => Formula::not(f.substitute(x, m)),
            Formula::Exists(v, b) if !v.iter().any(|n| n == x) => {
                Formula::Exists(v.clone(), Box::new(b.substitute(x, m)))
            }
            Formula::Forall(v, b) if !v.iter().any(|n| n == x) => {
                Formula::Forall(v.clone(), Box::new(b.substitute(x, m)))
            }
            f => f.clone(),
        }
    }

    /// Evaluates a quantifier-free, power-free formula given atom signs.
    pub fn eval_with<F: FnMut(&Poly) -> Result<i32>>(&self, sign: &mut F) -> Result<bool> {
        match self {
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Atom(a) => Ok(a.rel.holds(sign(&a.poly)?)),
            Formula::And(xs) => {
                for x in xs {
                    if !x.eval_with(sign)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(xs) => {
                for x in xs {
                    if x.eval_with(sign)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Not(x) => Ok(!x.eval_with(sign)?),
            _ => err(ErrorKind::Precondition, "evaluation needs a quantifier-free formula without pow"),
        }
    }

    /// Replaces atoms whose sign is known by constants.
    pub fn simplify_with<F: FnMut(&Poly) -> Option<i32>>(&self, known: &mut F) -> Formula {
        self.map_atoms(&mut |a| {
            let p = canonical_atom_poly(&a.poly, a.rel);
            if let Some(c) = p.constant_value() {
                return bool_formula(a.rel.holds(crate::rat::sign_of(&c)));
            }
            match known(&p) {
                Some(s) => bool_formula(a.rel.holds(s)),
                None => Formula::atom(p, a.rel),
            }
        })
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::And(xs) | Formula::Or(xs) => 1 + xs.iter().map(|x| x.size()).sum::<usize>(),
            Formula::Not(x) | Formula::Exists(_, x) | Formula::Forall(_, x) => 1 + x.size(),
            _ => 1,
        }
    }
}

pub fn bool_formula(b: bool) -> Formula {
    if b {
        Formula::True
    } else {
        Formula::False
    }
}

/// Divides by the positive integer content; equations also get a positive leading term.
pub fn canonical_atom_poly(p: &Poly, rel: Rel) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let g = p.terms().fold(Z::zero(), |g, (_, c)| num_integer::Integer::gcd(&g, c));
    let mut q = if g > Z::from(1) {
        Poly::from_terms(p.terms().map(|(m, c)| (m.clone(), c / &g)))
    } else {
        p.clone()
    };
    if rel == Rel::Eq && q.terms().next().is_some_and(|(_, c)| c.is_negative()) {
        q = q.neg();
    }
    q
}

fn dedup(v: &mut Vec<Formula>) {
    let mut seen = BTreeSet::new();
    v.retain(|f| seen.insert(f.clone()));
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "({} {} 0)", a.rel.symbol(), a.poly),
            Formula::Pow(p) => write!(f, "(pow {p})"),
            Formula::And(xs) | Formula::Or(xs) => {
                write!(f, "({}", if matches!(self, Formula::And(_)) { "and" } else { "or" })?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                write!(f, ")")
            }
            Formula::Not(x) => write!(f, "(not {x})"),
            Formula::Exists(v, x) => write!(f, "(exists ({}) {x})", v.join(" ")),
            Formula::Forall(v, x) => write!(f, "(forall ({}) {x})", v.join(" ")),
        }
    }
}

pub fn poly_to_json(p: &Poly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let exps: BTreeMap<&str, i64> = m.pairs().iter().map(|(v, e)| (v.as_str(), *e)).collect();
            json!({"coeff": c.to_string(), "exps": exps})
        })
        .collect();
    json!({ "terms": terms })
}

pub fn poly_from_json(v: &Value) -> Result<Poly> {
    let bad = || Error::new(ErrorKind::Parse, format!("bad polynomial json {v}"));
    let terms = v.get("terms").and_then(|t| t.as_array()).ok_or_else(bad)?;
    let mut out = Vec::new();
    for t in terms {
        let c: Z = match t.get("coeff") {
            Some(Value::String(s)) => s.parse().map_err(|_| bad())?,
            Some(Value::Number(n)) => Z::from(n.as_i64().ok_or_else(bad)?),
            _ => return Err(bad()),
        };
        let mut pairs = Vec::new();
        if let Some(e) = t.get("exps") {
            for (k, x) in e.as_object().ok_or_else(bad)? {
                pairs.push((k.clone(), x.as_i64().ok_or_else(bad)?));
            }
        }
        out.push((Monomial::from_pairs(pairs), c));
    }
    Ok(Poly::from_terms(out))
}

pub fn formula_to_json(f: &Formula) -> Value {
    match f {
        Formula::True => json!({"op": "true"}),
        Formula::False => json!({"op": "false"}),
        Formula::Atom(a) => json!({"op": "atom", "rel": a.rel.symbol(), "poly": poly_to_json(&a.poly)}),
        Formula::Pow(p) => json!({"op": "pow", "poly": poly_to_json(p)}),
        Formula::And(xs) => json!({"op": "and", "args": xs.iter().map(formula_to_json).collect::<Vec<_>>()}),
        Formula::Or(xs) => json!({"op": "or", "args": xs.iter().map(formula_to_json).collect::<Vec<_>>()}),
        Formula::Not(x) => json!({"op": "not", "arg": formula_to_json(x)}),
        Formula::Exists(v, x) => json!({"op": "exists", "vars": v, "body": formula_to_json(x)}),
        Formula::Forall(v, x) => json!({"op": "forall", "vars": v, "body": formula_to_json(x)}),
    }
}

pub fn formula_from_json(v: &Value) -> Result<Formula> {
    let bad = || Error::new(ErrorKind::Parse, format!("bad formula json {v}"));
    let op = v.get("op").and_then(|o| o.as_str()).ok_or_else(bad)?;
    let args = || -> Result<Vec<Formula>> {
        v.get("args").and_then(|a| a.as_array()).ok_or_else(bad)?.iter().map(formula_from_json).collect()
    };
    let vars = || -> Result<Vec<String>> {
        Ok(v.get("vars")
            .and_then(|a| a.as_array())
            .ok_or_else(bad)?
            .iter()
            .filter_map(|x| x.as_str().map(str::to_string))
            .collect())
    };
    Ok(match op {
        "true" => Formula::True,
        "false" => Formula::False,
        "atom" => {
            let rel = match v.get("rel").and_then(|r| r.as_str()) {
                Some("<") => Rel::Lt,
                Some("=") => Rel::Eq,
                _ => return Err(bad()),
            };
            Formula::atom(poly_from_json(v.get("poly").ok_or_else(bad)?)?, rel)
        }
        "pow" => Formula::Pow(poly_from_json(v.get("poly").ok_or_else(bad)?)?),
        "and" => Formula::And(args()?),
        "or" => Formula::Or(args()?),
        "not" => Formula::not(formula_from_json(v.get("arg").ok_or_else(bad)?)?),
        "exists" => Formula::Exists(vars()?, Box::new(formula_from_json(v.get("body").ok_or_else(bad)?)?)),
        "forall" => Formula::Forall(vars()?, Box::new(formula_from_json(v.get("body").ok_or_else(bad)?)?)),
        _ => return Err(bad()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::XI;

    #[test]
    fn substitute_examples() {
        // (u·v > 3)[z²·ξ / u]
        let f = Formula::less(&Poly::int(3), &Poly::var("u").mul(&Poly::var("v")));
        let m = Monomial::from_pairs([("z".into(), 2), (XI.into(), 1)]);
        let g = f.substitute("u", &m);
        let want = Formula::less(&Poly::int(3), &Poly::term(Z::from(1), m.mul(&Monomial::var("v"))));
        assert_eq!(g, want);
        // (u = 1)[ξ^-1 / u] -> 1 - ξ = 0
        let h = Formula::equal(&Poly::var("u"), &Poly::int(1)).substitute("u", &Monomial::xi_pow(-1));
        assert_eq!(h, Formula::eq(Poly::int(1).sub(&Poly::xi())));
        assert_eq!(f.substitute("w", &m), f);
    }

    #[test]
    fn json_round_trip() {
        let f = Formula::exists(
            vec!["x".into()],
            Formula::and(vec![Formula::pow_var("x"), Formula::less(&Poly::int(3), &Poly::var("x"))]),
        );
        let v = formula_to_json(&f);
        assert_eq!(formula_from_json(&v).unwrap(), f);
    }

    #[test]
    fn connectives_absorb() {
        assert_eq!(Formula::and(vec![Formula::True, Formula::False]), Formula::False);
        assert_eq!(Formula::or(vec![Formula::False]), Formula::False);
        assert_eq!(Formula::or(vec![Formula::True, Formula::lt(Poly::var("x"))]), Formula::True);
    }
}
