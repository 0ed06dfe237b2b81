//! S-expression syntax for polynomials and formulas.

use crate::error::{err, Error, ErrorKind, Result};
use crate::formula::Formula;
use crate::poly::{Monomial, Poly, XI};
use crate::rat::Z;

#[derive(Debug, Clone, PartialEq)]
pub enum Sexp {
    Sym(String),
    List(Vec<Sexp>),
}

pub fn parse_sexp(src: &str) -> Result<Sexp> {
    let toks = tokenize(src);
    let mut pos = 0;
    let s = read(&toks, &mut pos)?;
    if pos != toks.len() {
        return err(ErrorKind::Parse, "trailing input after expression");
    }
    Ok(s)
}

fn tokenize(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut in_comment = false;
    for ch in src.chars() {
        if in_comment {
            in_comment = ch != '\n';
            continue;
        }
        match ch {
            ';' => {
                in_comment = true;
                flush(&mut cur, &mut out);
            }
            '(' | ')' => {
                flush(&mut cur, &mut out);
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => flush(&mut cur, &mut out),
            c => cur.push(c),
        }
    }
    flush(&mut cur, &mut out);
    out
}

fn flush(cur: &mut String, out: &mut Vec<String>) {
    if !cur.is_empty() {
        out.push(std::mem::take(cur));
    }
}

fn read(t: &[String], pos: &mut usize) -> Result<Sexp> {
    let tok = t.get(*pos).ok_or_else(|| Error::new(ErrorKind::Parse, "unexpected end of input"))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match t.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    None => return err(ErrorKind::Parse, "unbalanced parenthesis"),
                    _ => items.push(read(t, pos)?),
                }
            }
        }
        ")" => err(ErrorKind::Parse, "unexpected `)`"),
        s => Ok(Sexp::Sym(s.to_string())),
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub fn poly_from_sexp(s: &Sexp) -> Result<Poly> {
    match s {
        Sexp::Sym(a) => {
            if let Ok(n) = a.parse::<Z>() {
                Ok(Poly::constant(n))
            } else if is_ident(a) {
                Ok(Poly::var(a))
            } else {
                err(ErrorKind::Parse, format!("bad term `{a}`"))
            }
        }
        Sexp::List(items) => {
            let (head, args) = match items.split_first() {
                Some((Sexp::Sym(h), rest)) => (h.as_str(), rest),
                _ => return err(ErrorKind::Parse, "term list needs an operator"),
            };
            let ps = || args.iter().map(poly_from_sexp).collect::<Result<Vec<_>>>();
            match head {
                "+" => Ok(ps()?.iter().fold(Poly::zero(), |a, b| a.add(b))),
                "*" => Ok(ps()?.iter().fold(Poly::one(), |a, b| a.mul(b))),
                "-" => {
                    let v = ps()?;
                    match v.len() {
                        0 => err(ErrorKind::Parse, "`-` needs arguments"),
                        1 => Ok(v[0].neg()),
                        _ => Ok(v[1..].iter().fold(v[0].clone(), |a, b| a.sub(b))),
                    }
                }
                "^" => {
                    if args.len() != 2 {
                        return err(ErrorKind::Parse, "`^` takes two arguments");
                    }
                    let k = match &args[1] {
                        Sexp::Sym(k) => k.parse::<i64>().map_err(|_| Error::new(ErrorKind::Parse, "bad exponent"))?,
                        _ => return err(ErrorKind::Parse, "bad exponent"),
                    };
                    let b = poly_from_sexp(&args[0])?;
                    if k >= 0 {
                        Ok(b.pow(k as u32))
                    } else if b.num_terms() == 1 && b.terms().next().unwrap().1 == &Z::from(1) {
                        // negative powers only of the base symbol or a variable
                        let m: Monomial = b.terms().next().unwrap().0.pow(k);
                        Ok(Poly::term(Z::from(1), m))
                    } else {
                        err(ErrorKind::Parse, "negative exponent on a non-monomial")
                    }
                }
                _ => err(ErrorKind::Parse, format!("unknown term operator `{head}`")),
            }
        }
    }
}

pub fn parse_poly(src: &str) -> Result<Poly> {
    poly_from_sexp(&parse_sexp(src)?)
}

fn var_list(s: &Sexp) -> Result<Vec<String>> {
    match s {
        Sexp::List(xs) => xs
            .iter()
            .map(|x| match x {
                Sexp::Sym(v) if is_ident(v) && v != XI => Ok(v.clone()),
                _ => err(ErrorKind::Parse, "bad bound variable"),
            })
            .collect(),
        Sexp::Sym(v) if is_ident(v) && v != XI => Ok(vec![v.clone()]),
        _ => err(ErrorKind::Parse, "bad variable list"),
    }
}

pub fn formula_from_sexp(s: &Sexp) -> Result<Formula> {
    match s {
        Sexp::Sym(a) if a == "true" => Ok(Formula::True),
        Sexp::Sym(a) if a == "false" => Ok(Formula::False),
        Sexp::Sym(a) => err(ErrorKind::Parse, format!("expected a formula, found `{a}`")),
        Sexp::List(items) => {
            let (head, args) = match items.split_first() {
                Some((Sexp::Sym(h), rest)) => (h.as_str(), rest),
                _ => return err(ErrorKind::Parse, "formula list needs an operator"),
            };
            let fs = || args.iter().map(formula_from_sexp).collect::<Result<Vec<_>>>();
            let two = || -> Result<(Poly, Poly)> {
                if args.len() != 2 {
                    return err(ErrorKind::Parse, format!("`{head}` takes two terms"));
                }
                Ok((poly_from_sexp(&args[0])?, poly_from_sexp(&args[1])?))
            };
            match head {
                "and" => Ok(Formula::And(fs()?)),
                "or" => Ok(Formula::Or(fs()?)),
                "not" if args.len() == 1 => Ok(Formula::not(formula_from_sexp(&args[0])?)),
                "pow" if args.len() == 1 => Ok(Formula::Pow(poly_from_sexp(&args[0])?)),
                "exists" | "forall" if args.len() == 2 => {
                    let vars = var_list(&args[0])?;
                    let body = Box::new(formula_from_sexp(&args[1])?);
                    Ok(if head == "exists" { Formula::Exists(vars, body) } else { Formula::Forall(vars, body) })
                }
                "<" => two().map(|(a, b)| Formula::less(&a, &b)),
                ">" => two().map(|(a, b)| Formula::less(&b, &a)),
                "<=" => two().map(|(a, b)| Formula::less_eq(&a, &b)),
                ">=" => two().map(|(a, b)| Formula::less_eq(&b, &a)),
                "=" => two().map(|(a, b)| Formula::equal(&a, &b)),
                _ => err(ErrorKind::Parse, format!("unknown formula operator `{head}`")),
            }
        }
    }
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    formula_from_sexp(&parse_sexp(src)?)
}
