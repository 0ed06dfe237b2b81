//! Multivariate Laurent polynomials over named variables and the base symbol.

use crate::error::{err, ErrorKind, Result};
use crate::rat::{ceil_log2_int, qpow, qz, Q, Z};
use crate::upoly::UPoly;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// Reserved name of the base symbol.
pub const XI: &str = "xi";

/// Product of variable powers, sorted by name, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(String, i64)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(vec![])
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn var_pow(name: &str, e: i64) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(vec![(name.to_string(), e)])
        }
    }

    pub fn xi_pow(e: i64) -> Self {
        Self::var_pow(XI, e)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, i64)>) -> Self {
        let mut m: BTreeMap<String, i64> = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    pub fn pairs(&self) -> &[(String, i64)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: &str) -> i64 {
        self.0.iter().find(|(n, _)| n == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < o.0.len() {
            if j >= o.0.len() || (i < self.0.len() && self.0[i].0 < o.0[j].0) {
                out.push(self.0[i].clone());
                i += 1;
            } else if i >= self.0.len() || o.0[j].0 < self.0[i].0 {
                out.push(o.0[j].clone());
                j += 1;
            } else {
                let e = self.0[i].1 + o.0[j].1;
                if e != 0 {
                    out.push((self.0[i].0.clone(), e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one();
        }
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), e * k)).collect())
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn without(&self, v: &str) -> Self {
        Monomial(self.0.iter().filter(|(n, _)| n != v).cloned().collect())
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|(_, e)| *e < 0)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(v, _)| v.as_str())
    }

    pub fn eval(&self, at: &HashMap<String, Q>) -> Option<Q> {
        let mut r = Q::one();
        for (v, e) in &self.0 {
            let x = at.get(v)?;
            if x.is_zero() && *e < 0 {
                return None;
            }
            r *= qpow(x, *e);
        }
        Some(r)
    }
}

impl Monomial {
    fn factors(&self) -> Vec<String> {
        self.0.iter().map(|(v, e)| if *e == 1 { v.clone() } else { format!("(^ {v} {e})") }).collect()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts = self.factors();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "(* {})", parts.join(" "))
        }
    }
}

/// Finite map from monomials to nonzero integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Z>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMetrics {
    pub degree: u64,
    pub height: Z,
    pub bit_size: Z,
    pub per_var_degree: BTreeMap<String, u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Z::one())
    }

    pub fn constant(c: Z) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Z::from(c))
    }

    pub fn var(v: &str) -> Self {
        Self::term(Z::one(), Monomial::var(v))
    }

    pub fn xi() -> Self {
        Self::var(XI)
    }

    pub fn xi_pow(e: i64) -> Self {
        Poly::term(Z::one(), Monomial::xi_pow(e))
    }

    pub fn term(c: Z, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Z)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Z) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Z::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Z)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Z> {
        if self.is_zero() {
            Some(Z::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Z {
        self.terms.get(m).cloned().unwrap_or_else(Z::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Z) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Poly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.vars().map(str::to_string)).collect()
    }

    pub fn contains_var(&self, v: &str) -> bool {
        self.terms.keys().any(|m| m.exp(v) != 0)
    }

    /// True when the only symbol is the base.
    pub fn is_xi_only(&self) -> bool {
        self.terms.keys().all(|m| m.vars().all(|v| v == XI))
    }

    pub fn max_exp(&self, v: &str) -> i64 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn min_exp(&self, v: &str) -> i64 {
        self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.keys().any(|m| m.has_negative())
    }

    pub fn height(&self) -> Z {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Z::zero)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Monomial by which to multiply to clear negative exponents.
    pub fn laurent_shift(&self) -> Monomial {
        let mut mins: BTreeMap<String, i64> = BTreeMap::new();
        for m in self.terms.keys() {
            for (v, e) in m.pairs() {
                let x = mins.entry(v.clone()).or_insert(0);
                *x = (*x).min(*e);
            }
        }
        Monomial::from_pairs(mins.into_iter().map(|(v, e)| (v, -e)))
    }

    /// The polynomial times the shift monomial, all exponents nonnegative.
    pub fn laurent_normalized(&self) -> Poly {
        self.mul_monomial(&self.laurent_shift())
    }

    /// Divides out the largest monomial factor and the positive integer content.
    pub fn reduce_positive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut mins: Option<BTreeMap<String, i64>> = None;
        for m in self.terms.keys() {
            let cur: BTreeMap<String, i64> = m.pairs().iter().cloned().collect();
            mins = Some(match mins {
                None => cur,
                Some(prev) => {
                    let mut keys: BTreeSet<String> = prev.keys().cloned().collect();
                    keys.extend(cur.keys().cloned());
                    keys.into_iter()
                        .map(|k| {
                            let a = prev.get(&k).copied().unwrap_or(0);
                            let b = cur.get(&k).copied().unwrap_or(0);
                            (k, a.min(b))
                        })
                        .collect()
                }
            });
        }
        let shift = Monomial::from_pairs(mins.unwrap().into_iter().map(|(v, e)| (v, -e)));
        let g = self.terms.values().fold(Z::zero(), |g, c| num_integer::Integer::gcd(&g, c));
        let p = self.mul_monomial(&shift);
        Poly { terms: p.terms.into_iter().map(|(m, c)| (m, c / &g)).collect() }
    }

    pub fn metrics(&self) -> Result<PolyMetrics> {
        if self.has_negative_exponent() {
            return err(ErrorKind::NegativeExponent, format!("proper Laurent polynomial {self}"));
        }
        let mut per_var_degree = BTreeMap::new();
        for m in self.terms.keys() {
            for (v, e) in m.pairs() {
                let x = per_var_degree.entry(v.clone()).or_insert(0u64);
                *x = (*x).max(*e as u64);
            }
        }
        let degree = self.total_degree().max(0) as u64;
        let height = self.height();
        let m = Z::from(self.terms.len());
        let n = Z::from(per_var_degree.len());
        let bit_size = m * (Z::from(ceil_log2_int(&(height.clone() + Z::one()))) + n * Z::from(degree));
        Ok(PolyMetrics { degree, height, bit_size, per_var_degree })
    }

    /// Replaces v^e by m^e in every term.
    pub fn substitute_monomial(&self, v: &str, m: &Monomial) -> Poly {
        let mut r = Poly::zero();
        for (t, c) in &self.terms {
            let e = t.exp(v);
            let nt = if e == 0 { t.clone() } else { t.without(v).mul(&m.pow(e)) };
            r.add_term(nt, c.clone());
        }
        r
    }

    /// Replaces v by a polynomial; v must occur with nonnegative exponents.
    pub fn substitute_poly(&self, v: &str, p: &Poly) -> Poly {
        let mut r = Poly::zero();
        let mut cache: HashMap<i64, Poly> = HashMap::new();
        for (t, c) in &self.terms {
            let e = t.exp(v);
            assert!(e >= 0, "substitute_poly on a negative exponent");
            let pe = cache.entry(e).or_insert_with(|| p.pow(e as u32)).clone();
            r = r.add(&pe.mul_monomial(&t.without(v)).scale(c));
        }
        r
    }

    /// Coefficients in v: exponent of v ↦ polynomial in the other symbols.
    pub fn coeffs_in(&self, v: &str) -> BTreeMap<i64, Poly> {
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (t, c) in &self.terms {
            out.entry(t.exp(v)).or_default().add_term(t.without(v), c.clone());
        }
        out
    }

    pub fn eval(&self, at: &HashMap<String, Q>) -> Option<Q> {
        let mut r = Q::zero();
        for (m, c) in &self.terms {
            r += m.eval(at)? * qz(c.clone());
        }
        Some(r)
    }

    /// Evaluates the symbols named in `at`, leaving the rest.
    pub fn partial_eval(&self, at: &HashMap<String, Q>) -> (Poly, Z) {
        let mut rq: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coef = qz(c.clone());
            let mut rest = Vec::new();
            for (v, e) in m.pairs() {
                match at.get(v) {
                    Some(x) => coef *= qpow(x, *e),
                    None => rest.push((v.clone(), *e)),
                }
            }
            *rq.entry(Monomial(rest)).or_insert_with(Q::zero) += coef;
        }
        let den = crate::rat::lcm_all(rq.values().map(|x| x.denom()));
        let p = Poly::from_terms(rq.into_iter().map(|(m, x)| (m, (x * qz(den.clone())).to_integer())));
        (p, den)
    }

    /// Sparse univariate view in the base symbol: (exponent, coefficient).
    pub fn xi_terms(&self) -> Option<Vec<(i64, Z)>> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(XI);
            if m.pairs().len() > usize::from(e != 0) {
                return None;
            }
            out.push((e, c.clone()));
        }
        Some(out)
    }

    /// Dense univariate view in `v`, exponents must be nonnegative.
    pub fn to_upoly(&self, v: &str) -> Option<UPoly> {
        let mut c: Vec<Z> = Vec::new();
        for (m, a) in &self.terms {
            let e = m.exp(v);
            if e < 0 || m.pairs().len() > usize::from(e != 0) {
                return None;
            }
            let e = e as usize;
            if c.len() <= e {
                c.resize(e + 1, Z::zero());
            }
            c[e] += a;
        }
        Some(UPoly::new(c))
    }

    pub fn from_upoly(p: &UPoly, v: &str) -> Poly {
        Poly::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| (Monomial::var_pow(v, i as i64), c.clone())))
    }

    pub fn rename(&self, from: &str, to: &str) -> Poly {
        self.substitute_monomial(from, &Monomial::var(to))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    c.to_string()
                } else if c.is_one() {
                    m.to_string()
                } else {
                    format!("(* {c} {})", m.factors().join(" "))
                }
            })
            .collect();
        match parts.len() {
            0 => write!(f, "0"),
            1 => write!(f, "{}", parts[0]),
            _ => write!(f, "(+ {})", parts.join(" ")),
        }
    }
}
