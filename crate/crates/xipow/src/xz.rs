//! Satisfiability of quantifier-free formulas whose variables range over ξ^Z.

use crate::barrier::{ceil_ln, BaseDescriptor, RootBarrier};
use crate::error::{err, Error, ErrorKind, Result};
use crate::formula::{canonical_atom_poly, Formula, Rel};
use crate::poly::{Monomial, Poly, XI};
use crate::rat::{zpow, Z};
use crate::sign;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

pub const DEFAULT_BRANCH_BUDGET: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Qe,
    /// Every exponent vector in [−B..B]^n.
    Enumerate(i64),
}

#[derive(Clone, Debug)]
pub struct XzOptions {
    pub strategy: Strategy,
    pub branch_budget: u64,
}

impl Default for XzOptions {
    fn default() -> Self {
        XzOptions { strategy: Strategy::Qe, branch_budget: DEFAULT_BRANCH_BUDGET }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct XzStats {
    pub branches: u64,
    pub candidates: u64,
    pub sign_calls: u64,
    pub g_states: u64,
    pub max_g_size: usize,
}

#[derive(Clone, Debug)]
pub struct XzVerdict {
    pub sat: bool,
    pub witness: BTreeMap<String, i64>,
    pub stats: XzStats,
}

/// A finite exponent set, explicit or as [−L..L].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentSet {
    Explicit(BTreeSet<i64>),
    Interval { l: Z, closed_form: bool },
}

impl ExponentSet {
    pub fn contains(&self, g: i64) -> bool {
        match self {
            ExponentSet::Explicit(s) => s.contains(&g),
            ExponentSet::Interval { l, .. } => Z::from(g.abs()) <= *l,
        }
    }
}

/// Possible λ-exponents of p relative to each of its monomials.
pub type GSet = BTreeMap<Monomial, BTreeSet<i64>>;

/// F-set entries: (j, ξ-exponent set, monomial) grouped by (j, monomial).
pub type FSet = BTreeMap<(i64, Monomial), BTreeSet<i64>>;

/// One branch u^j = ξ^k·y^ℓ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Branch {
    pub j: i64,
    pub k: i64,
    pub ell: Monomial,
}

/// How to recover the eliminated exponents from those of the reduced formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Backprop {
    pub u: String,
    pub u_const: i64,
    pub u_lin: Vec<(String, i64)>,
    /// (y, z, j, r): y = j·z + r
    pub ys: Vec<(String, String, i64, i64)>,
}

impl Backprop {
    pub fn apply(&self, a: &mut BTreeMap<String, i64>) {
        let get = |a: &BTreeMap<String, i64>, v: &str| a.get(v).copied().unwrap_or(0);
        let u = self.u_const + self.u_lin.iter().map(|(v, d)| d * get(a, v)).sum::<i64>();
        for (y, z, j, r) in &self.ys {
            let val = j * get(a, z) + r;
            a.remove(z);
            a.insert(y.clone(), val);
        }
        a.insert(self.u.clone(), u);
    }
}

/// Splits p into (monomial without ξ, coefficient polynomial in ξ).
pub fn split_xi(p: &Poly) -> BTreeMap<Monomial, Poly> {
    let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let xi = Poly::term(c.clone(), Monomial::xi_pow(m.exp(XI)));
        let e = out.entry(m.without(XI)).or_default();
        *e = e.add(&xi);
    }
    out.retain(|_, q| !q.is_zero());
    out
}

/// Triples (j, k, s, orientation) with 0 ≤ j < k ≤ n, |s| ≤ g.
pub fn dominant_pair_candidates(n: i64, g: i64) -> Vec<(i64, i64, i64, i32)> {
    let mut out = Vec::new();
    for j in 0..=n {
        for k in j + 1..=n {
            for s in -g..=g {
                for o in [1, -1] {
                    out.push((j, k, s, o));
                }
            }
        }
    }
    out
}

fn budget_err(what: &str, b: u64) -> Error {
    Error::new(ErrorKind::ResourceLimit, format!("{what} exceeded budget {b}"))
}

/// State shared across one solver run: sign cache, G cache, counters.
pub struct XzSolver<'a> {
    base: &'a BaseDescriptor,
    signs: HashMap<Poly, i32>,
    gcache: HashMap<Poly, Rc<GSet>>,
    unsat: HashSet<String>,
    budget: u64,
    step: u64,
    pub stats: XzStats,
}

impl<'a> XzSolver<'a> {
    /// Requires ξ > 1.
    pub fn new(base: &'a BaseDescriptor, budget: u64) -> Result<Self> {
        if sign::cmp_one(base)? != std::cmp::Ordering::Greater {
            return err(ErrorKind::Precondition, format!("base {} is not greater than 1", base.label()));
        }
        Ok(XzSolver {
            base,
            signs: HashMap::new(),
            gcache: HashMap::new(),
            unsat: HashSet::new(),
            budget,
            step: 0,
            stats: XzStats::default(),
        })
    }

    /// Sign of a Laurent polynomial in ξ.
    pub fn sign(&mut self, p: &Poly) -> Result<i32> {
        let key = p.reduce_positive();
        if let Some(s) = self.signs.get(&key) {
            return Ok(*s);
        }
        let s = sign::sign_xi(&key, self.base)?;
        self.signs.insert(key, s);
        Ok(s)
    }

    /// λ-exponent of p(ξ) > 0.
    pub fn lambda(&mut self, p: &Poly) -> Result<i64> {
        if self.sign(p)? <= 0 {
            return err(ErrorKind::Precondition, format!("{p} is not positive"));
        }
        sign::lambda_search(|z| Ok(self.sign(&Poly::xi_pow(z).sub(p))? <= 0))
    }

    /// ⌈log_ξ n⌉ for n ≥ 1.
    pub fn ceil_log(&mut self, n: i64) -> Result<i64> {
        if n <= 1 {
            return Ok(0);
        }
        let z = self.lambda(&Poly::int(n))?;
        Ok(if self.sign(&Poly::xi_pow(z).sub(&Poly::int(n)))? == 0 { z } else { z + 1 })
    }

    /// Constructive G-set of p = Σ q_i(ξ)·m_i.
    pub fn compute_g(&mut self, p: &Poly) -> Result<Rc<GSet>> {
        if let Some(g) = self.gcache.get(p) {
            return Ok(g.clone());
        }
        let mut parts: Vec<(Monomial, Poly, i32)> = Vec::new();
        for (m, q) in split_xi(p) {
            let s = self.sign(&q)?;
            if s != 0 {
                parts.push((m, q, s));
            }
        }
        let n = parts.len();
        if n > 62 {
            return err(ErrorKind::ResourceLimit, "too many monomials for G");
        }
        let mut out = GSet::new();
        let mut visited: HashSet<(Poly, usize, u64)> = HashSet::new();
        let mut stack: Vec<(Poly, usize, u64)> = (0..n).rev().map(|i| (parts[i].1.clone(), i, 1u64 << i)).collect();
        let xm1 = Poly::xi().sub(&Poly::one());
        let xp1 = Poly::xi().add(&Poly::one());
        while let Some((q, last, used)) = stack.pop() {
            if !visited.insert((q.clone(), last, used)) {
                continue;
            }
            self.stats.g_states += 1;
            if self.stats.g_states > self.budget {
                return Err(budget_err("G-set exploration", self.budget));
            }
            let sq = self.sign(&q)?;
            let rest: Vec<usize> = (0..n).filter(|t| used & (1 << t) == 0).collect();
            if sq == 0 {
                for &t in rest.iter().rev() {
                    stack.push((parts[t].1.clone(), t, used | (1 << t)));
                }
                continue;
            }
            let m = parts[last].0.clone();
            if rest.is_empty() {
                if sq > 0 {
                    let z = self.lambda(&q)?;
                    out.entry(m).or_default().insert(z);
                }
                continue;
            }
            if sq > 0 {
                let lo = self.lambda(&q.mul(&xm1))? - 1;
                let hi = self.lambda(&q.mul(&xp1))? - 1;
                out.entry(m).or_default().extend(lo..=hi);
            }
            let s: Poly = rest.iter().fold(Poly::zero(), |acc, &t| acc.add(&parts[t].1.scale(&Z::from(parts[t].2))));
            let aq = q.scale(&Z::from(sq));
            // lo = largest g ≥ 0 with ξ^g·|Q| ≤ Σ_rest |q_t|, or −1; beyond lo + 1 the range above applies
            let fits = |g: i64, me: &mut Self| -> Result<bool> { Ok(me.sign(&s.sub(&aq.mul_monomial(&Monomial::xi_pow(g))))? >= 0) };
            let mut lo = -1i64;
            if fits(0, self)? {
                lo = 0;
                let mut hi = 1i64;
                while fits(hi, self)? {
                    lo = hi;
                    hi *= 2;
                    if hi > 1 << 40 {
                        return err(ErrorKind::ResourceLimit, "gap search overflow");
                    }
                }
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if fits(mid, self)? {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
            for &t in rest.iter().rev() {
                for g in (0..=lo + 1).rev() {
                    stack.push((q.mul_monomial(&Monomial::xi_pow(g)).add(&parts[t].1), t, used | (1 << t)));
                }
            }
        }
        let size = out.values().map(|s| s.len()).sum();
        self.stats.max_g_size = self.stats.max_g_size.max(size);
        let out = Rc::new(out);
        self.gcache.insert(p.clone(), out.clone());
        Ok(out)
    }

    /// Constructive F-set of q viewed as a polynomial in u.
    pub fn compute_f(&mut self, q: &Poly, u: &str) -> Result<FSet> {
        let q = q.laurent_normalized();
        let coeffs: Vec<(i64, Poly)> = q.coeffs_in(u).into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let n = coeffs.iter().map(|(i, _)| *i).max().unwrap_or(0);
        let mut out = FSet::new();
        if n == 0 {
            return Ok(out);
        }
        let g = 1 + self.ceil_log(n)?;
        let spread = g + n;
        let at: BTreeMap<i64, Poly> = coeffs.into_iter().collect();
        let mut seen: HashSet<(i64, i64, i32)> = HashSet::new();
        for (j, k, _s, o) in dominant_pair_candidates(n, g) {
            if !seen.insert((j, k, o)) {
                continue;
            }
            let (Some(pj), Some(pk)) = (at.get(&j), at.get(&k)) else { continue };
            // x^{k−j} = ξ^{s+t}·λ(∓p_j)/λ(±p_k)
            let (a, b) = if o > 0 { (pj.neg(), pk.clone()) } else { (pj.clone(), pk.neg()) };
            let ga = self.compute_g(&a)?;
            let gb = self.compute_g(&b)?;
            for (m1, s1) in ga.iter() {
                for (m2, s2) in gb.iter() {
                    let delta = m1.mul(&m2.inv());
                    let e = out.entry((k - j, delta)).or_default();
                    let diffs: BTreeSet<i64> = s1.iter().flat_map(|g1| s2.iter().map(move |g2| g1 - g2)).collect();
                    for d in diffs {
                        e.extend(d - spread..=d + spread);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Branches u^j = ξ^k·y^ℓ whose disjunction (with φ) is equisatisfiable with ∃u φ.
    pub fn relativise(&mut self, phi: &Formula, u: &str) -> Result<BTreeSet<Branch>> {
        let mut qs: BTreeSet<Poly> = phi
            .atoms()
            .into_iter()
            .filter(|a| a.poly.contains_var(u))
            .map(|a| canonical_atom_poly(&a.poly.reduce_positive(), Rel::Eq))
            .collect();
        qs.insert(Poly::var(u).sub(&Poly::one()));
        let mut out = BTreeSet::new();
        for q in qs {
            for ((j, ell), es) in self.compute_f(&q, u)? {
                for e in es {
                    for l in -1..=1 {
                        if let Some(b) = reduce_branch(j, j * l + e, &ell) {
                            out.insert(b);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn fresh(&mut self, y: &str) -> String {
        self.step += 1;
        let stem = y.split('~').next().unwrap_or(y);
        format!("{stem}~{}", self.step)
    }

    /// Eliminates u under u^j = ξ^k·y^ℓ.
    pub fn remove_u(&mut self, phi: &Formula, u: &str, b: &Branch) -> Vec<(Formula, Backprop)> {
        let ys: Vec<(String, i64)> = b.ell.pairs().to_vec();
        let j = b.j;
        if j == 1 {
            let m = Monomial::xi_pow(b.k).mul(&b.ell);
            let bp = Backprop { u: u.to_string(), u_const: b.k, u_lin: ys.clone(), ys: vec![] };
            return vec![(phi.substitute(u, &m), bp)];
        }
        let mut out = Vec::new();
        for r in remove_u_residues(j, b.k, &ys.iter().map(|(_, d)| *d).collect::<Vec<_>>()) {
            let zs: Vec<String> = ys.iter().map(|(y, _)| self.fresh(y)).collect();
            let mut f = phi.clone();
            let mut back = Vec::new();
            for (i, (y, _)) in ys.iter().enumerate() {
                f = f.substitute(y, &Monomial::var_pow(&zs[i], j).mul(&Monomial::xi_pow(r[i])));
                back.push((y.clone(), zs[i].clone(), j, r[i]));
            }
            let c = (b.k + ys.iter().zip(&r).map(|((_, d), ri)| d * ri).sum::<i64>()) / j;
            let lin: Vec<(String, i64)> = ys.iter().zip(&zs).map(|((_, d), z)| (z.clone(), *d)).collect();
            let m = lin.iter().fold(Monomial::xi_pow(c), |m, (z, d)| m.mul(&Monomial::var_pow(z, *d)));
            f = f.substitute(u, &m);
            out.push((f, Backprop { u: u.to_string(), u_const: c, u_lin: lin, ys: back }));
        }
        out
    }

    /// Replaces atoms of known sign by constants.
    pub fn simplify(&mut self, phi: &Formula) -> Result<Formula> {
        let phi = phi.map_atoms(&mut |a| Formula::atom(canonical_atom_poly(&a.poly.reduce_positive(), a.rel), a.rel));
        let mut failure: Option<Error> = None;
        let out = phi.simplify_with(&mut |p: &Poly| {
            if failure.is_some() {
                return None;
            }
            let r = if p.is_xi_only() {
                self.sign(p).map(Some)
            } else {
                self.uniform_sign(p)
            };
            match r {
                Ok(s) => s,
                Err(e) => {
                    failure = Some(e);
                    None
                }
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    // sign of p when every coefficient has the same sign at ξ
    fn uniform_sign(&mut self, p: &Poly) -> Result<Option<i32>> {
        let mut common = 0;
        for (_, q) in split_xi(p) {
            let s = self.sign(&q)?;
            if s == 0 {
                continue;
            }
            if common == 0 {
                common = s;
            } else if common != s {
                return Ok(None);
            }
        }
        Ok(Some(common))
    }

    fn pick_var(phi: &Formula, vars: &BTreeSet<String>) -> String {
        let key = |v: &String| {
            let atoms = phi.atoms();
            let deg = atoms.iter().map(|a| a.poly.max_exp(v)).max().unwrap_or(0);
            let occ = atoms.iter().filter(|a| a.poly.contains_var(v)).count();
            (deg, occ, v.clone())
        };
        vars.iter().min_by_key(|v| key(v)).cloned().expect("nonempty")
    }

    /// Truth of a variable-free formula.
    pub fn eval_ground(&mut self, phi: &Formula) -> Result<bool> {
        phi.eval_with(&mut |p: &Poly| self.sign(p))
    }

    /// Truth at a concrete exponent assignment.
    pub fn holds_at(&mut self, phi: &Formula, a: &BTreeMap<String, i64>) -> Result<bool> {
        let mut f = phi.clone();
        for v in phi.free_vars() {
            f = f.substitute(&v, &Monomial::xi_pow(a.get(&v).copied().unwrap_or(0)));
        }
        self.stats.candidates += 1;
        self.eval_ground(&f)
    }

    /// A satisfying exponent assignment, by relativisation and substitution.
    pub fn solve_qe(&mut self, phi: &Formula) -> Result<Option<BTreeMap<String, i64>>> {
        let phi = self.simplify(phi)?;
        match phi {
            Formula::False => return Ok(None),
            Formula::True => return Ok(Some(BTreeMap::new())),
            _ => {}
        }
        let vars = phi.free_vars();
        if vars.is_empty() {
            return Ok(if self.eval_ground(&phi)? { Some(BTreeMap::new()) } else { None });
        }
        let key = phi.to_string();
        if self.unsat.contains(&key) {
            return Ok(None);
        }
        self.stats.branches += 1;
        if self.stats.branches > self.budget {
            return Err(budget_err("branch exploration", self.budget));
        }
        let u = Self::pick_var(&phi, &vars);
        let branches = self.relativise(&phi, &u)?;
        if vars.len() == 1 {
            let cands: BTreeSet<i64> = branches.iter().filter(|b| b.k % b.j == 0).map(|b| b.k / b.j).collect();
            for e in cands {
                let a = BTreeMap::from([(u.clone(), e)]);
                if self.holds_at(&phi, &a)? {
                    return Ok(Some(a));
                }
            }
        } else {
            for b in &branches {
                for (f, back) in self.remove_u(&phi, &u, b) {
                    if let Some(mut a) = self.solve_qe(&f)? {
                        back.apply(&mut a);
                        return Ok(Some(a));
                    }
                }
            }
        }
        self.unsat.insert(key);
        Ok(None)
    }

    /// First assignment in [−b..b]^n, lexicographic over sorted variables.
    pub fn solve_enumerate(&mut self, phi: &Formula, b: i64) -> Result<Option<BTreeMap<String, i64>>> {
        let vars: Vec<String> = phi.free_vars().into_iter().collect();
        let mut cur = vec![-b; vars.len()];
        loop {
            let a: BTreeMap<String, i64> = vars.iter().cloned().zip(cur.iter().copied()).collect();
            if self.holds_at(phi, &a)? {
                return Ok(Some(a));
            }
            let mut i = vars.len();
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                if cur[i] < b {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -b;
            }
        }
    }
}

/// Divides (j, k, ℓ) by gcd(j, ℓ); None when the gcd does not divide k.
fn reduce_branch(j: i64, k: i64, ell: &Monomial) -> Option<Branch> {
    let g = ell.pairs().iter().fold(j, |g, (_, d)| g.gcd(d));
    if k % g != 0 {
        return None;
    }
    Some(Branch { j: j / g, k: k / g, ell: ell.pow(1).pairs().iter().fold(Monomial::one(), |m, (v, d)| m.mul(&Monomial::var_pow(v, d / g))) })
}

/// R = {r ∈ [0..j−1]^n : j | k + ℓ·r}.
pub fn remove_u_residues(j: i64, k: i64, ell: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut r = vec![0i64; ell.len()];
    loop {
        let s = k + ell.iter().zip(&r).map(|(a, b)| a * b).sum::<i64>();
        if s.rem_euclid(j) == 0 {
            out.push(r.clone());
        }
        let mut i = r.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if r[i] + 1 < j {
                r[i] += 1;
                break;
            }
            r[i] = 0;
        }
    }
}

/// Strips power predicates on variables, which hold by construction.
fn strip_pow(phi: &Formula) -> Result<Formula> {
    Ok(match phi {
        Formula::Pow(p) => {
            if p.num_terms() == 1 && p.vars().len() == 1 && p.terms().next().is_some_and(|(m, c)| c.is_one() && m.total_degree() == 1) {
                Formula::True
            } else {
                return err(ErrorKind::Precondition, format!("pow of a non-variable {p}"));
            }
        }
        Formula::And(xs) => Formula::and(xs.iter().map(strip_pow).collect::<Result<_>>()?),
        Formula::Or(xs) => Formula::or(xs.iter().map(strip_pow).collect::<Result<_>>()?),
        Formula::Not(x) => Formula::not(strip_pow(x)?),
        Formula::Exists(..) | Formula::Forall(..) => return err(ErrorKind::Precondition, "quantifier inside an xz formula"),
        f => f.clone(),
    })
}

/// Decides ψ over ξ^Z (ξ > 1) and returns a verified witness when satisfiable.
pub fn solve_xz(psi: &Formula, base: &BaseDescriptor, opts: &XzOptions) -> Result<XzVerdict> {
    let psi = strip_pow(psi)?;
    let calls0 = sign::sign_calls();
    let mut s = XzSolver::new(base, opts.branch_budget)?;
    let found = match opts.strategy {
        Strategy::Qe => s.solve_qe(&psi)?,
        Strategy::Enumerate(b) => s.solve_enumerate(&psi, b)?,
    };
    let mut stats = s.stats.clone();
    let verdict = match found {
        Some(mut a) => {
            for v in psi.free_vars() {
                a.entry(v).or_insert(0);
            }
            a.retain(|v, _| psi.free_vars().contains(v));
            if !s.holds_at(&psi, &a)? {
                return err(ErrorKind::Precondition, format!("witness {a:?} failed verification"));
            }
            XzVerdict { sat: true, witness: a, stats: stats.clone() }
        }
        None => XzVerdict { sat: false, witness: BTreeMap::new(), stats: stats.clone() },
    };
    stats.sign_calls = sign::sign_calls() - calls0;
    Ok(XzVerdict { stats, ..verdict })
}

/// mult · base^exp with a possibly huge exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerExpr {
    pub mult: Z,
    pub base: Z,
    pub exp: Exponent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Exact(Z),
    /// a^b · c^d, too large to expand
    Tower { a: Z, b: Z, c: Z, d: Z },
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Exact(e) => write!(f, "{e}"),
            Exponent::Tower { a, b, c, d } => write!(f, "{a}^{b}*{c}^{d}"),
        }
    }
}

impl fmt::Display for PowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.mult.is_one() {
            write!(f, "{}*", self.mult)?;
        }
        write!(f, "{}^({})", self.base, self.exp)
    }
}

/// Largest value that `PowerExpr::value` materializes.
pub const MAX_VALUE_BITS: u64 = 1 << 22;

impl PowerExpr {
    pub fn value(&self) -> Option<Z> {
        let Exponent::Exact(e) = &self.exp else { return None };
        let e = e.to_u64()?;
        if self.base.bits().saturating_mul(e) > MAX_VALUE_BITS {
            return None;
        }
        Some(&self.mult * zpow(&self.base, e))
    }
}

fn exponent(a: &Z, b: u64, c: &Z, d: &Z) -> Exponent {
    let fits = |x: &Z, y: u64| x.bits().saturating_mul(y) <= MAX_VALUE_BITS;
    if c.is_one() && fits(a, b) {
        return Exponent::Exact(zpow(a, b));
    }
    match d.to_u64() {
        Some(dd) if fits(a, b) && fits(c, dd) => Exponent::Exact(zpow(a, b) * zpow(c, dd)),
        _ => Exponent::Tower { a: a.clone(), b: Z::from(b), c: c.clone(), d: d.clone() },
    }
}

/// L = (2^{3c}·D·⌈ln H⌉)^{6n·k^{3n}}.
pub fn g_closed_form(n: u64, c: &Z, k: u32, d: u64, h: &Z) -> PowerExpr {
    let base = pow2z(3 * c) * Z::from(d) * Z::from(ceil_ln(&h.max(&Z::from(8)).clone()));
    PowerExpr { mult: Z::one(), base, exp: exponent(&Z::from(6 * n), 1, &Z::from(k), &Z::from(3 * n)) }
}

/// L = n·(2^{4c}·D·⌈ln H⌉)^{6|M|·k^{3|M|}}.
pub fn f_closed_form(n: u64, m: u64, c: &Z, k: u32, d: u64, h: &Z) -> PowerExpr {
    let base = pow2z(4 * c) * Z::from(d) * Z::from(ceil_ln(&h.max(&Z::from(8)).clone()));
    PowerExpr { mult: Z::from(n), base, exp: exponent(&Z::from(6 * m), 1, &Z::from(k), &Z::from(3 * m)) }
}

/// U = (2^c·⌈ln H⌉)^{D^{32n²}·k^{D^{8n}}}.
pub fn witness_bound_params(n: u64, h: &Z, d: u64, c: &Z, k: u32) -> PowerExpr {
    let base = pow2z(c.clone()) * Z::from(ceil_ln(&h.max(&Z::from(8)).clone()));
    let dz = Z::from(d);
    let d8n = zpow(&dz, 8 * n);
    PowerExpr { mult: Z::one(), base, exp: exponent(&dz, 32 * n * n, &Z::from(k), &d8n) }
}

/// Closed-form bound on witness exponents for ψ under a barrier.
pub fn witness_bound(psi: &Formula, barrier: &RootBarrier) -> PowerExpr {
    let n = psi.free_vars().len() as u64;
    let mut h = Z::from(8);
    let mut deg = 0i64;
    for a in psi.atoms() {
        let p = a.poly.laurent_normalized();
        h = h.max(p.height());
        deg = deg.max(p.total_degree());
    }
    witness_bound_params(n, &h, deg as u64 + 2, &barrier.c, barrier.k)
}

/// Closed-form G-set [−L..L] for p under a barrier.
pub fn compute_g_closed_form(p: &Poly, barrier: &RootBarrier) -> ExponentSet {
    let parts = split_xi(p);
    if parts.is_empty() {
        return ExponentSet::Explicit(BTreeSet::new());
    }
    let mut h = Z::from(8);
    let mut d = 0i64;
    for q in parts.values() {
        let q = q.laurent_normalized();
        h = h.max(q.height());
        d = d.max(q.total_degree() + 2);
    }
    let l = g_closed_form(parts.len() as u64, &barrier.c, barrier.k, d as u64, &h);
    match l.value() {
        Some(l) => ExponentSet::Interval { l, closed_form: true },
        None => ExponentSet::Interval { l: Z::from(-1), closed_form: true },
    }
}

fn pow2z(e: Z) -> Z {
    Z::one() << e.to_usize().expect("small shift")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::parse_formula;

    fn two() -> BaseDescriptor {
        BaseDescriptor::natural(2).unwrap()
    }

    fn solve(src: &str) -> XzVerdict {
        solve_xz(&parse_formula(src).unwrap(), &two(), &XzOptions::default()).unwrap()
    }

    #[test]
    fn small_instances() {
        let v = solve("(= (+ u -8) 0)");
        assert!(v.sat);
        assert_eq!(v.witness["u"], 3);
        assert!(!solve("(= (+ u 1) 0)").sat);
        let v = solve("(and (= (+ (* u v) -8) 0) (< u v))");
        assert!(v.sat);
        assert_eq!(v.witness["u"] + v.witness["v"], 3);
        assert!(v.witness["u"] < v.witness["v"]);
        assert!(solve("(= (+ u -1) 0)").sat);
    }

    #[test]
    fn g_sets() {
        let b = two();
        let mut s = XzSolver::new(&b, 1000).unwrap();
        assert!(s.compute_g(&Poly::zero()).unwrap().is_empty());
        let p = crate::sexp::parse_poly("(* xi z1)").unwrap();
        let g = s.compute_g(&p).unwrap();
        assert!(g[&Monomial::var("z1")].contains(&1));
    }

    #[test]
    fn residues() {
        assert_eq!(remove_u_residues(1, 5, &[3]), vec![vec![0]]);
        assert_eq!(remove_u_residues(3, 1, &[1]), vec![vec![2]]);
        assert!(remove_u_residues(2, 1, &[2]).is_empty());
    }

    #[test]
    fn candidates() {
        assert!(dominant_pair_candidates(0, 1).is_empty());
        assert_eq!(dominant_pair_candidates(1, 1).len(), 6);
        assert!(dominant_pair_candidates(3, 3).len() <= 9 * 7 * 2);
    }

    #[test]
    fn closed_forms() {
        let l = g_closed_form(1, &Z::from(1), 1, 3, &Z::from(8));
        assert_eq!(l.value().unwrap(), Z::from(139314069504u64));
        let u = witness_bound_params(1, &Z::from(8), 3, &Z::from(3), 1);
        assert_eq!(u.base, Z::from(24));
        assert_eq!(u.exp, Exponent::Exact(Z::from(1853020188851841u64)));
        assert!(u.value().is_none());
        let f = f_closed_form(1, 1, &Z::from(3), 1, 3, &Z::from(8));
        assert_eq!(f.value().unwrap(), zpow(&(Z::from(4096 * 9)), 6));
    }
}
