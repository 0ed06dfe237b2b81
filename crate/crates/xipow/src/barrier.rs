//! Root barriers σ(d,h) = c·(d+⌈ln h⌉)^k and base descriptors.

use crate::algebraic::AlgebraicNumber;
use crate::creal::{Machine, DEFAULT_ACCURACY_CAP};
use crate::error::{err, Error, ErrorKind, Result};
use crate::rat::{fmt_q, parse_q, pow2, q, qz, Q, Z};
use num_traits::{One, Signed};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    AlgebraicDerived,
    Table,
    UserConfig,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::AlgebraicDerived => "algebraic-derived",
            Provenance::Table => "table",
            Provenance::UserConfig => "user-config",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBarrier {
    pub c: Z,
    pub k: u32,
    pub provenance: Provenance,
}

impl RootBarrier {
    pub fn new(c: Z, k: u32, provenance: Provenance) -> Self {
        RootBarrier { c, k, provenance }
    }

    /// σ(d, h) = c·(d + ⌈ln h⌉)^k.
    pub fn sigma(&self, d: u64, h: &Z) -> Z {
        let s = Z::from(d + ceil_ln(h));
        &self.c * crate::rat::zpow(&s, self.k as u64)
    }
}

/// ⌈ln h⌉ for h ≥ 1, exact.
pub fn ceil_ln(h: &Z) -> u64 {
    if h <= &Z::one() {
        return 0;
    }
    let e = Machine::exp(&Machine::int(1)).with_cap(1 << 24);
    // is e^m ≥ h ?
    let at_least = |m: u64| -> bool {
        if m == 0 {
            return false;
        }
        let hq = qz(h.clone());
        let mut p = 2 * m + h.bits() + 16;
        loop {
            let a = e.approx(p).expect("cap large enough");
            let eps = pow2(-(p as i64));
            let lo = crate::rat::qpow(&(&a - &eps), m as i64);
            if lo >= hq {
                return true;
            }
            let hi = crate::rat::qpow(&(&a + &eps), m as i64);
            if hi < hq {
                return false;
            }
            p *= 2;
        }
    };
    let mut m = ((h.bits() - 1) as f64 * std::f64::consts::LN_2).floor() as u64;
    while !at_least(m) {
        m += 1;
    }
    while m > 0 && at_least(m - 1) {
        m -= 1;
    }
    m
}

/// Barrier (deg q + ⌈ln((deg q + 1)·h(q))⌉, 1) for an algebraic number.
pub fn algebraic_barrier(rep: &AlgebraicNumber) -> RootBarrier {
    let d = rep.q.degree() as u64;
    let h = rep.q.height();
    let c = Z::from(d) + Z::from(ceil_ln(&(Z::from(d + 1) * h)));
    RootBarrier::new(c, 1, Provenance::AlgebraicDerived)
}

/// Constants of the transcendence-measure table that have no closed form.
pub type TableConstants = BTreeMap<String, Z>;

/// Which number a base is.
#[derive(Clone, Debug)]
pub enum BaseKind {
    Natural(Z),
    Rational(Q),
    Algebraic(AlgebraicNumber),
    Pi,
    EPowPi,
    EPowEta(AlgebraicNumber),
    AlphaPowEta(AlgebraicNumber, AlgebraicNumber),
    LnAlpha(AlgebraicNumber),
    LnRatio(AlgebraicNumber, AlgebraicNumber),
    Inverse(Box<BaseKind>),
}

fn short(a: &AlgebraicNumber) -> String {
    match a.is_rational() {
        Some(r) => fmt_q(&r),
        None => a.to_string(),
    }
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseKind::Natural(n) => write!(f, "{n}"),
            BaseKind::Rational(r) => write!(f, "{}", fmt_q(r)),
            BaseKind::Algebraic(a) => write!(f, "{}", short(a)),
            BaseKind::Pi => write!(f, "pi"),
            BaseKind::EPowPi => write!(f, "e^pi"),
            BaseKind::EPowEta(e) => write!(f, "e^{}", short(e)),
            BaseKind::AlphaPowEta(a, e) => write!(f, "{}^{}", short(a), short(e)),
            BaseKind::LnAlpha(a) => write!(f, "ln {}", short(a)),
            BaseKind::LnRatio(a, b) => write!(f, "ln {} / ln {}", short(a), short(b)),
            BaseKind::Inverse(k) => write!(f, "1/({k})"),
        }
    }
}

/// Table row for a transcendental kind: (c, k) with the c constant name if not fixed.
fn table_row(kind: &BaseKind) -> Option<(Option<Z>, &'static str, u32)> {
    // over-approximation: ln d ↦ d, ln ln h ↦ ⌈ln h⌉, 1 + ln d ↦ 2d, denominators ≥ 1
    Some(match kind {
        BaseKind::Pi => (Some(Z::one() << 41u32), "", 4),
        BaseKind::EPowPi => (Some(Z::one() << 61u32), "", 5),
        BaseKind::EPowEta(_) => (None, "c_eta", 5),
        BaseKind::AlphaPowEta(..) => (None, "c_alpha_eta", 5),
        BaseKind::LnAlpha(_) => (None, "c_alpha", 4),
        BaseKind::LnRatio(..) => (None, "c_alpha_beta", 5),
        BaseKind::Inverse(k) => return table_row(k),
        _ => return None,
    })
}

/// Barrier from the transcendence-measure table.
pub fn catalog_barrier(kind: &BaseKind, constants: &TableConstants) -> Result<RootBarrier> {
    let Some((fixed, name, k)) = table_row(kind) else {
        return err(ErrorKind::Precondition, format!("{kind} has no table entry"));
    };
    let c = match fixed {
        Some(c) => c,
        None => match constants.get(name) {
            Some(c) if c.is_positive() => c.clone(),
            Some(_) => return err(ErrorKind::InvalidParams, format!("{name} must be positive")),
            None => return err(ErrorKind::MissingConstant, format!("barrier for {kind} needs {name}")),
        },
    };
    Ok(RootBarrier::new(c, k, Provenance::Table))
}

/// Literal value of the table expression for a row (natural logarithms), h ≥ 16.
pub fn table_expression(kind: &BaseKind, c: f64, d: f64, h: f64) -> Option<f64> {
    let (ld, lh) = (d.ln(), h.ln());
    let llh = lh.ln();
    Some(match kind {
        BaseKind::Pi => 2f64.powi(40) * d * (lh + d * ld) * (1.0 + ld),
        BaseKind::EPowPi => 2f64.powi(60) * d * d * (lh + ld) * (llh + ld) * (1.0 + ld),
        BaseKind::EPowEta(_) => {
            let r = (llh + ld) / (llh + ld.max(1.0).ln());
            c * d * d * (lh + ld) * r * r
        }
        BaseKind::AlphaPowEta(..) => c * d.powi(3) * (lh + ld) * (llh + ld) / (1.0 + ld).powi(2),
        BaseKind::LnAlpha(_) => c * d * d * (lh + d * ld) / (1.0 + ld),
        BaseKind::LnRatio(..) => c * d.powi(3) * (lh + d * ld) / (1.0 + ld).powi(2),
        _ => return None,
    })
}

/// A classified base ξ with its machine and barrier.
#[derive(Clone, Debug)]
pub struct BaseDescriptor {
    pub kind: BaseKind,
    pub machine: Machine,
    pub barrier: Option<RootBarrier>,
    pub transcendental: bool,
    /// Exact representation when ξ is algebraic.
    pub algebraic: Option<AlgebraicNumber>,
    /// ξ itself when it is a positive integer.
    pub natural: Option<Z>,
}

/// Search bound for multiplicative dependence when none is configured.
pub const DEFAULT_DEPENDENCE_BOUND: u64 = 12;

impl BaseDescriptor {
    /// Base equal to an algebraic number, which must be positive.
    pub fn from_algebraic(kind: BaseKind, rep: AlgebraicNumber) -> Result<Self> {
        if rep.sign() <= 0 {
            return err(ErrorKind::InvalidBase, format!("base {rep} is not positive"));
        }
        let natural = rep.is_rational().filter(|r| r.is_integer()).map(|r| r.to_integer());
        Ok(BaseDescriptor {
            kind,
            machine: Machine::algebraic(&rep),
            barrier: Some(algebraic_barrier(&rep)),
            transcendental: false,
            algebraic: Some(rep),
            natural,
        })
    }

    pub fn natural(n: u64) -> Result<Self> {
        Self::from_algebraic(BaseKind::Natural(Z::from(n)), AlgebraicNumber::int(n as i64))
    }

    pub fn rational(r: &Q) -> Result<Self> {
        Self::from_algebraic(BaseKind::Rational(r.clone()), AlgebraicNumber::rational(r))
    }

    pub fn algebraic(rep: &AlgebraicNumber) -> Result<Self> {
        Self::from_algebraic(BaseKind::Algebraic(rep.clone()), rep.clone())
    }

    fn transcendental(kind: BaseKind, machine: Machine, constants: &TableConstants) -> Self {
        let barrier = catalog_barrier(&kind, constants).ok();
        BaseDescriptor { kind, machine, barrier, transcendental: true, algebraic: None, natural: None }
    }

    pub fn pi() -> Self {
        Self::transcendental(BaseKind::Pi, Machine::pi(), &TableConstants::new())
    }

    pub fn e_pow_pi() -> Self {
        Self::transcendental(BaseKind::EPowPi, Machine::exp(&Machine::pi()), &TableConstants::new())
    }

    /// e^η; transcendental unless η = 0.
    pub fn e_pow(eta: &AlgebraicNumber, constants: &TableConstants) -> Result<Self> {
        if eta.sign() == 0 {
            return Self::rational(&q(1));
        }
        Ok(Self::transcendental(BaseKind::EPowEta(eta.clone()), Machine::exp(&eta.machine()), constants))
    }

    /// α^η; algebraic when η is rational.
    pub fn alpha_pow(alpha: &AlgebraicNumber, eta: &AlgebraicNumber, constants: &TableConstants) -> Result<Self> {
        if alpha.sign() <= 0 {
            return err(ErrorKind::InvalidBase, format!("alpha = {alpha} is not positive"));
        }
        let kind = BaseKind::AlphaPowEta(alpha.clone(), eta.clone());
        if alpha.cmp_rational(&Q::one()) == Ordering::Equal {
            return Self::from_algebraic(kind, AlgebraicNumber::int(1));
        }
        if let Some(r) = eta.is_rational() {
            return Self::from_algebraic(kind, alpha.power(&r)?);
        }
        let m = Machine::exp(&Machine::product(&eta.machine(), &Machine::ln(&alpha.machine())));
        Ok(Self::transcendental(kind, m, constants))
    }

    /// ln α with α > 1.
    pub fn ln_alpha(alpha: &AlgebraicNumber, constants: &TableConstants) -> Result<Self> {
        if alpha.cmp_rational(&Q::one()) != Ordering::Greater {
            return err(ErrorKind::InvalidBase, format!("ln of {alpha} is not positive"));
        }
        Ok(Self::transcendental(BaseKind::LnAlpha(alpha.clone()), Machine::ln(&alpha.machine()), constants))
    }

    /// ln α / ln β; rational when α and β are multiplicatively dependent within the bound.
    pub fn ln_ratio(alpha: &AlgebraicNumber, beta: &AlgebraicNumber, constants: &TableConstants, bound: u64) -> Result<Self> {
        for (x, n) in [(alpha, "alpha"), (beta, "beta")] {
            if x.sign() <= 0 {
                return err(ErrorKind::InvalidBase, format!("{n} = {x} is not positive"));
            }
        }
        if beta.cmp_rational(&Q::one()) == Ordering::Equal {
            return err(ErrorKind::InvalidBase, "beta = 1");
        }
        if alpha.cmp_rational(&Q::one()) == Ordering::Equal {
            return err(ErrorKind::InvalidBase, "ln 1 / ln beta = 0");
        }
        let kind = BaseKind::LnRatio(alpha.clone(), beta.clone());
        if let Some((m, n)) = AlgebraicNumber::mult_dependent(alpha, beta, bound)? {
            // α^n = β^m, so ln α / ln β = m / n
            let r = Q::new(Z::from(m), Z::from(n));
            if !r.is_positive() {
                return err(ErrorKind::InvalidBase, format!("ln alpha / ln beta = {}", fmt_q(&r)));
            }
            return Self::from_algebraic(kind, AlgebraicNumber::rational(&r));
        }
        let m = Machine::product(&Machine::ln(&alpha.machine()), &Machine::reciprocal(&Machine::ln(&beta.machine())));
        let d = Self::transcendental(kind, m, constants);
        // the sign of ln α / ln β is that of (α − 1)(β − 1)
        let s = (alpha.cmp_rational(&Q::one()) as i32) * (beta.cmp_rational(&Q::one()) as i32);
        if s < 0 {
            return err(ErrorKind::InvalidBase, "ln alpha / ln beta is negative");
        }
        Ok(d)
    }

    /// Base 1/ξ with the same barrier and transcendence flag.
    pub fn reciprocal(&self) -> Result<Self> {
        let kind = match &self.kind {
            BaseKind::Inverse(k) => (**k).clone(),
            k => BaseKind::Inverse(Box::new(k.clone())),
        };
        match &self.algebraic {
            Some(rep) => {
                let inv = rep.reciprocal()?;
                let natural = inv.is_rational().filter(|r| r.is_integer()).map(|r| r.to_integer());
                Ok(BaseDescriptor {
                    kind,
                    machine: Machine::algebraic(&inv).with_cap(self.machine.cap()),
                    barrier: self.barrier.clone(),
                    transcendental: false,
                    algebraic: Some(inv),
                    natural,
                })
            }
            None => Ok(BaseDescriptor {
                kind,
                machine: Machine::reciprocal(&self.machine),
                barrier: self.barrier.clone(),
                transcendental: self.transcendental,
                algebraic: None,
                natural: None,
            }),
        }
    }

    pub fn with_cap(&self, cap: u64) -> Self {
        let mut d = self.clone();
        d.machine = self.machine.with_cap(cap);
        d
    }

    pub fn with_barrier(&self, b: RootBarrier) -> Self {
        let mut d = self.clone();
        d.barrier = Some(b);
        d
    }

    pub fn label(&self) -> String {
        self.kind.to_string()
    }

    /// Parses the base JSON format and classifies it.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::new(ErrorKind::Parse, format!("base: {m}"));
        let kind = v.get("kind").and_then(|k| k.as_str()).ok_or_else(|| bad("missing kind"))?;
        let mut constants = TableConstants::new();
        if let Some(tc) = v.get("table_constants") {
            let obj = tc.as_object().ok_or_else(|| bad("table_constants must be an object"))?;
            for (k, c) in obj {
                constants.insert(k.clone(), json_int(c)?);
            }
        }
        let bound = match v.get("dependence_bound") {
            Some(b) => b.as_u64().ok_or_else(|| bad("dependence_bound"))?,
            None => DEFAULT_DEPENDENCE_BOUND,
        };
        let num = |key: &str| -> Result<AlgebraicNumber> { json_number(v.get(key).ok_or_else(|| bad(&format!("missing {key}")))?) };
        let mut base = match kind {
            "natural" => {
                let n = json_int(v.get("n").ok_or_else(|| bad("missing n"))?)?;
                if !n.is_positive() {
                    return err(ErrorKind::InvalidBase, format!("natural base {n}"));
                }
                Self::from_algebraic(BaseKind::Natural(n.clone()), AlgebraicNumber::rational(&qz(n)))?
            }
            "rational" => {
                let r = match v.get("value").ok_or_else(|| bad("missing value"))? {
                    Value::String(s) => parse_q(s)?,
                    x => qz(json_int(x)?),
                };
                Self::rational(&r)?
            }
            "algebraic" => Self::algebraic(&AlgebraicNumber::from_json(v)?)?,
            "pi" => Self::pi(),
            "e_pow_pi" => Self::e_pow_pi(),
            "e" => Self::e_pow(&AlgebraicNumber::int(1), &constants)?,
            "e_pow_eta" => Self::e_pow(&num("eta")?, &constants)?,
            "alpha_pow_eta" => Self::alpha_pow(&num("alpha")?, &num("eta")?, &constants)?,
            "ln_alpha" => Self::ln_alpha(&num("alpha")?, &constants)?,
            "ln_ratio" => Self::ln_ratio(&num("alpha")?, &num("beta")?, &constants, bound)?,
            other => return Err(bad(&format!("unknown kind {other}"))),
        };
        if let Some(b) = v.get("barrier") {
            let c = json_int(b.get("c").ok_or_else(|| bad("barrier.c"))?)?;
            let k = b.get("k").and_then(|k| k.as_u64()).ok_or_else(|| bad("barrier.k"))?;
            if !c.is_positive() || k == 0 {
                return err(ErrorKind::InvalidParams, "barrier needs c ≥ 1 and k ≥ 1");
            }
            base.barrier = Some(RootBarrier::new(c, k as u32, Provenance::UserConfig));
        }
        Ok(base.with_cap(v.get("accuracy_cap").and_then(|c| c.as_u64()).unwrap_or(DEFAULT_ACCURACY_CAP)))
    }

    pub fn describe(&self) -> Value {
        json!({
            "base": self.label(),
            "transcendental": self.transcendental,
            "barrier": self.barrier.as_ref().map(|b| json!({"c": b.c.to_string(), "k": b.k, "provenance": b.provenance.as_str()})),
        })
    }
}

fn json_int(v: &Value) -> Result<Z> {
    match v {
        Value::Number(n) => n.as_i64().map(Z::from).ok_or_else(|| Error::new(ErrorKind::Parse, format!("not an integer: {v}"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::new(ErrorKind::Parse, format!("not an integer: {s}"))),
        _ => err(ErrorKind::Parse, format!("not an integer: {v}")),
    }
}

/// An algebraic number, or a rational given as a string or integer.
fn json_number(v: &Value) -> Result<AlgebraicNumber> {
    match v {
        Value::Object(_) => AlgebraicNumber::from_json(v),
        Value::String(s) => Ok(AlgebraicNumber::rational(&parse_q(s)?)),
        Value::Number(_) => Ok(AlgebraicNumber::rational(&qz(json_int(v)?))),
        _ => err(ErrorKind::Parse, format!("not a number: {v}")),
    }
}
