//! Approximation machines: T(n) within 2^-n of the represented real.

use crate::algebraic::AlgebraicNumber;
use crate::error::{err, ErrorKind, Result};
use crate::rat::{ceil_log2, ceil_log2_int, pow2, q, round_dyadic, Q, Z};
use crate::upoly::Sturm;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

pub const DEFAULT_ACCURACY_CAP: u64 = 4096;

/// Evaluation schedule for the exp and ln machines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Inner accuracy from a derivative bound, output rounded.
    Tight,
    /// Inner accuracy exactly as in the textbook construction.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Constant,
    Algebraic,
    Pi,
    ExpOf,
    LnOf,
    Product,
    Reciprocal,
}

enum Kind {
    Constant(Q),
    Algebraic(AlgState),
    Pi,
    Exp(Machine, Schedule),
    Ln(Machine, Schedule),
    Product(Machine, Machine),
    Reciprocal(Machine),
}

struct AlgState {
    rep: AlgebraicNumber,
    sturm: Sturm,
    // successive bisection intervals starting from the canonical one
    steps: Mutex<Vec<(Q, Q)>>,
}

struct Inner {
    kind: Kind,
    cap: u64,
    cache: Mutex<HashMap<u64, Q>>,
}

/// A deterministic map n ↦ T(n) with |value − T(n)| ≤ 2^-n.
#[derive(Clone)]
pub struct Machine(Arc<Inner>);

impl fmt::Debug for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Constant(c) => write!(f, "const({})", crate::rat::fmt_q(c)),
            Kind::Algebraic(s) => write!(f, "alg({})", s.rep),
            Kind::Pi => write!(f, "pi"),
            Kind::Exp(a, _) => write!(f, "exp({a:?})"),
            Kind::Ln(a, _) => write!(f, "ln({a:?})"),
            Kind::Product(a, b) => write!(f, "({a:?} * {b:?})"),
            Kind::Reciprocal(a) => write!(f, "1/({a:?})"),
        }
    }
}

impl Machine {
    fn build(kind: Kind, cap: u64) -> Self {
        Machine(Arc::new(Inner { kind, cap, cache: Mutex::new(HashMap::new()) }))
    }

    pub fn constant(c: Q) -> Self {
        Self::build(Kind::Constant(c), DEFAULT_ACCURACY_CAP)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn algebraic(rep: &AlgebraicNumber) -> Self {
        if rep.lo == rep.hi {
            return Self::constant(rep.lo.clone());
        }
        let sturm = Sturm::new(&rep.q).expect("canonical representation has a nonzero polynomial");
        let st = AlgState { rep: rep.clone(), sturm, steps: Mutex::new(vec![(rep.lo.clone(), rep.hi.clone())]) };
        Self::build(Kind::Algebraic(st), DEFAULT_ACCURACY_CAP)
    }

    pub fn pi() -> Self {
        Self::build(Kind::Pi, DEFAULT_ACCURACY_CAP)
    }

    pub fn exp(a: &Machine) -> Self {
        Self::exp_with(a, Schedule::Tight)
    }

    pub fn exp_with(a: &Machine, s: Schedule) -> Self {
        Self::build(Kind::Exp(a.clone(), s), a.cap())
    }

    pub fn ln(a: &Machine) -> Self {
        Self::ln_with(a, Schedule::Tight)
    }

    pub fn ln_with(a: &Machine, s: Schedule) -> Self {
        Self::build(Kind::Ln(a.clone(), s), a.cap())
    }

    pub fn product(a: &Machine, b: &Machine) -> Self {
        Self::build(Kind::Product(a.clone(), b.clone()), a.cap().max(b.cap()))
    }

    pub fn reciprocal(a: &Machine) -> Self {
        Self::build(Kind::Reciprocal(a.clone()), a.cap())
    }

    pub fn neg(a: &Machine) -> Self {
        Self::product(&Self::int(-1), a)
    }

    pub fn descriptor(&self) -> Descriptor {
        match &self.0.kind {
            Kind::Constant(_) => Descriptor::Constant,
            Kind::Algebraic(_) => Descriptor::Algebraic,
            Kind::Pi => Descriptor::Pi,
            Kind::Exp(..) => Descriptor::ExpOf,
            Kind::Ln(..) => Descriptor::LnOf,
            Kind::Product(..) => Descriptor::Product,
            Kind::Reciprocal(_) => Descriptor::Reciprocal,
        }
    }

    pub fn cap(&self) -> u64 {
        self.0.cap
    }

    pub fn as_constant(&self) -> Option<&Q> {
        match &self.0.kind {
            Kind::Constant(c) => Some(c),
            _ => None,
        }
    }

    /// Same machine with a different accuracy cap on every node.
    pub fn with_cap(&self, cap: u64) -> Self {
        let kind = match &self.0.kind {
            Kind::Constant(c) => Kind::Constant(c.clone()),
            Kind::Algebraic(s) => {
                return Machine::build(
                    Kind::Algebraic(AlgState {
                        rep: s.rep.clone(),
                        sturm: s.sturm.clone(),
                        steps: Mutex::new(s.steps.lock().unwrap().clone()),
                    }),
                    cap,
                )
            }
            Kind::Pi => Kind::Pi,
            Kind::Exp(a, s) => Kind::Exp(a.with_cap(cap), *s),
            Kind::Ln(a, s) => Kind::Ln(a.with_cap(cap), *s),
            Kind::Product(a, b) => Kind::Product(a.with_cap(cap), b.with_cap(cap)),
            Kind::Reciprocal(a) => Kind::Reciprocal(a.with_cap(cap)),
        };
        Machine::build(kind, cap)
    }

    /// T(n).
    pub fn approx(&self, n: u64) -> Result<Q> {
        if let Kind::Constant(c) = &self.0.kind {
            return Ok(c.clone());
        }
        if n > self.0.cap {
            return err(
                ErrorKind::ResourceLimit,
                format!("accuracy {n} exceeds the cap {} for {:?}", self.0.cap, self.descriptor()),
            );
        }
        if let Some(v) = self.0.cache.lock().unwrap().get(&n) {
            return Ok(v.clone());
        }
        let v = self.compute(n)?;
        self.0.cache.lock().unwrap().insert(n, v.clone());
        Ok(v)
    }

    fn compute(&self, n: u64) -> Result<Q> {
        match &self.0.kind {
            Kind::Constant(c) => Ok(c.clone()),
            Kind::Algebraic(s) => Ok(algebraic_approx(s, n)),
            Kind::Pi => Ok(pi_approx(n)),
            Kind::Product(a, b) => {
                let l = ceil_log2(&(a.approx(0)?.abs() + b.approx(0)?.abs() + q(3))).max(0) as u64;
                Ok(a.approx(n + l)? * b.approx(n + l)?)
            }
            Kind::Reciprocal(a) => reciprocal_approx(a, n, self.0.cap),
            Kind::Exp(a, s) => exp_approx(a, n, *s),
            Kind::Ln(a, s) => ln_approx(a, n, *s, self.0.cap),
        }
    }
}

fn algebraic_approx(s: &AlgState, n: u64) -> Q {
    let target = pow2(-(n as i64));
    let p = s.sturm.squarefree();
    let mut steps = s.steps.lock().unwrap();
    if let Some((lo, hi)) = steps.iter().find(|(lo, hi)| hi - lo <= target) {
        return (lo + hi) / q(2);
    }
    loop {
        let (lo, hi) = steps.last().unwrap().clone();
        let mid = (&lo + &hi) / q(2);
        let next = match p.sign_at(&mid) {
            0 => (mid.clone(), mid),
            sm => {
                if sm == p.sign_at(&lo) {
                    (mid, hi)
                } else {
                    (lo, mid)
                }
            }
        };
        let done = &next.1 - &next.0 <= target;
        steps.push(next.clone());
        if done {
            return (next.0 + next.1) / q(2);
        }
    }
}

// Σ_{j<J} (-1)^j / ((2j+1) k^{2j+1}) in fixed point with `bits` fractional bits, error ≤ 2J ulps.
fn arctan_inv_fixed(k: u64, bits: u64, terms: u64) -> Z {
    let k = Z::from(k);
    let k2 = &k * &k;
    let mut p = (Z::one() << bits as usize) / &k;
    let mut acc = Z::zero();
    for j in 0..terms {
        let t = &p / Z::from(2 * j + 1);
        if j % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
        p /= &k2;
    }
    acc
}

// smallest J with (2J+1)·k^{2J+1} ≥ 2^{target}
fn arctan_terms(k: u64, target: u64) -> u64 {
    let bound = Z::one() << target as usize;
    let k = Z::from(k);
    let k2 = &k * &k;
    let mut pw = k.clone();
    let mut j = 0u64;
    while Z::from(2 * j + 1) * &pw < bound {
        j += 1;
        pw *= &k2;
    }
    j
}

/// Machin's formula 16·atan(1/5) − 4·atan(1/239) in fixed point.
fn pi_approx(n: u64) -> Q {
    // truncation tails: 16·tail5 + 4·tail239 ≤ 2^-(n+3) each part
    let j5 = arctan_terms(5, n + 9);
    let j239 = arctan_terms(239, n + 7);
    let guard = 8 + ceil_log2_int(&Z::from(j5 + j239 + 1)) as u64;
    let bits = n + 3 + guard;
    let v = Z::from(16) * arctan_inv_fixed(5, bits, j5) - Z::from(4) * arctan_inv_fixed(239, bits, j239);
    let raw = Q::new(v, Z::one() << bits as usize);
    round_dyadic(&raw, n + 2)
}

fn reciprocal_approx(a: &Machine, n: u64, cap: u64) -> Result<Q> {
    let mut k = 2u64;
    let tk = loop {
        let t = a.approx(k)?;
        if pow2(-(k as i64)) < t.abs() {
            break t;
        }
        k += 1;
        if k > cap {
            return err(ErrorKind::ResourceLimit, "reciprocal of a value indistinguishable from zero");
        }
    };
    let l = 2 * (k + ceil_log2_int(tk.denom()) as u64);
    let s = if tk.is_negative() { q(-1) } else { q(1) };
    let low = tk.abs() - pow2(-(k as i64));
    let tn = a.approx(n + l)?.abs();
    let d = if tn > low { tn } else { low };
    Ok(s / d)
}

// Σ_{j=0}^{m} x^j / j!
fn exp_series(x: &Q, m: u64) -> Q {
    let mut t = Q::one();
    for j in (1..=m).rev() {
        t = Q::one() + x * &t / q(j as i64);
    }
    t
}

fn exp_approx(a: &Machine, n: u64, s: Schedule) -> Result<Q> {
    let t0 = a.approx(0)?;
    let j = t0.abs() + Q::one();
    let cj = crate::rat::ceil(&j);
    match s {
        Schedule::Literal => {
            let m = n + 1 + 8 * u64::try_from(&cj * &cj).unwrap_or(u64::MAX / 4);
            let lj = ceil_log2(&j).max(0) as u64;
            let big_n = n + 1 + 9 * m * m * (lj + 1);
            Ok(exp_series(&a.approx(big_n)?, m))
        }
        Schedule::Tight => {
            // k bounds both |a| and |T_N|; e^k ≤ 2^{2k}
            let k = u64::try_from(&cj).unwrap_or(u64::MAX / 16) + 1;
            let m = n + 3 + 8 * k * k;
            let big_n = n + 3 + 2 * k;
            let raw = exp_series(&a.approx(big_n)?, m);
            Ok(round_dyadic(&raw, n + 2))
        }
    }
}

// 2 Σ_{j=0}^{m} w^{2j+1}/(2j+1), w = (x−1)/(x+1)
fn ln_series(x: &Q, m: u64) -> Q {
    let w = (x - Q::one()) / (x + Q::one());
    if w.is_zero() {
        return Q::zero();
    }
    let w2 = &w * &w;
    let mut t = Q::zero();
    for j in (0..=m).rev() {
        t = Q::one() / q((2 * j + 1) as i64) + &w2 * &t;
    }
    q(2) * w * t
}

/// Integer upper bound on |ln x| for rational x > 0.
pub fn ln_abs_upper(x: &Q) -> u64 {
    let y = if x >= &Q::one() { x.clone() } else { x.recip() };
    // ln y ≤ log2 y ≤ ⌈log2 y⌉
    ceil_log2(&y).max(0) as u64
}

fn ln_approx(a: &Machine, n: u64, s: Schedule, cap: u64) -> Result<Q> {
    let mut k = 0u64;
    let tk = loop {
        let t = a.approx(k)?;
        if pow2(-(k as i64)) < t {
            break t;
        }
        k += 1;
        if k > cap {
            return err(ErrorKind::ResourceLimit, "ln of a value not shown positive");
        }
    };
    let e = pow2(-(k as i64));
    let lo = &tk - &e;
    let hi = &tk + &e;
    let z1 = ln_abs_upper(&lo).max(ln_abs_upper(&hi)).max(1);
    let w = |x: &Q| ((x - Q::one()) / (x + Q::one())).abs();
    let wl = w(&lo);
    let wh = w(&hi);
    let z2 = Q::one() - if wl > wh { wl } else { wh };
    let m_for = |target: u64| -> u64 {
        let v = crate::rat::ceil(&(q((target + 1 + z1) as i64) / (q(2) * &z2)));
        u64::try_from(v).unwrap_or(u64::MAX / 4)
    };
    match s {
        Schedule::Literal => {
            let m = m_for(n);
            let lg = ceil_log2(&(&hi + q(4 * m as i64))).max(0) as u64;
            let big_n = n + 2 + 15 * m * lg;
            Ok(ln_series(&a.approx(big_n)?.abs(), m))
        }
        Schedule::Tight => {
            let t = n + 2;
            let m = m_for(t);
            // |t_M'(x)| ≤ 1/x and T_N ≥ lo/2
            let inv = ceil_log2(&lo.recip()).max(0) as u64;
            let big_n = t + 2 + inv;
            let raw = ln_series(&a.approx(big_n)?.abs(), m);
            Ok(round_dyadic(&raw, n + 2))
        }
    }
}
