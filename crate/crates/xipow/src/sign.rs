//! Exact signs of integer polynomials at the base ξ.

use crate::barrier::BaseDescriptor;
use crate::error::{err, ErrorKind, Result};
use crate::poly::Poly;
use crate::rat::{ceil_log2_int, pow2, qz, sign_of, sign_q, Q, Z};
use crate::upoly::UPoly;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

/// Default cap on L in the convergence loop.
pub const DEFAULT_L_CAP: u64 = 2048;

static SIGN_CALLS: AtomicU64 = AtomicU64::new(0);

/// Number of sign evaluations so far in this process.
pub fn sign_calls() -> u64 {
    SIGN_CALLS.load(AtomicOrdering::Relaxed)
}

/// Sparse polynomial ((a_1,d_1),…,(a_k,d_k)) with d_1 > … > d_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fewnomial {
    terms: Vec<(Z, u64)>,
}

impl Fewnomial {
    /// Sorts by decreasing exponent, merges repeats, drops zeros.
    pub fn new(terms: impl IntoIterator<Item = (Z, u64)>) -> Self {
        let mut v: Vec<(Z, u64)> = terms.into_iter().collect();
        v.sort_by_key(|t| std::cmp::Reverse(t.1));
        let mut out: Vec<(Z, u64)> = Vec::new();
        for (a, d) in v {
            match out.last_mut() {
                Some((b, e)) if *e == d => *b += a,
                _ => out.push((a, d)),
            }
        }
        out.retain(|(a, _)| !a.is_zero());
        Fewnomial { terms: out }
    }

    pub fn terms(&self) -> &[(Z, u64)] {
        &self.terms
    }

    pub fn from_upoly(p: &UPoly) -> Self {
        Self::new(p.coeffs().iter().enumerate().map(|(i, c)| (c.clone(), i as u64)))
    }

    /// Exact value at n (for testing; exponential in the bit size).
    pub fn eval(&self, n: &Z) -> Z {
        self.terms.iter().map(|(a, d)| a * crate::rat::zpow(n, *d)).sum()
    }
}

// ⌈log_n s⌉ for n ≥ 2, s ≥ 1
fn ceil_log_n(n: &Z, s: &Z) -> u64 {
    let mut k = 0u64;
    let mut p = Z::one();
    while &p < s {
        p *= n;
        k += 1;
    }
    k
}

/// Sign of p(n) by the collapse loop.
pub fn sign_fewnomial(p: &Fewnomial, n: &Z) -> i32 {
    assert!(n >= &Z::one());
    SIGN_CALLS.fetch_add(1, AtomicOrdering::Relaxed);
    if p.terms.is_empty() {
        return 0;
    }
    if n.is_one() {
        return sign_of(&p.terms.iter().map(|(a, _)| a).sum());
    }
    let mut b: Vec<(Z, u64)> = p.terms.clone();
    let mut i = 0;
    let mut rest: Z = b.iter().skip(1).map(|(a, _)| a.abs()).sum();
    while b.len() - i > 1 {
        let (b1, g1) = b[i].clone();
        let g2 = b[i + 1].1;
        let gap = g1 - g2;
        let a1 = b1.abs();
        if !a1.is_zero() {
            // |b1|·n^gap ≥ n^gap > rest as soon as gap ≥ ⌈log_n(rest + 1)⌉
            let len = ceil_log_n(n, &(&rest + 1u32));
            if gap >= len || &a1 * crate::rat::zpow(n, gap) > rest {
                return sign_of(&b1);
            }
        }
        let shifted = b1 * crate::rat::zpow(n, gap);
        rest -= b[i + 1].0.abs();
        b[i + 1].0 += shifted;
        i += 1;
    }
    sign_of(&b[i].0)
}

/// Algorithm 2 working accuracy n = 1 + 2σ + 3d⌈log(h+4)⌉, and σ.
pub fn barrier_accuracy(p: &UPoly, base: &BaseDescriptor) -> Option<(Z, Z)> {
    let b = base.barrier.as_ref()?;
    let d = p.degree() as u64;
    let h = p.height();
    let sigma = b.sigma(d, &h);
    let n = Z::one() + Z::from(2) * &sigma + Z::from(3 * d) * Z::from(ceil_log2_int(&(h + 4u32)));
    Some((n, sigma))
}

/// Sign of p(ξ) through the barrier.
pub fn sign_with_barrier(p: &UPoly, base: &BaseDescriptor) -> Result<i32> {
    if p.is_constant() {
        return Ok(sign_of(&p.coeff(0)));
    }
    SIGN_CALLS.fetch_add(1, AtomicOrdering::Relaxed);
    let Some((n, sigma)) = barrier_accuracy(p, base) else {
        return err(ErrorKind::Precondition, format!("base {} has no barrier", base.label()));
    };
    let cap = base.machine.cap();
    let n = match n.to_u64() {
        Some(n) if n <= cap => n,
        _ => return err(ErrorKind::ResourceLimit, format!("accuracy {n} exceeds cap {cap}")),
    };
    let t = base.machine.approx(n)?;
    let v = p.eval_q(&t);
    let h = qz(p.height());
    let tiny = pow2(-(2 * sigma.to_i64().unwrap_or(i64::MAX / 4)) - 1);
    if v.abs() <= tiny && t.abs() < h + Q::from_integer(Z::from(2)) {
        return Ok(0);
    }
    Ok(sign_q(&v))
}

/// Sign of p(ξ) for transcendental ξ: never zero for non-constant p.
pub fn sign_transcendental(p: &UPoly, base: &BaseDescriptor, l_cap: u64) -> Result<i32> {
    if p.is_constant() {
        return Ok(sign_of(&p.coeff(0)));
    }
    if !base.transcendental {
        return err(ErrorKind::Precondition, format!("base {} is not known to be transcendental", base.label()));
    }
    SIGN_CALLS.fetch_add(1, AtomicOrdering::Relaxed);
    let t0 = base.machine.approx(0)?;
    let lh = ceil_log2_int(&(p.height() + 1u32)) as u64;
    let lt = crate::rat::ceil_log2(&(t0.abs() + Q::from_integer(Z::from(2)))) as u64;
    let extra = lh + 2 * p.degree() as u64 * lt;
    let cap = base.machine.cap();
    for l in 1..=l_cap {
        let m = l + extra;
        if m > cap {
            return err(ErrorKind::ResourceLimit, format!("accuracy {m} exceeds cap {cap}"));
        }
        let v = p.eval_q(&base.machine.approx(m)?);
        if v.abs() > pow2(-(l as i64)) {
            return Ok(sign_q(&v));
        }
    }
    err(ErrorKind::ResourceLimit, format!("no decision within L ≤ {l_cap}"))
}

/// Sign of p(ξ), routed to the applicable exact method.
pub fn sign(p: &UPoly, base: &BaseDescriptor) -> Result<i32> {
    if p.is_constant() {
        return Ok(sign_of(&p.coeff(0)));
    }
    if let Some(n) = &base.natural {
        return Ok(sign_fewnomial(&Fewnomial::from_upoly(p), n));
    }
    let feasible = barrier_accuracy(p, base).map(|(n, _)| n <= Z::from(base.machine.cap()));
    match feasible {
        Some(true) => sign_with_barrier(p, base),
        _ if base.transcendental => sign_transcendental(p, base, DEFAULT_L_CAP),
        Some(false) => sign_with_barrier(p, base),
        None => err(ErrorKind::UndecidableBase, format!("base {} has neither a barrier nor a transcendence proof", base.label())),
    }
}

/// Sign at ξ of a Laurent polynomial in ξ alone.
pub fn sign_xi(p: &Poly, base: &BaseDescriptor) -> Result<i32> {
    let Some(terms) = p.xi_terms() else {
        return err(ErrorKind::Precondition, format!("{p} has variables other than xi"));
    };
    if terms.is_empty() {
        return Ok(0);
    }
    let lo = terms.iter().map(|(e, _)| *e).min().unwrap();
    if let Some(n) = &base.natural {
        let f = Fewnomial::new(terms.iter().map(|(e, c)| (c.clone(), (e - lo) as u64)));
        return Ok(sign_fewnomial(&f, n));
    }
    let hi = terms.iter().map(|(e, _)| *e).max().unwrap();
    let mut c = vec![Z::zero(); (hi - lo + 1) as usize];
    for (e, a) in terms {
        c[(e - lo) as usize] = a;
    }
    sign(&UPoly::new(c), base)
}

/// Order of ξ against 1.
pub fn cmp_one(base: &BaseDescriptor) -> Result<Ordering> {
    if let Some(rep) = &base.algebraic {
        return Ok(rep.cmp_rational(&Q::one()));
    }
    Ok(sign(&UPoly::from_i64(&[-1, 1]), base)?.cmp(&0))
}

/// λ-exponent of p(ξ) > 0: the z with ξ^z ≤ p(ξ) < ξ^{z+1}. Requires ξ > 1.
pub fn lambda_floor(p: &Poly, base: &BaseDescriptor) -> Result<i64> {
    if sign_xi(p, base)? <= 0 {
        return err(ErrorKind::Precondition, format!("{p} is not positive at the base"));
    }
    // f(z) true iff ξ^z ≤ p(ξ)
    let f = |z: i64| -> Result<bool> { Ok(sign_xi(&Poly::xi_pow(z).sub(p), base)? <= 0) };
    lambda_search(f)
}

/// Largest z with f(z), for f monotone decreasing (true then false).
pub fn lambda_search(mut f: impl FnMut(i64) -> Result<bool>) -> Result<i64> {
    let (mut lo, mut hi);
    if f(0)? {
        lo = 0;
        let mut step = 1i64;
        loop {
            if !f(step)? {
                hi = step;
                break;
            }
            lo = step;
            step = step.checked_mul(2).ok_or_else(|| crate::error::Error::new(ErrorKind::ResourceLimit, "λ search overflow"))?;
        }
    } else {
        hi = 0;
        let mut step = -1i64;
        loop {
            if f(step)? {
                lo = step;
                break;
            }
            hi = step;
            step = step.checked_mul(2).ok_or_else(|| crate::error::Error::new(ErrorKind::ResourceLimit, "λ search overflow"))?;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
