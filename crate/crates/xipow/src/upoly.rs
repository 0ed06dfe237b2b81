//! Dense univariate integer polynomials and real-root counting.

use crate::error::{err, ErrorKind, Result};
use crate::rat::{qz, sign_of, Q, Z};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Coefficients in ascending degree order, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    c: Vec<Z>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
}

impl UPoly {
    pub fn new(mut c: Vec<Z>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Z::from(x)).collect())
    }

    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }

    pub fn constant(a: Z) -> Self {
        Self::new(vec![a])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// x^k
    pub fn monomial(k: usize, a: Z) -> Self {
        let mut c = vec![Z::zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    /// Integer polynomial with root p/q: q·x − p.
    pub fn linear_root(r: &Q) -> Self {
        Self::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn coeffs(&self) -> &[Z] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn height(&self) -> Z {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_else(Z::zero)
    }

    pub fn lc(&self) -> Z {
        self.c.last().cloned().unwrap_or_else(Z::zero)
    }

    pub fn coeff(&self, i: usize) -> Z {
        self.c.get(i).cloned().unwrap_or_else(Z::zero)
    }

    pub fn neg(&self) -> Self {
        UPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Z::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, k: &Z) -> Self {
        Self::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::constant(Z::one());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * Z::from(i)).collect())
    }

    /// Q(x^n).
    pub fn compose_pow(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Z::zero(); self.degree() * n + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * n] = a.clone();
        }
        Self::new(c)
    }

    /// x^d·p(1/x).
    pub fn reverse(&self) -> Self {
        let mut c = self.c.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn content(&self) -> Z {
        self.c.iter().fold(Z::zero(), |g, x| g.gcd(x))
    }

    /// Divides by the content, leading coefficient made positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self::new(self.c.iter().map(|x| x / &g).collect())
    }

    /// Divides by the positive content only.
    fn positive_primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let g = self.content();
        Self::new(self.c.iter().map(|x| x / &g).collect())
    }

    /// Remainder of self by d scaled by a positive factor.
    pub fn pos_prem(&self, d: &Self) -> Self {
        assert!(!d.is_zero());
        let mut r = self.clone();
        let lc = d.lc();
        let alc = lc.abs();
        let dd = d.degree();
        while !r.is_zero() && r.degree() >= dd {
            let k = r.degree() - dd;
            let rl = r.lc();
            // r := |lc|·r − sign(lc)·rl·x^k·d
            let f = if lc.is_negative() { -rl } else { rl };
            r = r.scale(&alc).sub(&d.mul(&Self::monomial(k, f)));
        }
        r.positive_primitive()
    }

    /// Exact quotient over Z when it exists.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut r = self.clone();
        let mut qc = vec![Z::zero(); self.degree() - d.degree() + 1];
        let lc = d.lc();
        while !r.is_zero() && r.degree() >= d.degree() {
            let k = r.degree() - d.degree();
            let (qq, rem) = r.lc().div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&d.mul(&Self::monomial(k, qq.clone())));
            qc[k] = qq;
        }
        if r.is_zero() {
            Some(Self::new(qc))
        } else {
            None
        }
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = o.primitive();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pos_prem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    pub fn squarefree(&self) -> Self {
        if self.is_constant() {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.primitive().div_exact(&g).expect("gcd divides").primitive()
    }

    pub fn eval_q(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + qz(a.clone());
        }
        acc
    }

    /// Sign of p(x) via the integer b^d·p(a/b).
    pub fn sign_at(&self, x: &Q) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let a = x.numer();
        let b = x.denom();
        let mut acc = Z::zero();
        let mut bp = Z::one();
        for c in self.c.iter().rev() {
            acc = acc * a + c * &bp;
            bp *= b;
        }
        sign_of(&acc)
    }

    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let p = self.squarefree();
        let mut seq = vec![p.clone()];
        if p.is_constant() {
            return seq;
        }
        seq.push(p.derivative().positive_primitive());
        loop {
            let n = seq.len();
            let r = seq[n - 2].pos_prem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        seq
    }
}

fn sign_changes(seq: &[UPoly], x: &Q) -> usize {
    let mut last = 0;
    let mut n = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Precomputed Sturm sequence for repeated interval counts.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<UPoly>,
}

impl Sturm {
    pub fn new(q: &UPoly) -> Result<Self> {
        if q.is_zero() {
            return err(ErrorKind::ZeroPoly, "sturm sequence of the zero polynomial");
        }
        Ok(Sturm { seq: q.sturm_sequence() })
    }

    pub fn squarefree(&self) -> &UPoly {
        &self.seq[0]
    }

    /// Number of distinct real roots in the interval with the given openness.
    pub fn count(&self, lo: &Q, hi: &Q, lo_open: bool, hi_open: bool) -> usize {
        let p = &self.seq[0];
        if lo > hi {
            return 0;
        }
        if lo == hi {
            return usize::from(!lo_open && !hi_open && p.sign_at(lo) == 0);
        }
        // V(lo) - V(hi) counts roots in (lo, hi] for a squarefree p.
        let mut n = sign_changes(&self.seq, lo) - sign_changes(&self.seq, hi);
        if !lo_open && p.sign_at(lo) == 0 {
            n += 1;
        }
        if hi_open && p.sign_at(hi) == 0 {
            n -= 1;
        }
        n
    }
}

/// Exact count of distinct real roots of q in the given interval.
pub fn sturm_count(q: &UPoly, lo: &Q, hi: &Q, lo_open: bool, hi_open: bool) -> Result<usize> {
    Ok(Sturm::new(q)?.count(lo, hi, lo_open, hi_open))
}

/// h + 1, an upper bound on the absolute value of every root.
pub fn cauchy_root_bound(p: &UPoly) -> Result<Z> {
    if p.is_constant() {
        return err(ErrorKind::ConstantPoly, "root bound of a constant polynomial");
    }
    Ok(p.height() + Z::one())
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}")?;
                    }
                    write!(f, "x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, q};

    #[test]
    fn spec_counts() {
        let p = UPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(sturm_count(&p, &q(0), &q(2), false, false).unwrap(), 1);
        assert_eq!(sturm_count(&p, &q(-2), &q(2), false, false).unwrap(), 2);
        let r = UPoly::from_i64(&[1, 0, 1]);
        assert_eq!(sturm_count(&r, &q(-10), &q(10), false, false).unwrap(), 0);
        assert_eq!(sturm_count(&UPoly::zero(), &q(0), &q(1), false, false).unwrap_err().kind, ErrorKind::ZeroPoly);
    }

    #[test]
    fn endpoints() {
        // (x-1)(x-2)^2
        let p = UPoly::from_i64(&[-1, 1]).mul(&UPoly::from_i64(&[-2, 1]).pow(2));
        assert_eq!(sturm_count(&p, &q(1), &q(2), false, false).unwrap(), 2);
        assert_eq!(sturm_count(&p, &q(1), &q(2), true, false).unwrap(), 1);
        assert_eq!(sturm_count(&p, &q(1), &q(2), true, true).unwrap(), 0);
        assert_eq!(sturm_count(&p, &q(2), &q(2), false, false).unwrap(), 1);
        assert_eq!(sturm_count(&p, &frac(1, 2), &frac(3, 2), true, true).unwrap(), 1);
    }

    #[test]
    fn bounds() {
        assert_eq!(cauchy_root_bound(&UPoly::from_i64(&[-2, 0, 1])).unwrap(), Z::from(3));
        assert_eq!(cauchy_root_bound(&UPoly::from_i64(&[-5, 1])).unwrap(), Z::from(6));
        assert_eq!(cauchy_root_bound(&UPoly::from_i64(&[1, 0, 0, 7])).unwrap(), Z::from(8));
        assert_eq!(cauchy_root_bound(&UPoly::from_i64(&[3])).unwrap_err().kind, ErrorKind::ConstantPoly);
    }

    #[test]
    fn gcd_and_sign() {
        let a = UPoly::from_i64(&[-2, 0, 1]).mul(&UPoly::from_i64(&[3, 1]));
        let b = UPoly::from_i64(&[-2, 0, 1]).mul(&UPoly::from_i64(&[-7, 2]));
        assert_eq!(a.gcd(&b), UPoly::from_i64(&[-2, 0, 1]));
        let p = UPoly::from_i64(&[-1, 0, 3]);
        assert_eq!(p.sign_at(&frac(1, 2)), -1);
        assert_eq!(p.sign_at(&frac(2, 3)), 1);
        assert_eq!(p.eval_q(&frac(1, 2)), frac(-1, 4));
    }
}
