//! Algebraic numbers as (q, lo, hi): the unique root of q in [lo, hi].

use crate::creal::Machine;
use crate::error::{err, Error, ErrorKind, Result};
use crate::rat::{ceil, floor, floor_log2, fmt_q, parse_q, pow2, q, qpow, qz, Q, Z};
use crate::upoly::{Sturm, UPoly};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraicNumber {
    pub q: UPoly,
    pub lo: Q,
    pub hi: Q,
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.q, fmt_q(&self.lo), fmt_q(&self.hi))
    }
}

/// Canonical representation of the unique root of q in [lo, hi].
pub fn canonicalize(q: &UPoly, lo: &Q, hi: &Q) -> Result<AlgebraicNumber> {
    if q.is_zero() {
        return err(ErrorKind::ZeroPoly, "algebraic number with the zero polynomial");
    }
    if lo > hi {
        return err(ErrorKind::NotUniqueRoot, "empty interval");
    }
    let st = Sturm::new(q)?;
    let n = st.count(lo, hi, false, false);
    if n != 1 {
        return err(ErrorKind::NotUniqueRoot, format!("{n} roots of {q} in [{}, {}]", fmt_q(lo), fmt_q(hi)));
    }
    let point = |x: &Q| AlgebraicNumber { q: q.clone(), lo: x.clone(), hi: x.clone() };
    if lo == hi || q.sign_at(lo) == 0 {
        return Ok(point(lo));
    }
    if q.sign_at(hi) == 0 {
        return Ok(point(hi));
    }
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    loop {
        // integers strictly inside (lo, hi)
        let a = floor(&lo) + Z::one();
        let b = ceil(&hi) - Z::one();
        if a > b {
            return Ok(AlgebraicNumber { q: q.clone(), lo, hi });
        }
        let k = qz((&a + &b) / Z::from(2));
        if q.sign_at(&k) == 0 {
            return Ok(point(&k));
        }
        if st.count(&lo, &k, true, true) == 1 {
            hi = k;
        } else {
            lo = k;
        }
    }
}

impl AlgebraicNumber {
    pub fn rational(r: &Q) -> Self {
        AlgebraicNumber { q: UPoly::linear_root(r), lo: r.clone(), hi: r.clone() }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(&q(n))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Checks the representation invariants.
    pub fn is_canonical(&self) -> bool {
        if self.q.is_zero() || self.lo > self.hi {
            return false;
        }
        if self.is_point() {
            return self.q.sign_at(&self.lo) == 0;
        }
        let st = match Sturm::new(&self.q) {
            Ok(s) => s,
            Err(_) => return false,
        };
        st.count(&self.lo, &self.hi, false, false) == 1
            && st.count(&self.lo, &self.hi, true, true) == 1
            && floor(&self.lo) + Z::one() > ceil(&self.hi) - Z::one()
    }

    /// Interval of width ≤ 2^-l still isolating the number.
    pub fn refine(&self, l: u64) -> (Q, Q) {
        if self.is_point() {
            return (self.lo.clone(), self.hi.clone());
        }
        let target = pow2(-(l as i64));
        let p = self.q.squarefree();
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        let slo = p.sign_at(&lo);
        while &hi - &lo > target {
            let mid = (&lo + &hi) / q(2);
            match p.sign_at(&mid) {
                0 => return (mid.clone(), mid),
                s if s == slo => lo = mid,
                _ => hi = mid,
            }
        }
        (lo, hi)
    }

    pub fn refined(&self, l: u64) -> AlgebraicNumber {
        let (lo, hi) = self.refine(l);
        AlgebraicNumber { q: self.q.clone(), lo, hi }
    }

    /// Compares the number with a rational.
    pub fn cmp_rational(&self, c: &Q) -> Ordering {
        if self.is_point() {
            return self.lo.cmp(c);
        }
        if c <= &self.lo {
            return Ordering::Greater;
        }
        if c >= &self.hi {
            return Ordering::Less;
        }
        if self.q.sign_at(c) == 0 {
            return Ordering::Equal;
        }
        let p = self.q.squarefree();
        if p.sign_at(c) == p.sign_at(&self.lo) {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn sign(&self) -> i32 {
        match self.cmp_rational(&Q::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Exact rational value when the number is rational.
    pub fn is_rational(&self) -> Option<Q> {
        if self.is_point() {
            return Some(self.lo.clone());
        }
        // a reduced root p/d of q has d | lc(q); two such rationals are ≥ 1/lc² apart
        let p = self.q.squarefree();
        let a = p.lc().abs();
        let l = 2 * crate::rat::ceil_log2_int(&a) as u64 + 2;
        let (lo, hi) = self.refine(l);
        if lo == hi {
            return Some(lo);
        }
        let s = simplest_between(&lo, &hi);
        if s.denom() <= &a && p.sign_at(&s) == 0 {
            Some(s)
        } else {
            None
        }
    }

    /// Equality of two represented numbers.
    pub fn equals(&self, o: &AlgebraicNumber) -> bool {
        let lo = if self.lo > o.lo { &self.lo } else { &o.lo };
        let hi = if self.hi < o.hi { &self.hi } else { &o.hi };
        if lo > hi {
            return false;
        }
        let g = self.q.gcd(&o.q);
        if g.is_constant() {
            return false;
        }
        Sturm::new(&g).map(|s| s.count(lo, hi, false, false) >= 1).unwrap_or(false)
    }

    /// The number multiplied by a nonzero rational r.
    pub fn scale(&self, r: &Q) -> Result<AlgebraicNumber> {
        if r.is_zero() {
            return Ok(AlgebraicNumber::int(0));
        }
        // root of Σ c_i (b/a)^i x^i · a^deg for r = a/b
        let (a, b) = (r.numer().clone(), r.denom().clone());
        let d = self.q.degree();
        let c: Vec<Z> = (0..=d)
            .map(|i| self.q.coeff(i) * crate::rat::zpow(&b, i as u64) * crate::rat::zpow(&a, (d - i) as u64))
            .collect();
        let (x, y) = (&self.lo * r, &self.hi * r);
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        canonicalize(&UPoly::new(c), &lo, &hi)
    }

    pub fn machine(&self) -> Machine {
        Machine::algebraic(self)
    }

    /// Representation of the reciprocal, by coefficient reversal.
    pub fn reciprocal(&self) -> Result<AlgebraicNumber> {
        let a = self.positive_form()?;
        canonicalize(&a.q.reverse(), &a.hi.recip(), &a.lo.recip())
    }

    // same number with lo > 0
    fn positive_form(&self) -> Result<AlgebraicNumber> {
        if self.sign() <= 0 {
            return err(ErrorKind::NonpositiveBase, format!("{self} is not positive"));
        }
        let mut a = self.clone();
        let mut l = 1;
        while a.lo <= Q::zero() {
            a = self.refined(l);
            l += 1;
        }
        Ok(a)
    }

    /// Representation of the number raised to a rational power.
    pub fn power(&self, r: &Q) -> Result<AlgebraicNumber> {
        let a = self.positive_form()?;
        if r.is_zero() {
            return Ok(AlgebraicNumber { q: UPoly::from_i64(&[-1, 1]), lo: q(1), hi: q(1) });
        }
        if r.is_negative() {
            return a.reciprocal()?.power(&-r);
        }
        let m = r.numer().clone();
        let n = r.denom().clone();
        let mu = u64::try_from(&m).map_err(|_| Error::new(ErrorKind::ResourceLimit, "exponent too large"))?;
        let nu = usize::try_from(&n).map_err(|_| Error::new(ErrorKind::ResourceLimit, "exponent too large"))?;
        let base_q = if a.is_point() { UPoly::linear_root(&a.lo) } else { a.q.squarefree() };
        let big_q = relation_for_power(&base_q, mu);
        let qp = big_q.compose_pow(nu).primitive();
        if qp.degree() == 1 {
            let v = Q::new(-qp.coeff(0), qp.coeff(1));
            return Ok(AlgebraicNumber { q: qp, lo: v.clone(), hi: v });
        }
        if a.is_point() && nu == 1 {
            let v = qpow(&a.lo, mu as i64);
            return canonicalize(&qp, &v, &v);
        }
        // root separation of q'
        let d = qp.degree() as i64;
        let h = qz(qp.height());
        let sep = pow2(-d - 1) * qpow(&q(d), -4 * d) * qpow(&h, -2 * d);
        // bound on the derivative of x^r over the interval
        let rm1 = r - Q::one();
        let e = crate::rat::ceil(&rm1.abs());
        let e = i64::try_from(e).unwrap_or(i64::MAX / 4);
        let big = if rm1 >= Q::zero() { a.hi.clone() } else { a.lo.recip() };
        let growth = if big > Q::one() { qpow(&big, e) } else { Q::one() };
        let delta = r * growth;
        let want = &sep / (q(2) * &delta);
        let l = (-floor_log2(&want)).max(0) as u64 + 1;
        let shrunk = if a.is_point() { a.clone() } else { a.refined(l) };
        let big_m = (-floor_log2(&sep)).max(1) as u64;
        let t = root_power_machine(&shrunk.lo, r);
        let tp = root_power_machine(&shrunk.hi, r);
        let acc = big_m + 3;
        let eps = pow2(-(acc as i64));
        let lo = t.approx(acc)?.abs() - &eps;
        let hi = tp.approx(acc)?.abs() + &eps;
        canonicalize(&qp, &lo, &hi)
    }

    /// Smallest (|n|, |m|) with a^n = b^m, searching |m|, |n| ≤ bound.
    pub fn mult_dependent(a: &AlgebraicNumber, b: &AlgebraicNumber, bound: u64) -> Result<Option<(i64, i64)>> {
        for (x, name) in [(a, "first"), (b, "second")] {
            if x.cmp_rational(&Q::zero()) == Ordering::Equal || x.cmp_rational(&Q::one()) == Ordering::Equal {
                return err(ErrorKind::DegenerateInput, format!("{name} argument is 0 or 1"));
            }
        }
        let bound = bound as i64;
        let mut b_pows: Vec<(i64, AlgebraicNumber)> = Vec::new();
        for k in 0..=bound {
            for m in if k == 0 { vec![0] } else { vec![k, -k] } {
                b_pows.push((m, b.power(&q(m))?));
            }
        }
        for n in 1..=bound {
            let an = a.power(&q(n))?;
            for (m, bm) in &b_pows {
                if an.equals(bm) {
                    return Ok(Some((*m, n)));
                }
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "poly": self.q.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "lo": fmt_q(&self.lo),
            "hi": fmt_q(&self.hi),
        })
    }

    /// Accepts `{"poly":[...],"lo":..,"hi":..}` and canonicalizes.
    pub fn from_json(v: &Value) -> Result<AlgebraicNumber> {
        let bad = || Error::new(ErrorKind::Parse, format!("bad algebraic number {v}"));
        let coeffs = v.get("poly").and_then(|p| p.as_array()).ok_or_else(bad)?;
        let mut c = Vec::new();
        for x in coeffs {
            c.push(match x {
                Value::Number(n) => Z::from(n.as_i64().ok_or_else(bad)?),
                Value::String(s) => s.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            });
        }
        let rq = |k: &str| -> Result<Q> {
            match v.get(k).ok_or_else(bad)? {
                Value::String(s) => parse_q(s),
                Value::Number(n) => Ok(q(n.as_i64().ok_or_else(bad)?)),
                _ => Err(bad()),
            }
        };
        canonicalize(&UPoly::new(c), &rq("lo")?, &rq("hi")?)
    }
}

/// Integer polynomial Q with Q(α^m) = 0 for a root α of p (deg p ≥ 1).
fn relation_for_power(p: &UPoly, m: u64) -> UPoly {
    let d = p.degree();
    let lc = qz(p.lc());
    // x·v reduced modulo p, v in the basis 1, α, …, α^{d−1}
    let mu_d: Vec<Q> = (0..d).map(|i| -qz(p.coeff(i)) / &lc).collect();
    let times_x = |v: &[Q]| -> Vec<Q> {
        let top = v[d - 1].clone();
        let mut w = vec![Q::zero(); d];
        w[1..d].clone_from_slice(&v[..d - 1]);
        for (wi, mi) in w.iter_mut().zip(&mu_d) {
            *wi += &top * mi;
        }
        w
    };
    let mut cur = vec![Q::zero(); d];
    cur[0] = Q::one();
    let mut vecs: Vec<Vec<Q>> = vec![cur.clone()];
    for _ in 1..=d {
        for _ in 0..m {
            cur = times_x(&cur);
        }
        vecs.push(cur.clone());
        if let Some(kernel) = kernel_last(&vecs) {
            let den = crate::rat::lcm_all(kernel.iter().map(|x| x.denom()));
            let c: Vec<Z> = kernel.iter().map(|x| (x * qz(den.clone())).to_integer()).collect();
            return UPoly::new(c).primitive();
        }
    }
    unreachable!("d+1 vectors in dimension d are dependent")
}

// Kernel vector with last entry 1 when the last column depends on the others.
fn kernel_last(cols: &[Vec<Q>]) -> Option<Vec<Q>> {
    let k = cols.len();
    let d = cols[0].len();
    // augmented matrix rows: [c_0 .. c_{k-2} | −c_{k−1}]
    let mut a: Vec<Vec<Q>> = (0..d).map(|i| (0..k).map(|j| if j + 1 == k { -cols[j][i].clone() } else { cols[j][i].clone() }).collect()).collect();
    let unknowns = k - 1;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(p) = (row..d).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pr = a[row].clone();
        for (r, ar) in a.iter_mut().enumerate() {
            if r != row && !ar[col].is_zero() {
                let f = ar[col].clone();
                for (x, y) in ar.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() < unknowns {
        // earlier columns already dependent; not reached when called incrementally
        return None;
    }
    if (row..d).any(|r| !a[r][unknowns].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][unknowns].clone();
    }
    x[k - 1] = Q::one();
    Some(x)
}

/// Machine for x^r with x > 0 rational, as e^{r·ln x}.
fn root_power_machine(x: &Q, r: &Q) -> Machine {
    if r.is_one() {
        return Machine::constant(x.clone());
    }
    Machine::exp(&Machine::product(&Machine::constant(r.clone()), &Machine::ln(&Machine::constant(x.clone()))))
}

/// Rational with the smallest denominator in [a, b].
pub fn simplest_between(a: &Q, b: &Q) -> Q {
    assert!(a <= b);
    if a <= &Q::zero() && b >= &Q::zero() {
        return Q::zero();
    }
    if b < &Q::zero() {
        return -simplest_between(&-b, &-a);
    }
    let fl = qz(floor(a));
    if &fl == a {
        return fl;
    }
    if &fl + Q::one() <= *b {
        return fl + Q::one();
    }
    let inner = simplest_between(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}
