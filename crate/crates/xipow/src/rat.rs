//! Small helpers on big integers and rationals.

use crate::error::{err, ErrorKind, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Z = BigInt;

pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qz(n: Z) -> Q {
    Q::from_integer(n)
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

/// 2^e as a rational, e may be negative.
pub fn pow2(e: i64) -> Q {
    if e >= 0 {
        qz(Z::one() << (e as usize))
    } else {
        Q::new(Z::one(), Z::one() << ((-e) as usize))
    }
}

/// ⌈log2 x⌉ for a positive integer; 0 for x ≤ 1.
pub fn ceil_log2_int(x: &Z) -> i64 {
    if x <= &Z::one() {
        return 0;
    }
    let m = x - Z::one();
    m.bits() as i64
}

/// ⌊log2 x⌋ for x > 0.
pub fn floor_log2(x: &Q) -> i64 {
    assert!(x.is_positive());
    let n = x.numer();
    let d = x.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // adjust so that 2^e <= x < 2^{e+1}
    loop {
        if pow2(e) > *x {
            e -= 1;
        } else if pow2(e + 1) <= *x {
            e += 1;
        } else {
            return e;
        }
    }
}

/// ⌈log2 x⌉ for x > 0.
pub fn ceil_log2(x: &Q) -> i64 {
    let f = floor_log2(x);
    if pow2(f) == *x {
        f
    } else {
        f + 1
    }
}

pub fn ceil(x: &Q) -> Z {
    x.ceil().to_integer()
}

pub fn floor(x: &Q) -> Z {
    x.floor().to_integer()
}

/// Nearest multiple of 2^-bits (ties away from zero).
pub fn round_dyadic(x: &Q, bits: u64) -> Q {
    let scale = Z::one() << bits as usize;
    let scaled = x * qz(scale.clone());
    Q::new(scaled.round().to_integer(), scale)
}

pub fn qpow(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn zpow(x: &Z, e: u64) -> Z {
    num_traits::pow(x.clone(), e as usize)
}

pub fn sign_of(x: &Z) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn sign_q(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Parses `p/q`, `p`, or a decimal string such as `-1.25`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: Z = a.trim().parse().map_err(|_| crate::Error::new(ErrorKind::Parse, format!("bad rational `{s}`")))?;
        let d: Z = b.trim().parse().map_err(|_| crate::Error::new(ErrorKind::Parse, format!("bad rational `{s}`")))?;
        if d.is_zero() {
            return err(ErrorKind::Parse, format!("zero denominator in `{s}`"));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ipn: Z = if ip.is_empty() || ip == "-" || ip == "+" {
            Z::zero()
        } else {
            ip.parse().map_err(|_| crate::Error::new(ErrorKind::Parse, format!("bad decimal `{s}`")))?
        };
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return err(ErrorKind::Parse, format!("bad decimal `{s}`"));
        }
        let fpn: Z = if fp.is_empty() { Z::zero() } else { fp.parse().unwrap() };
        let den = zpow(&Z::from(10), fp.len() as u64);
        let mag = qz(ipn.abs()) + Q::new(fpn, den);
        return Ok(if neg { -mag } else { mag });
    }
    let n: Z = s.parse().map_err(|_| crate::Error::new(ErrorKind::Parse, format!("bad rational `{s}`")))?;
    Ok(qz(n))
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a Z>) -> Z {
    it.into_iter().fold(Z::one(), |acc, x| acc.lcm(x))
}
