//! Algebraic numbers: canonical intervals, rationality, powers, dependence.
use num_bigint::BigInt;
use xipow::algebraic::{canonicalize, AlgebraicNumber};
use xipow::rat::{fmt_q, Q};
use xipow::upoly::UPoly;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn main() -> xipow::Result<()> {
    let sqrt2 = canonicalize(&UPoly::from_i64(&[-2, 0, 1]), &q(0, 1), &q(2, 1))?;
    println!("sqrt2        {sqrt2}");
    let (lo, hi) = sqrt2.refine(20);
    println!("refined      [{}, {}]", fmt_q(&lo), fmt_q(&hi));

    let two = canonicalize(&UPoly::from_i64(&[-4, 0, 1]), &q(1, 1), &q(3, 1))?;
    println!("x^2-4 in [1,3] -> {two}, rational {:?}", two.is_rational().map(|r| fmt_q(&r)));
    println!("sqrt2 rational {:?}", sqrt2.is_rational());

    for r in [q(2, 1), q(1, 2), q(-3, 2)] {
        let p = sqrt2.power(&r)?;
        println!("sqrt2^({}) = {p}  ~ {}", fmt_q(&r), fmt_q(&p.machine().approx(16)?));
    }

    let four = AlgebraicNumber::int(4);
    let eight = AlgebraicNumber::int(8);
    println!("4 vs 8 dependence {:?}", AlgebraicNumber::mult_dependent(&four, &eight, 10)?);
    println!("2 vs 3 dependence {:?}", AlgebraicNumber::mult_dependent(&AlgebraicNumber::int(2), &AlgebraicNumber::int(3), 10)?);
    Ok(())
}
