//! Existential formulas whose variables all range over powers of the base.
use num_bigint::BigInt;
use xipow::barrier::BaseDescriptor;
use xipow::formula::Formula;
use xipow::poly::Poly;
use xipow::xz::{solve_xz, Strategy, XzOptions};

fn main() -> xipow::Result<()> {
    let two = BaseDescriptor::natural(2)?;
    let (u, v) = (Poly::var("u"), Poly::var("v"));
    let formulas = [
        // u + v = 12
        Formula::equal(&u.add(&v), &Poly::int(12)),
        // u^2 = 2
        Formula::equal(&u.mul(&u), &Poly::int(2)),
        // 3u < v < 5u, v > 100
        Formula::and(vec![
            Formula::less(&u.scale(&BigInt::from(3)), &v),
            Formula::less(&v, &u.scale(&BigInt::from(5))),
            Formula::less(&Poly::int(100), &v),
        ]),
    ];
    for f in &formulas {
        for (label, strategy) in [("qe", Strategy::Qe), ("enumerate(8)", Strategy::Enumerate(8))] {
            let opts = XzOptions { strategy, ..XzOptions::default() };
            let r = solve_xz(f, &two, &opts)?;
            println!("{f}  [{label}] sat={} witness={:?} branches={}", r.sat, r.witness, r.stats.branches);
        }
    }
    Ok(())
}
