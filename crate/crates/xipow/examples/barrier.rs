//! Root barriers of the catalogued bases and the accuracy they demand.
use num_bigint::BigInt;
use xipow::barrier::{BaseDescriptor, TableConstants};
use xipow::algebraic::AlgebraicNumber;
use xipow::sign::barrier_accuracy;
use xipow::upoly::UPoly;

fn main() -> xipow::Result<()> {
    let tc = TableConstants::new();
    let one = AlgebraicNumber::int(1);
    let bases = [
        BaseDescriptor::natural(3)?,
        BaseDescriptor::pi(),
        BaseDescriptor::e_pow_pi(),
        BaseDescriptor::e_pow(&one, &tc)?,
        BaseDescriptor::ln_alpha(&AlgebraicNumber::int(2), &tc)?,
    ];
    let p = UPoly::from_i64(&[-10, 3, 1]);
    for b in &bases {
        match &b.barrier {
            Some(r) => println!(
                "{:<16} c={} k={} ({})  sigma(5,100)={}  accuracy for {p}: {:?}",
                b.label(),
                r.c,
                r.k,
                r.provenance.as_str(),
                r.sigma(5, &BigInt::from(100)),
                barrier_accuracy(&p, b)
            ),
            None => println!("{:<16} no barrier", b.label()),
        }
    }
    Ok(())
}
