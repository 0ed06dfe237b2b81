//! Exact signs of integer polynomials at algebraic and transcendental bases.
use xipow::algebraic::canonicalize;
use xipow::barrier::BaseDescriptor;
use xipow::rat::Q;
use xipow::sign::sign;
use xipow::upoly::UPoly;

fn main() -> xipow::Result<()> {
    let sqrt2 = canonicalize(&UPoly::from_i64(&[-2, 0, 1]), &Q::from_integer(1.into()), &Q::from_integer(2.into()))?;
    let bases = [
        ("2", BaseDescriptor::natural(2)?),
        ("sqrt2", BaseDescriptor::algebraic(&sqrt2)?),
        ("pi", BaseDescriptor::pi()),
    ];
    let polys = [
        UPoly::from_i64(&[-2, 0, 1]),
        UPoly::from_i64(&[-4, 0, 1]),
        UPoly::from_i64(&[-22, 7]),
        UPoly::from_i64(&[-355, 113]),
    ];
    for (name, b) in &bases {
        for p in &polys {
            println!("sign({p}) at {name} = {}", sign(p, b)?);
        }
    }
    Ok(())
}
