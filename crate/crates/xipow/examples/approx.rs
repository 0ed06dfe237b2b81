//! Rational approximations of a few computable reals.
use xipow::creal::Machine;
use xipow::rat::fmt_q;

fn main() -> xipow::Result<()> {
    let e = Machine::exp(&Machine::int(1));
    let ln2 = Machine::ln(&Machine::int(2));
    let machines = [
        ("e", e.clone()),
        ("1/e", Machine::reciprocal(&e)),
        ("ln 2", ln2.clone()),
        ("pi", Machine::pi()),
        ("e^pi", Machine::exp(&Machine::pi())),
        ("ln 3 / ln 2", Machine::product(&Machine::ln(&Machine::int(3)), &Machine::reciprocal(&ln2))),
    ];
    for (name, m) in &machines {
        let q = m.approx(32)?;
        println!("{name:>12}  {}  ~ {:.12}", fmt_q(&q), num_traits::ToPrimitive::to_f64(&q).unwrap_or(f64::NAN));
    }
    Ok(())
}
