//! Full formulas mixing real variables and the power predicate.
use xipow::barrier::BaseDescriptor;
use xipow::rat::Q;
use xipow::rsolver::{solve, SolveOptions};
use xipow::sexp::parse_formula;

fn main() -> xipow::Result<()> {
    let half = BaseDescriptor::rational(&Q::new(1.into(), 2.into()))?;
    let cases = [
        (BaseDescriptor::natural(2)?, "(exists (x y) (and (pow x) (pow y) (= (+ x y) 12)))"),
        (BaseDescriptor::natural(2)?, "(exists (x z) (and (pow x) (= (* z z) x) (< 5 x) (< x 10)))"),
        (BaseDescriptor::natural(2)?, "(exists (x) (and (pow x) (= (^ x 2) 2)))"),
        (BaseDescriptor::pi(), "(exists (x) (and (pow x) (< 3 x) (< x 4)))"),
        (half, "(exists (x) (and (pow x) (< 2 x) (< x 5)))"),
        (BaseDescriptor::natural(3)?, "(exists (x y) (and (pow x) (< (* 2 y) x) (< x (+ y 1))))"),
    ];
    for (base, src) in &cases {
        println!("{} | {src}", base.label());
        let v = match solve(&parse_formula(src)?, base, &SolveOptions::default()) {
            Ok(v) => v,
            Err(e) => {
                println!("    {}: {}", e.kind, e.detail);
                continue;
            }
        };
        println!("    sat={}", v.sat);
        for (x, w) in &v.witness {
            println!("    {x}: exponent {:?} {}", w.exponent, w.residual);
        }
    }
    Ok(())
}
