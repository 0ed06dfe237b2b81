//! SMT-LIB2 script for fixed exponents, ready for an external checker.
use std::collections::BTreeMap;
use xipow::algebraic::canonicalize;
use xipow::barrier::BaseDescriptor;
use xipow::rat::Q;
use xipow::rsolver::emit_etr;
use xipow::sexp::parse_formula;
use xipow::upoly::UPoly;

fn main() -> xipow::Result<()> {
    let sqrt2 = canonicalize(&UPoly::from_i64(&[-2, 0, 1]), &Q::from_integer(1.into()), &Q::from_integer(2.into()))?;
    let base = BaseDescriptor::algebraic(&sqrt2)?;
    let psi = parse_formula("(and (< (+ x y) 7) (< 5 (* x y)))")?;
    let exps = BTreeMap::from([("x".to_string(), 3), ("y".to_string(), 2)]);
    print!("{}", emit_etr(&psi, &exps, &base)?);
    Ok(())
}
