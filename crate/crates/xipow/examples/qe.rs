//! Linear virtual substitution on a small real formula.
use xipow::qe::{qe_eliminate, QeEngine};
use xipow::sexp::parse_formula;

fn main() -> xipow::Result<()> {
    let phi = parse_formula("(and (< a x) (< x b) (< y x) (= (+ x y) c))")?;
    let vars = vec!["x".to_string(), "y".to_string()];
    let out = qe_eliminate(&phi, &vars, &QeEngine::Builtin, &mut |f| Ok(f.simplify_with(&mut |_| None)))?;
    println!("exists x y. {phi}");
    println!("  <=> {out}");
    println!("  size {} -> {}", phi.size(), out.size());
    Ok(())
}
