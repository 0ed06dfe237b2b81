//! Closed-form witness bounds for a formula under a given barrier.
use num_bigint::BigInt;
use xipow::barrier::{Provenance, RootBarrier};
use xipow::rsolver::normalize_body;
use xipow::sexp::parse_formula;
use xipow::xz::{f_closed_form, g_closed_form, witness_bound, witness_bound_params};

fn main() -> xipow::Result<()> {
    let c = BigInt::from(3);
    println!("G closed form (1,1,1,3,8): {}", g_closed_form(1, &BigInt::from(1), 1, 3, &BigInt::from(8)));
    println!("F closed form (1,2,1,1,3,8): {}", f_closed_form(1, 2, &BigInt::from(1), 1, 3, &BigInt::from(8)));
    println!("U (1,8,3,3,1): {}", witness_bound_params(1, &BigInt::from(8), 3, &c, 1));
    let barrier = RootBarrier::new(c, 1, Provenance::UserConfig);
    for src in ["(exists (x) (and (pow x) (< 3 x) (< x 5)))", "(exists (x y) (and (pow x) (pow y) (= (+ x y) 12)))"] {
        let psi = normalize_body(&parse_formula(src)?)?;
        let u = witness_bound(&psi, &barrier);
        println!("{src}\n    U = {u}  value {:?}", u.value().map(|v| v.bits()).map(|b| format!("{b} bits")));
    }
    Ok(())
}
