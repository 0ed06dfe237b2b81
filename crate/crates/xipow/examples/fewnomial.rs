//! Signs of sparse polynomials with huge exponents at an integer point.
use num_bigint::BigInt;
use std::time::Instant;
use xipow::sign::{sign_fewnomial, Fewnomial};

fn main() {
    let n = BigInt::from(2);
    let cases = [
        vec![(BigInt::from(1), 1_000_000u64), (BigInt::from(-3), 999_999)],
        vec![(BigInt::from(1), 1_000_000), (BigInt::from(-1), 999_999)],
        vec![(BigInt::from(7), 999_999), (BigInt::from(-7) << 20usize, 999_979)],
        vec![(BigInt::from(-5), 12), (BigInt::from(1), 14), (BigInt::from(3), 0)],
    ];
    for terms in cases {
        let t = Instant::now();
        let f = Fewnomial::new(terms.clone());
        let s = sign_fewnomial(&f, &n);
        let shown: Vec<String> = terms.iter().map(|(c, e)| format!("{c}*2^{e}")).collect();
        println!("{:<40} sign {s:>2}  ({:.2?})", shown.join(" + "), t.elapsed());
    }
}
