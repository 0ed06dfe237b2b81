use num_bigint::BigInt;
use num_traits::ToPrimitive;
use xipow::algebraic::AlgebraicNumber;
use xipow::barrier::{catalog_barrier, table_expression, BaseKind, TableConstants};

#[test]
fn catalogued_barriers_dominate_the_table() {
    let c = 1000i64;
    let mut tc = TableConstants::new();
    for name in ["c_eta", "c_alpha_eta", "c_alpha", "c_alpha_beta"] {
        tc.insert(name.into(), BigInt::from(c));
    }
    let two = AlgebraicNumber::int(2);
    let three = AlgebraicNumber::int(3);
    let kinds = [
        BaseKind::Pi,
        BaseKind::EPowPi,
        BaseKind::EPowEta(AlgebraicNumber::int(1)),
        BaseKind::AlphaPowEta(two.clone(), AlgebraicNumber::rational(&num_rational::BigRational::new(1.into(), 3.into()))),
        BaseKind::LnAlpha(two.clone()),
        BaseKind::LnRatio(three, two),
    ];
    for kind in &kinds {
        let b = catalog_barrier(kind, &tc).unwrap();
        for d in 1..=20u64 {
            for h in [16i64, 1_000, 1_000_000] {
                let sigma = b.sigma(d, &BigInt::from(h)).to_f64().unwrap();
                let lit = table_expression(kind, c as f64, d as f64, h as f64).unwrap();
                assert!(sigma >= lit, "{kind}: sigma({d},{h}) = {sigma} < {lit}");
            }
        }
    }
}
