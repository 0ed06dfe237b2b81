use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::process::{Command, Stdio};
use xipow::algebraic::{canonicalize, AlgebraicNumber};
use xipow::barrier::{BaseDescriptor, TableConstants};
use xipow::creal::Machine;
use xipow::formula::{laurent_normalize, Atom, Formula, Rel};
use xipow::poly::{Monomial, Poly, XI};
use xipow::rsolver::{emit_etr, solve, SolveOptions};
use xipow::sign::{lambda_floor, sign, sign_xi};
use xipow::upoly::{cauchy_root_bound, sturm_count, UPoly};
use xipow::xz::XzSolver;

type Z = BigInt;
type Q = BigRational;

fn qn(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

fn pow2(e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(Z::one() << e as usize)
    } else {
        Q::new(Z::one(), Z::one() << (-e) as usize)
    }
}

fn decimal(s: &str) -> Q {
    let (int, frac) = s.split_once('.').unwrap();
    Q::new(format!("{int}{frac}").parse::<Z>().unwrap(), num_traits::pow(Z::from(10), frac.len()))
}

fn sgn(x: &Q) -> i32 {
    x.signum().to_integer().to_i32().unwrap()
}

fn rand_q(rng: &mut StdRng, positive: bool) -> Q {
    let n = if positive { rng.gen_range(1..=40) } else { rng.gen_range(-40..=40) };
    qn(n, rng.gen_range(1..=9))
}

fn rand_poly(rng: &mut StdRng, vars: &[&str], laurent: bool) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let mut m = Monomial::one();
        for v in vars {
            let e = if laurent { rng.gen_range(-2..=2) } else { rng.gen_range(0..=2) };
            m = m.mul(&Monomial::var_pow(v, e));
        }
        p = p.add(&Poly::term(Z::from(rng.gen_range(-9..=9)), m));
    }
    p
}

fn sqrt2() -> AlgebraicNumber {
    canonicalize(&UPoly::from_i64(&[-2, 0, 1]), &qn(1, 1), &qn(2, 1)).unwrap()
}

#[test]
fn laurent_normalization_preserves_truth() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let p = rand_poly(&mut rng, &["x", "y", XI], true);
        for rel in [Rel::Lt, Rel::Eq] {
            let a = Atom::new(p.clone(), rel);
            let b = laurent_normalize(&a);
            assert!(!b.poly.has_negative_exponent());
            let at: HashMap<String, Q> = ["x", "y", XI].iter().map(|v| (v.to_string(), rand_q(&mut rng, true))).collect();
            assert_eq!(sgn(&a.poly.eval(&at).unwrap()), sgn(&b.poly.eval(&at).unwrap()), "{p}");
        }
    }
}

#[test]
fn substitution_commutes_with_evaluation() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..100 {
        let p = rand_poly(&mut rng, &["x", "y", "z"], false);
        let r = rand_poly(&mut rng, &["y", "z"], false);
        let at: HashMap<String, Q> = ["y", "z"].iter().map(|v| (v.to_string(), rand_q(&mut rng, false))).collect();
        let mut at_x = at.clone();
        at_x.insert("x".into(), r.eval(&at).unwrap());
        assert_eq!(p.substitute_poly("x", &r).eval(&at).unwrap(), p.eval(&at_x).unwrap());
    }
}

#[test]
fn sturm_counts_known_roots() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..200 {
        let mut roots: Vec<Q> = (0..rng.gen_range(0..=6)).map(|_| rand_q(&mut rng, false)).collect();
        roots.sort();
        roots.dedup();
        // real roots only from the linear factors; the quadratic x² + c has none
        let mut p = roots.iter().fold(UPoly::from_i64(&[1]), |acc, r| acc.mul(&UPoly::linear_root(r)));
        if p.degree() <= 6 && rng.gen_bool(0.5) {
            p = p.mul(&UPoly::from_i64(&[rng.gen_range(1..=9), 0, 1]));
        }
        if p.is_constant() {
            continue;
        }
        let bound = Q::from_integer(cauchy_root_bound(&p).unwrap());
        assert!(roots.iter().all(|r| r.abs() <= bound));
        for _ in 0..5 {
            let mut a = rand_q(&mut rng, false);
            let mut b = rand_q(&mut rng, false);
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            let (lo_open, hi_open) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
            let want = roots
                .iter()
                .filter(|r| (if lo_open { **r > a } else { **r >= a }) && (if hi_open { **r < b } else { **r <= b }))
                .count();
            assert_eq!(sturm_count(&p, &a, &b, lo_open, hi_open).unwrap(), want, "{p} on {a}..{b}");
        }
    }
}

#[test]
fn composed_machines_meet_the_contract() {
    let tc = TableConstants::new();
    let ln2 = Machine::ln(&Machine::int(2));
    let ratio = Machine::product(&Machine::reciprocal(&ln2), &Machine::ln(&Machine::int(3)));
    let half = AlgebraicNumber::rational(&qn(1, 2));
    let cases = [
        (ratio, "1.58496250072115618145373894394781650875981440769248106045575"),
        (BaseDescriptor::alpha_pow(&AlgebraicNumber::int(2), &half, &tc).unwrap().machine, "1.41421356237309504880168872420969807856967187537694807317668"),
        (BaseDescriptor::ln_alpha(&AlgebraicNumber::int(2), &tc).unwrap().machine, "0.6931471805599453094172321214581765680755001343602553"),
        (BaseDescriptor::e_pow_pi().machine, "23.14069263277926900572908636794854738026610624260021"),
    ];
    for (m, r) in &cases {
        let r = decimal(r);
        for n in [0u64, 4, 8, 16, 32, 64] {
            assert!((m.approx(n).unwrap() - &r).abs() <= pow2(-(n as i64)) + pow2(-150), "{r} at {n}");
        }
    }
}

fn rand_upoly(rng: &mut StdRng) -> UPoly {
    let d = rng.gen_range(1..=5);
    let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-12..=12)).collect();
    if c[d] == 0 {
        c[d] = 1;
    }
    UPoly::from_i64(&c)
}

#[test]
fn sign_is_multiplicative() {
    let mut rng = StdRng::seed_from_u64(14);
    let bases = [BaseDescriptor::natural(2).unwrap(), BaseDescriptor::algebraic(&sqrt2()).unwrap(), BaseDescriptor::pi()];
    for b in &bases {
        for _ in 0..60 {
            let p = rand_upoly(&mut rng);
            let r = rand_upoly(&mut rng);
            let (sp, sr) = (sign(&p, b).unwrap(), sign(&r, b).unwrap());
            assert_eq!(sign(&p.mul(&r), b).unwrap(), sp * sr);
            assert_eq!(sign(&p.neg(), b).unwrap(), -sp);
        }
    }
}

#[test]
fn zero_signs_match_the_gcd_oracle() {
    let mut rng = StdRng::seed_from_u64(15);
    let cbrt2 = canonicalize(&UPoly::from_i64(&[-2, 0, 0, 1]), &qn(1, 1), &qn(2, 1)).unwrap();
    for a in [sqrt2(), cbrt2] {
        let b = BaseDescriptor::algebraic(&a).unwrap();
        for i in 0..150 {
            let mut p = rand_upoly(&mut rng);
            if i % 3 == 0 {
                p = p.mul(&a.q);
            }
            let g = p.gcd(&a.q);
            let zero = !g.is_constant() && sturm_count(&g, &a.lo, &a.hi, false, false).unwrap() >= 1;
            assert_eq!(sign(&p, &b).unwrap() == 0, zero, "{p}");
        }
    }
}

#[test]
fn lambda_brackets_the_value() {
    let mut rng = StdRng::seed_from_u64(16);
    let bases = [BaseDescriptor::natural(3).unwrap(), BaseDescriptor::algebraic(&sqrt2()).unwrap(), BaseDescriptor::pi()];
    for b in &bases {
        for _ in 0..40 {
            let mut p = rand_poly(&mut rng, &[XI], true);
            if sign_xi(&p, b).unwrap() <= 0 {
                p = p.neg();
            }
            if sign_xi(&p, b).unwrap() == 0 {
                continue;
            }
            let z = lambda_floor(&p, b).unwrap();
            assert!(sign_xi(&p.sub(&Poly::xi_pow(z)), b).unwrap() >= 0, "{p}");
            assert!(sign_xi(&Poly::xi_pow(z + 1).sub(&p), b).unwrap() > 0, "{p}");
        }
    }
}

#[test]
fn algebraic_barriers_hold_on_nonzero_values() {
    let mut rng = StdRng::seed_from_u64(17);
    let golden = canonicalize(&UPoly::from_i64(&[-1, -1, 1]), &qn(1, 1), &qn(2, 1)).unwrap();
    for a in [sqrt2(), golden] {
        let b = BaseDescriptor::algebraic(&a).unwrap();
        let barrier = b.barrier.clone().unwrap();
        assert_eq!(barrier.k, 1);
        let (lo, hi) = a.refine(600);
        let mut checked = 0;
        while checked < 100 {
            let p = rand_upoly(&mut rng);
            if sign(&p, &b).unwrap() == 0 {
                continue;
            }
            checked += 1;
            // |p(ξ)| ≥ min over the enclosure minus a Lipschitz margin
            let (vl, vh) = (p.eval_q(&lo), p.eval_q(&hi));
            let k = hi.abs() + Q::one();
            let lip: Q = p.coeffs().iter().enumerate().skip(1).map(|(i, c)| Q::from_integer(c.abs() * Z::from(i)) * num_traits::pow(k.clone(), i - 1)).sum();
            let low = vl.abs().min(vh.abs()) - lip * (&hi - &lo);
            assert!(low.is_positive());
            let log2 = low.numer().bits() as f64 - low.denom().bits() as f64 - 1.0;
            let sigma = barrier.sigma(p.degree() as u64, &p.height()).to_f64().unwrap();
            assert!(log2 * std::f64::consts::LN_2 >= -sigma, "{p}: ln ≥ {} vs −{sigma}", log2 * std::f64::consts::LN_2);
        }
    }
}

fn eval_pow(p: &Poly, exps: &BTreeMap<String, i64>) -> Q {
    let mut at: HashMap<String, Q> = exps.iter().map(|(v, e)| (v.clone(), pow2(*e))).collect();
    at.insert(XI.into(), pow2(1));
    p.eval(&at).unwrap()
}

fn floor_log2(x: &Q) -> i64 {
    let mut z = x.numer().bits() as i64 - x.denom().bits() as i64;
    while pow2(z) > *x {
        z -= 1;
    }
    while pow2(z + 1) <= *x {
        z += 1;
    }
    z
}

#[test]
fn g_sets_cover_sampled_lambdas() {
    let mut rng = StdRng::seed_from_u64(18);
    let two = BaseDescriptor::natural(2).unwrap();
    let mut solver = XzSolver::new(&two, 1_000_000).unwrap();
    for _ in 0..40 {
        let mut p = Poly::zero();
        for _ in 0..rng.gen_range(2..=3) {
            let m = Monomial::var_pow("u", rng.gen_range(0..=2)).mul(&Monomial::var_pow("v", rng.gen_range(0..=2)));
            let q = Poly::int(rng.gen_range(-9..=9)).add(&Poly::term(Z::from(rng.gen_range(-3..=3)), Monomial::xi_pow(rng.gen_range(-2..=2))));
            p = p.add(&q.mul_monomial(&m));
        }
        let g = solver.compute_g(&p).unwrap();
        for _ in 0..30 {
            let a = BTreeMap::from([("u".to_string(), rng.gen_range(-6..=6)), ("v".to_string(), rng.gen_range(-6..=6))]);
            let val = eval_pow(&p, &a);
            if !val.is_positive() {
                continue;
            }
            let z = floor_log2(&val);
            let hit = g.iter().any(|(m, gs)| {
                let me: i64 = m.pairs().iter().map(|(v, e)| e * a[v]).sum();
                gs.contains(&(z - me))
            });
            assert!(hit, "{p} at {a:?}: lambda exponent {z}");
        }
    }
}

#[test]
fn backpropagation_yields_solutions() {
    let mut rng = StdRng::seed_from_u64(19);
    let two = BaseDescriptor::natural(2).unwrap();
    let mut checked = 0;
    for _ in 0..40 {
        let mut solver = XzSolver::new(&two, 1_000_000).unwrap();
        let (u, v) = (Poly::var("u"), Poly::var("v"));
        let mut parts = vec![Formula::less_eq(&v, &Poly::int(64)), Formula::less_eq(&Poly::one(), &v.scale(&Z::from(64)))];
        for _ in 0..rng.gen_range(1..=2) {
            let p = u.scale(&Z::from(rng.gen_range(-4..=4)))
                .add(&u.mul(&u).scale(&Z::from(rng.gen_range(-2..=2))))
                .add(&v.scale(&Z::from(rng.gen_range(-4..=4))))
                .add(&Poly::int(rng.gen_range(-30..=30)));
            parts.push(if rng.gen_bool(0.3) { Formula::eq(p) } else { Formula::lt(p) });
        }
        let phi = Formula::and(parts);
        for b in solver.relativise(&phi, "u").unwrap() {
            for (reduced, bp) in solver.remove_u(&phi, "u", &b) {
                if let Some(mut a) = solver.solve_enumerate(&reduced, 6).unwrap() {
                    bp.apply(&mut a);
                    assert!(solver.holds_at(&phi, &a).unwrap(), "{phi} via {reduced}: {a:?}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

// z real, x and maybe y powers of 2 within [2^-8, 2^8]
fn e2e_formula(rng: &mut StdRng) -> (Formula, Formula, Vec<String>) {
    let two_pows = rng.gen_bool(0.5);
    let mut pows = vec!["x".to_string()];
    if two_pows {
        pows.push("y".into());
    }
    let mut parts = Vec::new();
    for p in &pows {
        let x = Poly::var(p);
        parts.push(Formula::less_eq(&x, &Poly::int(256)));
        parts.push(Formula::less_eq(&Poly::one(), &x.scale(&Z::from(256))));
    }
    let mut atoms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut p = Poly::int(rng.gen_range(-20..=20)).add(&Poly::var("z").scale(&Z::from(rng.gen_range(-3..=3))));
        for v in &pows {
            p = p.add(&Poly::var(v).scale(&Z::from(rng.gen_range(-4..=4))));
        }
        atoms.push(match rng.gen_range(0..3) {
            0 => Formula::lt(p),
            1 => Formula::eq(p),
            _ => Formula::le(p),
        });
    }
    let core = if rng.gen_bool(0.2) { Formula::or(atoms) } else { Formula::and(atoms) };
    parts.push(core);
    let body = Formula::and(parts);
    let mut full = vec![body.clone()];
    full.extend(pows.iter().map(|v| Formula::pow_var(v)));
    let mut vars = pows.clone();
    vars.push("z".into());
    (Formula::exists(vars, Formula::and(full)), body, pows)
}

fn real_part_holds(body: &Formula, exps: &BTreeMap<String, i64>) -> bool {
    let mut at: HashMap<String, Q> = exps.iter().map(|(v, e)| (v.clone(), pow2(*e))).collect();
    let mut roots = Vec::new();
    for a in body.atoms() {
        at.insert("z".into(), Q::zero());
        let k = a.poly.eval(&at).unwrap();
        at.insert("z".into(), Q::one());
        let c = a.poly.eval(&at).unwrap() - &k;
        if !c.is_zero() {
            roots.push(-k / c);
        }
    }
    roots.sort();
    let mut cands = roots.clone();
    cands.extend(roots.windows(2).map(|w| (&w[0] + &w[1]) / Q::from_integer(Z::from(2))));
    cands.push(roots.first().cloned().unwrap_or_else(Q::zero) - Q::one());
    cands.push(roots.last().cloned().unwrap_or_else(Q::zero) + Q::one());
    cands.into_iter().any(|z| {
        at.insert("z".into(), z);
        body.eval_with(&mut |p| Ok(sgn(&p.eval(&at).unwrap()))).unwrap()
    })
}

fn brute_force(body: &Formula, pows: &[String]) -> Option<BTreeMap<String, i64>> {
    let mut a: BTreeMap<String, i64> = pows.iter().map(|v| (v.clone(), -8)).collect();
    loop {
        if real_part_holds(body, &a) {
            return Some(a);
        }
        let mut i = 0;
        loop {
            if i == pows.len() {
                return None;
            }
            let e = a.get_mut(&pows[i]).unwrap();
            if *e < 8 {
                *e += 1;
                break;
            }
            *e = -8;
            i += 1;
        }
    }
}

#[test]
fn solve_matches_brute_force_and_witnesses_round_trip() {
    let mut rng = StdRng::seed_from_u64(20);
    let two = BaseDescriptor::natural(2).unwrap();
    let checker = std::env::var("XIPOW_SMT_CHECKER").ok();
    let (mut sat, mut emitted) = (0, 0);
    for _ in 0..60 {
        let (phi, body, pows) = e2e_formula(&mut rng);
        let v = solve(&phi, &two, &SolveOptions::default()).unwrap();
        let want = brute_force(&body, &pows);
        assert_eq!(v.sat, want.is_some(), "{phi}");
        if !v.sat {
            continue;
        }
        sat += 1;
        let exps: BTreeMap<String, i64> = pows.iter().map(|p| (p.clone(), v.witness[p].exponent.unwrap())).collect();
        assert!(real_part_holds(&body, &exps), "{phi}: witness {exps:?}");
        if let (Some(cmd), true) = (&checker, emitted < 10) {
            emitted += 1;
            let script = emit_etr(&body, &exps, &two).unwrap();
            let mut child = Command::new("sh").arg("-c").arg(cmd).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
            child.stdin.take().unwrap().write_all(script.as_bytes()).unwrap();
            let out = child.wait_with_output().unwrap();
            assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "sat", "{phi}");
        }
    }
    assert!(sat > 10);
}
