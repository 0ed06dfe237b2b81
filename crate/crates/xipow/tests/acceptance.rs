use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;
use std::time::{Duration, Instant};
use xipow::algebraic::{canonicalize, AlgebraicNumber};
use xipow::barrier::{BaseDescriptor, TableConstants};
use xipow::creal::Machine;
use xipow::erisk::{erisk_decide, RiskBase, StochasticGame};
use xipow::formula::Formula;
use xipow::poly::{Monomial, Poly};
use xipow::rsolver::{solve, SolveOptions};
use xipow::sexp::parse_formula;
use xipow::sign::{sign, sign_fewnomial, sign_with_barrier, Fewnomial};
use xipow::upoly::UPoly;
use xipow::xz::{g_closed_form, solve_xz, witness_bound_params, Exponent, Strategy, XzOptions};

type Z = BigInt;
type Q = BigRational;

const REF_SLACK_DIGITS: u32 = 48;
const APPROX_LEVELS: [u64; 6] = [0, 4, 8, 16, 32, 64];
const C1_LIMIT: Duration = Duration::from_secs(30);
const C2_LIMIT: Duration = Duration::from_secs(60);
const C2_PER_BASE: usize = 300;
const C3_COUNT: usize = 500;
const C3_MAX_DEGREE: u64 = 10_000;
const C3_BIG_LIMIT: Duration = Duration::from_secs(1);
const C4_COUNT: usize = 100;
const C4_BOUND: i64 = 8;
const C4_LIMIT: Duration = Duration::from_secs(120);
const C5_LIMIT: Duration = Duration::from_secs(10);
const C7_COUNT: usize = 200;
const C8_LIMIT: Duration = Duration::from_secs(60);
const C9_TOL_BITS: i64 = 12;

fn qi(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

fn pow2(e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(Z::one() << e as usize)
    } else {
        Q::new(Z::one(), Z::one() << (-e) as usize)
    }
}

fn decimal(s: &str) -> Q {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let den = num_traits::pow(Z::from(10), frac.len());
    Q::new(format!("{int}{frac}").parse::<Z>().unwrap(), den)
}

fn slack() -> Q {
    Q::new(Z::one(), num_traits::pow(Z::from(10), REF_SLACK_DIGITS as usize))
}

fn algebraic(poly: &[i64], lo: Q, hi: Q) -> AlgebraicNumber {
    canonicalize(&UPoly::from_i64(poly), &lo, &hi).unwrap()
}

fn sqrt_of(k: i64) -> AlgebraicNumber {
    algebraic(&[-k, 0, 1], qi(0), qi(k.max(1)))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c1_approximation() -> Outcome {
    let t = Instant::now();
    let e = Machine::exp(&Machine::int(1));
    let ln2 = Machine::ln(&Machine::int(2));
    let cases: Vec<(&str, Machine, &str)> = vec![
        ("sqrt2", Machine::algebraic(&sqrt_of(2)), "1.414213562373095048801688724209698078569671875376948"),
        ("sqrt3", Machine::algebraic(&sqrt_of(3)), "1.732050807568877293527446341505872366942805253810381"),
        ("e", e.clone(), "2.718281828459045235360287471352662497757247093699960"),
        ("1/e", Machine::reciprocal(&e), "0.3678794411714423215955237701614608674458111310317678"),
        ("ln2", ln2.clone(), "0.6931471805599453094172321214581765680755001343602553"),
        ("1/ln2", Machine::reciprocal(&ln2), "1.442695040888963407359924681001892137426645954152986"),
        ("pi", Machine::pi(), "3.141592653589793238462643383279502884197169399375106"),
        ("e^pi", Machine::exp(&Machine::pi()), "23.14069263277926900572908636794854738026610624260021"),
    ];
    let mut bad = Vec::new();
    for (name, m, r) in &cases {
        let r = decimal(r);
        for n in APPROX_LEVELS {
            let a = m.approx(n).unwrap();
            if (a - &r).abs() > pow2(-(n as i64)) + slack() {
                bad.push(format!("{name}@{n}"));
            }
        }
    }
    let el = t.elapsed();
    outcome(bad.is_empty() && el < C1_LIMIT, format!("{} machines x {} levels, misses {:?}, {:.2?}", cases.len(), APPROX_LEVELS.len(), bad, el))
}

fn random_upoly(rng: &mut StdRng, max_deg: usize, h: i64) -> UPoly {
    let d = rng.gen_range(1..=max_deg);
    let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-h..=h)).collect();
    if c[d] == 0 {
        c[d] = 1;
    }
    UPoly::from_i64(&c)
}

fn eval_upoly_q(p: &UPoly, x: &Q) -> Q {
    p.coeffs().iter().rev().fold(Q::zero(), |acc, c| acc * x + Q::from_integer(c.clone()))
}

// p(√2) = a + b·√2
fn sign_at_sqrt2(p: &UPoly) -> i32 {
    let (mut a, mut b) = (Z::zero(), Z::zero());
    for (i, c) in p.coeffs().iter().enumerate() {
        let w = c * num_traits::pow(Z::from(2), i / 2);
        if i % 2 == 0 {
            a += w;
        } else {
            b += w;
        }
    }
    let sa = a.signum().to_i32().unwrap();
    let sb = b.signum().to_i32().unwrap();
    if sa == sb || sb == 0 {
        return sa;
    }
    if sa == 0 {
        return sb;
    }
    let (a2, b2) = (&a * &a, Z::from(2) * &b * &b);
    if a2 > b2 {
        sa
    } else {
        sb
    }
}

// interval [x−w, x+w] pushed through p by monotone-free term bounds
fn interval_sign(p: &UPoly, x: &Q, w: &Q) -> Option<i32> {
    let mid = eval_upoly_q(p, x);
    let k = x.abs() + w;
    let mut deriv = Q::zero();
    for (i, c) in p.coeffs().iter().enumerate().skip(1) {
        deriv += Q::from_integer(c.abs() * Z::from(i)) * num_traits::pow(k.clone(), i - 1);
    }
    let err = deriv * w;
    if mid > err {
        Some(1)
    } else if -mid.clone() > err {
        Some(-1)
    } else {
        None
    }
}

fn c2_sign_oracle() -> Outcome {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let two = BaseDescriptor::natural(2).unwrap();
    let r2 = BaseDescriptor::algebraic(&sqrt_of(2)).unwrap();
    let pi = BaseDescriptor::pi();
    let pi_ref = decimal("3.141592653589793238462643383279502884197169399375106");
    let (mut false_zero, mut missed_zero, mut wrong, mut zeros, mut undecided) = (0, 0, 0, 0, 0);
    for i in 0..C2_PER_BASE {
        let mut p = random_upoly(&mut rng, 6, 20);
        if i % 5 == 0 {
            p = p.mul(&UPoly::from_i64(&[-2, 1]));
        }
        let got = sign_with_barrier(&p, &two).unwrap();
        let want = eval_upoly_q(&p, &qi(2)).signum().to_integer().to_i32().unwrap();
        zeros += (want == 0) as usize;
        false_zero += (got == 0 && want != 0) as usize;
        missed_zero += (got != 0 && want == 0) as usize;
        wrong += (got != want) as usize;
    }
    for i in 0..C2_PER_BASE {
        let mut p = random_upoly(&mut rng, 6, 20);
        if i % 5 == 0 {
            p = p.mul(&UPoly::from_i64(&[-2, 0, 1]));
        }
        let got = sign_with_barrier(&p, &r2).unwrap();
        let want = sign_at_sqrt2(&p);
        zeros += (want == 0) as usize;
        false_zero += (got == 0 && want != 0) as usize;
        missed_zero += (got != 0 && want == 0) as usize;
        wrong += (got != want) as usize;
    }
    for _ in 0..C2_PER_BASE {
        let p = random_upoly(&mut rng, 6, 20);
        let got = sign(&p, &pi).unwrap();
        match interval_sign(&p, &pi_ref, &slack()) {
            Some(want) => wrong += (got != want) as usize,
            None => undecided += 1,
        }
        false_zero += (got == 0) as usize;
    }
    let el = t.elapsed();
    let pass = false_zero == 0 && missed_zero == 0 && wrong == 0 && undecided == 0 && el < C2_LIMIT;
    outcome(pass, format!("{} polys/base, {zeros} true zeros, false zeros {false_zero}, missed {missed_zero}, mismatches {wrong}, reference-undecided {undecided}, {:.2?}", C2_PER_BASE, el))
}

fn c3_fewnomial() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let bases = [2u64, 3, 10];
    let mut wrong = 0;
    for i in 0..C3_COUNT {
        let n = Z::from(bases[i % 3]);
        let k = rng.gen_range(1..=5);
        let terms: Vec<(Z, u64)> = (0..k)
            .map(|_| {
                let bits = rng.gen_range(1..=80u32);
                let mag: Z = Z::from(rng.gen::<u64>()) << (bits.saturating_sub(64)) as usize;
                let c: Z = (mag % (Z::one() << bits as usize)) + 1;
                (if rng.gen() { c } else { -c }, rng.gen_range(0..=C3_MAX_DEGREE))
            })
            .collect();
        let f = Fewnomial::new(terms.clone());
        let direct: Z = terms.iter().map(|(c, e)| c * num_traits::pow(n.clone(), *e as usize)).sum();
        wrong += (sign_fewnomial(&f, &n) != direct.signum().to_i32().unwrap()) as usize;
    }
    let mut slow = Vec::new();
    let big: Vec<(Z, u64, Z, u64, i32)> = vec![
        (Z::one(), 1_000_000, Z::from(-3), 999_999, -1),
        (Z::one(), 1_000_000, Z::from(-1), 999_999, 1),
        (Z::from(-5), 1_000_000, (Z::one() << 40usize), 999_960, -1),
        (Z::from(7), 999_999, -(Z::one() << 20usize) * 7, 999_979, 0),
    ];
    for (c1, e1, c2, e2, want) in &big {
        let t = Instant::now();
        let s = sign_fewnomial(&Fewnomial::new(vec![(c1.clone(), *e1), (c2.clone(), *e2)]), &Z::from(2));
        let el = t.elapsed();
        wrong += (s != *want) as usize;
        if el >= C3_BIG_LIMIT {
            slow.push(format!("{el:.2?}"));
        }
    }
    outcome(wrong == 0 && slow.is_empty(), format!("{} random + {} degree-10^6 instances, mismatches {wrong}, slow {:?}", C3_COUNT, big.len(), slow))
}

fn random_monomial(rng: &mut StdRng, vars: &[&str]) -> Monomial {
    let mut m = Monomial::one();
    let budget = rng.gen_range(0..=3);
    for _ in 0..budget {
        let v = vars[rng.gen_range(0..vars.len())];
        m = m.mul(&Monomial::var(v));
    }
    m
}

fn exps_at(m: &Monomial, pt: &[(String, i64)]) -> i64 {
    pt.iter().map(|(v, e)| m.exp(v) * e).sum()
}

// value of a xi-free polynomial at u = 2^a, v = 2^b
fn value_at(p: &Poly, pt: &[(String, i64)]) -> Q {
    p.terms().map(|(m, c)| Q::from_integer(c.clone()) * pow2(exps_at(m, pt))).sum()
}

fn corpus_formula(rng: &mut StdRng, planted: bool) -> Formula {
    let nv = rng.gen_range(1..=2);
    let vars: Vec<&str> = ["u", "v"][..nv].to_vec();
    let pt: Vec<(String, i64)> = vars.iter().map(|v| (v.to_string(), rng.gen_range(-4..=4))).collect();
    let mut parts = Vec::new();
    for v in &vars {
        let x = Poly::var(v);
        parts.push(Formula::less_eq(&x, &Poly::int(1 << C4_BOUND)));
        parts.push(Formula::less_eq(&Poly::one(), &x.scale(&Z::from(1 << C4_BOUND))));
    }
    for _ in 0..rng.gen_range(1..=2) {
        if rng.gen_bool(0.35) {
            let m1 = random_monomial(rng, &vars);
            let m2 = random_monomial(rng, &vars);
            let c = Z::from(rng.gen_range(1..=9));
            let s = if planted { exps_at(&m1, &pt) - exps_at(&m2, &pt) } else { rng.gen_range(-6..=6) };
            let rhs = Poly::term(c.clone(), m2.mul(&Monomial::xi_pow(s)));
            parts.push(Formula::equal(&Poly::term(c, m1), &rhs));
        } else {
            let mut p = Poly::int(rng.gen_range(-9..=9));
            for _ in 0..rng.gen_range(1..=3) {
                p = p.add(&Poly::term(Z::from(rng.gen_range(-9..=9)), random_monomial(rng, &vars)));
            }
            if planted {
                let val = value_at(&p, &pt);
                if val.is_zero() {
                    p = p.sub(&Poly::one());
                } else if val.is_positive() {
                    p = p.neg();
                }
            }
            parts.push(Formula::lt(p));
        }
    }
    Formula::and(parts)
}

fn c4_xz_equivalence() -> Outcome {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(4);
    let two = BaseDescriptor::natural(2).unwrap();
    let qe = XzOptions::default();
    let en = XzOptions { strategy: Strategy::Enumerate(C4_BOUND), ..XzOptions::default() };
    let (mut agree, mut sat, mut errors, mut bad_witness) = (0, 0, Vec::new(), 0);
    for i in 0..C4_COUNT {
        let f = corpus_formula(&mut rng, i % 2 == 0);
        let a = solve_xz(&f, &two, &qe);
        let b = solve_xz(&f, &two, &en).unwrap();
        match a {
            Ok(a) => {
                agree += (a.sat == b.sat) as usize;
                sat += b.sat as usize;
                if a.sat {
                    let mut g = f.clone();
                    for (v, e) in &a.witness {
                        g = g.substitute(v, &Monomial::xi_pow(*e));
                    }
                    if !g.eval_with(&mut |p| xipow::sign::sign_xi(p, &two)).unwrap() {
                        bad_witness += 1;
                    }
                }
            }
            Err(e) => errors.push(format!("#{i}: {}", e.kind)),
        }
    }
    let el = t.elapsed();
    let pass = agree == C4_COUNT && bad_witness == 0 && el < C4_LIMIT;
    outcome(pass, format!("{agree}/{C4_COUNT} agree ({sat} sat), witness failures {bad_witness}, errors {errors:?}, {el:.2?}"))
}

fn c5_named() -> Outcome {
    let two = BaseDescriptor::natural(2).unwrap();
    let half = BaseDescriptor::rational(&Q::new(Z::one(), Z::from(2))).unwrap();
    let pi = BaseDescriptor::pi();
    let cases: Vec<(&str, &BaseDescriptor, &str, Option<Vec<i64>>)> = vec![
        ("2: 3<x<5", &two, "(exists (x) (and (pow x) (< 3 x) (< x 5)))", Some(vec![2])),
        ("2: x^2=2", &two, "(exists (x) (and (pow x) (= (^ x 2) 2)))", None),
        ("2: x+y=12", &two, "(exists (x y) (and (pow x) (pow y) (= (+ x y) 12)))", Some(vec![2, 3])),
        ("pi: 3<x<4", &pi, "(exists (x) (and (pow x) (< 3 x) (< x 4)))", Some(vec![1])),
        ("1/2: 2<x<5", &half, "(exists (x) (and (pow x) (< 2 x) (< x 5)))", Some(vec![-2])),
    ];
    let mut bad = Vec::new();
    let mut worst = Duration::ZERO;
    for (name, base, src, want) in cases {
        let t = Instant::now();
        let v = solve(&parse_formula(src).unwrap(), base, &SolveOptions::default());
        let el = t.elapsed();
        worst = worst.max(el);
        let got = v.map(|v| {
            v.sat.then(|| {
                let mut e: Vec<i64> = v.witness.values().map(|w| w.exponent.unwrap()).collect();
                e.sort();
                e
            })
        });
        match got {
            Ok(g) if g == want && el < C5_LIMIT => {}
            other => bad.push(format!("{name}: {other:?} in {el:.2?}")),
        }
    }
    outcome(bad.is_empty(), format!("5 instances, failures {bad:?}, slowest {worst:.2?}"))
}

fn c6_closed_forms() -> Outcome {
    let l = g_closed_form(1, &Z::from(1), 1, 3, &Z::from(8)).value();
    let u = witness_bound_params(1, &Z::from(8), 3, &Z::from(3), 1);
    let want_exp = Z::from(1_853_020_188_851_841u64);
    let ok_l = l == Some(Z::from(139_314_069_504u64));
    let ok_u = u.exp == Exponent::Exact(want_exp.clone()) && u.base == Z::from(24) && num_traits::pow(Z::from(3), 32) == want_exp;
    outcome(ok_l && ok_u, format!("L = {l:?}, U = {u}"))
}

fn c7_propagation() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut violations = 0;
    for i in 0..C7_COUNT {
        let l = if i % 2 == 0 { 4 } else { 16 };
        let p = random_upoly(&mut rng, 8, 50);
        let r = Q::new(Z::from(rng.gen_range(-4000..=4000)), Z::from(rng.gen_range(1..=1000)));
        let k = r.abs().ceil().to_integer().max(Z::one());
        // M ≥ L + log(h+1) + 2·deg·log(K+1)
        let h = p.height();
        let m = l + log2_ceil(&(h + 1)) + 2 * p.degree() as i64 * log2_ceil(&(k + 1));
        let delta = pow2(-m) * Q::new(Z::from(rng.gen_range(-1000..=1000)), Z::from(1000));
        let diff = (eval_upoly_q(&p, &r) - eval_upoly_q(&p, &(&r + delta))).abs();
        violations += (diff > pow2(-l)) as usize;
    }
    outcome(violations == 0, format!("{C7_COUNT} samples at L in {{4,16}}, violations {violations}"))
}

fn log2_ceil(x: &Z) -> i64 {
    let b = x.bits() as i64;
    if (Z::one() << (b - 1) as usize) == *x {
        b - 1
    } else {
        b
    }
}

fn chain(r0: i64, t: i64) -> StochasticGame {
    StochasticGame::from_json(&json!({
        "states": [
            {"name": "a", "actions": [{"name": "go", "dist": [["b", "1"]]}], "reward": r0.to_string()},
            {"name": "b", "target": 1}
        ],
        "initial": "a", "threshold": t.to_string()
    }))
    .unwrap()
}

// acyclic single-action game: states 0..n, edges go forward, last two are targets 1 and 0
fn acyclic_game(rng: &mut StdRng) -> (serde_json::Value, f64) {
    let n = rng.gen_range(3..=5);
    let xi = (-1.0f64).exp();
    let mut states = Vec::new();
    let mut vals = vec![0.0; n + 2];
    vals[n] = 1.0;
    let mut rewards = vec![0i64; n];
    let mut dists: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for s in (0..n).rev() {
        rewards[s] = rng.gen_range(0..=3);
        let k = rng.gen_range(1..=2);
        let mut succ: Vec<usize> = (0..k).map(|_| rng.gen_range(s + 1..n + 2)).collect();
        succ.sort();
        succ.dedup();
        let w = succ.len() as i64;
        // uniform over successors, in quarters where possible
        dists[s] = succ.iter().map(|&t| (t, w)).collect();
        vals[s] = xi.powi(rewards[s] as i32) * succ.iter().map(|&t| vals[t] / w as f64).sum::<f64>();
    }
    for s in 0..n {
        states.push(json!({
            "name": format!("s{s}"),
            "actions": [{"name": "a", "dist": dists[s].iter().map(|(t, w)| json!([format!("s{t}"), format!("1/{w}")])).collect::<Vec<_>>()}],
            "reward": rewards[s].to_string()
        }));
    }
    states.push(json!({"name": format!("s{n}"), "target": 1}));
    states.push(json!({"name": format!("s{}", n + 1), "target": 0}));
    let v0 = vals[0];
    // threshold t with xi^t away from v0
    let mut t = rng.gen_range(0..=8);
    while (xi.powi(t) - v0).abs() < 1e-6 * v0.max(1e-12) {
        t += 1;
    }
    let holds = v0 <= xi.powi(t);
    (json!({"states": states, "initial": "s0", "threshold": t.to_string()}), if holds { 1.0 } else { 0.0 })
}

fn c8_erisk() -> Outcome {
    let t = Instant::now();
    let e = RiskBase::E;
    let one = AlgebraicNumber::int(1);
    let tc = TableConstants::new();
    let decide = |g: &StochasticGame| erisk_decide(g, &e, &one, &tc).unwrap();
    let single = |th: &str| {
        StochasticGame::from_json(&json!({"states": [{"name": "s", "target": 1}], "initial": "s", "threshold": th})).unwrap()
    };
    let hand = [decide(&single("0")), !decide(&single("1")), decide(&chain(2, 1))];
    let mut rng = StdRng::seed_from_u64(8);
    let mut corpus_bad = 0;
    for _ in 0..20 {
        let (g, want) = acyclic_game(&mut rng);
        let got = decide(&StochasticGame::from_json(&g).unwrap());
        corpus_bad += (got != (want == 1.0)) as usize;
    }
    let seq: Vec<bool> = (0..=4).map(|th| decide(&chain(2, th))).collect();
    let flips = seq.windows(2).filter(|w| w[0] != w[1]).count();
    let el = t.elapsed();
    let pass = hand.iter().all(|b| *b) && corpus_bad == 0 && flips == 1 && el < C8_LIMIT;
    outcome(pass, format!("hand games {hand:?}, corpus mismatches {corpus_bad}/20, t-sweep {seq:?} ({flips} flip), {el:.2?}"))
}

// y within tol of a^r for r = m/n given a ∈ [lo, hi] with lo > 0
fn power_close(y: &Q, lo: &Q, hi: &Q, m: i64, n: u32, tol: &Q) -> bool {
    let (lo, hi, m) = if m < 0 { (hi.recip(), lo.recip(), -m) } else { (lo.clone(), hi.clone(), m) };
    let below = y - tol;
    let above = y + tol;
    let upper_ok = below <= Q::zero() || num_traits::pow(below, n as usize) <= num_traits::pow(hi, m as usize);
    let lower_ok = num_traits::pow(above, n as usize) >= num_traits::pow(lo, m as usize);
    upper_ok && lower_ok
}

fn postconditions(a: &AlgebraicNumber, roots: &[f64]) -> bool {
    if a.lo == a.hi {
        return eval_upoly_q(&a.q, &a.lo).is_zero();
    }
    let int_inside = a.lo.floor() + Q::one() < a.hi;
    let (lo, hi) = (a.lo.to_f64().unwrap(), a.hi.to_f64().unwrap());
    let inside = roots.iter().filter(|r| **r >= lo - 1e-12 && **r <= hi + 1e-12).count();
    !int_inside && inside == 1
}

fn c9_algebraic() -> Outcome {
    let tol = pow2(-C9_TOL_BITS);
    let corpus: Vec<(AlgebraicNumber, i64, u32)> = vec![
        (sqrt_of(2), 2, 1),
        (AlgebraicNumber::int(2), 1, 2),
        (AlgebraicNumber::int(3), 2, 3),
        (AlgebraicNumber::rational(&Q::new(Z::from(5), Z::from(2))), -1, 1),
    ];
    let mut power_bad = 0;
    for (a, m, n) in &corpus {
        let p = a.power(&Q::new(Z::from(*m), Z::from(*n))).unwrap();
        let y = Machine::algebraic(&p).approx(16).unwrap();
        let x = Machine::algebraic(a).approx(40).unwrap();
        let w = pow2(-40);
        power_bad += !power_close(&y, &(&x - &w), &(&x + &w), *m, *n, &tol) as usize;
    }
    let mut rng = StdRng::seed_from_u64(9);
    let (mut rational_bad, mut post_bad, mut irrational) = (0, 0, 0);
    let squares = [1i64, 4, 9, 16, 25, 36, 49];
    for _ in 0..100 {
        let mut k = rng.gen_range(2..=50);
        while squares.contains(&k) {
            k += 1;
        }
        let num = rng.gen_range(-30..=30);
        let den = rng.gen_range(1..=9);
        // (den·x − num)(x² − k)
        let poly = UPoly::from_i64(&[-num, den]).mul(&UPoly::from_i64(&[-k, 0, 1]));
        let r = Q::new(Z::from(num), Z::from(den));
        let sk = (k as f64).sqrt();
        let roots = [num as f64 / den as f64, sk, -sk];
        let gap = roots[1..].iter().map(|s| (s - roots[0]).abs()).fold(f64::INFINITY, f64::min);
        let w = Q::new(Z::one(), Z::from(((4.0 / gap).ceil() as i64).max(1)));
        let a = canonicalize(&poly, &(&r - &w), &(&r + &w)).unwrap();
        rational_bad += (a.is_rational() != Some(r.clone())) as usize;
        post_bad += !postconditions(&a, &roots) as usize;
        let (fl, cl) = (sk.floor(), sk.floor() + 1.0);
        if roots[0] < fl || roots[0] > cl {
            irrational += 1;
            let s = canonicalize(&poly, &qi(fl as i64), &qi(cl as i64)).unwrap();
            rational_bad += s.is_rational().is_some() as usize;
            post_bad += !postconditions(&s, &roots) as usize;
        }
    }
    let pass = power_bad == 0 && rational_bad == 0 && post_bad == 0;
    outcome(pass, format!("power corpus misses {power_bad}/4, is_rational misses {rational_bad}/{}, postcondition failures {post_bad}", 100 + irrational))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("approximation contract", c1_approximation),
        ("sign-oracle exactness", c2_sign_oracle),
        ("fewnomial signs", c3_fewnomial),
        ("xz qe vs enumerate", c4_xz_equivalence),
        ("named end-to-end instances", c5_named),
        ("closed-form bounds", c6_closed_forms),
        ("approximation propagation", c7_propagation),
        ("entropic risk", c8_erisk),
        ("algebraic module", c9_algebraic),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("criterion {}: {} - {}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
