//! Entropic-risk thresholds for turn-based stochastic games.

use crate::algebraic::AlgebraicNumber;
use crate::barrier::{BaseDescriptor, TableConstants};
use crate::error::{err, Error, ErrorKind, Result};
use crate::formula::Formula;
use crate::poly::{Monomial, Poly};
use crate::qe::{qe_eliminate, QeEngine};
use crate::rat::{fmt_q, lcm_all, parse_q, Q, Z};
use crate::sign;
use num_traits::{One, Signed, Zero};
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    Max,
    Min,
}

#[derive(Clone, Debug)]
pub struct Action {
    pub name: String,
    pub dist: Vec<(String, Q)>,
}

#[derive(Clone, Debug)]
pub struct State {
    pub name: String,
    pub player: Player,
    pub actions: Vec<Action>,
    pub reward: Q,
    pub target: Option<u8>,
}

#[derive(Clone, Debug)]
pub struct StochasticGame {
    pub states: Vec<State>,
    pub initial: String,
    pub threshold: Q,
}

/// The base b of b^{−η}.
#[derive(Clone, Debug)]
pub enum RiskBase {
    E,
    Algebraic(AlgebraicNumber),
}

fn bad(m: impl Into<String>) -> Error {
    Error::new(ErrorKind::Parse, m)
}

fn rational_field(v: &Value, what: &str) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => parse_q(&n.to_string()),
        _ => Err(bad(format!("{what} must be a rational"))),
    }
}

impl StochasticGame {
    pub fn from_json(v: &Value) -> Result<Self> {
        let states = v.get("states").and_then(|s| s.as_array()).ok_or_else(|| bad("game: missing states"))?;
        let mut out = Vec::new();
        for s in states {
            let name = s.get("name").and_then(|x| x.as_str()).ok_or_else(|| bad("state: missing name"))?.to_string();
            let player = match s.get("player").and_then(|x| x.as_str()).unwrap_or("max") {
                "max" => Player::Max,
                "min" => Player::Min,
                p => return Err(bad(format!("state {name}: unknown player {p}"))),
            };
            let mut actions = Vec::new();
            for a in s.get("actions").and_then(|x| x.as_array()).map(|x| x.as_slice()).unwrap_or(&[]) {
                let an = a.get("name").and_then(|x| x.as_str()).unwrap_or("").to_string();
                let mut dist = Vec::new();
                for e in a.get("dist").and_then(|x| x.as_array()).ok_or_else(|| bad("action: missing dist"))? {
                    let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("dist entries are [state, prob]"))?;
                    let to = pair[0].as_str().ok_or_else(|| bad("dist state must be a string"))?.to_string();
                    dist.push((to, rational_field(&pair[1], "probability")?));
                }
                actions.push(Action { name: an, dist });
            }
            let reward = match s.get("reward") {
                None | Some(Value::Null) => Q::zero(),
                Some(r) => rational_field(r, "reward")?,
            };
            let target = match s.get("target") {
                None | Some(Value::Null) => None,
                Some(t) => match t.as_u64() {
                    Some(d @ (0 | 1)) => Some(d as u8),
                    _ => return Err(bad(format!("state {name}: target must be 0, 1 or null"))),
                },
            };
            out.push(State { name, player, actions, reward, target });
        }
        let initial = v.get("initial").and_then(|x| x.as_str()).ok_or_else(|| bad("game: missing initial"))?.to_string();
        let threshold = rational_field(v.get("threshold").ok_or_else(|| bad("game: missing threshold"))?, "threshold")?;
        let g = StochasticGame { states: out, initial, threshold };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let inv = |m: String| Err(Error::new(ErrorKind::InvalidParams, m));
        let names: BTreeMap<&str, &State> = self.states.iter().map(|s| (s.name.as_str(), s)).collect();
        if names.len() != self.states.len() {
            return inv("duplicate state names".into());
        }
        if !names.contains_key(self.initial.as_str()) {
            return inv(format!("initial state {} is unknown", self.initial));
        }
        for s in &self.states {
            if s.reward.is_negative() {
                return inv(format!("state {} has a negative reward", s.name));
            }
            if s.target.is_none() && s.actions.is_empty() {
                return inv(format!("state {} has no actions", s.name));
            }
            for a in &s.actions {
                let mut total = Q::zero();
                for (to, p) in &a.dist {
                    if !names.contains_key(to.as_str()) {
                        return inv(format!("state {} moves to unknown {to}", s.name));
                    }
                    if p.is_negative() {
                        return inv(format!("state {} has a negative probability", s.name));
                    }
                    total += p;
                }
                if !total.is_one() {
                    return inv(format!("distribution of {}/{} sums to {}", s.name, a.name, fmt_q(&total)));
                }
            }
        }
        Ok(())
    }

    /// Common denominator d of the rewards and the threshold.
    pub fn exponent_denominator(&self) -> Z {
        let ds: Vec<Z> = self.states.iter().map(|s| s.reward.denom().clone()).chain([self.threshold.denom().clone()]).collect();
        lcm_all(ds.iter())
    }
}

/// Variable name of v(s).
pub fn value_var(s: &str) -> String {
    format!("v_{s}")
}

fn xi_rational(e: &Q, d: &Z) -> Monomial {
    let k = e * Q::from(d.clone());
    debug_assert!(k.is_integer());
    Monomial::xi_pow(k.to_integer().try_into().expect("exponent fits"))
}

/// Constraint system over v(s); ξ stands for b^{−η/d} with d the exponent denominator.
pub fn build_constraints(g: &StochasticGame) -> Formula {
    let d = g.exponent_denominator();
    let v = |s: &str| Poly::var(&value_var(s));
    let mut parts = vec![Formula::less_eq(&v(&g.initial), &Poly::term(Z::one(), xi_rational(&g.threshold, &d)))];
    for s in &g.states {
        if let Some(ds) = s.target {
            parts.push(Formula::equal(&v(&s.name), &Poly::int(ds as i64)));
            continue;
        }
        let scale = xi_rational(&s.reward, &d);
        let exprs: Vec<(Poly, Z)> = s
            .actions
            .iter()
            .map(|a| {
                let den = lcm_all(a.dist.iter().map(|(_, p)| p.denom()));
                let sum = a.dist.iter().fold(Poly::zero(), |acc, (to, p)| {
                    let c = (p * Q::from(den.clone())).to_integer();
                    acc.add(&v(to).scale(&c))
                });
                (sum.mul_monomial(&scale), den)
            })
            .collect();
        // den·v(s) compared with den·expr
        let lhs = |den: &Z| v(&s.name).scale(den);
        if exprs.len() == 1 {
            let (e, den) = &exprs[0];
            parts.push(Formula::equal(&lhs(den), e));
            continue;
        }
        for (e, den) in &exprs {
            parts.push(match s.player {
                Player::Max => Formula::less_eq(e, &lhs(den)),
                Player::Min => Formula::less_eq(&lhs(den), e),
            });
        }
        parts.push(Formula::or(exprs.iter().map(|(e, den)| Formula::equal(&lhs(den), e)).collect()));
    }
    Formula::and(parts)
}

/// Base x = b^{−η/d}.
pub fn risk_base(b: &RiskBase, eta: &AlgebraicNumber, d: &Z, constants: &TableConstants) -> Result<BaseDescriptor> {
    if eta.sign() <= 0 {
        return err(ErrorKind::InvalidParams, format!("eta = {eta} is not positive"));
    }
    let e = eta.scale(&Q::new(Z::from(-1), d.clone()))?;
    match b {
        RiskBase::E => BaseDescriptor::e_pow(&e, constants),
        RiskBase::Algebraic(a) => {
            if a.cmp_rational(&Q::one()) != std::cmp::Ordering::Greater {
                return err(ErrorKind::InvalidParams, format!("b = {a} is not greater than 1"));
            }
            BaseDescriptor::alpha_pow(a, &e, constants)
        }
    }
}

/// Whether the constraint system of the game is satisfiable.
pub fn erisk_decide(g: &StochasticGame, b: &RiskBase, eta: &AlgebraicNumber, constants: &TableConstants) -> Result<bool> {
    g.validate()?;
    let d = g.exponent_denominator();
    let base = risk_base(b, eta, &d, constants)?;
    let phi = build_constraints(g);
    let vars: Vec<String> = phi.free_vars().into_iter().collect();
    let mut tidy = |f: Formula| -> Result<Formula> {
        let mut failure = None;
        let out = f.simplify_with(&mut |p: &Poly| {
            if !p.is_xi_only() || failure.is_some() {
                return None;
            }
            match sign::sign_xi(p, &base) {
                Ok(s) => Some(s),
                Err(e) => {
                    failure = Some(e);
                    None
                }
            }
        });
        failure.map_or(Ok(out), Err)
    };
    let psi = qe_eliminate(&phi, &vars, &QeEngine::Builtin, &mut tidy)?;
    let psi = tidy(psi)?;
    psi.eval_with(&mut |p| sign::sign_xi(p, &base))
}

/// Parses b: "e", an integer, "p/q", or an algebraic JSON object.
pub fn risk_base_from_json(v: &Value) -> Result<RiskBase> {
    match v {
        Value::String(s) if s == "e" => Ok(RiskBase::E),
        Value::String(s) => Ok(RiskBase::Algebraic(AlgebraicNumber::rational(&parse_q(s)?))),
        Value::Number(n) => Ok(RiskBase::Algebraic(AlgebraicNumber::rational(&parse_q(&n.to_string())?))),
        _ => Ok(RiskBase::Algebraic(AlgebraicNumber::from_json(v)?)),
    }
}

/// Parses η like `risk_base_from_json` minus the "e" case.
pub fn eta_from_json(v: &Value) -> Result<AlgebraicNumber> {
    match v {
        Value::String(s) => Ok(AlgebraicNumber::rational(&parse_q(s)?)),
        Value::Number(n) => Ok(AlgebraicNumber::rational(&parse_q(&n.to_string())?)),
        _ => AlgebraicNumber::from_json(v),
    }
}

/// Bits of a game JSON beyond the game itself: optional "b" (default e) and "eta" (default 1).
pub fn params_from_json(v: &Value) -> Result<(RiskBase, AlgebraicNumber)> {
    let b = v.get("b").map(risk_base_from_json).transpose()?.unwrap_or(RiskBase::E);
    let eta = v.get("eta").map(eta_from_json).transpose()?.unwrap_or_else(|| AlgebraicNumber::int(1));
    Ok((b, eta))
}
