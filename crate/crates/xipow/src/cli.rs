//! Command-line surface: one JSON document per invocation.

use crate::barrier::{BaseDescriptor, Provenance, RootBarrier, TableConstants};
use crate::erisk::{erisk_decide, eta_from_json, params_from_json, risk_base_from_json, StochasticGame};
use crate::error::{err, Error, ErrorKind, Result};
use crate::formula::Formula;
use crate::poly::XI;
use crate::qe::QeEngine;
use crate::rat::{fmt_q, Z};
use crate::rsolver::{emit_etr, normalize_body, solve, SolveOptions};
use crate::sexp::{parse_formula, parse_poly};
use crate::sign::sign_xi;
use crate::xz::{witness_bound, Exponent, Strategy, XzOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Parser, Debug)]
#[command(name = "xipow", version, about = "Decide real arithmetic with an integer-power predicate")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Qe,
    Enumerate,
}

#[derive(Args, Debug, Clone)]
pub struct Knobs {
    #[arg(long, value_enum, default_value = "qe")]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 8)]
    pub max_exponent: i64,
    /// builtin or exec:CMD
    #[arg(long, default_value = "builtin")]
    pub qe: String,
    #[arg(long, default_value_t = 4096)]
    pub accuracy_cap: u64,
    #[arg(long, default_value_t = crate::xz::DEFAULT_BRANCH_BUDGET)]
    pub branch_budget: u64,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Satisfiability of a formula
    Solve {
        #[arg(long)]
        base: String,
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Sign of a univariate polynomial at the base
    Sign {
        #[arg(long)]
        base: String,
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Rational within 2^-n of the base
    Approx {
        #[arg(long)]
        base: String,
        #[arg(short)]
        n: u64,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Entropic-risk threshold of a game
    Erisk {
        #[arg(long)]
        game: String,
        /// "e", a rational, or algebraic JSON; overrides the game file
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        eta: Option<String>,
    },
    /// Closed-form witness bound
    Bounds {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// SMT-LIB2 script for a formula over powers with fixed exponents
    EmitEtr {
        #[arg(long)]
        base: String,
        #[arg(long)]
        formula: String,
        /// JSON object variable -> exponent
        #[arg(long)]
        exponents: String,
    },
}

/// Text of an argument that is either inline or a path.
fn load(arg: &str, inline: &[char]) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with(inline) {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Error::new(ErrorKind::Io, format!("{arg}: {e}")))
}

fn load_json(arg: &str) -> Result<Value> {
    let s = load(arg, &['{', '[', '"'])?;
    serde_json::from_str(&s).map_err(|e| Error::new(ErrorKind::Parse, format!("{arg}: {e}")))
}

fn load_base(arg: &str, cap: u64) -> Result<BaseDescriptor> {
    Ok(BaseDescriptor::from_json(&load_json(arg)?)?.with_cap(cap))
}

fn load_formula(arg: &str) -> Result<Formula> {
    parse_formula(&load(arg, &['('])?)
}

fn json_value(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()))
}

impl Knobs {
    fn solve_options(&self) -> Result<SolveOptions> {
        let strategy = match self.strategy {
            StrategyArg::Qe => Strategy::Qe,
            StrategyArg::Enumerate => Strategy::Enumerate(self.max_exponent),
        };
        Ok(SolveOptions { xz: XzOptions { strategy, branch_budget: self.branch_budget }, qe: QeEngine::parse(&self.qe)? })
    }
}

/// Output document and exit code.
pub fn dispatch(cmd: &Cmd) -> Result<(String, i32)> {
    match cmd {
        Cmd::Solve { base, formula, knobs } => {
            let b = load_base(base, knobs.accuracy_cap)?;
            let v = solve(&load_formula(formula)?, &b, &knobs.solve_options()?)?;
            let witness: BTreeMap<&String, Value> = v
                .witness
                .iter()
                .map(|(x, w)| (x, json!({"exponent": w.exponent, "residual": w.residual})))
                .collect();
            let out = json!({
                "status": if v.sat { "sat" } else { "unsat" },
                "witness": witness,
                "stats": v.stats,
            });
            Ok((out.to_string(), if v.sat { 0 } else { 1 }))
        }
        Cmd::Sign { base, poly, knobs } => {
            let b = load_base(base, knobs.accuracy_cap)?;
            let mut p = parse_poly(poly)?;
            let vars: Vec<String> = p.vars().into_iter().filter(|v| v != XI).collect();
            match vars.as_slice() {
                [] => {}
                [x] if !p.contains_var(XI) => p = p.rename(x, XI),
                _ => return err(ErrorKind::Parse, "sign takes a polynomial in one variable"),
            }
            let s = sign_xi(&p, &b)?;
            let out = json!({"sign": match s { 0 => "0", s if s < 0 => "-", _ => "+" }});
            Ok((out.to_string(), 0))
        }
        Cmd::Approx { base, n, knobs } => {
            let b = load_base(base, knobs.accuracy_cap)?;
            let v = b.machine.approx(*n)?;
            Ok((json!({"value": fmt_q(&v), "accuracy": n}).to_string(), 0))
        }
        Cmd::Erisk { game, b, eta } => {
            let doc = load_json(game)?;
            let g = StochasticGame::from_json(&doc)?;
            let (mut rb, mut e) = params_from_json(&doc)?;
            if let Some(b) = b {
                rb = risk_base_from_json(&json_value(b))?;
            }
            if let Some(x) = eta {
                e = eta_from_json(&json_value(x))?;
            }
            let holds = erisk_decide(&g, &rb, &e, &TableConstants::new())?;
            Ok((json!({"holds": holds}).to_string(), 0))
        }
        Cmd::Bounds { formula, base, c, k } => {
            let mut barrier = match base {
                Some(b) => load_base(b, 4096)?.barrier,
                None => None,
            };
            if let Some(c) = c {
                let c: Z = c.parse().map_err(|_| Error::new(ErrorKind::Parse, format!("bad c {c}")))?;
                barrier = Some(RootBarrier::new(c, k.unwrap_or(1), Provenance::UserConfig));
            }
            let Some(barrier) = barrier else {
                return err(ErrorKind::NoStrategy, "bounds need a barrier: pass --base with one, or --c and --k");
            };
            let psi = normalize_body(&load_formula(formula)?)?;
            let u = witness_bound(&psi, &barrier);
            let exponent = match &u.exp {
                Exponent::Exact(e) => e.to_string(),
                t => t.to_string(),
            };
            let value = u.value().map(|v| v.to_string()).unwrap_or_else(|| "structural".into());
            let out = json!({"U": value, "base": u.base.to_string(), "exponent": exponent, "form": u.to_string()});
            Ok((out.to_string(), 0))
        }
        Cmd::EmitEtr { base, formula, exponents } => {
            let b = load_base(base, 4096)?;
            let ex: BTreeMap<String, i64> = serde_json::from_value(load_json(exponents)?)
                .map_err(|e| Error::new(ErrorKind::Parse, format!("exponents: {e}")))?;
            Ok((emit_etr(&load_formula(formula)?, &ex, &b)?, 0))
        }
    }
}

/// Runs the CLI on `args`; returns the exit code after printing.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand) {
                print!("{e}");
                return 0;
            }
            println!("{}", json!({"error": {"kind": "PARSE", "detail": e.to_string().trim()}}));
            return 2;
        }
    };
    match dispatch(&cli.cmd) {
        Ok((out, code)) => {
            if out.ends_with('\n') {
                print!("{out}");
            } else {
                println!("{out}");
            }
            code
        }
        Err(e) => {
            println!("{}", json!({"error": {"kind": e.kind.as_str(), "detail": e.detail}}));
            2
        }
    }
}
