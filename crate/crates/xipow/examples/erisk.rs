//! Entropic-risk threshold on a two-state chain as the threshold moves.
use serde_json::json;
use xipow::algebraic::AlgebraicNumber;
use xipow::barrier::TableConstants;
use xipow::erisk::{build_constraints, erisk_decide, RiskBase, StochasticGame};

fn main() -> xipow::Result<()> {
    let tc = TableConstants::new();
    for t in 0..=4 {
        let g = StochasticGame::from_json(&json!({
            "states": [
                {"name": "start", "player": "max",
                 "actions": [{"name": "go", "dist": [["goal", "1/2"], ["fail", "1/2"]]},
                             {"name": "safe", "dist": [["goal", "1"]]}],
                 "reward": "2"},
                {"name": "goal", "target": 1},
                {"name": "fail", "target": 0}
            ],
            "initial": "start", "threshold": t.to_string()
        }))?;
        if t == 0 {
            println!("{}", build_constraints(&g));
        }
        let holds = erisk_decide(&g, &RiskBase::E, &AlgebraicNumber::int(1), &tc)?;
        println!("t = {t}: {holds}");
    }
    Ok(())
}
