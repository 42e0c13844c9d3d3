use logchan_core::correlated::{collisionless_prediction, theorem2_check, CorrelatedModel};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::emit::{cell, chi_json, complex, num, opt_cell, opt_num, Table};
use crate::error::{CliError, CliResult};

use super::Report;

pub fn run(cfg: &RunConfig) -> CliResult<Report> {
    let n = cfg.n.unwrap_or(7);
    let h1 = cfg.h1.ok_or_else(|| CliError::input("`correlated` needs `h1`"))?;
    let h2 = cfg.h2.unwrap_or(0.0);
    let h3 = cfg.h3.unwrap_or(0.0);
    let model = CorrelatedModel::new(n, h1, h2)?.with_h3(h3)?;
    let chi = model.logical_chi()?;
    let t2 = theorem2_check(&model)?;
    let mut table =
        Table::new(vec!["q", "omega", "delta", "ratio", "bound_margin", "coherent_term", "incoherent_term"]);
    let prediction = if h3 == 0.0 {
        let p = collisionless_prediction(&model)?;
        let terms: Vec<Value> = p
            .terms
            .iter()
            .map(|t| {
                table.push(vec![
                    t.q.to_string(),
                    opt_cell(t.omega),
                    cell(t.delta),
                    opt_cell(t.ratio),
                    opt_cell(t.bound_margin),
                    cell(t.coherent_term),
                    cell(t.incoherent_term),
                ]);
                json!({
                    "q": t.q,
                    "omega": opt_num(t.omega),
                    "delta": num(t.delta),
                    "ratio": opt_num(t.ratio),
                    "bound_margin": opt_num(t.bound_margin),
                    "coherent_term": num(t.coherent_term),
                    "incoherent_term": num(t.incoherent_term),
                })
            })
            .collect();
        json!({
            "chi_xi": complex(p.chi_xi),
            "chi_xx": num(p.chi_xx),
            "enhancement": num(p.enhancement),
            "enhancement_exp": num(p.enhancement_exp),
            "terms": terms,
        })
    } else {
        Value::Null
    };
    let doc = json!({
        "n": n,
        "h1": num(h1),
        "h2": num(h2),
        "h3": num(h3),
        "logical_chi": chi_json(&chi),
        "coherence_bound": {
            "chi_xx": num(t2.chi_xx),
            "chi_xi": complex(t2.chi_xi),
            "rhs": num(t2.rhs),
            "tolerance": num(t2.tolerance),
            "margin": num(t2.margin),
            "holds": t2.holds,
            "collisionless_valid": t2.collisionless_valid,
        },
        "prediction": prediction,
    });
    Ok(Report::new(doc, Some(table), t2.holds))
}
