use logchan_core::repcode::{
    eps_delta_from_chi, inhomogeneous_eps_delta, logical_chi_enumerate, logical_eps_delta_closed, theorem1_asymptotics,
    MAX_ENUMERATION_N,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::emit::{cell, chi_json, num, nums, opt_cell, Table};
use crate::error::{CliError, CliResult};

use super::Report;

/// Largest `n` enumerated when `mode` is left at `auto`.
const AUTO_ENUMERATION_N: usize = 21;
/// Agreement required between enumeration and the closed form.
const CLOSED_FORM_TOL: f64 = 1e-12;

pub fn run(cfg: &RunConfig) -> CliResult<Report> {
    let (angles, uniform) = match (&cfg.angles, cfg.theta) {
        (Some(a), None) => (a.clone(), None),
        (None, Some(t)) => (vec![t; cfg.n.unwrap_or(3)], Some(t)),
        (Some(_), Some(_)) => return Err(CliError::input("give either `theta` or `angles`, not both")),
        (None, None) => return Err(CliError::input("`repcode` needs `theta` or `angles`")),
    };
    let n = angles.len();
    if cfg.n.is_some_and(|k| k != n) {
        return Err(CliError::input(format!("`n` = {} does not match {n} angles", cfg.n.unwrap_or(0))));
    }
    let closed = match uniform {
        Some(t) => logical_eps_delta_closed(n, t)?,
        None => inhomogeneous_eps_delta(&angles)?,
    };
    let enumerate = match cfg.mode.as_deref().unwrap_or("auto") {
        "auto" => n <= AUTO_ENUMERATION_N,
        "enumerate" => true,
        "closed" => false,
        other => return Err(CliError::input(format!("unknown repcode mode `{other}` (auto, enumerate, closed)"))),
    };
    if enumerate && n > MAX_ENUMERATION_N {
        return Err(CliError::input(format!("enumeration is limited to n <= {MAX_ENUMERATION_N}")));
    }
    let chi = enumerate.then(|| logical_chi_enumerate(&angles, cfg.workers)).transpose()?;
    let (eps, delta) = chi.as_ref().map_or(closed, eps_delta_from_chi);
    let agree = |a: f64, b: f64| (a - b).abs() <= CLOSED_FORM_TOL * a.abs().max(b.abs()).max(1e-300) || a == b;
    let matches = chi.is_none() || (agree(eps, closed.0) && agree(delta, closed.1));
    let asym = uniform.and_then(|t| theorem1_asymptotics(n, t).ok());
    let mut doc = json!({
        "n": n,
        "eps": num(eps),
        "delta": num(delta),
        "eps_closed": num(closed.0),
        "delta_closed": num(closed.1),
        "eps_hat": asym.map_or(Value::Null, |a| num(a.eps_hat)),
        "delta_hat": asym.map_or(Value::Null, |a| num(a.delta_hat)),
        "method": if chi.is_some() { "enumeration" } else { "closed form" },
        "closed_form_agrees": matches,
        "logical_chi": chi.as_ref().map_or(Value::Null, chi_json),
    });
    match uniform {
        Some(t) => doc["theta"] = num(t),
        None => doc["angles"] = nums(&angles),
    }
    let mut table = Table::new(vec!["n", "theta", "eps", "delta", "eps_hat", "delta_hat"]);
    table.push(vec![
        n.to_string(),
        opt_cell(uniform),
        cell(eps),
        cell(delta),
        opt_cell(asym.map(|a| a.eps_hat)),
        opt_cell(asym.map(|a| a.delta_hat)),
    ]);
    Ok(Report::new(doc, Some(table), matches))
}
