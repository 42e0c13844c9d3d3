use logchan_core::channel::{chi_to_ptm, ChiMatrix};
use logchan_core::repcode::logical_chi_enumerate;
use logchan_core::toric::{brute_force_logical_chi, Axis, TABLE_L};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::emit::{num, Table};
use crate::error::{CliError, CliResult};

use super::metrics::{channel_metrics_json, metrics_row, METRICS_HEADER};
use super::Report;

/// Metric rows over a list of angles for a physical rotation (`physical`),
/// the repetition-code logical channel (`repcode`, length `n`) or the
/// `L = 3` toric logical channel (`toric`).
pub fn run(cfg: &RunConfig) -> CliResult<Report> {
    let thetas = match (&cfg.thetas, cfg.theta) {
        (Some(t), _) => t.clone(),
        (None, Some(t)) => vec![t],
        (None, None) => return Err(CliError::input("`sweep` needs `thetas`")),
    };
    let target = cfg.target.as_deref().unwrap_or("physical");
    let mut table = Table::new(METRICS_HEADER.to_vec());
    let mut points = Vec::with_capacity(thetas.len());
    for &t in &thetas {
        let chi = match target {
            "physical" => ChiMatrix::x_rotation(t),
            "repcode" => logical_chi_enumerate(&vec![t; cfg.n.unwrap_or(3)], cfg.workers)?,
            "toric" => {
                if cfg.l.is_some_and(|l| l != TABLE_L) {
                    return Err(CliError::input(format!("toric sweeps use the exact L = {TABLE_L} channel")));
                }
                brute_force_logical_chi(TABLE_L, t, Axis::Z)?
            }
            other => return Err(CliError::input(format!("unknown sweep target `{other}` (physical, repcode, toric)"))),
        };
        let ptm = chi_to_ptm(&chi)?;
        table.push(metrics_row(Some(t), &ptm));
        let mut point = channel_metrics_json(&ptm);
        point["theta"] = num(t);
        points.push(point);
    }
    let doc = json!({ "target": target, "points": Value::Array(points) });
    Ok(Report::new(doc, Some(table), true))
}
