use logchan_core::channel::{
    average_infidelity, benchmarking_parameter, chi_diamond_bound, chi_from_kraus, chi_to_ptm, coherence_angle,
    compose, diamond_bounds, eps_delta, growth_fit, offdiag_identity_check, random_cptp_kraus, unitarity, ChiMatrix,
    Ptm, MAX_DENSE_QUBITS,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::emit::{cell, chi_json, num, opt_cell, parse_chi, ptm_json, Table};
use crate::error::{CliError, CliResult};

use super::Report;

/// Columns of the metric rows shared with `sweep`.
pub const METRICS_HEADER: [&str; 9] = ["theta", "r", "p", "u", "Theta", "D_lo", "D_hi", "eps", "delta"];

/// Tolerance for reading `(eps, delta)` off a transfer matrix.
const EPS_DELTA_TOL: f64 = 1e-12;

/// Metrics of a transfer matrix. The coherence angle is `null` when the
/// unitarity vanishes.
pub fn channel_metrics_json(ptm: &Ptm) -> Value {
    let r = average_infidelity(ptm);
    let p = benchmarking_parameter(ptm);
    let u = unitarity(ptm);
    let theta = coherence_angle(p, u).ok();
    let (lo, hi) = diamond_bounds(ptm);
    let ed = eps_delta(ptm, EPS_DELTA_TOL);
    json!({
        "r": num(r),
        "p": num(p),
        "u": num(u),
        "Theta": theta.map_or(Value::Null, num),
        "D_lo": num(lo),
        "D_hi": num(hi),
        "eps": ed.map_or(Value::Null, |e| num(e.0)),
        "delta": ed.map_or(Value::Null, |e| num(e.1)),
    })
}

/// One CSV row in [`METRICS_HEADER`] order.
pub fn metrics_row(theta: Option<f64>, ptm: &Ptm) -> Vec<String> {
    let p = benchmarking_parameter(ptm);
    let u = unitarity(ptm);
    let (lo, hi) = diamond_bounds(ptm);
    let ed = eps_delta(ptm, EPS_DELTA_TOL);
    vec![
        opt_cell(theta),
        cell(average_infidelity(ptm)),
        cell(p),
        cell(u),
        opt_cell(coherence_angle(p, u).ok()),
        cell(lo),
        cell(hi),
        opt_cell(ed.map(|e| e.0)),
        opt_cell(ed.map(|e| e.1)),
    ]
}

fn build_channel(cfg: &RunConfig) -> CliResult<(String, ChiMatrix)> {
    if let Some(path) = &cfg.input {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.clone(), source })?;
        let v: Value = serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        // accept either a bare chi document or one nested under `chi`/`logical_chi`
        let doc = v.get("logical_chi").filter(|x| x.is_object()).unwrap_or(&v);
        return Ok(("input".into(), parse_chi(doc)?));
    }
    let kind = cfg.channel.as_deref().unwrap_or("x-rotation");
    let n = cfg.n.unwrap_or(1);
    let chi = match kind {
        "x-rotation" => ChiMatrix::x_rotation(cfg.require_theta()?),
        "identity" => ChiMatrix::identity(n)?,
        "depolarizing" => {
            let p = cfg.p.ok_or_else(|| CliError::input("the depolarizing channel needs `p`"))?;
            ChiMatrix::depolarizing(n, p)?
        }
        "eps-delta" => {
            let (Some(e), Some(d)) = (cfg.eps, cfg.delta) else {
                return Err(CliError::input("the eps-delta channel needs `eps` and `delta`"));
            };
            ChiMatrix::eps_delta(e, d)
        }
        "random" => {
            if n == 0 || n > MAX_DENSE_QUBITS {
                return Err(CliError::input(format!("random channels need 1 <= n <= {MAX_DENSE_QUBITS}")));
            }
            let d2 = 1usize << (2 * n);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let kraus = random_cptp_kraus(n, cfg.rank.unwrap_or(d2), &mut rng);
            chi_from_kraus(n, &kraus)?
        }
        other => {
            return Err(CliError::input(format!(
                "unknown channel `{other}` (x-rotation, identity, depolarizing, eps-delta, random)"
            )))
        }
    };
    Ok((kind.into(), chi))
}

pub fn run(cfg: &RunConfig) -> CliResult<Report> {
    let (kind, chi) = build_channel(cfg)?;
    let ptm = chi_to_ptm(&chi)?;
    let off = offdiag_identity_check(&chi)?;
    let cptp = chi.is_cptp(1e-12, 1e-10, 1e-12);
    let identity_ok = off.residual < 1e-10;
    let mut doc = json!({
        "channel": kind,
        "n": chi.n(),
        "theta": cfg.theta.map_or(Value::Null, num),
        "chi": chi_json(&chi),
        "ptm": ptm_json(&ptm),
        "metrics": channel_metrics_json(&ptm),
        "chi_diamond_bound": num(chi_diamond_bound(&chi)),
        "offdiag_identity": {
            "ptm_side": num(off.ptm_side),
            "chi_side": num(off.chi_side),
            "residual": num(off.residual),
            "holds": identity_ok,
        },
        "cptp": cptp,
    });
    if let Some(m) = cfg.m {
        let c = compose(&ptm, m)?;
        let growth = if m >= 2 {
            let g = growth_fit(&ptm, m)?;
            json!({ "linear": num(g.linear), "quadratic": num(g.quadratic), "max_residual": num(g.max_residual) })
        } else {
            Value::Null
        };
        doc["composition"] = json!({ "m": m, "r_m": num(c.r_m), "growth": growth });
    }
    let mut table = Table::new(METRICS_HEADER.to_vec());
    table.push(metrics_row(cfg.theta, &ptm));
    Ok(Report::new(doc, Some(table), identity_ok && cptp))
}
