use logchan_core::channel::ChiMatrix;
use logchan_core::toric::{
    brute_force_logical_chi_angles, logical_chi_estimate, logical_component_census, rm_growth_check, shape_census,
    theorem5_ratio_check, truncated_chi_oracle, Axis, RotationNoise, TorusLattice, DEFAULT_GAMMA, DEFAULT_ZETA,
    TABLE_L,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::emit::{cell, chi_json, complex, num, nums, Table};
use crate::error::{CliError, CliResult};

use super::Report;

/// Largest lattice whose string census is tabulated in estimate mode.
const CENSUS_MAX_L: usize = 9;
/// Default weight cutoff of the truncated oracle.
const DEFAULT_W: usize = 7;
/// Default composition depth of the growth check.
const DEFAULT_M: u64 = 50;
/// Default relative slack of the growth bound.
const DEFAULT_SLACK: f64 = 1.0;

fn axis(cfg: &RunConfig) -> CliResult<Axis> {
    match cfg.axis.as_deref().unwrap_or("z") {
        "z" => Ok(Axis::Z),
        "x" => Ok(Axis::X),
        other => Err(CliError::input(format!("unknown axis `{other}` (x or z)"))),
    }
}

/// Per-qubit angles and the uniform angle, if there is one.
fn angles(cfg: &RunConfig, n: usize) -> CliResult<(Vec<f64>, Option<f64>)> {
    match (&cfg.angles, cfg.theta) {
        (Some(a), None) if a.len() == n => Ok((a.clone(), None)),
        (Some(a), None) => Err(CliError::input(format!("{} angles given for {n} qubits", a.len()))),
        (None, Some(t)) => Ok((vec![t; n], Some(t))),
        (Some(_), Some(_)) => Err(CliError::input("give either `theta` or `angles`, not both")),
        (None, None) => Err(CliError::input("`toric` needs `theta` or `angles`")),
    }
}

fn chi_table(chi: &ChiMatrix) -> Table {
    let mut t = Table::new(vec!["row", "col", "re", "im"]);
    for i in 0..chi.dim2() {
        for j in 0..chi.dim2() {
            let v = chi.get(i, j);
            t.push(vec![i.to_string(), j.to_string(), cell(v.re), cell(v.im)]);
        }
    }
    t
}

/// Inequality, census and growth checks on an exact `L = 3` channel.
fn analyse(chi: &ChiMatrix, cfg: &RunConfig, theta: Option<f64>, axis: Axis) -> CliResult<(Value, bool)> {
    let mut doc = json!({});
    let mut passed = true;
    let zeta = cfg.zeta.unwrap_or(DEFAULT_ZETA);
    let gamma = cfg.gamma.unwrap_or(DEFAULT_GAMMA);
    // the component census and the ratio use Z-axis logical labels
    if axis == Axis::Z {
        let c = logical_component_census(chi)?;
        let top: Vec<Value> = c
            .ranked
            .iter()
            .take(10)
            .map(|e| json!({ "row": e.row, "col": e.col, "value": complex(e.value), "magnitude": num(e.magnitude) }))
            .collect();
        doc["census"] = json!({
            "z1_i": num(c.z1_i),
            "y1_i": num(c.y1_i),
            "z1z2_i": num(c.z1z2_i),
            "max_doubly_nontrivial": num(c.max_doubly_nontrivial),
            "factorization_ratio": num(c.factorization_ratio),
            "x_sector_max": num(c.x_sector_max),
            "trace_residual": num(c.trace_residual),
            "dominance_holds": c.dominance_holds,
            "factorization_holds": c.factorization_holds,
            "largest": top,
        });
        passed &= c.dominance_holds;
    }
    if let Some(t) = theta.filter(|t| t.sin() != 0.0 && (TABLE_L as f64 * t.sin().abs()) < 1.0) {
        let r = theorem5_ratio_check(chi, TABLE_L, t, zeta, gamma)?;
        doc["inequality"] = json!({
            "coherent_strength": num(r.coherent_strength),
            "bound": num(r.bound),
            "holds": r.holds,
            "error_budget": num(r.error_budget),
            "holds_with_budget": r.holds_with_budget,
            "ratio": num(r.ratio),
            "ratio_bound": num(r.ratio_bound),
            "ratio_holds": r.ratio_holds,
            "r": num(r.r),
            "predicted_quadratic": num(r.predicted_quadratic),
        });
        passed &= r.holds;
        let m = cfg.m.unwrap_or(DEFAULT_M);
        if m >= 2 {
            let g = rm_growth_check(chi, t, m, cfg.slack.unwrap_or(DEFAULT_SLACK))?;
            doc["growth"] = json!({
                "m": m,
                "linear": num(g.fit.linear),
                "quadratic": num(g.fit.quadratic),
                "max_residual": num(g.fit.max_residual),
                "r": num(g.r),
                "ratio": num(g.ratio),
                "bound": num(g.bound),
                "holds": g.holds,
            });
            passed &= g.holds;
        }
    }
    Ok((doc, passed))
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<Report> {
    let l = cfg.l.unwrap_or(TABLE_L);
    let lattice = TorusLattice::new(l)?;
    let n = lattice.n_qubits();
    let axis = axis(cfg)?;
    let mode = cfg.mode.as_deref().unwrap_or("brute");
    let axis_name = if axis == Axis::Z { "z" } else { "x" };
    let mut doc = json!({ "L": l, "mode": mode, "axis": axis_name });
    match mode {
        "brute" => {
            if l != TABLE_L {
                return Err(CliError::input(format!("brute mode is only available for L = {TABLE_L}")));
            }
            let (a, theta) = angles(cfg, n)?;
            let chi = brute_force_logical_chi_angles(&a, axis, cfg.workers)?;
            let cptp = chi.is_cptp(1e-12, 1e-10, 1e-12);
            let (analysis, ok) = analyse(&chi, cfg, theta, axis)?;
            match theta {
                Some(t) => doc["theta"] = num(t),
                None => doc["angles"] = nums(&a),
            }
            doc["logical_chi"] = chi_json(&chi);
            doc["cptp"] = Value::Bool(cptp);
            merge(&mut doc, analysis);
            Ok(Report::new(doc, Some(chi_table(&chi)), cptp && ok))
        }
        "truncated" => {
            let (a, theta) = angles(cfg, n)?;
            let (letter, dir) = if axis == Axis::Z { ("z", [0.0, 0.0, 1.0]) } else { ("x", [1.0, 0.0, 0.0]) };
            let noise = RotationNoise { angles: a.clone(), axes: vec![dir; n] };
            let w = cfg.w.unwrap_or(DEFAULT_W);
            let t = truncated_chi_oracle(l, &noise, w, cfg.workers)?;
            match theta {
                Some(th) => doc["theta"] = num(th),
                None => doc["angles"] = nums(&a),
            }
            doc["axis"] = Value::String(letter.into());
            doc["W"] = json!(w);
            doc["terms"] = json!(t.terms);
            doc["tail_mass"] = num(t.tail_mass);
            doc["entry_bound"] = num(t.entry_bound);
            doc["logical_chi"] = chi_json(&t.chi);
            let mut passed = true;
            if l == TABLE_L {
                let exact = brute_force_logical_chi_angles(&a, axis, cfg.workers)?;
                let mut worst: f64 = 0.0;
                for i in 0..16 {
                    for j in 0..16 {
                        worst = worst.max((exact.get(i, j) - t.chi.get(i, j)).norm());
                    }
                }
                passed = worst <= t.entry_bound;
                doc["brute_force_deviation"] = num(worst);
                doc["within_bound"] = Value::Bool(passed);
            }
            Ok(Report::new(doc, Some(chi_table(&t.chi)), passed))
        }
        "estimate" => {
            let theta = cfg.require_theta()?;
            let zeta = cfg.zeta.unwrap_or(DEFAULT_ZETA);
            let gamma = cfg.gamma.unwrap_or(DEFAULT_GAMMA);
            let e = logical_chi_estimate(l, theta, zeta, gamma)?;
            let mut table = Table::new(vec!["length", "strings", "coherent_im", "incoherent"]);
            let rows: Vec<Value> = e
                .by_length
                .iter()
                .map(|c| {
                    table.push(vec![
                        c.length.to_string(),
                        c.strings.to_string(),
                        cell(c.coherent.im),
                        cell(c.incoherent),
                    ]);
                    json!({
                        "length": c.length,
                        "strings": c.strings,
                        "coherent": complex(c.coherent),
                        "incoherent": num(c.incoherent),
                    })
                })
                .collect();
            doc["theta"] = num(theta);
            doc["zeta"] = json!(zeta);
            doc["gamma"] = num(gamma);
            doc["chi_z1_i"] = complex(e.chi_z1i);
            doc["chi_z1_z1"] = num(e.chi_z1z1);
            doc["by_length"] = Value::Array(rows);
            doc["coherent_tail"] = num(e.coherent_tail);
            doc["incoherent_leading"] = num(e.incoherent_leading);
            doc["xi"] = num(e.xi);
            doc["error_budget"] = num(e.error_budget);
            if l <= CENSUS_MAX_L {
                let sc = shape_census(&lattice, l + 2 * zeta, gamma)?;
                let shapes: Vec<Value> = sc
                    .by_length
                    .iter()
                    .map(|c| {
                        json!({
                            "length": c.length,
                            "total": c.total,
                            "through_anchor": c.through_anchor,
                            "typical": c.typical,
                            "backtracking": c.backtracking,
                            "tall_step": c.tall_step,
                            "crowded_steps": c.crowded_steps,
                        })
                    })
                    .collect();
                doc["shape_census"] = json!({
                    "by_length": shapes,
                    "atypical_fraction": num(sc.atypical_fraction),
                    "predicted_fraction": num(sc.predicted_fraction),
                });
            }
            Ok(Report::new(doc, Some(table), true))
        }
        other => Err(CliError::input(format!("unknown toric mode `{other}` (brute, truncated, estimate)"))),
    }
}
