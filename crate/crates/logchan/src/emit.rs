//! JSON and CSV encodings.
//!
//! Floats are written with 17 significant digits so that parsing them back
//! gives the same bits. Complex values are `{"re": .., "im": ..}` objects and
//! matrices are row-major arrays of rows with the qubit count alongside.

use std::str::FromStr;

use logchan_core::channel::{ChiMatrix, Ptm};
use logchan_core::numeric::linalg::CMat;
use logchan_core::C64;
use serde_json::{json, Map, Number, Value};

use crate::error::{CliError, CliResult};

/// Float text with 17 significant digits; non-finite values have no text.
pub fn float_text(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

/// JSON number for `x`, or `null` when `x` is not finite.
pub fn num(x: f64) -> Value {
    match float_text(x) {
        Some(t) => Value::Number(Number::from_str(&t).expect("formatted float is valid JSON")),
        None => Value::Null,
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn complex(c: C64) -> Value {
    json!({ "re": num(c.re), "im": num(c.im) })
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn chi_json(chi: &ChiMatrix) -> Value {
    let d2 = chi.dim2();
    let rows: Vec<Value> = (0..d2).map(|i| Value::Array((0..d2).map(|j| complex(chi.get(i, j))).collect())).collect();
    json!({ "n": chi.n(), "chi": rows })
}

pub fn ptm_json(ptm: &Ptm) -> Value {
    let d2 = ptm.dim2();
    let rows: Vec<Value> = (0..d2).map(|a| Value::Array((0..d2).map(|b| num(ptm.get(a, b))).collect())).collect();
    json!({ "n": ptm.n(), "ptm": rows })
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| CliError::input(format!("missing field `{key}`")))
}

fn as_f64(v: &Value, what: &str) -> CliResult<f64> {
    v.as_f64().ok_or_else(|| CliError::input(format!("{what} is not a number")))
}

/// Inverse of [`chi_json`].
pub fn parse_chi(v: &Value) -> CliResult<ChiMatrix> {
    let n = field(v, "n")?.as_u64().ok_or_else(|| CliError::input("`n` is not a count"))? as usize;
    let rows = field(v, "chi")?.as_array().ok_or_else(|| CliError::input("`chi` is not an array"))?;
    let d2 = rows.len();
    let mut m = CMat::zeros(d2, d2);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| CliError::input(format!("chi row {i} is not an array")))?;
        if row.len() != d2 {
            return Err(CliError::input(format!("chi row {i} has {} entries, expected {d2}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            let re = as_f64(field(e, "re")?, "re")?;
            let im = as_f64(field(e, "im")?, "im")?;
            m[(i, j)] = C64::new(re, im);
        }
    }
    Ok(ChiMatrix::new(n, m)?)
}

/// Inverse of [`ptm_json`].
pub fn parse_ptm(v: &Value) -> CliResult<Ptm> {
    let n = field(v, "n")?.as_u64().ok_or_else(|| CliError::input("`n` is not a count"))? as usize;
    let rows = field(v, "ptm")?.as_array().ok_or_else(|| CliError::input("`ptm` is not an array"))?;
    let mut entries = Vec::with_capacity(rows.len() * rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| CliError::input("ptm row is not an array"))?;
        if row.len() != rows.len() {
            return Err(CliError::input("ptm is not square"));
        }
        for e in row {
            entries.push(as_f64(e, "ptm entry")?);
        }
    }
    Ok(Ptm::from_entries(n, &entries)?)
}

/// A table for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::input(format!("csv encoding failed: {e}"));
        w.write_record(&self.header).map_err(fail)?;
        for r in &self.rows {
            w.write_record(r).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::input(format!("csv encoding failed: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// CSV cell for a float; empty for non-finite or missing values.
pub fn cell(x: f64) -> String {
    float_text(x).unwrap_or_default()
}

pub fn opt_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

/// Insert `key: value` into a JSON object.
pub fn put(obj: &mut Value, key: &str, value: Value) {
    if let Value::Object(m) = obj {
        m.insert(key.to_string(), value);
    }
}

pub fn object() -> Value {
    Value::Object(Map::new())
}
