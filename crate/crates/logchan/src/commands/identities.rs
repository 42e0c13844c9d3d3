//! Exact identities, each checked in big-integer or rational arithmetic.

use logchan_core::correlated::{
    alternating_power_sum, cancellation_census, delta_sum, dixon_sum, omega_delta_ratio, omega_sum, ratio_formula,
};
use logchan_core::numeric::exact::factorial;
use logchan_core::repcode::binomial_alternating_identity;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::emit::Table;
use crate::error::{CliError, CliResult};

use super::Report;

/// Outcome of one family of exact checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub description: &'static str,
    pub cases: u64,
    pub failures: Vec<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const NAMES: [&str; 6] = ["binomial", "dixon", "ratio", "odd-q", "cancellation", "powers"];

struct Tally {
    cases: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self { cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(label());
        }
    }
}

fn one(name: &'static str) -> logchan_core::Result<IdentityCheck> {
    let mut t = Tally::new();
    let description = match name {
        "binomial" => {
            for n in (1..=101).step_by(2) {
                let (l, r) = binomial_alternating_identity(n)?;
                t.check(l == r, || format!("n={n}"));
            }
            "alternating binomial sum for odd n <= 101"
        }
        "dixon" => {
            for m in 0..=20u64 {
                for q in (0..=m).step_by(2) {
                    let (l, r) = dixon_sum(m, q)?;
                    t.check(BigRational::from_integer(l) == r, || format!("m={m} q={q}"));
                }
            }
            "Dixon reduction for even q <= m <= 20"
        }
        "ratio" => {
            for n in (3..=101).step_by(2) {
                let m = (n as u64 - 1) / 2;
                for q in (0..=m).step_by(2) {
                    t.check(omega_delta_ratio(q, n)? == ratio_formula(q, n), || format!("n={n} q={q}"));
                }
            }
            "Omega(q)/Delta(q) = (n+1-2q)/(2n-2q) for odd n <= 101"
        }
        "odd-q" => {
            for n in (3..=101).step_by(2) {
                let m = (n as u64 - 1) / 2;
                for q in (1..=m).step_by(2) {
                    t.check(omega_sum(q, n)?.is_zero(), || format!("omega n={n} q={q}"));
                }
                for q in (1..=m + 1).step_by(2) {
                    t.check(delta_sum(q, n)?.is_zero(), || format!("delta n={n} q={q}"));
                }
            }
            "odd orders sum to zero over kR for odd n <= 101"
        }
        "cancellation" => {
            for q in [2u64, 4, 6] {
                let c = cancellation_census(q, 2 * q)?;
                for r in 0..=2 * q {
                    if 2 * r < q {
                        t.check(num_traits::Zero::is_zero(&c.summed[r as usize]), || format!("q={q} r={r}"));
                    }
                }
                t.check(c.leading == c.expected_leading, || format!("leading q={q}"));
            }
            "cancellation of m powers for q in {2, 4, 6} and all 2r < q"
        }
        "powers" => {
            for a in 0..=12u64 {
                let f = BigInt::from(factorial(a));
                let expect = if a % 2 == 0 { f } else { -f };
                t.check(alternating_power_sum(a, a as u32) == expect, || format!("a={a}"));
                for c in 0..a as u32 {
                    t.check(num_traits::Zero::is_zero(&alternating_power_sum(a, c)), || format!("a={a} c={c}"));
                }
            }
            "sum_b (-1)^b b^c C(a,b) is 0 for c < a and (-1)^a a! at c = a, a <= 12"
        }
        _ => unreachable!("names are validated by the caller"),
    };
    Ok(IdentityCheck { name, description, cases: t.cases, failures: t.failures })
}

/// Run the named family, or all of them for `all`.
pub fn identity_checks(which: &str) -> CliResult<Vec<IdentityCheck>> {
    let names: Vec<&'static str> = match which {
        "all" => NAMES.to_vec(),
        w => vec![NAMES
            .into_iter()
            .find(|&x| x == w)
            .ok_or_else(|| CliError::input(format!("unknown check `{w}` (all, {})", NAMES.join(", "))))?],
    };
    names.into_iter().map(|n| one(n).map_err(CliError::from)).collect()
}

pub fn run(cfg: &RunConfig) -> CliResult<Report> {
    let checks = identity_checks(cfg.check.as_deref().unwrap_or("all"))?;
    let mut table = Table::new(vec!["check", "cases", "failures", "passed"]);
    let results: Vec<Value> = checks
        .iter()
        .map(|c| {
            table.push(vec![c.name.into(), c.cases.to_string(), c.failures.len().to_string(), c.passed().to_string()]);
            json!({
                "check": c.name,
                "description": c.description,
                "cases": c.cases,
                "failures": c.failures,
                "passed": c.passed(),
            })
        })
        .collect();
    let passed = checks.iter().all(IdentityCheck::passed);
    Ok(Report::new(json!({ "checks": results }), Some(table), passed))
}
