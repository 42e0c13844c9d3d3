//! One module per subcommand. Each returns a [`Report`]: a JSON document,
//! an optional table for CSV output and whether every asserted bound held.

mod correlated;
mod identities;
mod metrics;
mod repcode;
mod sweep;
mod toric;

use serde_json::Value;

use crate::config::{Format, RunConfig, Subcommand};
use crate::emit::{put, Table};
use crate::error::{CliError, CliResult};

pub use identities::{identity_checks, IdentityCheck};
pub use metrics::{channel_metrics_json, metrics_row, METRICS_HEADER};

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    pub passed: bool,
}

impl Report {
    pub fn new(json: Value, table: Option<Table>, passed: bool) -> Self {
        Self { json, table, passed }
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => {
                let mut doc = self.json.clone();
                put(&mut doc, "passed", Value::Bool(self.passed));
                let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialise");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => match &self.table {
                Some(t) => t.to_csv(),
                None => Err(CliError::input("this run has no CSV form; use --format json")),
            },
        }
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<Report> {
    let mut report = match cfg.subcommand {
        Subcommand::Metrics => metrics::run(cfg),
        Subcommand::Repcode => repcode::run(cfg),
        Subcommand::Correlated => correlated::run(cfg),
        Subcommand::Toric => toric::run(cfg),
        Subcommand::Identities => identities::run(cfg),
        Subcommand::Sweep => sweep::run(cfg),
    }?;
    put(&mut report.json, "subcommand", Value::String(cfg.subcommand.name().into()));
    Ok(report)
}

/// Run, render in the configured format and write to the output path or
/// return the text for standard output. The flag is the pass status.
pub fn execute(cfg: &RunConfig) -> CliResult<(Option<String>, bool)> {
    let report = run(cfg)?;
    let text = report.render(cfg.format())?;
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Write { path: path.clone(), source })?;
            Ok((None, report.passed))
        }
        None => Ok((Some(text), report.passed)),
    }
}
