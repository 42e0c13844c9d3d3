//! Run configuration.
//!
//! Parameters arrive as flat `key = value` pairs, from a config file and from
//! the command line, and the command line wins. `QEC_WORKERS` sets the
//! worker count unless `--workers` is given.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subcommand {
    Metrics,
    Repcode,
    Correlated,
    Toric,
    Identities,
    Sweep,
}

impl Subcommand {
    pub const ALL: [Subcommand; 6] =
        [Self::Metrics, Self::Repcode, Self::Correlated, Self::Toric, Self::Identities, Self::Sweep];

    pub fn name(self) -> &'static str {
        match self {
            Self::Metrics => "metrics",
            Self::Repcode => "repcode",
            Self::Correlated => "correlated",
            Self::Toric => "toric",
            Self::Identities => "identities",
            Self::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::input(format!("unknown subcommand `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(CliError::input(format!("unknown output format `{s}` (json or csv)"))),
        }
    }
}

/// Every key a config file or flag may set.
pub const KEYS: [&str; 27] = [
    "n", "L", "theta", "angles", "h1", "h2", "h3", "zeta", "gamma", "W", "m", "mode", "axis", "check", "channel", "p",
    "eps", "delta", "thetas", "target", "input", "format", "output", "workers", "seed", "rank", "slack",
];

/// Parsed, range-checked run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub theta: Option<f64>,
    pub angles: Option<Vec<f64>>,
    pub h1: Option<f64>,
    pub h2: Option<f64>,
    pub h3: Option<f64>,
    pub zeta: Option<usize>,
    pub gamma: Option<f64>,
    pub w: Option<usize>,
    pub m: Option<u64>,
    pub mode: Option<String>,
    pub axis: Option<String>,
    pub check: Option<String>,
    pub channel: Option<String>,
    pub p: Option<f64>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub thetas: Option<Vec<f64>>,
    pub target: Option<String>,
    pub rank: Option<usize>,
    pub slack: Option<f64>,
    pub input: Option<PathBuf>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub workers: usize,
    pub seed: u64,
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::input(format!("config line {}: expected key=value", i + 1)));
        };
        let k = canonical_key(k.trim())?;
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Accept lower-case spellings of `L` and `W`.
pub fn canonical_key(k: &str) -> CliResult<&'static str> {
    let k = match k {
        "l" => "L",
        "w" => "W",
        other => other,
    };
    KEYS.into_iter().find(|&x| x == k).ok_or_else(|| CliError::input(format!("unknown parameter `{k}`")))
}

fn parse<T: FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.trim().parse().map_err(|_| CliError::input(format!("`{key}` has an invalid value `{v}`")))
}

fn finite(key: &str, v: &str) -> CliResult<f64> {
    let x: f64 = parse(key, v)?;
    if !x.is_finite() {
        return Err(CliError::input(format!("`{key}` must be finite")));
    }
    Ok(x)
}

fn list(key: &str, v: &str) -> CliResult<Vec<f64>> {
    let xs = v.split(',').filter(|s| !s.trim().is_empty()).map(|s| finite(key, s)).collect::<CliResult<Vec<_>>>()?;
    if xs.is_empty() {
        return Err(CliError::input(format!("`{key}` is an empty list")));
    }
    Ok(xs)
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    /// Build a configuration from merged key/value pairs. `env_workers` is
    /// the value of `QEC_WORKERS`, used when `workers` is not in `cli`.
    pub fn from_layers(
        subcommand: Subcommand,
        file: &BTreeMap<String, String>,
        cli: &BTreeMap<String, String>,
        env_workers: Option<&str>,
    ) -> CliResult<Self> {
        let mut merged = file.clone();
        if let Some(w) = env_workers {
            merged.insert("workers".into(), w.to_string());
        }
        for (k, v) in cli {
            merged.insert(canonical_key(k)?.to_string(), v.clone());
        }
        Self::from_pairs(subcommand, &merged)
    }

    pub fn from_pairs(subcommand: Subcommand, pairs: &BTreeMap<String, String>) -> CliResult<Self> {
        let mut c = RunConfig {
            subcommand,
            n: None,
            l: None,
            theta: None,
            angles: None,
            h1: None,
            h2: None,
            h3: None,
            zeta: None,
            gamma: None,
            w: None,
            m: None,
            mode: None,
            axis: None,
            check: None,
            channel: None,
            p: None,
            eps: None,
            delta: None,
            thetas: None,
            target: None,
            rank: None,
            slack: None,
            input: None,
            format: None,
            output: None,
            workers: default_workers(),
            seed: 0,
        };
        for (k, v) in pairs {
            match canonical_key(k)? {
                "n" => c.n = Some(parse(k, v)?),
                "L" => c.l = Some(parse(k, v)?),
                "theta" => c.theta = Some(finite(k, v)?),
                "angles" => c.angles = Some(list(k, v)?),
                "h1" => c.h1 = Some(finite(k, v)?),
                "h2" => c.h2 = Some(finite(k, v)?),
                "h3" => c.h3 = Some(finite(k, v)?),
                "zeta" => c.zeta = Some(parse(k, v)?),
                "gamma" => c.gamma = Some(finite(k, v)?),
                "W" => c.w = Some(parse(k, v)?),
                "m" => c.m = Some(parse(k, v)?),
                "mode" => c.mode = Some(v.clone()),
                "axis" => c.axis = Some(v.to_ascii_lowercase()),
                "check" => c.check = Some(v.clone()),
                "channel" => c.channel = Some(v.clone()),
                "p" => c.p = Some(finite(k, v)?),
                "eps" => c.eps = Some(finite(k, v)?),
                "delta" => c.delta = Some(finite(k, v)?),
                "thetas" => c.thetas = Some(list(k, v)?),
                "target" => c.target = Some(v.clone()),
                "rank" => c.rank = Some(parse(k, v)?),
                "slack" => c.slack = Some(finite(k, v)?),
                "input" => c.input = Some(PathBuf::from(v)),
                "format" => c.format = Some(v.parse()?),
                "output" => c.output = Some(PathBuf::from(v)),
                "workers" => c.workers = parse(k, v)?,
                "seed" => c.seed = parse(k, v)?,
                _ => unreachable!("canonical_key only returns known keys"),
            }
        }
        if c.workers == 0 {
            return Err(CliError::input("`workers` must be at least 1"));
        }
        if c.gamma.is_some_and(|g| g <= 0.0) {
            return Err(CliError::input("`gamma` must be positive"));
        }
        if c.m == Some(0) {
            return Err(CliError::input("`m` must be at least 1"));
        }
        Ok(c)
    }

    /// Output format, defaulting to CSV for sweeps and JSON otherwise.
    pub fn format(&self) -> Format {
        self.format.unwrap_or(match self.subcommand {
            Subcommand::Sweep => Format::Csv,
            _ => Format::Json,
        })
    }

    pub fn require_theta(&self) -> CliResult<f64> {
        self.theta.ok_or_else(|| CliError::input(format!("`{}` needs `theta`", self.subcommand)))
    }
}
