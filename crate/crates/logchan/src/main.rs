use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser};
use logchan::config::parse_config_text;
use logchan::{execute, CliError, CliResult, RunConfig, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "logchan", version, about = "Logical channels of small quantum codes under coherent noise")]
struct Cli {
    /// Flat `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with_all = ["csv", "format"])]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true, conflicts_with = "format")]
    csv: bool,
    /// Output format: json or csv.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<String>,
    /// Worker threads (overrides QEC_WORKERS).
    #[arg(long, global = true)]
    workers: Option<String>,
    /// Seed for sampled computations.
    #[arg(long, global = true)]
    seed: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand, Debug)]
enum Command {
    /// Metrics of a single channel.
    Metrics(Params),
    /// Logical channel of the repetition code.
    Repcode(Params),
    /// Repetition code under correlated noise.
    Correlated(Params),
    /// Logical channel of the toric code.
    Toric(Params),
    /// Exact combinatorial identities.
    Identities(Params),
    /// Metric sweep over rotation angles.
    Sweep(Params),
}

/// Parameters shared by the subcommands; each one reads what it needs.
#[derive(Args, Debug, Default)]
struct Params {
    #[arg(long)]
    n: Option<String>,
    #[arg(long = "L", alias = "l")]
    l: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    /// Comma-separated per-qubit angles.
    #[arg(long)]
    angles: Option<String>,
    #[arg(long)]
    h1: Option<String>,
    #[arg(long)]
    h2: Option<String>,
    #[arg(long)]
    h3: Option<String>,
    #[arg(long)]
    zeta: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    /// Weight cutoff of the truncated toric oracle.
    #[arg(long = "W", alias = "w")]
    w: Option<String>,
    /// Composition depth.
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    axis: Option<String>,
    /// Identity family, or `all`.
    #[arg(long)]
    check: Option<String>,
    /// Channel kind for `metrics`.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    /// Comma-separated angles for `sweep`.
    #[arg(long)]
    thetas: Option<String>,
    /// Sweep target: physical, repcode or toric.
    #[arg(long)]
    target: Option<String>,
    /// Channel JSON file for `metrics`.
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    rank: Option<String>,
    #[arg(long)]
    slack: Option<String>,
}

impl Params {
    fn pairs(self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("n", self.n),
            ("L", self.l),
            ("theta", self.theta),
            ("angles", self.angles),
            ("h1", self.h1),
            ("h2", self.h2),
            ("h3", self.h3),
            ("zeta", self.zeta),
            ("gamma", self.gamma),
            ("W", self.w),
            ("m", self.m),
            ("mode", self.mode),
            ("axis", self.axis),
            ("check", self.check),
            ("channel", self.channel),
            ("p", self.p),
            ("eps", self.eps),
            ("delta", self.delta),
            ("thetas", self.thetas),
            ("target", self.target),
            ("input", self.input),
            ("rank", self.rank),
            ("slack", self.slack),
        ]
    }
}

fn config(cli: Cli) -> CliResult<RunConfig> {
    let (sub, params) = match cli.command {
        Command::Metrics(p) => (Subcommand::Metrics, p),
        Command::Repcode(p) => (Subcommand::Repcode, p),
        Command::Correlated(p) => (Subcommand::Correlated, p),
        Command::Toric(p) => (Subcommand::Toric, p),
        Command::Identities(p) => (Subcommand::Identities, p),
        Command::Sweep(p) => (Subcommand::Sweep, p),
    };
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.clone(), source })?;
            parse_config_text(&text)?
        }
        None => BTreeMap::new(),
    };
    let format = if cli.json {
        Some("json".to_string())
    } else if cli.csv {
        Some("csv".to_string())
    } else {
        cli.format
    };
    let mut flags = BTreeMap::new();
    let globals = [("format", format), ("output", cli.output), ("workers", cli.workers), ("seed", cli.seed)];
    for (k, v) in params.pairs().into_iter().chain(globals) {
        if let Some(v) = v {
            flags.insert(k.to_string(), v);
        }
    }
    let env = std::env::var("QEC_WORKERS").ok();
    RunConfig::from_layers(sub, &file, &flags, env.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match config(cli).and_then(|cfg| execute(&cfg)) {
        Ok((text, passed)) => {
            if let Some(text) = text {
                print!("{text}");
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
