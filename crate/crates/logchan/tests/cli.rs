use std::collections::BTreeMap;
use std::process::{Command, Output};

use logchan::config::{parse_config_text, Format, RunConfig, Subcommand};
use logchan::emit::{chi_json, float_text, parse_chi, parse_ptm, ptm_json};
use logchan::{execute, run, CliError};
use logchan_core::channel::{chi_from_kraus, chi_to_ptm, random_cptp_kraus};
use logchan_core::repcode::logical_eps_delta_closed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logchan")).args(args).env_remove("QEC_WORKERS").output().expect("binary runs")
}

fn pairs(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
    kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn cfg(sub: Subcommand, kv: &[(&str, &str)]) -> RunConfig {
    RunConfig::from_pairs(sub, &pairs(kv)).unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn config_text_parses_comments_and_aliases() {
    let m = parse_config_text("# run\nl = 3\n theta=0.2 # inline\n\nw=5\n").unwrap();
    assert_eq!(m.get("L").map(String::as_str), Some("3"));
    assert_eq!(m.get("W").map(String::as_str), Some("5"));
    assert_eq!(m.get("theta").map(String::as_str), Some("0.2"));
    assert!(parse_config_text("theta 0.2").is_err());
    assert!(parse_config_text("colour = red").is_err());
}

#[test]
fn precedence_is_flag_then_env_then_file() {
    let file = pairs(&[("workers", "3"), ("theta", "0.1"), ("n", "5")]);
    let cli = pairs(&[("theta", "0.3")]);
    let c = RunConfig::from_layers(Subcommand::Repcode, &file, &cli, None).unwrap();
    assert_eq!((c.workers, c.theta, c.n), (3, Some(0.3), Some(5)));
    let c = RunConfig::from_layers(Subcommand::Repcode, &file, &cli, Some("7")).unwrap();
    assert_eq!(c.workers, 7);
    let cli = pairs(&[("workers", "2")]);
    let c = RunConfig::from_layers(Subcommand::Repcode, &file, &cli, Some("7")).unwrap();
    assert_eq!(c.workers, 2);
}

#[test]
fn invalid_parameters_are_rejected() {
    let bad: &[&[(&str, &str)]] = &[
        &[("workers", "0")],
        &[("gamma", "-1")],
        &[("m", "0")],
        &[("theta", "nan")],
        &[("theta", "abc")],
        &[("angles", ",")],
        &[("format", "xml")],
        &[("n", "-3")],
    ];
    for kv in bad {
        let e = RunConfig::from_pairs(Subcommand::Repcode, &pairs(kv)).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{kv:?}");
    }
    assert!("nope".parse::<Subcommand>().is_err());
    assert_eq!("sweep".parse::<Subcommand>().unwrap(), Subcommand::Sweep);
}

#[test]
fn default_format_depends_on_subcommand() {
    assert_eq!(cfg(Subcommand::Sweep, &[]).format(), Format::Csv);
    assert_eq!(cfg(Subcommand::Toric, &[]).format(), Format::Json);
    assert_eq!(cfg(Subcommand::Sweep, &[("format", "json")]).format(), Format::Json);
}

#[test]
fn float_text_has_seventeen_significant_digits() {
    assert_eq!(float_text(0.1).unwrap(), "1.0000000000000001e-1");
    assert_eq!(float_text(-2.0).unwrap(), "-2.0000000000000000e0");
    assert!(float_text(f64::NAN).is_none());
}

proptest! {
    #[test]
    fn floats_round_trip_bit_exactly(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let text = serde_json::to_string(&logchan::emit::num(x)).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.as_f64().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn chi_and_ptm_json_round_trip(seed in any::<u64>(), n in 1usize..=2, rank in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chi = chi_from_kraus(n, &random_cptp_kraus(n, rank, &mut rng)).unwrap();
        let text = serde_json::to_string(&chi_json(&chi)).unwrap();
        let back = parse_chi(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.n(), n);
        for i in 0..chi.dim2() {
            for j in 0..chi.dim2() {
                prop_assert_eq!(back.get(i, j).re.to_bits(), chi.get(i, j).re.to_bits());
                prop_assert_eq!(back.get(i, j).im.to_bits(), chi.get(i, j).im.to_bits());
            }
        }
        let ptm = chi_to_ptm(&chi).unwrap();
        let text = serde_json::to_string(&ptm_json(&ptm)).unwrap();
        let back = parse_ptm(&serde_json::from_str(&text).unwrap()).unwrap();
        for a in 0..ptm.dim2() {
            for b in 0..ptm.dim2() {
                prop_assert_eq!(back.get(a, b).to_bits(), ptm.get(a, b).to_bits());
            }
        }
    }
}

#[test]
fn malformed_chi_json_is_rejected() {
    let v: Value = serde_json::from_str(r#"{"n": 1, "chi": [[{"re": 1, "im": 0}]]}"#).unwrap();
    assert!(parse_chi(&v).is_err());
    let v: Value = serde_json::from_str(r#"{"chi": []}"#).unwrap();
    assert!(parse_chi(&v).is_err());
}

#[test]
fn repcode_matches_the_closed_form() {
    let r = run(&cfg(Subcommand::Repcode, &[("n", "5"), ("theta", "0.2")])).unwrap();
    let (eps, delta) = logical_eps_delta_closed(5, 0.2).unwrap();
    let got_eps = r.json["eps"].as_f64().unwrap();
    let got_delta = r.json["delta"].as_f64().unwrap();
    assert!((got_eps - eps).abs() <= 1e-12 * eps);
    assert!((got_delta - delta).abs() <= 1e-12 * delta);
    assert_eq!(r.json["n"], 5);
    assert!(r.json["logical_chi"]["chi"].as_array().unwrap().len() == 4);
    assert!(r.passed);
}

#[test]
fn repcode_input_errors() {
    assert!(run(&cfg(Subcommand::Repcode, &[("n", "5")])).is_err());
    assert!(run(&cfg(Subcommand::Repcode, &[("n", "4"), ("theta", "0.2")])).is_err());
    assert!(run(&cfg(Subcommand::Repcode, &[("n", "5"), ("angles", "0.1,0.2")])).is_err());
    assert!(run(&cfg(Subcommand::Repcode, &[("theta", "0.1"), ("angles", "0.1,0.2,0.3")])).is_err());
}

#[test]
fn toric_brute_reports_a_16_by_16_chi() {
    let r = run(&cfg(Subcommand::Toric, &[("L", "3"), ("theta", "0.2"), ("mode", "brute")])).unwrap();
    let chi = parse_chi(&r.json["logical_chi"]).unwrap();
    assert_eq!((chi.n(), chi.dim2()), (2, 16));
    assert_eq!(r.json["cptp"], true);
    assert_eq!(r.json["inequality"]["holds"], true);
    assert!(r.passed);
    assert!(run(&cfg(Subcommand::Toric, &[("L", "5"), ("theta", "0.1")])).is_err());
    assert!(run(&cfg(Subcommand::Toric, &[("L", "4"), ("theta", "0.1")])).is_err());
    assert!(run(&cfg(Subcommand::Toric, &[("theta", "0.1"), ("mode", "fast")])).is_err());
}

#[test]
fn identities_all_pass() {
    let r = run(&cfg(Subcommand::Identities, &[("check", "all")])).unwrap();
    assert!(r.passed);
    assert!(run(&cfg(Subcommand::Identities, &[("check", "nonsense")])).is_err());
}

#[test]
fn output_is_identical_across_worker_counts() {
    let cases: &[(Subcommand, &[(&str, &str)])] = &[
        (Subcommand::Toric, &[("theta", "0.1")]),
        (Subcommand::Toric, &[("theta", "0.1"), ("mode", "truncated"), ("W", "5")]),
        (Subcommand::Repcode, &[("n", "11"), ("theta", "0.3")]),
        (Subcommand::Metrics, &[("channel", "random"), ("n", "2"), ("seed", "9")]),
        (Subcommand::Sweep, &[("thetas", "0.05,0.1"), ("target", "repcode"), ("n", "7")]),
    ];
    for (sub, kv) in cases {
        let mut outputs = Vec::new();
        for w in ["1", "2", "5"] {
            let mut kv = kv.to_vec();
            kv.push(("workers", w));
            outputs.push(execute(&cfg(*sub, &kv)).unwrap().0.unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{sub}");
        assert_eq!(outputs[0], outputs[2], "{sub}");
    }
}

#[test]
fn seed_determines_random_channels() {
    let a = execute(&cfg(Subcommand::Metrics, &[("channel", "random"), ("seed", "1")])).unwrap().0;
    let b = execute(&cfg(Subcommand::Metrics, &[("channel", "random"), ("seed", "1")])).unwrap().0;
    let c = execute(&cfg(Subcommand::Metrics, &[("channel", "random"), ("seed", "2")])).unwrap().0;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn sweep_csv_has_the_metric_columns() {
    let (text, passed) = execute(&cfg(Subcommand::Sweep, &[("thetas", "0.1,0.2,0.3")])).unwrap();
    let text = text.unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,r,p,u,Theta,D_lo,D_hi,eps,delta"));
    assert_eq!(lines.count(), 3);
    assert!(passed);
}

#[test]
fn csv_needs_a_table() {
    let r = run(&cfg(Subcommand::Correlated, &[("h1", "0.05")])).unwrap();
    assert!(r.render(Format::Csv).is_ok());
    let mut r = r;
    r.table = None;
    assert!(matches!(r.render(Format::Csv), Err(CliError::Input(_))));
}

#[test]
fn metrics_reads_a_chi_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toric.json");
    let out = bin(&["toric", "--theta", "0.1", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let out = bin(&["metrics", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["n"], 2);
    assert_eq!(v["offdiag_identity"]["holds"], true);
}

#[test]
fn binary_exit_codes() {
    let out = bin(&["identities", "--check", "all", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["passed"], true);

    let out = bin(&["repcode", "--n", "5", "--theta", "0.2"]);
    assert_eq!(out.status.code(), Some(0));

    // unknown subcommand, bad value, out-of-range value, missing file
    for args in [
        &["frobnicate"][..],
        &["repcode", "--n", "5", "--theta", "zero"],
        &["toric", "--L", "17", "--theta", "0.01"],
        &["toric", "--mode", "estimate", "--L", "5", "--theta", "0.3"],
        &["metrics", "--input", "/nonexistent/chi.json"],
        &["repcode", "--config", "/nonexistent/run.cfg"],
    ] {
        let out = bin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }

    // a violated bound: the growth check with negative slack cannot hold
    let out = bin(&["toric", "--theta", "0.1", "--m", "10", "--slack=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["passed"], false);
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.json");
    let out = bin(&["repcode", "--n", "3", "--theta", "0.1", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "n = 7\ntheta = 0.1\n").unwrap();
    let out = bin(&["repcode", "--config", path.to_str().unwrap(), "--theta", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["n"], 7);
    assert_eq!(v["theta"].as_f64(), Some(0.2));

    let base = Command::new(env!("CARGO_BIN_EXE_logchan"))
        .args(["toric", "--theta", "0.1"])
        .env("QEC_WORKERS", "1")
        .output()
        .unwrap();
    let other = Command::new(env!("CARGO_BIN_EXE_logchan"))
        .args(["toric", "--theta", "0.1"])
        .env("QEC_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(base.stdout, other.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_logchan"))
        .args(["toric", "--theta", "0.1"])
        .env("QEC_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn csv_flag_emits_tables() {
    let out = bin(&["correlated", "--n", "7", "--h1", "0.05", "--h2", "0.0005", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("q,omega,delta,ratio,bound_margin,coherent_term,incoherent_term\n"));
    let out = bin(&["toric", "--mode", "estimate", "--L", "5", "--theta", "0.05", "--csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}
