//! `nfold`: runs a verification battery described by a JSON config and
//! prints the report. Exit status: 0 all pass, 1 some check failed, 2 bad
//! configuration or input.

use clap::Parser;
use nfold::diffalg::DEFAULT_MAX_ORDER;
use nfold_cli::config::{self, CheckKind};
use nfold_cli::render::{self, Format};
use nfold_cli::run;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "nfold", version, about = "Exact verification battery for type B 3-fold supersymmetric systems")]
struct Args {
    /// JSON config file; `-` reads standard input.
    config: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config `random-trials`.
    #[arg(long)]
    trials: Option<u32>,
    /// Check to run; repeatable, replaces the config list.
    #[arg(long = "check", value_enum)]
    checks: Vec<CheckKind>,
    /// Highest jet order a derivation may produce.
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    max_jet_order: u8,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let text = if args.config.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map(|_| buf)
    } else {
        std::fs::read(&args.config)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let mut cfg = match config::parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(t) = args.trials {
        cfg.random_trials = t;
    }
    if !args.checks.is_empty() {
        cfg.checks = args.checks;
    }
    let report = run::run(&cfg, args.max_jet_order);
    print!("{}", render::render(&report, args.format));
    ExitCode::from(report.exit_code() as u8)
}
