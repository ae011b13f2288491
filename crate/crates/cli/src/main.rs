// SPDX-License-Identifier: Apache-2.0

//! `omsqueeze` command-line front end.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 on numerical failure.
//! Failures print a single `error kind=… exit=… message="…"` line on stderr.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Arg, ArgMatches, Command};
use omsqueeze::optimize::PointStatus;

use config::{RunConfig, KEYS, OUT_DIR_ENV};

pub const SUBCOMMANDS: &[(&str, &str)] = &[
    ("steady", "steady state at one point (JSON report)"),
    (
        "sweep-ratio",
        "variance as a function of G+/G- at fixed cooperativity",
    ),
    (
        "optimize",
        "optimized variance against cooperativity with asymptotic and master-equation columns",
    ),
    (
        "spectrum",
        "cavity output spectrum and its integrated weight",
    ),
    (
        "floquet-sweep",
        "optimized period-averaged variance against cooperativity beyond the RWA",
    ),
    (
        "third-tone",
        "optimized variance with and without the compensating third tone",
    ),
    (
        "compare-lindblad",
        "full theory against the reduced master equation",
    ),
    (
        "check-validity",
        "bad-cavity validity condition at the optimum",
    ),
    (
        "bounds",
        "upper and lower squeezing bounds from the Bogoliubov occupancy",
    ),
];

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            kind: "InvalidInput".into(),
            message: message.into(),
        }
    }

    pub fn numerical(kind: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, e: impl Display) -> Self {
        Self {
            code: 1,
            kind: "Io".into(),
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<omsqueeze::Error> for CliError {
    fn from(e: omsqueeze::Error) -> Self {
        let kind = match PointStatus::from_error(&e) {
            PointStatus::Failed { kind, .. } => kind,
            PointStatus::Ok => "Error".into(),
        };
        Self {
            code: if e.is_input_error() { 1 } else { 2 },
            kind,
            message: e.to_string(),
        }
    }
}

fn cli() -> Command {
    let mut cmd = Command::new("omsqueeze")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Steady-state mechanical squeezing by two-tone driving of an optomechanical cavity")
        .after_help(format!(
            "Rates are in units of the cavity linewidth. Output goes to --out-dir, ${OUT_DIR_ENV} or ./out."
        ))
        .subcommand_required(true)
        .arg(
            Arg::new("config")
                .long("config")
                .global(true)
                .value_name("FILE")
                .help("flat `key = value` file; flags override it"),
        );
    for (key, default, help) in KEYS {
        let help = if default.is_empty() {
            help.to_string()
        } else {
            format!("{help} [default: {default}]")
        };
        cmd = cmd.arg(
            Arg::new(*key)
                .long(*key)
                .global(true)
                .value_name("VALUE")
                .allow_hyphen_values(true)
                .help(help),
        );
    }
    for (name, about) in SUBCOMMANDS {
        cmd = cmd.subcommand(Command::new(*name).about(*about));
    }
    cmd
}

fn flags(m: &ArgMatches) -> BTreeMap<String, String> {
    KEYS.iter()
        .filter_map(|(k, _, _)| m.get_one::<String>(k).map(|v| (k.to_string(), v.clone())))
        .collect()
}

fn run(args: Vec<String>) -> Result<Vec<PathBuf>, CliError> {
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return Ok(Vec::new());
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            return Err(CliError::input(line.trim_start_matches("error: ")));
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let file = sub.get_one::<String>("config").map(PathBuf::from);
    let cfg = RunConfig::resolve(name, file.as_deref(), flags(sub))?;
    commands::dispatch(&cfg)
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(written) => {
            for path in written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!(
                "error kind={} exit={} message={:?}",
                e.kind, e.code, e.message
            );
            ExitCode::from(e.code)
        }
    }
}
