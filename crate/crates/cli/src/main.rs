//! `hoforms`: index sets, constructions and verification suites for
//! higher-order modular forms.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or environment error.

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hoforms::GroupProfile;

mod config;
mod numeric;
mod report;
mod symbolic;

use config::{Flags, RunConfig};

#[derive(Parser)]
#[command(
    name = "hoforms",
    version,
    about = "Index sets, constructions and verification suites for higher-order modular forms",
    after_help = "Exit codes: 0 pass, 1 verification failure, 2 usage or environment error.\n\
                  The fixture root defaults to ./fixtures and can be set with HOFORMS_FIXTURES."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List J_{t,k} with exclusion reasons, then I_{t,k}.
    Enumerate {
        #[command(flatten)]
        flags: Flags,
    },
    /// Build Z for entries of I_{t,k} and Z' for entries of J_{t,k}.
    Construct {
        #[command(flatten)]
        flags: Flags,
        /// A single entry, e.g. `[-1,1];f1`.
        #[arg(long)]
        entry: Option<String>,
        /// Which construction to run.
        #[arg(long, value_enum, default_value_t = symbolic::KindArg::Both)]
        kind: symbolic::KindArg,
    },
    /// Construction theorem, rank and parabolic lemma for all t <= --t.
    VerifySymbolic {
        #[command(flatten)]
        flags: Flags,
        /// Skip the first correction of one entry, e.g. `Z:[-1,1];f1`.
        #[arg(long)]
        inject_fault: Option<String>,
    },
    /// Modular symbols, path and S-function identities, shuffle rule and
    /// period cocycle on a group fixture.
    VerifyNumeric {
        #[command(flatten)]
        flags: Flags,
        /// Gate the path and S-function checks on the identities as printed
        /// instead of the corrected sign.
        #[arg(long)]
        printed: bool,
    },
    /// Consolidate the reports in --out into report.txt and report.json.
    Report {
        #[command(flatten)]
        flags: Flags,
    },
}

/// A command outcome other than success.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Failure { code: 2, message }
    }

    pub fn verification(message: String) -> Self {
        Failure { code: 1, message }
    }
}

/// Maps library errors on inputs to exit code 2.
pub fn env_error(e: hoforms::Error) -> Failure {
    Failure::usage(e.to_string())
}

pub fn profile(cfg: &RunConfig) -> Result<GroupProfile, Failure> {
    if cfg.group_fixture.is_some() {
        let path = cfg.group_path();
        return GroupProfile::from_fixture(&path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())));
    }
    GroupProfile::synthetic(cfg.genus, cfg.cusps, &cfg.weights).map_err(env_error)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Enumerate { flags } => {
            if flags.t.is_none() {
                return Err(Failure::usage("enumerate needs --t".into()));
            }
            symbolic::enumerate(&RunConfig::resolve(&flags, 1)?)
        }
        Command::Construct { flags, entry, kind } => {
            symbolic::construct(&RunConfig::resolve(&flags, 2)?, entry.as_deref(), kind)
        }
        Command::VerifySymbolic {
            flags,
            inject_fault,
        } => symbolic::verify(&RunConfig::resolve(&flags, 4)?, inject_fault.as_deref()),
        Command::VerifyNumeric { flags, printed } => {
            numeric::verify(&RunConfig::resolve(&flags, 3)?, printed)
        }
        Command::Report { flags } => report::run(&RunConfig::resolve(&flags, 4)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hoforms: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
