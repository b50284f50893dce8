//! Library face of the `covsel` binary: flag parsing, the four subcommands,
//! and the exit-code policy. Kept as a library so integration tests drive the
//! exact command implementations in-process.

pub mod args;
pub mod commands;
pub mod report;

use covsel_core::Error;

/// Runs a parsed command line.
pub fn run(cli: args::Cli) -> covsel_core::Result<()> {
    commands::dispatch(cli)
}

/// Exit-code policy: 2 for bad inputs (files, flags, malformed data), 3 for
/// solver failures (caps, divergence, numerical trouble). Success is 0.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Io(_) => 2,
        Error::NumericalFailure(_)
        | Error::StalledLineSearch { .. }
        | Error::PenaltyDivergence { .. }
        | Error::CapsExceeded { .. }
        | Error::DegenerateTrace(_) => 3,
    }
}
