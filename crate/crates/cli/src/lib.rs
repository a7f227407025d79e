//! Library side of the `lueq` command-line tool: state files, output
//! formatting, subcommands and the `verify` suite.

pub mod commands;
pub mod output;
pub mod state_file;
pub mod verify;
