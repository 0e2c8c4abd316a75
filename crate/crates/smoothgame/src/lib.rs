//! Command-line harness, experiment registry and IO for the
//! `smoothgame-core` simulation engine.
//!
//! The binary exposes three subcommands:
//!
//! * `simulate` plays one game and writes a JSON-lines transcript plus a
//!   one-line CSV summary;
//! * `verify <suite>` runs a registered suite and reports one row per check;
//! * `table <name>` sweeps a parameter grid and writes a CSV for plotting.
//!
//! [`criteria`] holds the acceptance criteria shared by the
//! `sharp_constants` suite and the `acceptance` test target.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod criteria;
pub mod error;
pub mod names;
pub mod output;
pub mod registry;
pub mod tables;

pub use error::{CliError, CliResult};
