//! Scenario-driven front end for invariant extensions: load a TOML scenario,
//! evaluate the invariant field on a grid and audit it.

// `!(a <= b)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod commands;
pub mod scenario;

pub use commands::{execute, CliError, Command, Options, Outcome};
