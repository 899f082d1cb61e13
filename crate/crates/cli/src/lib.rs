//! Command-line workflows over `subdirect-core`: group specs, subgroup
//! descriptors, JSON-lines reports and the `verify` suite.

pub mod commands;
pub mod descriptor;
pub mod error;
pub mod report;
pub mod spec;
pub mod verify;

pub use error::{CliError, Result};
