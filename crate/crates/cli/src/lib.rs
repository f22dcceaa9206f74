//! Command-line front end for `planar-lnd`.

pub mod commands;
pub mod document;
pub mod fuzz;

pub use commands::{run, Outcome};
