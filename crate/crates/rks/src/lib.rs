//! Experiment harness, CSV output and command-line front end.

pub mod cli;
pub mod experiments;
pub mod table;
