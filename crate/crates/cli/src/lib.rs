//! Library side of the `frdt` command: configuration, artifact writers and
//! the run driver.

pub mod config;
pub mod emit;
pub mod run;
