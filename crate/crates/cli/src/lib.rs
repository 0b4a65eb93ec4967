//! Configuration, experiment registry and CSV output behind the `dlab` binary.

pub mod config;
pub mod csvout;
pub mod experiments;
pub mod run;
