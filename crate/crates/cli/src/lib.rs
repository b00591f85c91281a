//! File formats, generators, verification suites and the `gf2add` command
//! line for the `gf2-additive` core.

pub mod analyze;
pub mod cli;
pub mod format;
pub mod generate;
pub mod recheck;
pub mod run;
pub mod verify;
