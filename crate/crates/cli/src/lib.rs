//! Document formats and command dispatch for the `gcover` binary.

pub mod commands;
pub mod document;
