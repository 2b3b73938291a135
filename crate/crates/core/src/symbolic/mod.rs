//! Array codings of natural-extension points, seeded by a position inside
//! an `n`-symbol. Every property computed here holds "on window" only.

mod language;
mod probe;
mod symbol;
mod window;

use thiserror::Error;

use crate::structured::StructureError;

pub use language::{language_of_level, LevelLanguage};
pub use probe::{expansiveness_probe, ProbeOutcome, ProbeReport};
pub use symbol::{expand_symbol, NSymbol, SymbolRow};
pub use window::{pair_report, window_of_thread, ArrayWindow, PairReport, Seed};

pub const WINDOW_SCOPE: &str = "on window";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("level {level} has no circuit {circuit}")]
    UnknownCircuit { level: usize, circuit: usize },
    #[error("window [{from}, {to}] leaves symbol c({level},{circuit}) of width {width}")]
    WindowExceedsSymbol { level: usize, circuit: usize, from: i64, to: i64, width: usize },
    #[error("length {length} exceeds the {available} letters available in row {level}")]
    WindowTooWide { level: usize, length: usize, available: usize },
    #[error("windows differ in shape")]
    ShapeMismatch,
    #[error("level {level} is outside the prefix of depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
}
