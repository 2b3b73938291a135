use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{expand_symbol, SymbolicError};
use crate::structured::StructuredCovering;

/// Length-`L` words of `X_n` seen in row `n` of the top-level symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelLanguage {
    pub level: usize,
    pub length: usize,
    /// Level of the symbols the words were read from.
    pub source_level: usize,
    pub words: BTreeSet<Vec<usize>>,
    /// First occurrence of each word: `(circuit, letter index)` in row `level`
    /// of the symbol `c_{source_level,circuit}`.
    pub witnesses: BTreeMap<Vec<usize>, (usize, usize)>,
}

/// Every word lies inside a single top-level symbol, so it occurs in a
/// legal point; words that only appear across symbol boundaries are missed.
pub fn language_of_level(sc: &StructuredCovering, n: usize, length: usize) -> Result<LevelLanguage, SymbolicError> {
    let top = sc.depth();
    if n > top {
        return Err(SymbolicError::LevelOutOfRange { level: n, depth: top });
    }
    let rows: Vec<Vec<usize>> = (1..=sc.circuit_count(top))
        .map(|i| expand_symbol(sc, top, i).map(|s| s.letters(n).to_vec()))
        .collect::<Result<_, _>>()?;
    let available = rows.iter().map(Vec::len).max().unwrap_or(0);
    if length > available {
        return Err(SymbolicError::WindowTooWide { level: n, length, available });
    }
    let mut witnesses = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        if row.len() < length {
            continue;
        }
        for (k, w) in row.windows(length.max(1)).enumerate() {
            witnesses.entry(w[..length].to_vec()).or_insert((i + 1, k));
        }
    }
    Ok(LevelLanguage {
        level: n,
        length,
        source_level: top,
        words: witnesses.keys().cloned().collect(),
        witnesses,
    })
}
