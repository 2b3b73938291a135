//! From a GM tower to a KR tower with the same word tables, by giving every
//! circuit its own copy of each non-central vertex.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::structured::{validate_structured, Mode, StructureError, StructuredCovering};
use crate::symbolic::{window_of_thread, Seed, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("input is not a valid GM tower: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

#[derive(Debug, Clone)]
pub struct GmToKrResult {
    pub output: StructuredCovering,
    /// Per level, each output vertex `v'_{n,i,j}` and the input vertex
    /// `v_{n,i,j}` it copies.
    pub vertex_correspondence: Vec<BTreeMap<String, String>>,
}

pub fn gm_to_kr(sc: &StructuredCovering) -> Result<GmToKrResult, TransformError> {
    let report = validate_structured(&sc.clone().with_mode(Mode::Gm));
    if let Some(v) = report.violations.first() {
        return Err(TransformError::InvalidInput(v.to_string()));
    }
    let table = sc.word_table()?;
    let output = StructuredCovering::kr_from_table(&table, Mode::Kr)?;
    let vertex_correspondence = (0..=sc.depth())
        .map(|n| {
            let mut map = BTreeMap::new();
            for i in 1..=sc.circuit_count(n) {
                for (new, old) in output.circuit_labels(n, i).into_iter().zip(sc.circuit_labels(n, i)) {
                    map.insert(new.to_string(), old.to_string());
                }
            }
            map
        })
        .collect();
    Ok(GmToKrResult { output, vertex_correspondence })
}

/// `1 + Σ_i (l(n,i) - 1)`.
pub fn kr_vertex_count(sc: &StructuredCovering, n: usize) -> usize {
    1 + sc.level(n).periods().iter().map(|p| p - 1).sum::<usize>()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnMismatch {
    pub seed: Seed,
    pub row: usize,
    pub column: i64,
    pub input: (usize, bool),
    pub output: (usize, bool),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoincidenceReport {
    pub rows: usize,
    pub half_width: usize,
    pub seeds_checked: usize,
    /// Letter and cut disagreements, ordered by seed, row, column.
    pub mismatches: Vec<ColumnMismatch>,
}

impl CoincidenceReport {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the linked array codings (`x̂[0,N]` with cuts) of both towers at
/// every seed, each computed through that tower's own covers.
pub fn verify_linked_array_coincidence(
    input: &StructuredCovering,
    result: &GmToKrResult,
    rows: usize,
    half_width: usize,
    seeds: &[Seed],
) -> Result<CoincidenceReport, TransformError> {
    let per_seed: Vec<Vec<ColumnMismatch>> = seeds
        .par_iter()
        .map(|&seed| -> Result<Vec<ColumnMismatch>, TransformError> {
            let a = window_of_thread(input, seed, rows, half_width)?;
            let b = window_of_thread(&result.output, seed, rows, half_width)?;
            let mut out = Vec::new();
            for m in 0..=a.rows() {
                for (k, col) in a.columns().enumerate() {
                    let x = (a.letter_rows[m][k], a.cuts[m].contains(&col));
                    let y = (b.letter_rows[m][k], b.cuts[m].contains(&col));
                    if x != y {
                        out.push(ColumnMismatch { seed, row: m, column: col, input: x, output: y });
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    Ok(CoincidenceReport {
        rows,
        half_width,
        seeds_checked: seeds.len(),
        mismatches: per_seed.into_iter().flatten().collect(),
    })
}

/// Every seed of the level-`level` symbols whose window of half-width `I` fits.
pub fn all_seeds(sc: &StructuredCovering, level: usize, half_width: usize) -> Vec<Seed> {
    (1..=sc.circuit_count(level))
        .flat_map(|circuit| {
            let width = sc.period(level, circuit);
            (half_width..width.saturating_sub(half_width)).map(move |offset| Seed { level, circuit, offset })
        })
        .collect()
}
