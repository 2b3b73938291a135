use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::window::symbol_vertex_rows;
use super::SymbolicError;
use crate::covering::PREFIX_SCOPE;
use crate::structured::StructuredCovering;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ProbeOutcome {
    /// Least odd width `W` whose centered row-1 words determine rows `1..=N`.
    Found { width: usize },
    NoWindow {
        /// Largest width examined.
        tested_width: usize,
        /// Least row-1 word at that width seen above two different columns,
        /// if any window of that width fits.
        witness: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub rows: usize,
    pub max_width: usize,
    /// Level of the symbols whose columns were sampled.
    pub source_level: usize,
    pub outcome: ProbeOutcome,
    pub scope: &'static str,
}

/// Column values (rows `1..=N`) and row-1 vertices of every column of every
/// top-level symbol.
pub(crate) struct Columns {
    pub row1: Vec<Vec<usize>>,
    pub values: Vec<Vec<Vec<usize>>>,
}

pub(crate) fn sample_columns(sc: &StructuredCovering, rows: usize) -> Columns {
    let top = sc.depth();
    let mut row1 = Vec::new();
    let mut values = Vec::new();
    for i in 1..=sc.circuit_count(top) {
        let vr = symbol_vertex_rows(sc, top, i);
        let width = vr[top].len() - 1;
        row1.push(vr[1][..width].to_vec());
        values.push((0..width).map(|t| (1..=rows).map(|m| vr[m][t]).collect()).collect());
    }
    Columns { row1, values }
}

struct WidthCheck {
    ambiguous: BTreeSet<Vec<usize>>,
    covered: BTreeSet<Vec<usize>>,
}

fn check_width(cols: &Columns, w: usize) -> WidthCheck {
    let h = w / 2;
    let mut seen: BTreeMap<&[usize], &Vec<usize>> = BTreeMap::new();
    let mut ambiguous = BTreeSet::new();
    let mut covered = BTreeSet::new();
    for (row, values) in cols.row1.iter().zip(&cols.values) {
        if row.len() < w {
            continue;
        }
        for p in h..row.len() - h {
            let key = &row[p - h..=p + h];
            let value = &values[p];
            covered.insert(value.clone());
            match seen.get(key) {
                Some(&v) if v != value => {
                    ambiguous.insert(key.to_vec());
                }
                Some(_) => {}
                None => {
                    seen.insert(key, value);
                }
            }
        }
    }
    WidthCheck { ambiguous, covered }
}

/// Searches odd widths `W ≤ max_width` for a recognizability window: every
/// width-`W` word of vertex row 1 that occurs in the top-level symbols sits
/// above a single column of rows `1..=rows`, and every column value is seen.
pub fn expansiveness_probe(sc: &StructuredCovering, rows: usize, max_width: usize) -> Result<ProbeReport, SymbolicError> {
    if rows > sc.depth() || (rows > 0 && sc.depth() == 0) {
        return Err(SymbolicError::LevelOutOfRange { level: rows, depth: sc.depth() });
    }
    let report = |outcome| ProbeReport {
        rows,
        max_width,
        source_level: sc.depth(),
        outcome,
        scope: PREFIX_SCOPE,
    };
    if rows <= 1 {
        return Ok(report(ProbeOutcome::Found { width: 1 }));
    }
    let cols = sample_columns(sc, rows);
    let all: BTreeSet<Vec<usize>> = cols.values.iter().flatten().cloned().collect();
    let widths: Vec<usize> = (1..=max_width).step_by(2).collect();
    let found = widths
        .par_iter()
        .find_first(|&&w| {
            let c = check_width(&cols, w);
            c.ambiguous.is_empty() && c.covered == all
        })
        .copied();
    if let Some(width) = found {
        return Ok(report(ProbeOutcome::Found { width }));
    }
    let tested_width = widths.last().copied().unwrap_or(0);
    let g1 = sc.graph(1);
    let witness = (tested_width > 0)
        .then(|| {
            check_width(&cols, tested_width)
                .ambiguous
                .into_iter()
                .map(|k| k.into_iter().map(|v| g1.name(v).to_string()).collect::<Vec<_>>())
                .min()
        })
        .flatten();
    Ok(report(ProbeOutcome::NoWindow { tested_width, witness }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::towers;

    #[test]
    fn one_row_needs_width_one() {
        for sc in [towers::dyadic(5), towers::fibonacci(5)] {
            assert_eq!(expansiveness_probe(&sc, 1, 9).unwrap().outcome, ProbeOutcome::Found { width: 1 });
        }
    }

    #[test]
    fn dyadic_has_no_window() {
        let r = expansiveness_probe(&towers::dyadic(7), 3, 15).unwrap();
        let ProbeOutcome::NoWindow { tested_width, witness } = r.outcome else {
            panic!("odometer rows are periodic");
        };
        assert_eq!(tested_width, 15);
        assert!(witness.is_some());
    }

    #[test]
    fn too_many_rows() {
        assert!(expansiveness_probe(&towers::dyadic(3), 4, 9).is_err());
    }
}
