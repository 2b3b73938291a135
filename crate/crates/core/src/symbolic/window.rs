use std::collections::BTreeSet;

use serde::Serialize;

use super::{SymbolicError, WINDOW_SCOPE};
use crate::structured::StructuredCovering;

/// A natural-extension point, given as column `offset` of the symbol
/// `c_{level,circuit}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Seed {
    pub level: usize,
    pub circuit: usize,
    pub offset: usize,
}

/// Rows `0..=rows` of the array and linked array codings over the columns
/// `-I..=I` around a seed. Column `c` of every row sits at index `c + I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrayWindow {
    pub seed: Seed,
    pub half_width: usize,
    /// `x̂|_m` as vertex indices of `G_m`.
    pub vertex_rows: Vec<Vec<usize>>,
    /// `x̂[m]` as 1-based circuit indices of `G_m`.
    pub letter_rows: Vec<Vec<usize>>,
    /// Columns carrying an `m`-cut.
    pub cuts: Vec<BTreeSet<i64>>,
}

impl ArrayWindow {
    pub fn rows(&self) -> usize {
        self.letter_rows.len() - 1
    }

    pub fn columns(&self) -> impl Iterator<Item = i64> {
        let h = self.half_width as i64;
        -h..=h
    }

    /// An `m`-cut at a column implies an `n`-cut there for every `n ≤ m`.
    pub fn cut_coherent(&self) -> bool {
        self.cuts.windows(2).all(|w| w[1].is_subset(&w[0]))
    }

    /// Every letter between consecutive cuts spells one circuit, and vertex
    /// row `m` is the image of row `m+1`.
    pub fn rows_consistent(&self, sc: &StructuredCovering) -> bool {
        let phi_ok = (0..self.rows()).all(|m| {
            let phi = sc.base().cover(m);
            self.vertex_rows[m + 1].iter().zip(&self.vertex_rows[m]).all(|(&u, &v)| phi.apply(u) == v)
        });
        let letters_ok = (0..=self.rows()).all(|m| {
            let row = &self.letter_rows[m];
            (1..row.len()).all(|k| self.cuts[m].contains(&(k as i64 - self.half_width as i64)) || row[k] == row[k - 1])
        });
        phi_ok && letters_ok
    }
}

/// Vertex rows of the symbol `c_{n,i}` over its columns `0..=l(n,i)`, the
/// last column being the closing center. Row `m` is the `φ`-image of row `m+1`.
pub(crate) fn symbol_vertex_rows(sc: &StructuredCovering, n: usize, i: usize) -> Vec<Vec<usize>> {
    let mut rows = vec![sc.level(n).circuit(i).to_vec()];
    for m in (0..n).rev() {
        let phi = sc.base().cover(m);
        let next: Vec<usize> = rows.last().expect("non-empty").iter().map(|&v| phi.apply(v)).collect();
        rows.push(next);
    }
    rows.reverse();
    rows
}

/// Parses a vertex row at level `m` into circuit letters, cutting at every
/// visit of the center. The first step after a cut names the circuit.
pub(crate) fn parse_row(sc: &StructuredCovering, m: usize, row: &[usize]) -> Result<Vec<usize>, SymbolicError> {
    let lvl = sc.level(m);
    let mut letters = vec![0; row.len() - 1];
    let mut t = 0;
    while t + 1 < row.len() {
        if row[t] != lvl.center() {
            return Err(SymbolicError::UnknownCircuit { level: m, circuit: 0 });
        }
        let k = lvl
            .circuits()
            .position(|c| c[1] == row[t + 1])
            .ok_or(SymbolicError::UnknownCircuit { level: m, circuit: 0 })?;
        let p = lvl.period(k + 1);
        for slot in letters.iter_mut().skip(t).take(p) {
            *slot = k + 1;
        }
        t += p;
    }
    Ok(letters)
}

pub fn window_of_thread(
    sc: &StructuredCovering,
    seed: Seed,
    rows: usize,
    half_width: usize,
) -> Result<ArrayWindow, SymbolicError> {
    let Seed { level: n, circuit: i, offset } = seed;
    if n > sc.depth() {
        return Err(SymbolicError::LevelOutOfRange { level: n, depth: sc.depth() });
    }
    if i == 0 || i > sc.circuit_count(n) {
        return Err(SymbolicError::UnknownCircuit { level: n, circuit: i });
    }
    let width = sc.period(n, i);
    let (from, to) = (offset as i64 - half_width as i64, (offset + half_width) as i64);
    if from < 0 || to >= width as i64 {
        return Err(SymbolicError::WindowExceedsSymbol { level: n, circuit: i, from, to, width });
    }
    let all = symbol_vertex_rows(sc, n, i);
    let top = rows.min(n);
    let mut window = ArrayWindow {
        seed,
        half_width,
        vertex_rows: Vec::with_capacity(top + 1),
        letter_rows: Vec::with_capacity(top + 1),
        cuts: Vec::with_capacity(top + 1),
    };
    let span = from as usize..=to as usize;
    for (m, row) in all.iter().enumerate().take(top + 1) {
        let letters = parse_row(sc, m, row)?;
        let center = sc.level(m).center();
        window.vertex_rows.push(row[span.clone()].to_vec());
        window.letter_rows.push(letters[span.clone()].to_vec());
        window.cuts.push(
            span.clone().filter(|&t| row[t] == center).map(|t| t as i64 - offset as i64).collect(),
        );
    }
    Ok(window)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    /// Greatest `n` with rows `0..=n` equal on the window; `None` if even
    /// row 0 differs.
    pub depth: Option<usize>,
    /// `depth + 1` when some represented row differs.
    pub separated_at: Option<usize>,
    pub common_cuts: Vec<BTreeSet<i64>>,
    pub scope: &'static str,
}

pub fn pair_report(a: &ArrayWindow, b: &ArrayWindow) -> Result<PairReport, SymbolicError> {
    if a.rows() != b.rows() || a.half_width != b.half_width {
        return Err(SymbolicError::ShapeMismatch);
    }
    let equal = |m: usize| {
        a.vertex_rows[m] == b.vertex_rows[m] && a.letter_rows[m] == b.letter_rows[m] && a.cuts[m] == b.cuts[m]
    };
    let first_diff = (0..=a.rows()).find(|&m| !equal(m));
    let depth = match first_diff {
        Some(0) => None,
        Some(m) => Some(m - 1),
        None => Some(a.rows()),
    };
    Ok(PairReport {
        depth,
        separated_at: first_diff,
        common_cuts: a.cuts.iter().zip(&b.cuts).map(|(x, y)| x.intersection(y).copied().collect()).collect(),
        scope: WINDOW_SCOPE,
    })
}
