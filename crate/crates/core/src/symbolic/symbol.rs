use serde::Serialize;

use super::SymbolicError;
use crate::structured::StructuredCovering;

/// Letters of one row and the column where each letter's circuit starts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolRow {
    pub letters: Vec<usize>,
    pub starts: Vec<usize>,
}

impl SymbolRow {
    /// Letter covering column `t`.
    pub fn letter_at(&self, t: usize) -> usize {
        self.letters[self.starts.partition_point(|&s| s <= t) - 1]
    }
}

/// The square form of `c_{n,i}`: row `n` is the circuit itself, row `m-1`
/// replaces each letter of row `m` by its word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NSymbol {
    pub level: usize,
    pub circuit: usize,
    /// `l(n,i)`, the width of every row in vertex steps.
    pub width: usize,
    pub rows: Vec<SymbolRow>,
}

impl NSymbol {
    pub fn row(&self, m: usize) -> &SymbolRow {
        &self.rows[m]
    }

    /// The projection `c_{n,i}[m]`.
    pub fn letters(&self, m: usize) -> &[usize] {
        &self.rows[m].letters
    }

    /// Row widths in vertex steps, computed from the periods of the letters.
    pub fn row_width(&self, sc: &StructuredCovering, m: usize) -> usize {
        self.rows[m].letters.iter().map(|&a| sc.period(m, a)).sum()
    }

    /// Vertex `u_{m,t}` of `G_m` at every column `t ∈ [0, width)`, read off
    /// the circuits of row `m`.
    pub fn vertex_row(&self, sc: &StructuredCovering, m: usize) -> Vec<usize> {
        let lvl = sc.level(m);
        let mut out = Vec::with_capacity(self.width);
        for &a in &self.rows[m].letters {
            let c = lvl.circuit(a);
            out.extend_from_slice(&c[..c.len() - 1]);
        }
        out
    }
}

pub fn expand_symbol(sc: &StructuredCovering, n: usize, i: usize) -> Result<NSymbol, SymbolicError> {
    if n > sc.depth() {
        return Err(SymbolicError::LevelOutOfRange { level: n, depth: sc.depth() });
    }
    if i == 0 || i > sc.circuit_count(n) {
        return Err(SymbolicError::UnknownCircuit { level: n, circuit: i });
    }
    let mut rows = vec![SymbolRow { letters: vec![i], starts: vec![0] }];
    for m in (1..=n).rev() {
        let above = rows.last().expect("non-empty");
        let mut letters = Vec::new();
        let mut starts = Vec::new();
        for (&a, &s) in above.letters.iter().zip(&above.starts) {
            let word = sc.word(m, a)?;
            let mut col = s;
            for &b in &word.letters {
                letters.push(b);
                starts.push(col);
                col += sc.period(m - 1, b);
            }
        }
        rows.push(SymbolRow { letters, starts });
    }
    rows.reverse();
    Ok(NSymbol { level: n, circuit: i, width: sc.period(n, i), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::towers;

    #[test]
    fn figure_fragment_two_symbol() {
        let s = expand_symbol(&towers::figure_fragment(), 2, 1).unwrap();
        assert_eq!(s.letters(2), &[1]);
        assert_eq!(s.letters(1), &[1, 3, 2]);
        assert_eq!(s.row(1).starts, vec![0, 3, 6]);
        assert_eq!(s.letters(0), &[1; 8]);
    }

    #[test]
    fn level_one_row_zero_is_all_base() {
        let sc = towers::fibonacci(3);
        for i in 1..=2 {
            let s = expand_symbol(&sc, 1, i).unwrap();
            assert_eq!(s.letters(0).len(), sc.period(1, i));
            assert!(s.vertex_row(&sc, 0).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn dyadic_rows() {
        let s = expand_symbol(&towers::dyadic(3), 3, 1).unwrap();
        assert_eq!(s.letters(1), &[1, 1, 1, 1]);
    }

    #[test]
    fn width_audit_and_errors() {
        let sc = towers::rank3(4);
        for i in 1..=3 {
            let s = expand_symbol(&sc, 4, i).unwrap();
            for m in 0..=4 {
                assert_eq!(s.row_width(&sc, m), s.width);
                assert_eq!(s.vertex_row(&sc, m).len(), s.width);
            }
            assert_eq!(s.row(2).letter_at(s.width - 1), *s.letters(2).last().unwrap());
        }
        assert!(matches!(expand_symbol(&sc, 4, 4), Err(SymbolicError::UnknownCircuit { .. })));
        assert!(matches!(expand_symbol(&sc, 5, 1), Err(SymbolicError::LevelOutOfRange { .. })));
    }
}
