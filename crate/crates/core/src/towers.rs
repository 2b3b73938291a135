//! Small named towers used by examples, tests and the bundled fixtures.

use crate::structured::{Mode, StructuredCovering, WordTable};

/// A tower repeating the same words at every level `2..=depth`.
pub fn uniform(level1_periods: &[usize], words: &[Vec<usize>], depth: usize, mode: Mode) -> StructuredCovering {
    let mut table = Vec::with_capacity(depth);
    if depth >= 1 {
        table.push(level1_periods.iter().map(|&p| vec![1; p]).collect());
    }
    for _ in 2..=depth {
        table.push(words.to_vec());
    }
    StructuredCovering::kr_from_table(&WordTable { words: table }, mode).expect("uniform tower words are well formed")
}

/// One loop per level.
pub fn singleton(depth: usize) -> StructuredCovering {
    uniform(&[1], &[vec![1]], depth, Mode::Kr)
}

/// `G_n` is a single circuit of length `2^n`; each cover wraps twice.
pub fn dyadic(depth: usize) -> StructuredCovering {
    uniform(&[2], &[vec![1, 1]], depth, Mode::Kr)
}

/// Two circuits per level with words `1 ↦ 12`, `2 ↦ 1`.
pub fn fibonacci(depth: usize) -> StructuredCovering {
    uniform(&[2, 1], &[vec![1, 2], vec![1]], depth, Mode::Kr)
}

/// Three circuits per level, every word containing every letter.
pub fn rank3(depth: usize) -> StructuredCovering {
    uniform(&[2, 3, 4], &[vec![1, 2, 3], vec![1, 3, 2, 2], vec![1, 2]], depth, Mode::Kr)
}

/// Circuit 2 never occurs in any word, so nothing reaches it.
pub fn degenerate(depth: usize) -> StructuredCovering {
    uniform(&[2, 3], &[vec![1, 1], vec![1, 1, 1]], depth, Mode::Kr)
}

/// Circuits 1 and 3 carry equal words at every level.
pub fn duplicated(depth: usize) -> StructuredCovering {
    uniform(&[2, 3, 2], &[vec![1, 2, 3], vec![1, 3, 2, 2], vec![1, 2, 3]], depth, Mode::Kr)
}

/// Circuit counts `(3, 2, 2, 2)`.
pub fn mixed_rank() -> StructuredCovering {
    let table = WordTable {
        words: vec![
            vec![vec![1], vec![1, 1], vec![1, 1, 1]],
            vec![vec![1, 2, 3], vec![1, 3]],
            vec![vec![1, 2], vec![1]],
            vec![vec![1, 2], vec![1]],
        ],
    };
    StructuredCovering::kr_from_table(&table, Mode::Kr).expect("well formed")
}

/// The four-level fragment behind the array-system and 2-symbol figures.
/// Its circuits meet only at the centers, and every word starts with 1.
pub fn figure_fragment() -> StructuredCovering {
    let table = WordTable {
        words: vec![
            vec![vec![1; 3], vec![1; 2], vec![1; 3]],
            vec![vec![1, 3, 2], vec![1, 2, 3, 2], vec![1, 2, 3, 3]],
            vec![vec![1, 3, 2], vec![1, 2, 3], vec![1, 2, 1, 3]],
            vec![vec![1, 2, 3, 1], vec![1, 3, 2], vec![1, 3, 3, 2]],
        ],
    };
    StructuredCovering::kr_from_table(&table, Mode::Gm).expect("well formed")
}

/// A GM tower whose two circuits share their last two interior vertices at
/// every level, with words `1 ↦ 121`, `2 ↦ 1221`.
pub fn gm_shared_tail(depth: usize) -> StructuredCovering {
    let words = [vec![1, 2, 1], vec![1, 2, 2, 1]];
    let mut periods = vec![5usize, 4];
    let mut circuits = Vec::with_capacity(depth);
    for n in 1..=depth {
        if n > 1 {
            periods = words.iter().map(|w| w.iter().map(|&a| periods[a - 1]).sum()).collect();
        }
        let level: Vec<Vec<String>> = periods
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let mut c = vec![format!("{n}.0")];
                c.extend((1..p - 2).map(|j| format!("{n}.{}.{j}", i + 1)));
                c.push(format!("{n}.s.1"));
                c.push(format!("{n}.s.2"));
                c.push(format!("{n}.0"));
                c
            })
            .collect();
        circuits.push(level);
    }
    let upper: Vec<Vec<Vec<usize>>> = (2..=depth).map(|_| words.to_vec()).collect();
    StructuredCovering::from_circuit_words(Mode::Gm, &circuits, &upper).expect("shared tails spell consistently")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periods() {
        assert_eq!(dyadic(3).period(3, 1), 8);
        assert_eq!(fibonacci(4).level(4).periods(), vec![8, 5]);
        assert_eq!(figure_fragment().level(2).periods(), vec![8, 10, 11]);
        assert_eq!(gm_shared_tail(2).level(2).periods(), vec![14, 18]);
        assert_eq!(singleton(3).graph(3).vertex_count(), 1);
    }

    #[test]
    fn shared_tail_vertex_counts() {
        let sc = gm_shared_tail(3);
        for n in 1..=3 {
            let sum: usize = sc.level(n).periods().iter().map(|p| p - 1).sum();
            assert_eq!(sc.graph(n).vertex_count(), 1 + sum - 2);
        }
    }
}
