use std::collections::BTreeMap;

use super::{StructureError, StructuredCovering};

/// Identifies the circuits of `G_m` whose `m`-symbols agree on rows
/// `0..m-1`, keeping the smallest index of each class and re-indexing the
/// level `m+1` words.
pub fn merge_equal_symbols(sc: &StructuredCovering, m: usize) -> Result<StructuredCovering, StructureError> {
    sc.check_level(m)?;
    if m == 0 {
        return Err(StructureError::NothingToMerge(0));
    }
    let table = sc.word_table()?;
    // Equal words give equal symbols, and distinct words give symbols that
    // differ in row m-1.
    let words = &table.words[m - 1];
    let mut first: BTreeMap<&[usize], usize> = BTreeMap::new();
    let mut class = Vec::with_capacity(words.len());
    let mut keep = Vec::new();
    for (i, w) in words.iter().enumerate() {
        let next = first.len();
        let c = *first.entry(w.as_slice()).or_insert(next);
        if c == next {
            keep.push(i);
        }
        class.push(c + 1);
    }
    if keep.len() == words.len() {
        return Err(StructureError::NothingToMerge(m));
    }

    let mut circuits = sc.circuits_by_label();
    circuits[m - 1] = keep.iter().map(|&i| circuits[m - 1][i].clone()).collect();
    let mut upper_words: Vec<Vec<Vec<usize>>> = table.words.iter().skip(1).cloned().collect();
    // upper_words[k] holds level k+2; level m's own words survive for kept
    // circuits only, and level m+1 letters are remapped.
    if m >= 2 {
        upper_words[m - 2] = keep.iter().map(|&i| table.words[m - 1][i].clone()).collect();
    }
    if m < sc.depth() {
        for w in &mut upper_words[m - 1] {
            for a in w.iter_mut() {
                *a = class[*a - 1];
            }
        }
    }
    StructuredCovering::from_circuit_words(sc.mode(), &circuits, &upper_words)
}
