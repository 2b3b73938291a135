//! Coverings whose levels are generalized figure-8s: Kakutani–Rohlin (KR)
//! towers, where circuits meet only at the center, and Gambaudo–Martens (GM)
//! towers, where circuits that meet merge until they return to the center.
//!
//! Circuit and letter indices are 1-based throughout; index 1 is the
//! distinguished first circuit. Level 0 is the singleton loop graph, viewed as
//! a figure-8 with the single circuit `(v0, v0)`.

mod analysis;
mod merge;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covering::{CoveringError, CoveringPrefix};
use crate::graph::{DirectedGraph, GraphError, GraphHom};

pub use analysis::{
    fiber_analysis, kr_partition, rank_profile, simplicity_check, FiberReport, KrPartitionLevel, KrTower,
    LevelReach, RankProfile, SimplicityReport, PREFIX_ESTIMATE,
};
pub use merge::merge_equal_symbols;
pub use validate::{validate_structured, StructureReport, StructuredViolation};

pub const BASE_VERTEX: &str = "v0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "KR")]
    Kr,
    #[serde(rename = "GM")]
    Gm,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Kr => "KR",
            Mode::Gm => "GM",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("expected {expected} structured levels, got {found}")]
    LevelCount { expected: usize, found: usize },
    #[error("level {level} is outside 0..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("level {level} has no circuit {circuit}")]
    UnknownCircuit { level: usize, circuit: usize },
    #[error("circuit c({level},{circuit}) needs at least two vertices")]
    ShortCircuit { level: usize, circuit: usize },
    #[error("circuit c({level},{circuit}) repeats c({level},{first})")]
    RepeatedCircuit { level: usize, circuit: usize, first: usize },
    #[error("decomposition of c({level},{circuit}) failed at step {step}: {reason}")]
    DecompositionFailure { level: usize, circuit: usize, step: usize, reason: String },
    #[error("word of c({level},{circuit}) spells {spelled} steps but the circuit has {period}")]
    WordLength { level: usize, circuit: usize, spelled: usize, period: usize },
    #[error("level {level}: vertex `{vertex}` receives two different images")]
    InconsistentCover { level: usize, vertex: String },
    #[error("operation requires a KR-mode covering")]
    NotKr,
    #[error("operation requires a covering that validates: {0}")]
    Invalid(String),
    #[error("nothing to merge at level {0}: all circuit words differ")]
    NothingToMerge(usize),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One figure-8 level: a center and the circuits `c_{n,i} = (v_{n,i,0}, …,
/// v_{n,i,l(n,i)})` through it, stored as vertex indices of the level graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Figure8Level {
    center: usize,
    circuits: Vec<Vec<usize>>,
}

impl Figure8Level {
    pub fn center(&self) -> usize {
        self.center
    }

    /// `l_n`.
    pub fn circuit_count(&self) -> usize {
        self.circuits.len()
    }

    /// Vertices of circuit `i` (1-based), first and last being the center.
    pub fn circuit(&self, i: usize) -> &[usize] {
        &self.circuits[i - 1]
    }

    pub fn circuits(&self) -> impl Iterator<Item = &[usize]> {
        self.circuits.iter().map(Vec::as_slice)
    }

    /// `l(n,i)`.
    pub fn period(&self, i: usize) -> usize {
        self.circuits[i - 1].len() - 1
    }

    pub fn periods(&self) -> Vec<usize> {
        self.circuits.iter().map(|c| c.len() - 1).collect()
    }
}

/// `φ_{n-1}(c_{n,i}) = c_{n-1,a(n,i,1)} … c_{n-1,a(n,i,k(n,i))}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircuitWord {
    pub level: usize,
    pub circuit: usize,
    pub letters: Vec<usize>,
}

/// Letters of every circuit word, levels `1..=N`, plus the level-1 periods.
/// `words[n-1][i-1]` is the word of `c_{n,i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordTable {
    pub words: Vec<Vec<Vec<usize>>>,
}

impl WordTable {
    pub fn depth(&self) -> usize {
        self.words.len()
    }

    /// `l(n,i)` for every level, computed from the words.
    pub fn periods(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![vec![1]];
        for level in &self.words {
            let below = out.last().expect("level 0 present");
            out.push(level.iter().map(|w| w.iter().map(|&a| below[a - 1]).sum()).collect());
        }
        out
    }
}

/// A covering prefix together with its figure-8 structure and word table.
#[derive(Debug, Clone)]
pub struct StructuredCovering {
    base: CoveringPrefix,
    levels: Vec<Figure8Level>,
    mode: Mode,
    words: Vec<Vec<Result<CircuitWord, StructureError>>>,
}

impl StructuredCovering {
    /// `centers` and `circuits` describe levels `1..=N` by vertex label.
    /// Words are derived by decomposing every circuit image; a failed
    /// decomposition is kept and surfaced by [`validate_structured`].
    pub fn new(
        base: CoveringPrefix,
        centers: &[String],
        circuits: &[Vec<Vec<String>>],
        mode: Mode,
    ) -> Result<Self, StructureError> {
        let depth = base.depth();
        if centers.len() != depth || circuits.len() != depth {
            return Err(StructureError::LevelCount {
                expected: depth,
                found: centers.len().min(circuits.len()),
            });
        }
        let mut levels = vec![Figure8Level { center: 0, circuits: vec![vec![0, 0]] }];
        for n in 1..=depth {
            let g = base.level(n);
            let center = g.require(&centers[n - 1])?;
            let mut cs = Vec::with_capacity(circuits[n - 1].len());
            for (i, c) in circuits[n - 1].iter().enumerate() {
                if c.len() < 2 {
                    return Err(StructureError::ShortCircuit { level: n, circuit: i + 1 });
                }
                let c = c.iter().map(|v| g.require(v)).collect::<Result<Vec<_>, _>>()?;
                if let Some(first) = cs.iter().position(|d| *d == c) {
                    return Err(StructureError::RepeatedCircuit { level: n, circuit: i + 1, first: first + 1 });
                }
                cs.push(c);
            }
            levels.push(Figure8Level { center, circuits: cs });
        }
        let mut sc = StructuredCovering { base, levels, mode, words: vec![Vec::new()] };
        for n in 1..=depth {
            let row = (1..=sc.levels[n].circuit_count()).map(|i| sc.decompose(n, i)).collect();
            sc.words.push(row);
        }
        Ok(sc)
    }

    pub fn base(&self) -> &CoveringPrefix {
        &self.base
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn depth(&self) -> usize {
        self.base.depth()
    }

    pub fn level(&self, n: usize) -> &Figure8Level {
        &self.levels[n]
    }

    pub fn graph(&self, n: usize) -> &Arc<DirectedGraph> {
        self.base.level(n)
    }

    pub fn circuit_count(&self, n: usize) -> usize {
        self.levels[n].circuit_count()
    }

    pub fn period(&self, n: usize, i: usize) -> usize {
        self.levels[n].period(i)
    }

    pub(crate) fn check_level(&self, n: usize) -> Result<(), StructureError> {
        if n > self.depth() {
            Err(StructureError::LevelOutOfRange { level: n, depth: self.depth() })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_circuit(&self, n: usize, i: usize) -> Result<(), StructureError> {
        self.check_level(n)?;
        if i == 0 || i > self.circuit_count(n) {
            Err(StructureError::UnknownCircuit { level: n, circuit: i })
        } else {
            Ok(())
        }
    }

    /// Circuit `i` of level `n` as vertex labels.
    pub fn circuit_labels(&self, n: usize, i: usize) -> Vec<&str> {
        let g = self.graph(n);
        self.levels[n].circuit(i).iter().map(|&v| g.name(v)).collect()
    }

    /// The stored decomposition of `c_{n,i}`, `n ≥ 1`.
    pub fn word(&self, n: usize, i: usize) -> Result<&CircuitWord, StructureError> {
        self.check_circuit(n, i)?;
        if n == 0 {
            return Err(StructureError::UnknownCircuit { level: 0, circuit: i });
        }
        self.words[n][i - 1].as_ref().map_err(Clone::clone)
    }

    pub fn word_table(&self) -> Result<WordTable, StructureError> {
        let mut words = Vec::with_capacity(self.depth());
        for n in 1..=self.depth() {
            let row = (1..=self.circuit_count(n))
                .map(|i| self.word(n, i).map(|w| w.letters.clone()))
                .collect::<Result<Vec<_>, _>>()?;
            words.push(row);
        }
        Ok(WordTable { words })
    }

    /// Walks `φ_{n-1}(c_{n,i})`, cutting at each visit of the level-`(n-1)`
    /// center and matching every segment against the circuits of `G_{n-1}`.
    fn decompose(&self, n: usize, i: usize) -> Result<CircuitWord, StructureError> {
        let lower = &self.levels[n - 1];
        let phi = self.base.cover(n - 1);
        let image: Vec<usize> = self.levels[n].circuit(i).iter().map(|&v| phi.apply(v)).collect();
        let fail = |step: usize, reason: &str| StructureError::DecompositionFailure {
            level: n,
            circuit: i,
            step,
            reason: reason.to_string(),
        };
        if image[0] != lower.center {
            return Err(fail(0, "image does not start at the lower center"));
        }
        if *image.last().expect("non-empty") != lower.center {
            return Err(fail(image.len() - 1, "image does not end at the lower center"));
        }
        let lookup: HashMap<&[usize], usize> =
            lower.circuits.iter().enumerate().map(|(t, c)| (c.as_slice(), t + 1)).collect();
        let mut letters = Vec::new();
        let mut start = 0;
        for pos in 1..image.len() {
            if image[pos] == lower.center {
                match lookup.get(&image[start..=pos]) {
                    Some(&t) => letters.push(t),
                    None => return Err(fail(start, "segment matches no lower circuit")),
                }
                start = pos;
            }
        }
        Ok(CircuitWord { level: n, circuit: i, letters })
    }

    /// Renames every vertex after its first occurrence in circuit order:
    /// `n.0` for centers, `n.i.j` for `v_{n,i,j}`, `v0` for the base.
    pub fn canonical(&self) -> Result<StructuredCovering, StructureError> {
        let mut names_per_level = Vec::with_capacity(self.depth() + 1);
        names_per_level.push(vec![BASE_VERTEX.to_string()]);
        for n in 1..=self.depth() {
            let lvl = &self.levels[n];
            let mut names: Vec<Option<String>> = vec![None; self.graph(n).vertex_count()];
            names[lvl.center] = Some(format!("{n}.0"));
            for (i, c) in lvl.circuits.iter().enumerate() {
                for (j, &v) in c.iter().enumerate().skip(1) {
                    if names[v].is_none() {
                        names[v] = Some(format!("{n}.{}.{j}", i + 1));
                    }
                }
            }
            // Vertices off every circuit keep a derived name so nothing is lost.
            let names = names
                .into_iter()
                .enumerate()
                .map(|(v, s)| s.unwrap_or_else(|| format!("{n}.x.{}", self.graph(n).name(v))))
                .collect::<Vec<_>>();
            names_per_level.push(names);
        }
        self.renamed(&names_per_level)
    }

    fn renamed(&self, names: &[Vec<String>]) -> Result<StructuredCovering, StructureError> {
        let levels: Vec<Arc<DirectedGraph>> = (0..=self.depth())
            .map(|n| {
                let g = self.graph(n);
                Arc::new(DirectedGraph::from_indices(names[n].clone(), g.edge_set().clone()))
            })
            .collect();
        let covers = (0..self.depth())
            .map(|n| GraphHom::new(levels[n + 1].clone(), levels[n].clone(), self.base.cover(n).map().to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        let base = CoveringPrefix::new(levels, covers)?;
        let mut out = self.clone();
        out.base = base;
        Ok(out)
    }

    /// Equality after canonical renaming: same graphs, covers and circuits.
    pub fn same_structure(&self, other: &StructuredCovering) -> bool {
        let (Ok(a), Ok(b)) = (self.canonical(), other.canonical()) else {
            return false;
        };
        a.depth() == b.depth()
            && (0..=a.depth()).all(|n| {
                **a.graph(n) == **b.graph(n)
                    && a.levels[n].circuit_count() == b.levels[n].circuit_count()
                    && (1..=a.circuit_count(n)).all(|i| a.circuit_labels(n, i) == b.circuit_labels(n, i))
            })
            && (0..a.depth()).all(|n| {
                a.base.cover(n).label_pairs().all(|(u, v)| b.base.cover(n).image_of(u) == Some(v))
            })
    }

    /// Builds a covering from explicit circuits (levels `1..=N`, by label,
    /// each starting and ending at the level's center) and the words of levels
    /// `2..=N`. Covers are spelled from the words; level-1 words are implied.
    pub fn from_circuit_words(
        mode: Mode,
        circuits: &[Vec<Vec<String>>],
        words: &[Vec<Vec<usize>>],
    ) -> Result<Self, StructureError> {
        let depth = circuits.len();
        if words.len() + 1 != depth.max(1) {
            return Err(StructureError::LevelCount { expected: depth.saturating_sub(1), found: words.len() });
        }
        let mut graphs = vec![Arc::new(DirectedGraph::singleton(BASE_VERTEX))];
        let mut centers = Vec::with_capacity(depth);
        let mut idx_circuits: Vec<Vec<Vec<usize>>> = vec![vec![vec![0, 0]]];
        for (n0, level) in circuits.iter().enumerate() {
            let n = n0 + 1;
            let mut names: Vec<String> = Vec::new();
            let mut index: HashMap<&str, usize> = HashMap::new();
            let mut edges = std::collections::BTreeSet::new();
            let mut cs = Vec::new();
            for (i, c) in level.iter().enumerate() {
                if c.len() < 2 {
                    return Err(StructureError::ShortCircuit { level: n, circuit: i + 1 });
                }
                let mut ids = Vec::with_capacity(c.len());
                for v in c {
                    let id = *index.entry(v.as_str()).or_insert_with(|| {
                        names.push(v.clone());
                        names.len() - 1
                    });
                    ids.push(id);
                }
                edges.extend(ids.windows(2).map(|w| (w[0], w[1])));
                cs.push(ids);
            }
            let center = cs.first().map(|c| c[0]).unwrap_or(0);
            centers.push(names.get(center).cloned().unwrap_or_default());
            graphs.push(Arc::new(DirectedGraph::from_indices(names, edges)));
            idx_circuits.push(cs);
        }
        let mut covers = Vec::with_capacity(depth);
        for n in 1..=depth {
            let (upper, lower) = (&idx_circuits[n], &idx_circuits[n - 1]);
            let mut map = vec![usize::MAX; graphs[n].vertex_count()];
            for (i, c) in upper.iter().enumerate() {
                let spelled: Vec<usize> = if n == 1 {
                    vec![0; c.len()]
                } else {
                    let word = words[n - 2]
                        .get(i)
                        .ok_or(StructureError::UnknownCircuit { level: n, circuit: i + 1 })?;
                    let mut s = vec![lower[0][0]];
                    for &a in word {
                        let lc = lower
                            .get(a.wrapping_sub(1))
                            .ok_or(StructureError::UnknownCircuit { level: n - 1, circuit: a })?;
                        s.extend_from_slice(&lc[1..]);
                    }
                    s
                };
                if spelled.len() != c.len() {
                    return Err(StructureError::WordLength {
                        level: n,
                        circuit: i + 1,
                        spelled: spelled.len() - 1,
                        period: c.len() - 1,
                    });
                }
                for (&v, &img) in c.iter().zip(&spelled) {
                    if map[v] != usize::MAX && map[v] != img {
                        return Err(StructureError::InconsistentCover {
                            level: n,
                            vertex: graphs[n].name(v).to_string(),
                        });
                    }
                    map[v] = img;
                }
            }
            covers.push(GraphHom::new(graphs[n].clone(), graphs[n - 1].clone(), map)?);
        }
        let base = CoveringPrefix::new(graphs, covers)?;
        StructuredCovering::new(base, &centers, circuits, mode)
    }

    /// A KR tower with canonical vertex names, from the level-1 periods and
    /// the words of levels `2..=N`.
    pub fn kr_from_words(level1_periods: &[usize], words: &[Vec<Vec<usize>>]) -> Result<Self, StructureError> {
        let mut table = vec![level1_periods.iter().map(|&p| vec![1; p]).collect::<Vec<_>>()];
        table.extend(words.iter().cloned());
        Self::kr_from_table(&WordTable { words: table }, Mode::Kr)
    }

    /// A tower with pairwise disjoint circuit interiors realizing `table`.
    pub fn kr_from_table(table: &WordTable, mode: Mode) -> Result<Self, StructureError> {
        let mut circuit_count = 1;
        for (n, level) in table.words.iter().enumerate() {
            for (i, w) in level.iter().enumerate() {
                if w.is_empty() {
                    return Err(StructureError::ShortCircuit { level: n + 1, circuit: i + 1 });
                }
                if let Some(&a) = w.iter().find(|&&a| a == 0 || a > circuit_count) {
                    return Err(StructureError::UnknownCircuit { level: n, circuit: a });
                }
            }
            circuit_count = level.len();
        }
        let periods = table.periods();
        for (n, level) in periods.iter().enumerate().skip(1) {
            let loops: Vec<usize> = (0..level.len()).filter(|&i| level[i] == 1).collect();
            if let [first, second, ..] = loops[..] {
                return Err(StructureError::RepeatedCircuit { level: n, circuit: second + 1, first: first + 1 });
            }
        }
        let circuits: Vec<Vec<Vec<String>>> = (1..periods.len())
            .map(|n| {
                periods[n]
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| {
                        let mut c = vec![format!("{n}.0")];
                        c.extend((1..p).map(|j| format!("{n}.{}.{j}", i + 1)));
                        c.push(format!("{n}.0"));
                        c
                    })
                    .collect()
            })
            .collect();
        let upper_words: Vec<Vec<Vec<usize>>> = table.words.iter().skip(1).cloned().collect();
        Self::from_circuit_words(mode, &circuits, &upper_words)
    }

    /// Explicit circuits as label lists, levels `1..=N`.
    pub fn circuits_by_label(&self) -> Vec<Vec<Vec<String>>> {
        (1..=self.depth())
            .map(|n| {
                (1..=self.circuit_count(n))
                    .map(|i| self.circuit_labels(n, i).into_iter().map(str::to_string).collect())
                    .collect()
            })
            .collect()
    }

    pub fn centers_by_label(&self) -> Vec<String> {
        (1..=self.depth()).map(|n| self.graph(n).name(self.levels[n].center).to_string()).collect()
    }
}
