//! Finite prefixes `G_0 ← G_1 ← … ← G_N` of graph coverings and their
//! finite-depth inverse-limit data: threads and the thread successor relation.
//!
//! Every statement about the infinite covering is evaluated on the represented
//! levels only, and reports say so ("holds on prefix").

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{compose_homs, hom_profile, validate_graph, DirectedGraph, GraphError, GraphHom, GraphViolation};

pub const PREFIX_SCOPE: &str = "holds on prefix";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error("covering prefix needs at least the base level")]
    NoLevels,
    #[error("{levels} levels need {expected} covers, got {found}")]
    CoverCount { levels: usize, expected: usize, found: usize },
    #[error("cover {0} does not map G_{next} to G_{0}", next = .0 + 1)]
    CoverShape(usize),
    #[error("level {level} is beyond the prefix depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("bad telescoping index set: {0}")]
    BadIndexSet(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A finite tower of graphs joined by covers, `covers[n] : levels[n+1] → levels[n]`.
#[derive(Debug, Clone)]
pub struct CoveringPrefix {
    levels: Vec<Arc<DirectedGraph>>,
    covers: Vec<GraphHom>,
}

impl CoveringPrefix {
    pub fn new(levels: Vec<Arc<DirectedGraph>>, covers: Vec<GraphHom>) -> Result<Self, CoveringError> {
        if levels.is_empty() {
            return Err(CoveringError::NoLevels);
        }
        if covers.len() + 1 != levels.len() {
            return Err(CoveringError::CoverCount {
                levels: levels.len(),
                expected: levels.len() - 1,
                found: covers.len(),
            });
        }
        for (n, phi) in covers.iter().enumerate() {
            if **phi.source() != *levels[n + 1] || **phi.target() != *levels[n] {
                return Err(CoveringError::CoverShape(n));
            }
        }
        // Re-anchor every cover on the shared level graphs so that vertex
        // indices agree everywhere.
        let covers = covers
            .iter()
            .enumerate()
            .map(|(n, phi)| relink(phi, &levels[n + 1], &levels[n]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CoveringPrefix { levels, covers })
    }

    /// Number of covers `N`; levels are `0..=N`.
    pub fn depth(&self) -> usize {
        self.covers.len()
    }

    pub fn level(&self, n: usize) -> &Arc<DirectedGraph> {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Arc<DirectedGraph>] {
        &self.levels
    }

    /// `φ_n : G_{n+1} → G_n`.
    pub fn cover(&self, n: usize) -> &GraphHom {
        &self.covers[n]
    }

    pub fn covers(&self) -> &[GraphHom] {
        &self.covers
    }

    pub(crate) fn check_level(&self, n: usize) -> Result<(), CoveringError> {
        if n > self.depth() {
            Err(CoveringError::LevelOutOfRange { level: n, depth: self.depth() })
        } else {
            Ok(())
        }
    }

    /// `φ_{from,to}(v)` for `to ≤ from`.
    pub fn project(&self, from: usize, to: usize, mut v: usize) -> usize {
        debug_assert!(to <= from);
        for n in (to..from).rev() {
            v = self.covers[n].apply(v);
        }
        v
    }

    /// `φ_{m,n} = φ_n ∘ … ∘ φ_{m-1}` as a homomorphism (`n < m`), or the
    /// identity when `m == n`.
    pub fn composite(&self, m: usize, n: usize) -> Result<GraphHom, CoveringError> {
        self.check_level(m)?;
        if n > m {
            return Err(CoveringError::BadIndexSet(format!("composite from {m} down to {n}")));
        }
        let mut h = GraphHom::identity(self.levels[m].clone());
        for k in (n..m).rev() {
            h = compose_homs(&self.covers[k], &h)?;
        }
        Ok(h)
    }
}

fn relink(
    phi: &GraphHom,
    source: &Arc<DirectedGraph>,
    target: &Arc<DirectedGraph>,
) -> Result<GraphHom, GraphError> {
    if Arc::ptr_eq(phi.source(), source) && Arc::ptr_eq(phi.target(), target) {
        return Ok(phi.clone());
    }
    GraphHom::from_labels(source.clone(), target.clone(), phi.label_pairs())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoveringViolation {
    /// `G_0` must be the singleton loop graph.
    BaseNotSingletonLoop,
    Graph { level: usize, violation: GraphViolation },
    /// `φ_n` fails one of the cover predicates.
    NotACover {
        cover: usize,
        is_hom: bool,
        is_edge_surjective: bool,
        is_positive_directional: bool,
    },
}

impl CoveringViolation {
    /// Level the violation is attributed to; a failing `φ_n` counts as level `n`.
    pub fn level(&self) -> usize {
        match self {
            CoveringViolation::BaseNotSingletonLoop => 0,
            CoveringViolation::Graph { level, .. } => *level,
            CoveringViolation::NotACover { cover, .. } => *cover,
        }
    }
}

impl fmt::Display for CoveringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoveringViolation::BaseNotSingletonLoop => {
                write!(f, "level 0: G_0 is not the singleton loop graph")
            }
            CoveringViolation::Graph { level, violation } => write!(f, "level {level}: {violation}"),
            CoveringViolation::NotACover { cover, is_hom, is_edge_surjective, is_positive_directional } => {
                write!(
                    f,
                    "level {cover}: φ_{cover} is not a cover (hom={is_hom}, edge-surjective={is_edge_surjective}, positive-directional={is_positive_directional})"
                )
            }
        }
    }
}

/// Every violation, ordered by level. The first entry names the first failing level.
pub fn validate_covering(c: &CoveringPrefix) -> Vec<CoveringViolation> {
    let mut out = Vec::new();
    let g0 = &c.levels[0];
    if g0.vertex_count() != 1 || g0.edge_count() != 1 || !g0.has_edge(0, 0) {
        out.push(CoveringViolation::BaseNotSingletonLoop);
    }
    for (level, g) in c.levels.iter().enumerate() {
        out.extend(validate_graph(g).into_iter().map(|violation| CoveringViolation::Graph { level, violation }));
    }
    for (n, phi) in c.covers.iter().enumerate() {
        let p = hom_profile(phi);
        if !p.is_cover {
            out.push(CoveringViolation::NotACover {
                cover: n,
                is_hom: p.is_hom,
                is_edge_surjective: p.is_edge_surjective,
                is_positive_directional: p.is_positive_directional,
            });
        }
    }
    out.sort_by_key(CoveringViolation::level);
    out
}

/// A point `(x_0, …, x_n)` of the depth-`n` approximation of `V_Γ`, stored as
/// vertex indices per level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Thread {
    coords: Vec<usize>,
}

impl Thread {
    pub fn new(coords: Vec<usize>) -> Self {
        Thread { coords }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn depth(&self) -> usize {
        self.coords.len() - 1
    }

    /// The coordinate at the deepest level; it determines the whole thread.
    pub fn top(&self) -> usize {
        *self.coords.last().expect("threads are non-empty")
    }

    pub fn at(&self, level: usize) -> usize {
        self.coords[level]
    }

    pub fn labels<'a>(&self, c: &'a CoveringPrefix) -> Vec<&'a str> {
        self.coords.iter().enumerate().map(|(n, &v)| c.level(n).name(v)).collect()
    }

    /// Coordinates at the given levels only.
    pub fn restrict(&self, levels: &[usize]) -> Thread {
        Thread { coords: levels.iter().map(|&n| self.coords[n]).collect() }
    }

    /// Whether `x_i = φ_i(x_{i+1})` for every represented level.
    pub fn is_consistent(&self, c: &CoveringPrefix) -> bool {
        self.coords.windows(2).enumerate().all(|(i, w)| c.cover(i).apply(w[1]) == w[0])
    }
}

/// The thread ending at vertex `top` of `G_n`.
pub fn thread_through(c: &CoveringPrefix, n: usize, top: usize) -> Thread {
    let mut coords = vec![0; n + 1];
    coords[n] = top;
    for i in (0..n).rev() {
        coords[i] = c.cover(i).apply(coords[i + 1]);
    }
    Thread { coords }
}

/// All threads of depth `n`, one per vertex of `G_n`, in vertex order.
pub fn threads_at_depth(c: &CoveringPrefix, n: usize) -> Result<Vec<Thread>, CoveringError> {
    c.check_level(n)?;
    Ok((0..c.level(n).vertex_count()).map(|v| thread_through(c, n, v)).collect())
}

/// Pairs of depth-`n` threads `(x, y)` with `(x_i, y_i) ∈ E_i` for all `i ≤ n`.
/// `pairs` index into `threads`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreadRelation {
    pub depth: usize,
    pub threads: Vec<Thread>,
    pub pairs: BTreeSet<(usize, usize)>,
}

impl ThreadRelation {
    pub fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.pairs.range((x, 0)..(x + 1, 0)).map(|&(_, y)| y)
    }

    /// Labels of each pair restricted to the given levels.
    pub fn restricted_pairs(&self, levels: &[usize]) -> BTreeSet<(Thread, Thread)> {
        self.pairs
            .iter()
            .map(|&(x, y)| (self.threads[x].restrict(levels), self.threads[y].restrict(levels)))
            .collect()
    }
}

/// Successor and predecessor counts of every thread at one depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterminismReport {
    pub depth: usize,
    pub successor_counts: Vec<usize>,
    pub predecessor_counts: Vec<usize>,
    /// Every thread has exactly one successor.
    pub deterministic: bool,
    /// Every thread has exactly one predecessor.
    pub codeterministic: bool,
    /// Every thread has at least one successor and one predecessor.
    pub surjective: bool,
    /// All covers `φ_0 … φ_{n-1}` are bidirectional, so the limit map would
    /// be a homeomorphism if that persisted for all later levels.
    pub covers_bidirectional: bool,
    pub scope: &'static str,
}

pub fn successor_relation_at_depth(
    c: &CoveringPrefix,
    n: usize,
) -> Result<(ThreadRelation, DeterminismReport), CoveringError> {
    let threads = threads_at_depth(c, n)?;
    let g = c.level(n);
    let mut pairs = BTreeSet::new();
    // (x_n, y_n) ∈ E_n is necessary; the lower levels are checked explicitly.
    for (u, v) in g.edges() {
        let (x, y) = (&threads[u], &threads[v]);
        if (0..=n).all(|i| c.level(i).has_edge(x.at(i), y.at(i))) {
            pairs.insert((u, v));
        }
    }
    let mut successor_counts = vec![0; threads.len()];
    let mut predecessor_counts = vec![0; threads.len()];
    for &(x, y) in &pairs {
        successor_counts[x] += 1;
        predecessor_counts[y] += 1;
    }
    let covers_bidirectional = c.covers[..n].iter().all(|phi| hom_profile(phi).is_bidirectional);
    let report = DeterminismReport {
        depth: n,
        deterministic: successor_counts.iter().all(|&k| k == 1),
        codeterministic: predecessor_counts.iter().all(|&k| k == 1),
        surjective: successor_counts.iter().chain(&predecessor_counts).all(|&k| k >= 1),
        successor_counts,
        predecessor_counts,
        covers_bidirectional,
        scope: PREFIX_SCOPE,
    };
    Ok((ThreadRelation { depth: n, threads, pairs }, report))
}

/// Keeps the levels `indices` (strictly increasing, starting at 0) and joins
/// them by the composite covers.
pub fn telescope(c: &CoveringPrefix, indices: &[usize]) -> Result<CoveringPrefix, CoveringError> {
    if indices.first() != Some(&0) {
        return Err(CoveringError::BadIndexSet("indices must start at 0".into()));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CoveringError::BadIndexSet("indices must be strictly increasing".into()));
    }
    if let Some(&last) = indices.last().filter(|&&l| l > c.depth()) {
        return Err(CoveringError::BadIndexSet(format!("index {last} exceeds depth {}", c.depth())));
    }
    let levels = indices.iter().map(|&n| c.levels[n].clone()).collect();
    let covers = indices
        .windows(2)
        .map(|w| c.composite(w[1], w[0]))
        .collect::<Result<Vec<_>, _>>()?;
    CoveringPrefix::new(levels, covers)
}
