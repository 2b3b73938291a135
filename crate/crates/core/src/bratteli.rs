//! Ordered Bratteli diagram prefixes `V_0, E_1, V_1, …, E_N, V_N`, the
//! Vershik map on depth-`N` paths, and the link with KR towers.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::covering::PREFIX_SCOPE;
use crate::structured::{validate_structured, Mode, StructureError, StructuredCovering, WordTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BratteliError {
    #[error("levels {m} and {n} do not satisfy m < n <= {depth}")]
    BadLevels { m: usize, n: usize, depth: usize },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("diagram is not properly ordered: {0}")]
    NotProperlyOrdered(String),
    #[error("diagram does not validate: {0}")]
    Invalid(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BratteliEdge {
    /// Index into `V_{n-1}`.
    pub source: usize,
    /// Index into `V_n`.
    pub range: usize,
}

/// `edges[n-1]` is `E_n`; multi-edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BratteliPrefix {
    pub level_vertices: Vec<Vec<String>>,
    pub edges: Vec<Vec<BratteliEdge>>,
}

/// `order[n-1][e]` is the 1-based position of edge `e` of `E_n` within
/// `r^{-1}(r(e))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderedBratteliPrefix {
    pub diagram: BratteliPrefix,
    pub order: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BratteliViolation {
    NoLevels,
    BaseNotSingle { count: usize },
    LevelCount { vertex_levels: usize, edge_levels: usize },
    EdgeOutOfRange { level: usize, edge: usize },
    NoOutgoing { level: usize, vertex: String },
    NoIncoming { level: usize, vertex: String },
    OrderShape { level: usize },
    /// The indices on `r^{-1}(v)` are not exactly `1..=k`.
    NotATotalOrder { level: usize, vertex: String },
}

impl fmt::Display for BratteliViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BratteliViolation::NoLevels => write!(f, "diagram has no levels"),
            BratteliViolation::BaseNotSingle { count } => write!(f, "V_0 has {count} vertices, expected 1"),
            BratteliViolation::LevelCount { vertex_levels, edge_levels } => {
                write!(f, "{vertex_levels} vertex levels but {edge_levels} edge levels")
            }
            BratteliViolation::EdgeOutOfRange { level, edge } => {
                write!(f, "E_{level}: edge {edge} names a vertex that does not exist")
            }
            BratteliViolation::NoOutgoing { level, vertex } => {
                write!(f, "V_{level}: `{vertex}` has no outgoing edge")
            }
            BratteliViolation::NoIncoming { level, vertex } => {
                write!(f, "V_{level}: `{vertex}` has no incoming edge")
            }
            BratteliViolation::OrderShape { level } => {
                write!(f, "E_{level}: order indices do not match the edge list")
            }
            BratteliViolation::NotATotalOrder { level, vertex } => {
                write!(f, "V_{level}: incoming edges of `{vertex}` are not numbered 1..k")
            }
        }
    }
}

impl BratteliPrefix {
    pub fn depth(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self, n: usize) -> usize {
        self.level_vertices[n].len()
    }

    /// Edge indices of `E_n` ending at `v ∈ V_n`.
    pub fn incoming(&self, n: usize, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges[n - 1].iter().enumerate().filter(move |(_, e)| e.range == v).map(|(i, _)| i)
    }

    /// The diagram with one vertex per level and `k` edges per level.
    pub fn uniform_single(depth: usize, k: usize) -> BratteliPrefix {
        BratteliPrefix {
            level_vertices: (0..=depth).map(|n| vec![format!("{n}")]).collect(),
            edges: (0..depth).map(|_| vec![BratteliEdge { source: 0, range: 0 }; k]).collect(),
        }
    }

    /// Number of `V_m → V_n` paths between every pair of vertices.
    pub fn path_counts(&self, m: usize, n: usize) -> Vec<Vec<u128>> {
        let mut counts: Vec<Vec<u128>> = (0..self.vertex_count(m))
            .map(|u| (0..self.vertex_count(m)).map(|v| u128::from(u == v)).collect())
            .collect();
        for k in m + 1..=n {
            let mut next = vec![vec![0u128; self.vertex_count(k)]; self.vertex_count(m)];
            for e in &self.edges[k - 1] {
                for (u, row) in counts.iter().enumerate() {
                    next[u][e.range] += row[e.source];
                }
            }
            counts = next;
        }
        counts
    }
}

pub fn validate_bratteli(b: &BratteliPrefix) -> Vec<BratteliViolation> {
    let mut out = Vec::new();
    if b.level_vertices.is_empty() {
        out.push(BratteliViolation::NoLevels);
        return out;
    }
    if b.level_vertices[0].len() != 1 {
        out.push(BratteliViolation::BaseNotSingle { count: b.level_vertices[0].len() });
    }
    if b.level_vertices.len() != b.edges.len() + 1 {
        out.push(BratteliViolation::LevelCount {
            vertex_levels: b.level_vertices.len(),
            edge_levels: b.edges.len(),
        });
        return out;
    }
    for n in 1..=b.depth() {
        let mut has_out = vec![false; b.vertex_count(n - 1)];
        let mut has_in = vec![false; b.vertex_count(n)];
        for (i, e) in b.edges[n - 1].iter().enumerate() {
            if e.source >= has_out.len() || e.range >= has_in.len() {
                out.push(BratteliViolation::EdgeOutOfRange { level: n, edge: i });
                continue;
            }
            has_out[e.source] = true;
            has_in[e.range] = true;
        }
        for (v, ok) in has_out.into_iter().enumerate() {
            if !ok {
                out.push(BratteliViolation::NoOutgoing { level: n - 1, vertex: b.level_vertices[n - 1][v].clone() });
            }
        }
        for (v, ok) in has_in.into_iter().enumerate() {
            if !ok {
                out.push(BratteliViolation::NoIncoming { level: n, vertex: b.level_vertices[n][v].clone() });
            }
        }
    }
    out
}

pub fn validate_ordered(b: &OrderedBratteliPrefix) -> Vec<BratteliViolation> {
    let mut out = validate_bratteli(&b.diagram);
    if !out.is_empty() {
        return out;
    }
    if b.order.len() != b.diagram.depth() {
        out.push(BratteliViolation::OrderShape { level: b.order.len().min(b.diagram.depth()) + 1 });
        return out;
    }
    for n in 1..=b.diagram.depth() {
        if b.order[n - 1].len() != b.diagram.edges[n - 1].len() {
            out.push(BratteliViolation::OrderShape { level: n });
            continue;
        }
        for v in 0..b.diagram.vertex_count(n) {
            let mut idx: Vec<usize> = b.diagram.incoming(n, v).map(|e| b.order[n - 1][e]).collect();
            idx.sort_unstable();
            if idx.iter().enumerate().any(|(k, &o)| o != k + 1) {
                out.push(BratteliViolation::NotATotalOrder { level: n, vertex: b.diagram.level_vertices[n][v].clone() });
            }
        }
    }
    out
}

/// Edge indices `(e_1, …, e_N)` with `r(e_i) = s(e_{i+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PathPrefix {
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VershikOutcome {
    Successor { path: PathPrefix },
    /// Every edge is maximal; nothing beyond depth `N` decides the image.
    AtMaximum,
    /// Wrapping was requested: the minimal path with the same top vertex.
    Wrapped { path: PathPrefix },
}

impl OrderedBratteliPrefix {
    pub fn depth(&self) -> usize {
        self.diagram.depth()
    }

    pub fn edge(&self, n: usize, e: usize) -> BratteliEdge {
        self.diagram.edges[n - 1][e]
    }

    pub fn order_of(&self, n: usize, e: usize) -> usize {
        self.order[n - 1][e]
    }

    fn in_degree(&self, n: usize, v: usize) -> usize {
        self.diagram.incoming(n, v).count()
    }

    pub fn is_maximal(&self, n: usize, e: usize) -> bool {
        self.order_of(n, e) == self.in_degree(n, self.edge(n, e).range)
    }

    pub fn is_minimal(&self, n: usize, e: usize) -> bool {
        self.order_of(n, e) == 1
    }

    /// The edge of `r^{-1}(v)` at 1-based position `k`.
    pub fn incoming_at(&self, n: usize, v: usize, k: usize) -> Option<usize> {
        self.diagram.incoming(n, v).find(|&e| self.order_of(n, e) == k)
    }

    fn extremal_into(&self, n: usize, v: usize, max: bool) -> usize {
        let k = if max { self.in_degree(n, v) } else { 1 };
        self.incoming_at(n, v, k).expect("validated diagrams number every incoming set")
    }

    /// The path from `V_0` to `v ∈ V_n` using only minimal (or maximal) edges.
    pub fn extremal_path_to(&self, n: usize, v: usize, max: bool) -> PathPrefix {
        let mut edges = vec![0; n];
        let mut cur = v;
        for k in (1..=n).rev() {
            let e = self.extremal_into(k, cur, max);
            edges[k - 1] = e;
            cur = self.edge(k, e).source;
        }
        PathPrefix { edges }
    }

    pub fn check_path(&self, p: &PathPrefix) -> Result<(), BratteliError> {
        if p.edges.len() != self.depth() {
            return Err(BratteliError::InvalidPath(format!(
                "path has {} edges, diagram depth is {}",
                p.edges.len(),
                self.depth()
            )));
        }
        for (k, &e) in p.edges.iter().enumerate() {
            if e >= self.diagram.edges[k].len() {
                return Err(BratteliError::InvalidPath(format!("E_{} has no edge {e}", k + 1)));
            }
            if k > 0 && self.edge(k, p.edges[k - 1]).range != self.edge(k + 1, e).source {
                return Err(BratteliError::InvalidPath(format!("edges {} and {} do not meet", k, k + 1)));
            }
        }
        Ok(())
    }

    /// All depth-`N` paths, grouped by top vertex and sorted within each
    /// group by the order of the first differing edge from the top.
    pub fn all_paths(&self) -> Vec<PathPrefix> {
        let mut partial: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
        for n in 1..=self.depth() {
            let mut next = Vec::new();
            for (v, p) in &partial {
                for (e, edge) in self.diagram.edges[n - 1].iter().enumerate() {
                    if edge.source == *v {
                        let mut q = p.clone();
                        q.push(e);
                        next.push((edge.range, q));
                    }
                }
            }
            partial = next;
        }
        let mut paths: Vec<PathPrefix> = partial.into_iter().map(|(_, edges)| PathPrefix { edges }).collect();
        paths.sort_by(|a, b| self.compare_paths(a, b).unwrap_or_else(|| self.top(a).cmp(&self.top(b))));
        paths
    }

    fn top(&self, p: &PathPrefix) -> usize {
        match p.edges.last() {
            Some(&e) => self.edge(self.depth(), e).range,
            None => 0,
        }
    }

    /// Lexicographic comparison: the largest index where the paths differ
    /// decides. `None` for paths ending at different vertices.
    pub fn compare_paths(&self, a: &PathPrefix, b: &PathPrefix) -> Option<Ordering> {
        if self.top(a) != self.top(b) {
            return None;
        }
        for k in (0..a.edges.len()).rev() {
            if a.edges[k] != b.edges[k] {
                return Some(self.order_of(k + 1, a.edges[k]).cmp(&self.order_of(k + 1, b.edges[k])));
            }
        }
        Some(Ordering::Equal)
    }
}

pub fn vershik_step(b: &OrderedBratteliPrefix, p: &PathPrefix, wrap: bool) -> Result<VershikOutcome, BratteliError> {
    b.check_path(p)?;
    let Some(k) = (1..=b.depth()).find(|&n| !b.is_maximal(n, p.edges[n - 1])) else {
        return Ok(if wrap {
            VershikOutcome::Wrapped { path: b.extremal_path_to(b.depth(), b.top(p), false) }
        } else {
            VershikOutcome::AtMaximum
        });
    };
    let e = p.edges[k - 1];
    let v = b.edge(k, e).range;
    let f = b.incoming_at(k, v, b.order_of(k, e) + 1).expect("non-maximal edges have a successor");
    let mut edges = b.extremal_path_to(k - 1, b.edge(k, f).source, false).edges;
    edges.push(f);
    edges.extend_from_slice(&p.edges[k..]);
    Ok(VershikOutcome::Successor { path: PathPrefix { edges } })
}

/// Orbit of `start` under [`vershik_step`] without wrapping, ending at the
/// first path whose step is `AtMaximum`.
pub fn vershik_orbit(b: &OrderedBratteliPrefix, start: &PathPrefix) -> Result<Vec<PathPrefix>, BratteliError> {
    let mut orbit = vec![start.clone()];
    loop {
        match vershik_step(b, orbit.last().expect("non-empty"), false)? {
            VershikOutcome::Successor { path } => orbit.push(path),
            _ => return Ok(orbit),
        }
    }
}

fn check_levels(depth: usize, m: usize, n: usize) -> Result<(), BratteliError> {
    if m < n && n <= depth {
        Ok(())
    } else {
        Err(BratteliError::BadLevels { m, n, depth })
    }
}

/// Replaces `E_{m+1}, …, E_n` by the set of paths from `V_m` to `V_n`.
pub fn telescope_bratteli(b: &BratteliPrefix, m: usize, n: usize) -> Result<BratteliPrefix, BratteliError> {
    check_levels(b.depth(), m, n)?;
    let ordered = OrderedBratteliPrefix {
        order: b.edges.iter().map(|l| vec![0; l.len()]).collect(),
        diagram: b.clone(),
    };
    Ok(telescope_paths(&ordered, m, n).0)
}

/// As [`telescope_bratteli`], ordering composite edges lexicographically.
pub fn telescope_ordered(
    b: &OrderedBratteliPrefix,
    m: usize,
    n: usize,
) -> Result<OrderedBratteliPrefix, BratteliError> {
    check_levels(b.depth(), m, n)?;
    let (diagram, order) = telescope_paths(b, m, n);
    Ok(OrderedBratteliPrefix { diagram, order })
}

fn telescope_paths(b: &OrderedBratteliPrefix, m: usize, n: usize) -> (BratteliPrefix, Vec<Vec<usize>>) {
    let d = &b.diagram;
    // Paths from V_m, carried as (source in V_m, current vertex, edges).
    let mut partial: Vec<(usize, usize, Vec<usize>)> = (0..d.vertex_count(m)).map(|u| (u, u, Vec::new())).collect();
    for k in m + 1..=n {
        let mut next = Vec::new();
        for (u, v, p) in &partial {
            for (e, edge) in d.edges[k - 1].iter().enumerate() {
                if edge.source == *v {
                    let mut q = p.clone();
                    q.push(e);
                    next.push((*u, edge.range, q));
                }
            }
        }
        partial = next;
    }
    let key = |p: &[usize]| -> Vec<usize> { p.iter().enumerate().rev().map(|(j, &e)| b.order_of(m + 1 + j, e)).collect() };
    let mut composite: Vec<BratteliEdge> = Vec::with_capacity(partial.len());
    let mut order = vec![0; partial.len()];
    for v in 0..d.vertex_count(n) {
        let mut into: Vec<usize> = (0..partial.len()).filter(|&i| partial[i].1 == v).collect();
        into.sort_by_key(|&i| key(&partial[i].2));
        for (k, &i) in into.iter().enumerate() {
            order[i] = k + 1;
        }
    }
    for (u, v, _) in &partial {
        composite.push(BratteliEdge { source: *u, range: *v });
    }
    let mut level_vertices = d.level_vertices[..=m].to_vec();
    level_vertices.extend_from_slice(&d.level_vertices[n..]);
    let mut edges = d.edges[..m].to_vec();
    edges.push(composite);
    edges.extend_from_slice(&d.edges[n..]);
    let mut orders = b.order[..m].to_vec();
    orders.push(order);
    orders.extend_from_slice(&b.order[n..]);
    (BratteliPrefix { level_vertices, edges }, orders)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    /// Distinct depth-`(N-1)` truncations of the all-maximal depth-`N` paths.
    pub max_paths: Vec<PathPrefix>,
    /// Likewise for all-minimal paths.
    pub min_paths: Vec<PathPrefix>,
    pub simple_on_prefix: bool,
    /// Retained levels of the telescoping that witnesses simplicity.
    pub simplicity_witness: Vec<usize>,
    pub properly_ordered_on_prefix: bool,
    pub scope: &'static str,
}

pub fn extremal_paths(b: &OrderedBratteliPrefix) -> ExtremalReport {
    let depth = b.depth();
    let truncations = |max: bool| -> Vec<PathPrefix> {
        let mut out: Vec<PathPrefix> = (0..b.diagram.vertex_count(depth))
            .map(|v| {
                let mut p = b.extremal_path_to(depth, v, max);
                p.edges.truncate(depth.saturating_sub(1));
                p
            })
            .collect();
        out.sort();
        out.dedup();
        out
    };
    let max_paths = truncations(true);
    let min_paths = truncations(false);
    let (simple_on_prefix, simplicity_witness) = simplicity_witness(&b.diagram);
    ExtremalReport {
        properly_ordered_on_prefix: max_paths.len() == 1 && min_paths.len() == 1 && simple_on_prefix,
        max_paths,
        min_paths,
        simple_on_prefix,
        simplicity_witness,
        scope: PREFIX_SCOPE,
    }
}

/// Greedily telescopes to levels `0 = n_0 < n_1 < …` where every vertex of
/// `V_{n_k}` reaches every vertex of `V_{n_{k+1}}`, until the retained levels
/// pass `⌊N/2⌋`.
fn simplicity_witness(b: &BratteliPrefix) -> (bool, Vec<usize>) {
    let depth = b.depth();
    let mut chain = vec![0];
    let mut cur = 0;
    while cur <= depth / 2 && cur < depth {
        let next = (cur + 1..=depth).find(|&j| b.path_counts(cur, j).iter().all(|row| row.iter().all(|&c| c > 0)));
        match next {
            Some(j) => {
                chain.push(j);
                cur = j;
            }
            None => return (false, chain),
        }
    }
    (true, chain)
}

/// `V_n` is the circuit set of level `n`; each letter `a(n,i,j)` gives an edge
/// `c_{n-1,a} → c_{n,i}` numbered `j`.
pub fn kr_to_bratteli(sc: &StructuredCovering) -> Result<OrderedBratteliPrefix, BratteliError> {
    let report = validate_structured(sc);
    if !report.kr_valid {
        return Err(BratteliError::Structure(StructureError::NotKr));
    }
    let table = sc.word_table()?;
    Ok(word_table_to_bratteli(&table))
}

pub fn word_table_to_bratteli(table: &WordTable) -> OrderedBratteliPrefix {
    let mut level_vertices = vec![vec!["c0,1".to_string()]];
    let mut edges = Vec::with_capacity(table.depth());
    let mut order = Vec::with_capacity(table.depth());
    for (n0, level) in table.words.iter().enumerate() {
        let n = n0 + 1;
        level_vertices.push((1..=level.len()).map(|i| format!("c{n},{i}")).collect());
        let mut es = Vec::new();
        let mut os = Vec::new();
        for (i, w) in level.iter().enumerate() {
            for (j, &a) in w.iter().enumerate() {
                es.push(BratteliEdge { source: a - 1, range: i });
                os.push(j + 1);
            }
        }
        edges.push(es);
        order.push(os);
    }
    OrderedBratteliPrefix { diagram: BratteliPrefix { level_vertices, edges }, order }
}

/// Reads the word of each vertex off its ordered incoming edges.
pub fn bratteli_word_table(b: &OrderedBratteliPrefix) -> WordTable {
    let words = (1..=b.depth())
        .map(|n| {
            (0..b.diagram.vertex_count(n))
                .map(|v| {
                    let mut into: Vec<usize> = b.diagram.incoming(n, v).collect();
                    into.sort_by_key(|&e| b.order_of(n, e));
                    into.into_iter().map(|e| b.edge(n, e).source + 1).collect()
                })
                .collect()
        })
        .collect();
    WordTable { words }
}

/// Builds the KR tower whose circuits are the vertices of `b`. Every level's
/// minimal edges must leave one common vertex, which is what makes the
/// covers positive-directional.
pub fn bratteli_to_kr(b: &OrderedBratteliPrefix) -> Result<StructuredCovering, BratteliError> {
    let violations = validate_ordered(b);
    if let Some(v) = violations.first() {
        return Err(BratteliError::Invalid(v.to_string()));
    }
    for n in 1..=b.depth() {
        let mut sources: Vec<usize> = (0..b.diagram.vertex_count(n))
            .map(|v| b.edge(n, b.extremal_into(n, v, false)).source)
            .collect();
        sources.sort_unstable();
        sources.dedup();
        if sources.len() > 1 {
            return Err(BratteliError::NotProperlyOrdered(format!(
                "minimal edges into V_{n} leave {} different vertices",
                sources.len()
            )));
        }
    }
    Ok(StructuredCovering::kr_from_table(&bratteli_word_table(b), Mode::Kr)?)
}
