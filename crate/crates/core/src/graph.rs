//! Finite directed graphs without multi-edges, vertex sequences on them, and
//! graph homomorphisms together with the cover predicates.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use petgraph::graph::DiGraph;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex map is not total: `{0}` has no image")]
    PartialMap(String),
    #[error("vertex map has {found} entries, source graph has {expected} vertices")]
    MapLength { expected: usize, found: usize },
    #[error("homomorphisms do not chain: inner target differs from outer source")]
    DomainMismatch,
    #[error("walks do not chain: `{left}` != `{right}`")]
    EndpointMismatch { left: String, right: String },
    #[error("power is only defined for cycles")]
    NotACycle,
    #[error("vertex sequence is empty")]
    EmptySequence,
    #[error("not a graph homomorphism: {} edge image(s) missing", .0.len())]
    NotAHomomorphism(Vec<(String, String)>),
}

/// One reason a declared graph fails the surjective-relation invariants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphViolation {
    Empty,
    DuplicateVertex { vertex: String },
    DuplicateEdge { from: String, to: String },
    UnknownEndpoint { from: String, to: String, vertex: String },
    NoOutgoingEdge { vertex: String },
    NoIncomingEdge { vertex: String },
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::Empty => write!(f, "graph has no vertices"),
            GraphViolation::DuplicateVertex { vertex } => {
                write!(f, "vertex `{vertex}` declared more than once")
            }
            GraphViolation::DuplicateEdge { from, to } => {
                write!(f, "edge ({from}, {to}) declared more than once")
            }
            GraphViolation::UnknownEndpoint { from, to, vertex } => {
                write!(f, "edge ({from}, {to}) uses undeclared vertex `{vertex}`")
            }
            GraphViolation::NoOutgoingEdge { vertex } => {
                write!(f, "vertex `{vertex}` has no outgoing edge")
            }
            GraphViolation::NoIncomingEdge { vertex } => {
                write!(f, "vertex `{vertex}` has no incoming edge")
            }
        }
    }
}

/// A finite directed graph `(V, E)` with `E` a set of ordered pairs.
///
/// Construction is permissive: duplicate declarations and edges with
/// undeclared endpoints are recorded rather than rejected, so that
/// [`validate_graph`] can report every problem at once. Only well-formed
/// edges take part in the adjacency structure.
#[derive(Clone, Debug)]
pub struct DirectedGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeSet<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    duplicate_vertices: Vec<String>,
    duplicate_edges: Vec<(String, String)>,
    dangling_edges: Vec<(String, String)>,
}

impl DirectedGraph {
    pub fn new<V, S, E, A, B>(vertices: V, edges: E) -> Self
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        let mut duplicate_vertices = Vec::new();
        for v in vertices {
            let v = v.into();
            if index.contains_key(&v) {
                duplicate_vertices.push(v);
            } else {
                index.insert(v.clone(), names.len());
                names.push(v);
            }
        }
        let mut edge_set = BTreeSet::new();
        let mut duplicate_edges = Vec::new();
        let mut dangling_edges = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            match (index.get(&a), index.get(&b)) {
                (Some(&u), Some(&v)) => {
                    if !edge_set.insert((u, v)) {
                        duplicate_edges.push((a, b));
                    }
                }
                _ => dangling_edges.push((a, b)),
            }
        }
        Self::assemble(names, index, edge_set, duplicate_vertices, duplicate_edges, dangling_edges)
    }

    /// Builds a graph from index data; every endpoint must be `< names.len()`.
    pub(crate) fn from_indices(names: Vec<String>, edges: BTreeSet<(usize, usize)>) -> Self {
        let index = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        Self::assemble(names, index, edges, Vec::new(), Vec::new(), Vec::new())
    }

    fn assemble(
        names: Vec<String>,
        index: HashMap<String, usize>,
        edges: BTreeSet<(usize, usize)>,
        duplicate_vertices: Vec<String>,
        duplicate_edges: Vec<(String, String)>,
        dangling_edges: Vec<(String, String)>,
    ) -> Self {
        let mut succ = vec![Vec::new(); names.len()];
        let mut pred = vec![Vec::new(); names.len()];
        for &(u, v) in &edges {
            succ[u].push(v);
            pred[v].push(u);
        }
        DirectedGraph {
            names,
            index,
            edges,
            succ,
            pred,
            duplicate_vertices,
            duplicate_edges,
            dangling_edges,
        }
    }

    /// The singleton loop graph `({v}, {(v, v)})`.
    pub fn singleton(label: impl Into<String>) -> Self {
        let label = label.into();
        DirectedGraph::new([label.clone()], [(label.clone(), label)])
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub(crate) fn require(&self, label: &str) -> Result<usize, GraphError> {
        self.index_of(label)
            .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn has_edge_labels(&self, u: &str, v: &str) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(u), Some(v)) => self.has_edge(u, v),
            _ => false,
        }
    }

    /// Edges as index pairs, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub(crate) fn edge_set(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn edge_labels(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(move |&(u, v)| (self.names[u].as_str(), self.names[v].as_str()))
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.succ[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.pred[v].len()
    }

    /// Relabels vertices `"0", "1", …` in breadth-first order from the
    /// lexicographically least vertex, visiting successors in label order.
    /// Vertices not reached are appended the same way from the least
    /// unvisited label. The result depends on the input labels; use
    /// [`is_isomorphic`] for a label-free comparison.
    pub fn bfs_relabeled(&self) -> DirectedGraph {
        let mut by_label: Vec<usize> = (0..self.names.len()).collect();
        by_label.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
        let mut order = vec![usize::MAX; self.names.len()];
        let mut next = 0;
        for &start in &by_label {
            if order[start] != usize::MAX {
                continue;
            }
            order[start] = next;
            next += 1;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let mut out = self.succ[u].clone();
                out.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
                for v in out {
                    if order[v] == usize::MAX {
                        order[v] = next;
                        next += 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        let names = (0..self.names.len()).map(|o| o.to_string()).collect();
        let edges = self.edges.iter().map(|&(u, v)| (order[u], order[v])).collect();
        DirectedGraph::from_indices(names, edges)
    }

    fn to_petgraph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::with_capacity(self.names.len(), self.edges.len());
        let nodes: Vec<_> = (0..self.names.len()).map(|_| g.add_node(())).collect();
        for &(u, v) in &self.edges {
            g.add_edge(nodes[u], nodes[v], ());
        }
        g
    }
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        if self.names.len() != other.names.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let mine: BTreeSet<&str> = self.names.iter().map(String::as_str).collect();
        if !self.names.iter().all(|n| other.index.contains_key(n)) || mine.len() != other.names.len()
        {
            return false;
        }
        self.edge_labels().all(|(u, v)| other.has_edge_labels(u, v))
    }
}

impl Eq for DirectedGraph {}

/// Label-free graph isomorphism.
pub fn is_isomorphic(a: &DirectedGraph, b: &DirectedGraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && petgraph::algo::is_isomorphic(&a.to_petgraph(), &b.to_petgraph())
}

/// Reports every violation of the surjective-relation invariants.
pub fn validate_graph(g: &DirectedGraph) -> Vec<GraphViolation> {
    let mut out = Vec::new();
    if g.names.is_empty() {
        out.push(GraphViolation::Empty);
    }
    for v in &g.duplicate_vertices {
        out.push(GraphViolation::DuplicateVertex { vertex: v.clone() });
    }
    for (a, b) in &g.duplicate_edges {
        out.push(GraphViolation::DuplicateEdge { from: a.clone(), to: b.clone() });
    }
    for (a, b) in &g.dangling_edges {
        let vertex = if g.index.contains_key(a) { b } else { a };
        out.push(GraphViolation::UnknownEndpoint {
            from: a.clone(),
            to: b.clone(),
            vertex: vertex.clone(),
        });
    }
    for (v, name) in g.names.iter().enumerate() {
        if g.succ[v].is_empty() {
            out.push(GraphViolation::NoOutgoingEdge { vertex: name.clone() });
        }
        if g.pred[v].is_empty() {
            out.push(GraphViolation::NoIncomingEdge { vertex: name.clone() });
        }
    }
    out
}

/// A vertex map between two graphs. The homomorphism property is not
/// enforced at construction; [`hom_profile`] reports it.
#[derive(Clone, Debug)]
pub struct GraphHom {
    source: Arc<DirectedGraph>,
    target: Arc<DirectedGraph>,
    map: Vec<usize>,
}

impl GraphHom {
    pub fn new(
        source: Arc<DirectedGraph>,
        target: Arc<DirectedGraph>,
        map: Vec<usize>,
    ) -> Result<Self, GraphError> {
        if map.len() != source.vertex_count() {
            return Err(GraphError::MapLength { expected: source.vertex_count(), found: map.len() });
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= target.vertex_count()) {
            return Err(GraphError::UnknownVertex(format!("#{bad}")));
        }
        Ok(GraphHom { source, target, map })
    }

    /// Builds a map from `(source label, target label)` pairs; every source
    /// vertex needs exactly one entry.
    pub fn from_labels<I, A, B>(
        source: Arc<DirectedGraph>,
        target: Arc<DirectedGraph>,
        pairs: I,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut map = vec![usize::MAX; source.vertex_count()];
        for (a, b) in pairs {
            let u = source.require(a.as_ref())?;
            map[u] = target.require(b.as_ref())?;
        }
        if let Some(u) = map.iter().position(|&t| t == usize::MAX) {
            return Err(GraphError::PartialMap(source.name(u).to_string()));
        }
        Ok(GraphHom { source, target, map })
    }

    pub fn identity(g: Arc<DirectedGraph>) -> Self {
        let map = (0..g.vertex_count()).collect();
        GraphHom { source: g.clone(), target: g, map }
    }

    pub fn constant(source: Arc<DirectedGraph>, target: Arc<DirectedGraph>, to: usize) -> Self {
        let map = vec![to; source.vertex_count()];
        GraphHom { source, target, map }
    }

    pub fn source(&self) -> &Arc<DirectedGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DirectedGraph> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn image_of(&self, label: &str) -> Option<&str> {
        self.source.index_of(label).map(|v| self.target.name(self.map[v]))
    }

    /// `(source label, target label)` pairs in source vertex order.
    pub fn label_pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.map
            .iter()
            .enumerate()
            .map(move |(u, &t)| (self.source.name(u), self.target.name(t)))
    }
}

/// The predicate flags of a vertex map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomProfile {
    pub is_hom: bool,
    pub is_edge_surjective: bool,
    pub is_positive_directional: bool,
    pub is_bidirectional: bool,
    pub is_cover: bool,
    /// Source edges whose image is not a target edge.
    pub missing_images: Vec<(String, String)>,
}

pub fn hom_profile(h: &GraphHom) -> HomProfile {
    let (src, dst) = (&*h.source, &*h.target);
    let mut missing_images = Vec::new();
    let mut image = BTreeSet::new();
    for (u, v) in src.edges() {
        let e = (h.map[u], h.map[v]);
        if !dst.has_edge(e.0, e.1) {
            missing_images.push((src.name(u).to_string(), src.name(v).to_string()));
        }
        image.insert(e);
    }
    let is_hom = missing_images.is_empty();
    let is_edge_surjective = is_hom && image == *dst.edge_set();
    let uniform = |lists: &Vec<Vec<usize>>| {
        lists.iter().all(|vs| vs.windows(2).all(|w| h.map[w[0]] == h.map[w[1]]))
    };
    let forward = uniform(&src.succ);
    let backward = uniform(&src.pred);
    let is_positive_directional = is_hom && forward;
    HomProfile {
        is_hom,
        is_edge_surjective,
        is_positive_directional,
        is_bidirectional: is_positive_directional && backward,
        is_cover: is_edge_surjective && is_positive_directional,
        missing_images,
    }
}

/// Fails with [`GraphError::NotAHomomorphism`] when some edge image is missing.
pub fn require_hom(h: &GraphHom) -> Result<HomProfile, GraphError> {
    let p = hom_profile(h);
    if p.is_hom {
        Ok(p)
    } else {
        Err(GraphError::NotAHomomorphism(p.missing_images))
    }
}

/// `outer ∘ inner`, defined when `inner.target == outer.source`.
pub fn compose_homs(outer: &GraphHom, inner: &GraphHom) -> Result<GraphHom, GraphError> {
    if !Arc::ptr_eq(&inner.target, &outer.source) && *inner.target != *outer.source {
        return Err(GraphError::DomainMismatch);
    }
    // Labels may be ordered differently in two equal graphs.
    let map = inner
        .map
        .iter()
        .map(|&m| {
            let mid = if Arc::ptr_eq(&inner.target, &outer.source) {
                m
            } else {
                outer.source.index[inner.target.name(m)]
            };
            outer.map[mid]
        })
        .collect();
    Ok(GraphHom { source: inner.source.clone(), target: outer.target.clone(), map })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    Invalid,
    Walk,
    Path,
    Cycle,
    Circuit,
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SequenceKind::Invalid => "invalid",
            SequenceKind::Walk => "walk",
            SequenceKind::Path => "path",
            SequenceKind::Cycle => "cycle",
            SequenceKind::Circuit => "circuit",
        };
        f.write_str(s)
    }
}

/// A classified vertex sequence `(v_0, …, v_l)` of length `l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSequence {
    vertices: Vec<String>,
    kind: SequenceKind,
}

impl VertexSequence {
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    /// Number of steps.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_walk(&self) -> bool {
        self.kind != SequenceKind::Invalid
    }

    pub fn is_cycle(&self) -> bool {
        matches!(self.kind, SequenceKind::Cycle | SequenceKind::Circuit)
    }

    pub fn first(&self) -> &str {
        &self.vertices[0]
    }

    pub fn last(&self) -> &str {
        self.vertices.last().expect("non-empty")
    }
}

/// Kind of a sequence already known to be a walk (or not).
pub(crate) fn kind_of<T: Eq + std::hash::Hash>(vertices: &[T], is_walk: bool) -> SequenceKind {
    if !is_walk {
        return SequenceKind::Invalid;
    }
    let l = vertices.len() - 1;
    let distinct = |xs: &[T]| {
        let mut seen = std::collections::HashSet::with_capacity(xs.len());
        xs.iter().all(|x| seen.insert(x))
    };
    if l >= 1 && vertices[0] == vertices[l] {
        if distinct(&vertices[..l]) {
            SequenceKind::Circuit
        } else {
            SequenceKind::Cycle
        }
    } else if distinct(vertices) {
        SequenceKind::Path
    } else {
        SequenceKind::Walk
    }
}

pub fn classify_sequence<S: AsRef<str>>(
    g: &DirectedGraph,
    seq: &[S],
) -> Result<VertexSequence, GraphError> {
    if seq.is_empty() {
        return Err(GraphError::EmptySequence);
    }
    let idx = seq
        .iter()
        .map(|s| g.require(s.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    let walk = idx.windows(2).all(|w| g.has_edge(w[0], w[1]));
    Ok(VertexSequence {
        vertices: seq.iter().map(|s| s.as_ref().to_string()).collect(),
        kind: kind_of(&idx, walk),
    })
}

/// `w1 w2`: the last vertex of `w1` must be the first vertex of `w2`.
pub fn concat_walks(w1: &VertexSequence, w2: &VertexSequence) -> Result<VertexSequence, GraphError> {
    if w1.last() != w2.first() {
        return Err(GraphError::EndpointMismatch {
            left: w1.last().to_string(),
            right: w2.first().to_string(),
        });
    }
    let mut vertices = w1.vertices.clone();
    vertices.extend(w2.vertices[1..].iter().cloned());
    let kind = kind_of(&vertices, w1.is_walk() && w2.is_walk());
    Ok(VertexSequence { vertices, kind })
}

/// `c^n`; `c^0` is the one-vertex walk at the base point of `c`.
pub fn power(c: &VertexSequence, n: usize) -> Result<VertexSequence, GraphError> {
    if !c.is_cycle() {
        return Err(GraphError::NotACycle);
    }
    let mut vertices = vec![c.vertices[0].clone()];
    for _ in 0..n {
        vertices.extend(c.vertices[1..].iter().cloned());
    }
    let kind = kind_of(&vertices, true);
    Ok(VertexSequence { vertices, kind })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> DirectedGraph {
        DirectedGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    }

    #[test]
    fn singleton_is_valid() {
        assert!(validate_graph(&DirectedGraph::singleton("v0")).is_empty());
    }

    #[test]
    fn one_way_edge_reports_both_ends() {
        let g = DirectedGraph::new(["a", "b"], [("a", "b")]);
        let v = validate_graph(&g);
        assert_eq!(
            v,
            vec![
                GraphViolation::NoIncomingEdge { vertex: "a".into() },
                GraphViolation::NoOutgoingEdge { vertex: "b".into() },
            ]
        );
    }

    #[test]
    fn three_cycle_is_valid() {
        assert!(validate_graph(&cycle3()).is_empty());
    }

    #[test]
    fn malformed_declarations_are_all_reported() {
        let g = DirectedGraph::new(["a", "a"], [("a", "a"), ("a", "a"), ("a", "z")]);
        let v = validate_graph(&g);
        assert!(v.contains(&GraphViolation::DuplicateVertex { vertex: "a".into() }));
        assert!(v.contains(&GraphViolation::DuplicateEdge { from: "a".into(), to: "a".into() }));
        assert!(v.contains(&GraphViolation::UnknownEndpoint {
            from: "a".into(),
            to: "z".into(),
            vertex: "z".into()
        }));
    }

    #[test]
    fn identity_on_singleton_has_every_flag() {
        let g = Arc::new(DirectedGraph::singleton("v0"));
        let p = hom_profile(&GraphHom::identity(g));
        assert!(p.is_hom && p.is_edge_surjective && p.is_positive_directional);
        assert!(p.is_bidirectional && p.is_cover);
    }

    #[test]
    fn two_cycle_collapses_onto_loop() {
        let two = Arc::new(DirectedGraph::new(["a", "b"], [("a", "b"), ("b", "a")]));
        let one = Arc::new(DirectedGraph::singleton("v0"));
        let p = hom_profile(&GraphHom::constant(two, one, 0));
        assert!(p.is_cover && p.is_bidirectional);
    }

    #[test]
    fn missing_edge_image_is_reported_with_other_flags() {
        let g = Arc::new(cycle3());
        let h = GraphHom::from_labels(g.clone(), g, [("a", "a"), ("b", "a"), ("c", "b")]).unwrap();
        let p = hom_profile(&h);
        assert!(!p.is_hom && !p.is_cover);
        assert!(!p.missing_images.is_empty());
        assert!(matches!(require_hom(&h), Err(GraphError::NotAHomomorphism(_))));
    }

    #[test]
    fn composition_requires_chaining() {
        let a = Arc::new(cycle3());
        let b = Arc::new(DirectedGraph::singleton("v0"));
        let h = GraphHom::constant(a.clone(), b.clone(), 0);
        assert_eq!(compose_homs(&h, &h).unwrap_err(), GraphError::DomainMismatch);
        let id = GraphHom::identity(a.clone());
        let c = compose_homs(&h, &id).unwrap();
        assert_eq!(c.map(), h.map());
        let id2 = compose_homs(&id, &id).unwrap();
        assert_eq!(id2.map(), &[0, 1, 2]);
    }

    #[test]
    fn compose_across_equal_but_distinct_graphs() {
        let a = Arc::new(DirectedGraph::new(["x", "y"], [("x", "y"), ("y", "x")]));
        let b1 = Arc::new(DirectedGraph::new(["p", "q"], [("p", "q"), ("q", "p")]));
        let b2 = Arc::new(DirectedGraph::new(["q", "p"], [("q", "p"), ("p", "q")]));
        let inner = GraphHom::from_labels(a, b1, [("x", "p"), ("y", "q")]).unwrap();
        let outer = GraphHom::from_labels(b2.clone(), b2, [("q", "p"), ("p", "q")]).unwrap();
        let c = compose_homs(&outer, &inner).unwrap();
        let got: Vec<_> = c.label_pairs().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        assert_eq!(got, vec![("x".into(), "q".into()), ("y".into(), "p".into())]);
    }

    #[test]
    fn classify_examples() {
        let s = DirectedGraph::singleton("v0");
        let c = classify_sequence(&s, &["v0", "v0"]).unwrap();
        assert_eq!((c.kind(), c.length()), (SequenceKind::Circuit, 1));
        let g = cycle3();
        let c = classify_sequence(&g, &["a", "b", "c", "a"]).unwrap();
        assert_eq!((c.kind(), c.length()), (SequenceKind::Circuit, 3));
        let w = classify_sequence(&g, &["a", "b", "c", "a", "b"]).unwrap();
        assert_eq!(w.kind(), SequenceKind::Walk);
        let p = classify_sequence(&g, &["a", "b"]).unwrap();
        assert_eq!(p.kind(), SequenceKind::Path);
        let bad = classify_sequence(&g, &["a", "c"]).unwrap();
        assert_eq!(bad.kind(), SequenceKind::Invalid);
        assert_eq!(
            classify_sequence(&g, &["a", "q"]).unwrap_err(),
            GraphError::UnknownVertex("q".into())
        );
        assert_eq!(classify_sequence::<&str>(&g, &[]).unwrap_err(), GraphError::EmptySequence);
    }

    #[test]
    fn concat_and_power() {
        let g = DirectedGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")]);
        let ab = classify_sequence(&g, &["a", "b"]).unwrap();
        let bc = classify_sequence(&g, &["b", "c"]).unwrap();
        let abc = concat_walks(&ab, &bc).unwrap();
        assert_eq!(abc.vertices(), &["a", "b", "c"]);
        assert_eq!(abc.length(), 2);
        assert!(matches!(concat_walks(&bc, &bc), Err(GraphError::EndpointMismatch { .. })));

        let cyc = classify_sequence(&g, &["a", "b", "c", "a"]).unwrap();
        let twice = concat_walks(&cyc, &cyc).unwrap();
        assert_eq!((twice.kind(), twice.length()), (SequenceKind::Cycle, 6));
        let reclassified = classify_sequence(&g, twice.vertices()).unwrap();
        assert_eq!(reclassified, twice);

        let s = DirectedGraph::singleton("v0");
        let lp = classify_sequence(&s, &["v0", "v0"]).unwrap();
        let cube = power(&lp, 3).unwrap();
        assert_eq!(cube.vertices(), &["v0", "v0", "v0", "v0"]);
        assert_eq!(cube.length(), 3);
        let zero = power(&cyc, 0).unwrap();
        assert_eq!(zero.length(), 0);
        // w c^0 w' = w w'
        let ca = classify_sequence(&g, &["c", "a"]).unwrap();
        let with_empty = concat_walks(&concat_walks(&abc, &ca).unwrap(), &zero).unwrap();
        assert_eq!(with_empty, concat_walks(&abc, &ca).unwrap());
        assert_eq!(power(&ab, 2).unwrap_err(), GraphError::NotACycle);
    }

    #[test]
    fn isomorphism_ignores_labels() {
        let a = cycle3();
        let b = DirectedGraph::new(["x", "y", "z"], [("y", "x"), ("x", "z"), ("z", "y")]);
        assert!(is_isomorphic(&a, &b));
        assert_ne!(a, b);
        let c = DirectedGraph::new(["x", "y", "z"], [("x", "y"), ("y", "x"), ("z", "z")]);
        assert!(!is_isomorphic(&a, &c));
        assert_eq!(a.bfs_relabeled(), b.bfs_relabeled());
    }
}
