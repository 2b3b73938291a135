#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use gcover::bratteli::{BratteliEdge, BratteliPrefix, OrderedBratteliPrefix, PathPrefix};
use gcover::covering::CoveringPrefix;
use gcover::graph::{DirectedGraph, GraphHom};
use gcover::structured::WordTable;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Flags recomputed straight from the quantifiers.
#[derive(Debug, PartialEq, Eq)]
pub struct Flags {
    pub hom: bool,
    pub edge_surjective: bool,
    pub positive_directional: bool,
    pub bidirectional: bool,
    pub cover: bool,
}

pub fn brute_flags(src: &[(usize, usize)], dst: &[(usize, usize)], map: &[usize]) -> Flags {
    let hom = src.iter().all(|&(u, v)| dst.contains(&(map[u], map[v])));
    let image: BTreeSet<(usize, usize)> = src.iter().map(|&(u, v)| (map[u], map[v])).collect();
    let target: BTreeSet<(usize, usize)> = dst.iter().copied().collect();
    let edge_surjective = hom && image == target;
    let mut forward = true;
    let mut backward = true;
    for &(u, v) in src {
        for &(u2, v2) in src {
            if u == u2 && map[v] != map[v2] {
                forward = false;
            }
            if v == v2 && map[u] != map[u2] {
                backward = false;
            }
        }
    }
    let positive_directional = hom && forward;
    Flags {
        hom,
        edge_surjective,
        positive_directional,
        bidirectional: positive_directional && backward,
        cover: edge_surjective && positive_directional,
    }
}

/// Every edge set on `k` labelled vertices in which each vertex has an out-
/// and an in-edge.
pub fn surjective_edge_sets(k: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|u| (0..k).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect::<Vec<_>>())
        .filter(|es| (0..k).all(|v| es.iter().any(|e| e.0 == v) && es.iter().any(|e| e.1 == v)))
        .collect()
}

pub fn graph_from(k: usize, edges: &[(usize, usize)]) -> Arc<DirectedGraph> {
    let names: Vec<String> = (0..k).map(|v| v.to_string()).collect();
    Arc::new(DirectedGraph::new(
        names.clone(),
        edges.iter().map(|&(u, v)| (names[u].clone(), names[v].clone())),
    ))
}

/// All vertex maps `[0,k) → [0,m)`.
pub fn all_maps(k: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| (0..m).map(move |t| {
                let mut q = p.clone();
                q.push(t);
                q
            }))
            .collect();
    }
    out
}

/// A random cover onto `g`: every vertex of `g` gets at least as many copies
/// as it has out-edges, each copy commits to one successor of its original,
/// and edges go only to copies of that successor.
pub fn random_cover_onto(rng: &mut ChaCha8Rng, g: &Arc<DirectedGraph>, budget: usize, tag: usize) -> Option<(Arc<DirectedGraph>, Vec<usize>)> {
    let n = g.vertex_count();
    if g.edge_count() > budget {
        return None;
    }
    let mut copies: Vec<usize> = (0..n).map(|v| g.out_degree(v)).collect();
    let mut spare = budget - g.edge_count();
    while spare > 0 && rng.gen_bool(0.5) {
        copies[rng.gen_range(0..n)] += 1;
        spare -= 1;
    }
    // (original, committed successor) per copy
    let mut owner = Vec::new();
    for v in 0..n {
        let succ = g.successors(v);
        for c in 0..copies[v] {
            let w = if c < succ.len() { succ[c] } else { *succ.choose(rng).unwrap() };
            owner.push((v, w));
        }
    }
    let copies_of = |v: usize| -> Vec<usize> { (0..owner.len()).filter(|&x| owner[x].0 == v).collect() };
    let mut edges = BTreeSet::new();
    for x in 0..owner.len() {
        let targets = copies_of(owner[x].1);
        edges.insert((x, *targets.choose(rng).unwrap()));
        for &t in &targets {
            if rng.gen_bool(0.3) {
                edges.insert((x, t));
            }
        }
    }
    for y in 0..owner.len() {
        if !edges.iter().any(|&(_, t)| t == y) {
            let sources: Vec<usize> = (0..owner.len()).filter(|&x| owner[x].1 == owner[y].0).collect();
            edges.insert((*sources.choose(rng).unwrap(), y));
        }
    }
    let names: Vec<String> = (0..owner.len()).map(|x| format!("{tag}.{x}")).collect();
    let graph = Arc::new(DirectedGraph::new(
        names.clone(),
        edges.iter().map(|&(u, v)| (names[u].clone(), names[v].clone())),
    ));
    Some((graph, owner.into_iter().map(|(v, _)| v).collect()))
}

/// A random covering prefix with at most `max_levels` covers and at most
/// `max_vertices` vertices per level (it may stop early).
pub fn random_covering(rng: &mut ChaCha8Rng, max_levels: usize, max_vertices: usize) -> CoveringPrefix {
    let mut levels = vec![Arc::new(DirectedGraph::singleton("v0"))];
    let mut covers = Vec::new();
    for n in 1..=max_levels {
        let below = levels.last().unwrap().clone();
        let Some((g, map)) = random_cover_onto(rng, &below, max_vertices, n) else { break };
        covers.push(GraphHom::new(g.clone(), below, map).unwrap());
        levels.push(g);
    }
    CoveringPrefix::new(levels, covers).unwrap()
}

/// A random KR word table: every word starts with 1 and contains each lower
/// letter at least once, and no level has two one-step circuits.
pub fn random_kr_table(rng: &mut ChaCha8Rng, depth: usize, max_circuits: usize, max_extra: usize) -> WordTable {
    loop {
        let t = raw_kr_table(rng, depth, max_circuits, max_extra);
        if t.periods().iter().all(|p| p.iter().filter(|&&l| l == 1).count() <= 1) {
            return t;
        }
    }
}

fn raw_kr_table(rng: &mut ChaCha8Rng, depth: usize, max_circuits: usize, max_extra: usize) -> WordTable {
    let mut words = Vec::new();
    let mut below = 1;
    for n in 1..=depth {
        let count = rng.gen_range(1..=max_circuits);
        let level: Vec<Vec<usize>> = (0..count)
            .map(|_| {
                if n == 1 {
                    return vec![1; rng.gen_range(1..=3)];
                }
                let mut w: Vec<usize> = (2..=below).collect();
                for _ in 0..rng.gen_range(0..=max_extra) {
                    w.push(rng.gen_range(1..=below));
                }
                w.shuffle(rng);
                w.insert(0, 1);
                w
            })
            .collect();
        below = level.len();
        words.push(level);
    }
    WordTable { words }
}

/// Random properly ordered diagram: every vertex receives an edge from every
/// vertex below, the minimal one from vertex 0 and the maximal one from the
/// last vertex.
pub fn random_properly_ordered(rng: &mut ChaCha8Rng, depth: usize, max_vertices: usize) -> OrderedBratteliPrefix {
    let mut level_vertices = vec![vec!["r".to_string()]];
    let mut edges = Vec::new();
    let mut order = Vec::new();
    for n in 1..=depth {
        let below = level_vertices[n - 1].len();
        let here = rng.gen_range(1..=max_vertices);
        level_vertices.push((0..here).map(|v| format!("{n}.{v}")).collect());
        let mut es = Vec::new();
        let mut os = Vec::new();
        for v in 0..here {
            let mut middle: Vec<usize> = (0..below).collect();
            for _ in 0..rng.gen_range(0..=1) {
                middle.push(rng.gen_range(0..below));
            }
            middle.shuffle(rng);
            let mut sources = vec![0];
            sources.extend(middle);
            sources.push(below - 1);
            for (k, s) in sources.into_iter().enumerate() {
                es.push(BratteliEdge { source: s, range: v });
                os.push(k + 1);
            }
        }
        // Shuffle edge storage order; the order indices travel along.
        let mut idx: Vec<usize> = (0..es.len()).collect();
        idx.shuffle(rng);
        edges.push(idx.iter().map(|&i| es[i]).collect());
        order.push(idx.iter().map(|&i| os[i]).collect());
    }
    OrderedBratteliPrefix { diagram: BratteliPrefix { level_vertices, edges }, order }
}

/// Every depth-`N` path by brute force over all edge tuples, sorted by
/// top vertex and then by the reversed order-index tuple.
pub fn sorted_paths_oracle(b: &OrderedBratteliPrefix) -> Vec<PathPrefix> {
    let depth = b.depth();
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for n in 1..=depth {
        tuples = tuples
            .into_iter()
            .flat_map(|t| (0..b.diagram.edges[n - 1].len()).map(move |e| {
                let mut q = t.clone();
                q.push(e);
                q
            }))
            .collect();
    }
    let valid = |t: &Vec<usize>| {
        (1..t.len()).all(|k| b.diagram.edges[k - 1][t[k - 1]].range == b.diagram.edges[k][t[k]].source)
            && t.first().map_or(true, |&e| b.diagram.edges[0][e].source == 0)
    };
    let mut paths: Vec<Vec<usize>> = tuples.into_iter().filter(valid).collect();
    let key = |t: &Vec<usize>| {
        let top = t.last().map_or(0, |&e| b.diagram.edges[depth - 1][e].range);
        let rev: Vec<usize> = (0..t.len()).rev().map(|k| b.order[k][t[k]]).collect();
        (top, rev)
    };
    paths.sort_by_key(key);
    paths.into_iter().map(|edges| PathPrefix { edges }).collect()
}
