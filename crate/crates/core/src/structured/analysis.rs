use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{validate_structured, Mode, StructureError, StructuredCovering};
use crate::covering::{successor_relation_at_depth, PREFIX_SCOPE};

pub const PREFIX_ESTIMATE: &str = "prefix estimate";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    /// `l_1 … l_N` (just `l_0 = 1` for a depth-0 prefix).
    pub circuit_counts: Vec<usize>,
    /// First level of the window the estimates range over.
    pub window_start: usize,
    /// Max of `l_n` over the window, standing in for `limsup`.
    pub kr_estimate: usize,
    /// Min of `l_n` over the window, standing in for `liminf`.
    pub gm_estimate: usize,
    pub estimates_differ: bool,
    pub scope: &'static str,
}

pub fn rank_profile(sc: &StructuredCovering) -> RankProfile {
    let depth = sc.depth();
    let (counts, window_start, window): (Vec<usize>, usize, Vec<usize>) = if depth == 0 {
        (vec![1], 0, vec![1])
    } else {
        let counts: Vec<usize> = (1..=depth).map(|n| sc.circuit_count(n)).collect();
        let start = (depth / 2).max(1);
        let window = counts[start - 1..].to_vec();
        (counts, start, window)
    };
    let kr = *window.iter().max().expect("non-empty window");
    let gm = *window.iter().min().expect("non-empty window");
    RankProfile {
        circuit_counts: counts,
        window_start,
        kr_estimate: kr,
        gm_estimate: gm,
        estimates_differ: kr != gm,
        scope: PREFIX_ESTIMATE,
    }
}

/// Least `m > n` witnessing each reach condition, if the prefix has one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReach {
    pub level: usize,
    /// Every circuit of `G_m` projects onto all of `V(G_n)`.
    pub vertex_reach: Option<usize>,
    /// Every circuit of `G_m` projects onto all of `E(G_n)`.
    pub edge_reach: Option<usize>,
    /// Every vertex of `G_n` has two distinct preimages in `G_m`.
    pub isolated_point: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub levels: Vec<LevelReach>,
    /// Levels `n ≤ ⌊N/2⌋` must all carry witnesses for the flags below.
    pub required_through: usize,
    pub minimal_on_prefix: bool,
    pub simple_on_prefix: bool,
    pub no_isolated_points_on_prefix: bool,
    pub scope: &'static str,
}

pub fn simplicity_check(sc: &StructuredCovering) -> SimplicityReport {
    let depth = sc.depth();
    let levels: Vec<LevelReach> = (0..depth).into_par_iter().map(|n| level_reach(sc, n)).collect();
    let required_through = depth / 2;
    let required = |f: fn(&LevelReach) -> bool| {
        levels.iter().filter(|r| r.level <= required_through).all(f)
    };
    SimplicityReport {
        minimal_on_prefix: required(|r| r.vertex_reach.is_some()),
        simple_on_prefix: required(|r| r.edge_reach.is_some()),
        no_isolated_points_on_prefix: required(|r| r.isolated_point.is_some()),
        levels,
        required_through,
        scope: PREFIX_SCOPE,
    }
}

fn level_reach(sc: &StructuredCovering, n: usize) -> LevelReach {
    let base = sc.base();
    let g = sc.graph(n);
    let mut reach = LevelReach { level: n, vertex_reach: None, edge_reach: None, isolated_point: None };
    for m in n + 1..=sc.depth() {
        let mut all_vertices = true;
        let mut all_edges = true;
        for c in sc.level(m).circuits() {
            let image: Vec<usize> = c.iter().map(|&v| base.project(m, n, v)).collect();
            let vs: BTreeSet<usize> = image.iter().copied().collect();
            let es: BTreeSet<(usize, usize)> = image.windows(2).map(|w| (w[0], w[1])).collect();
            all_vertices &= vs.len() == g.vertex_count();
            all_edges &= es.len() == g.edge_count();
        }
        if all_vertices && reach.vertex_reach.is_none() {
            reach.vertex_reach = Some(m);
        }
        if all_edges && reach.edge_reach.is_none() {
            reach.edge_reach = Some(m);
        }
        if reach.isolated_point.is_none() {
            let mut preimages = vec![0usize; g.vertex_count()];
            for u in 0..sc.graph(m).vertex_count() {
                preimages[base.project(m, n, u)] += 1;
            }
            if preimages.iter().all(|&k| k >= 2) {
                reach.isolated_point = Some(m);
            }
        }
    }
    reach
}

/// One tower of a KR partition: the base `B_i` and the floors above it, as
/// sets of depth-`depth` threads (identified by their top vertex).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KrTower {
    pub circuit: usize,
    pub height: usize,
    /// `floors[0]` is the base `B_i`, `floors[k]` is `U(v_{n,i,k})`.
    pub floors: Vec<BTreeSet<usize>>,
}

impl KrTower {
    pub fn base(&self) -> &BTreeSet<usize> {
        &self.floors[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KrPartitionLevel {
    pub level: usize,
    pub depth: usize,
    pub thread_count: usize,
    pub towers: Vec<KrTower>,
}

impl KrPartitionLevel {
    pub fn floors(&self) -> impl Iterator<Item = &BTreeSet<usize>> {
        self.towers.iter().flat_map(|t| t.floors.iter())
    }

    /// Floors are pairwise disjoint and cover every thread.
    pub fn is_partition(&self) -> bool {
        let mut seen = vec![false; self.thread_count];
        for floor in self.floors() {
            for &x in floor {
                if std::mem::replace(&mut seen[x], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Every floor of `self` lies inside a floor of `coarser`.
    pub fn refines(&self, coarser: &KrPartitionLevel) -> bool {
        self.depth == coarser.depth
            && self.floors().all(|f| coarser.floors().any(|c| f.is_subset(c)))
    }
}

pub fn kr_partition(sc: &StructuredCovering, n: usize, depth: usize) -> Result<KrPartitionLevel, StructureError> {
    if sc.mode() != Mode::Kr {
        return Err(StructureError::NotKr);
    }
    sc.check_level(depth)?;
    if n >= depth {
        return Err(StructureError::LevelOutOfRange { level: n, depth: depth.saturating_sub(1) });
    }
    let base = sc.base();
    let top = sc.graph(depth);
    let lvl = sc.level(n);
    let mut towers: Vec<KrTower> = (1..=lvl.circuit_count())
        .map(|i| KrTower { circuit: i, height: lvl.period(i), floors: vec![BTreeSet::new(); lvl.period(i)] })
        .collect();
    for x in 0..top.vertex_count() {
        let v = base.project(depth, n, x);
        if v == lvl.center() {
            // Positive-directionality makes the level-n image of any
            // successor the same vertex; it names the tower.
            let next = base.project(depth, n, top.successors(x)[0]);
            if let Some(i) = lvl.circuits().position(|c| c[1] == next) {
                towers[i].floors[0].insert(x);
            }
        } else {
            for (i, c) in lvl.circuits().enumerate() {
                if let Some(k) = c[1..c.len() - 1].iter().position(|&u| u == v) {
                    towers[i].floors[k + 1].insert(x);
                    break;
                }
            }
        }
    }
    Ok(KrPartitionLevel { level: n, depth, thread_count: top.vertex_count(), towers })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub depth: usize,
    /// Predecessor counts by thread (top vertex index at `depth`).
    pub predecessor_counts: Vec<usize>,
    pub central_thread: usize,
    pub central_count: usize,
    pub non_central_all_one: bool,
    pub max_circuit_count: usize,
    pub rank_proxy: usize,
    pub central_within_max_circuits: bool,
    pub central_within_rank_proxy: bool,
    pub scope: &'static str,
}

impl FiberReport {
    pub fn holds(&self) -> bool {
        self.non_central_all_one && self.central_within_max_circuits && self.central_within_rank_proxy
    }
}

pub fn fiber_analysis(sc: &StructuredCovering, depth: usize) -> Result<FiberReport, StructureError> {
    if sc.mode() != Mode::Kr {
        return Err(StructureError::NotKr);
    }
    sc.check_level(depth)?;
    let report = validate_structured(sc);
    if !report.is_valid() {
        return Err(StructureError::Invalid(report.violations[0].to_string()));
    }
    let (_, det) = successor_relation_at_depth(sc.base(), depth)?;
    let central = sc.level(depth).center();
    let counts = det.predecessor_counts;
    let central_count = counts[central];
    let max_circuit_count = (0..=depth).map(|n| sc.circuit_count(n)).max().unwrap_or(1);
    let rank_proxy = rank_profile(sc).kr_estimate;
    Ok(FiberReport {
        depth,
        non_central_all_one: counts.iter().enumerate().all(|(x, &k)| x == central || k == 1),
        central_thread: central,
        central_count,
        central_within_max_circuits: central_count <= max_circuit_count,
        central_within_rank_proxy: central_count <= rank_proxy,
        max_circuit_count,
        rank_proxy,
        predecessor_counts: counts,
        scope: PREFIX_SCOPE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::towers;

    #[test]
    fn rank_profiles() {
        let d = rank_profile(&towers::dyadic(4));
        assert_eq!((d.circuit_counts, d.kr_estimate, d.gm_estimate), (vec![1; 4], 1, 1));
        let f = rank_profile(&towers::fibonacci(4));
        assert_eq!((f.kr_estimate, f.gm_estimate), (2, 2));
        let m = rank_profile(&towers::mixed_rank());
        assert_eq!(m.circuit_counts, vec![3, 2, 2, 2]);
        assert_eq!(m.gm_estimate, 2);
        assert_eq!(m.scope, PREFIX_ESTIMATE);
    }

    #[test]
    fn estimates_can_disagree() {
        // l = (1,2,1,2): window {2,3,4} gives max 2, min 1.
        let sc = StructuredCovering::kr_from_words(
            &[2],
            &[vec![vec![1], vec![1, 1]], vec![vec![1, 2]], vec![vec![1], vec![1, 1]]],
        )
        .unwrap();
        let r = rank_profile(&sc);
        assert_eq!((r.kr_estimate, r.gm_estimate, r.estimates_differ), (2, 1, true));
    }

    #[test]
    fn fibonacci_reaches_within_two_levels() {
        let r = simplicity_check(&towers::fibonacci(6));
        for lr in &r.levels {
            if lr.level + 2 <= 6 {
                assert!(lr.vertex_reach.unwrap() <= lr.level + 2);
                assert!(lr.edge_reach.unwrap() <= lr.level + 2);
            }
        }
        assert!(r.simple_on_prefix && r.minimal_on_prefix);
    }

    #[test]
    fn dyadic_reaches_next_level() {
        let r = simplicity_check(&towers::dyadic(4));
        for lr in &r.levels {
            assert_eq!(lr.vertex_reach, Some(lr.level + 1));
            assert_eq!(lr.isolated_point, Some(lr.level + 1));
        }
    }

    #[test]
    fn degenerate_tower_is_flagged() {
        let r = simplicity_check(&towers::degenerate(4));
        assert_eq!(r.levels[1].vertex_reach, None);
        assert!(!r.minimal_on_prefix && !r.simple_on_prefix);
    }

    #[test]
    fn kr_partition_examples() {
        let d = towers::dyadic(3);
        let p = kr_partition(&d, 1, 3).unwrap();
        assert_eq!(p.towers.len(), 1);
        assert_eq!(p.towers[0].floors.iter().map(BTreeSet::len).collect::<Vec<_>>(), vec![4, 4]);
        let p0 = kr_partition(&d, 0, 3).unwrap();
        assert_eq!(p0.towers[0].floors, vec![(0..8).collect::<BTreeSet<_>>()]);
        assert!(p.is_partition() && p.refines(&p0));

        let f = towers::fibonacci(4);
        let heights: Vec<usize> = kr_partition(&f, 1, 4).unwrap().towers.iter().map(|t| t.height).collect();
        assert_eq!(heights, vec![2, 1]);
    }

    #[test]
    fn kr_partition_rejects_gm_and_bad_levels() {
        assert_eq!(kr_partition(&towers::gm_shared_tail(2), 1, 2), Err(StructureError::NotKr));
        assert!(kr_partition(&towers::dyadic(2), 2, 2).is_err());
        assert!(kr_partition(&towers::dyadic(2), 0, 3).is_err());
    }

    #[test]
    fn fiber_examples() {
        let d = fiber_analysis(&towers::dyadic(4), 4).unwrap();
        assert!(d.predecessor_counts.iter().all(|&k| k == 1));
        let f = fiber_analysis(&towers::fibonacci(4), 4).unwrap();
        assert_eq!(f.central_count, 2);
        assert!(f.holds());
        let s = fiber_analysis(&towers::singleton(2), 2).unwrap();
        assert_eq!(s.predecessor_counts, vec![1]);
    }
}
