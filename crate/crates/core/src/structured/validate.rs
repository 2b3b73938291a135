use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{Mode, StructuredCovering};
use crate::covering::{validate_covering, CoveringViolation};
use crate::graph::{kind_of, SequenceKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructuredViolation {
    Covering { violation: CoveringViolation },
    NotACircuit { level: usize, circuit: usize },
    EdgeNotOnCircuit { level: usize, from: String, to: String },
    /// KR: two circuits meet away from the center.
    SharedInterior { level: usize, first: usize, second: usize, vertex: String },
    /// GM item (3): circuits meet but their tails part.
    TailDivergence { level: usize, first: usize, at: usize, second: usize, at_second: usize },
    CenterNotPreserved { level: usize },
    Decomposition { level: usize, circuit: usize, reason: String },
    /// GM: `a(n,i,1) ≠ 1`.
    FirstLetter { level: usize, circuit: usize, letter: usize },
    /// GM item (5): `φ(v_{n,i,1}) ≠ v_{n-1,1,1}`.
    FirstStep { level: usize, circuit: usize },
}

impl StructuredViolation {
    pub fn level(&self) -> usize {
        match self {
            StructuredViolation::Covering { violation } => violation.level(),
            StructuredViolation::NotACircuit { level, .. }
            | StructuredViolation::EdgeNotOnCircuit { level, .. }
            | StructuredViolation::SharedInterior { level, .. }
            | StructuredViolation::TailDivergence { level, .. }
            | StructuredViolation::CenterNotPreserved { level }
            | StructuredViolation::Decomposition { level, .. }
            | StructuredViolation::FirstLetter { level, .. }
            | StructuredViolation::FirstStep { level, .. } => *level,
        }
    }
}

impl fmt::Display for StructuredViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuredViolation::Covering { violation } => write!(f, "{violation}"),
            StructuredViolation::NotACircuit { level, circuit } => {
                write!(f, "level {level}: c({level},{circuit}) is not a circuit through the center")
            }
            StructuredViolation::EdgeNotOnCircuit { level, from, to } => {
                write!(f, "level {level}: edge ({from},{to}) lies on no circuit")
            }
            StructuredViolation::SharedInterior { level, first, second, vertex } => write!(
                f,
                "level {level}: circuits {first} and {second} share the non-central vertex `{vertex}`"
            ),
            StructuredViolation::TailDivergence { level, first, at, second, at_second } => write!(
                f,
                "level {level}: v({level},{first},{at}) = v({level},{second},{at_second}) but the tails differ"
            ),
            StructuredViolation::CenterNotPreserved { level } => {
                write!(f, "level {level}: the center does not map to the lower center")
            }
            StructuredViolation::Decomposition { level, circuit, reason } => {
                write!(f, "level {level}: c({level},{circuit}) does not decompose: {reason}")
            }
            StructuredViolation::FirstLetter { level, circuit, letter } => {
                write!(f, "level {level}: word of c({level},{circuit}) starts with {letter}, not 1")
            }
            StructuredViolation::FirstStep { level, circuit } => write!(
                f,
                "level {level}: first step of c({level},{circuit}) does not map to the first step of c({},1)",
                level - 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub mode: Mode,
    /// Violations for the declared mode, sorted by level.
    pub violations: Vec<StructuredViolation>,
    pub kr_valid: bool,
    pub gm_valid: bool,
}

impl StructureReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_structured(sc: &StructuredCovering) -> StructureReport {
    let kr = violations_for(sc, Mode::Kr);
    let gm = violations_for(sc, Mode::Gm);
    let (kr_valid, gm_valid) = (kr.is_empty(), gm.is_empty());
    let violations = match sc.mode() {
        Mode::Kr => kr,
        Mode::Gm => gm,
    };
    StructureReport { mode: sc.mode(), violations, kr_valid, gm_valid }
}

fn violations_for(sc: &StructuredCovering, mode: Mode) -> Vec<StructuredViolation> {
    let mut out: Vec<StructuredViolation> = validate_covering(sc.base())
        .into_iter()
        .map(|violation| StructuredViolation::Covering { violation })
        .collect();
    for n in 1..=sc.depth() {
        level_violations(sc, n, mode, &mut out);
    }
    out.sort_by_key(StructuredViolation::level);
    out
}

fn level_violations(sc: &StructuredCovering, n: usize, mode: Mode, out: &mut Vec<StructuredViolation>) {
    let g = sc.graph(n);
    let lvl = sc.level(n);
    let center = lvl.center();
    let mut covered = BTreeSet::new();
    for (i0, c) in lvl.circuits().enumerate() {
        let i = i0 + 1;
        let is_walk = c.windows(2).all(|w| g.has_edge(w[0], w[1]));
        if kind_of(c, is_walk) != SequenceKind::Circuit || c[0] != center {
            out.push(StructuredViolation::NotACircuit { level: n, circuit: i });
        }
        covered.extend(c.windows(2).map(|w| (w[0], w[1])));
    }
    for (u, v) in g.edges() {
        if !covered.contains(&(u, v)) {
            out.push(StructuredViolation::EdgeNotOnCircuit {
                level: n,
                from: g.name(u).to_string(),
                to: g.name(v).to_string(),
            });
        }
    }
    match mode {
        Mode::Kr => shared_interiors(sc, n, out),
        Mode::Gm => tail_divergences(sc, n, out),
    }
    let lower = sc.level(n - 1);
    let phi = sc.base().cover(n - 1);
    if phi.apply(center) != lower.center() {
        out.push(StructuredViolation::CenterNotPreserved { level: n });
    }
    for i in 1..=lvl.circuit_count() {
        match sc.word(n, i) {
            Err(e) => out.push(StructuredViolation::Decomposition { level: n, circuit: i, reason: e.to_string() }),
            Ok(w) if mode == Mode::Gm && w.letters[0] != 1 => {
                out.push(StructuredViolation::FirstLetter { level: n, circuit: i, letter: w.letters[0] })
            }
            Ok(_) => {}
        }
        if mode == Mode::Gm {
            let c = lvl.circuit(i);
            let target = lower.circuit(1)[1];
            if c.len() > 1 && phi.apply(c[1]) != target {
                out.push(StructuredViolation::FirstStep { level: n, circuit: i });
            }
        }
    }
}

fn shared_interiors(sc: &StructuredCovering, n: usize, out: &mut Vec<StructuredViolation>) {
    let lvl = sc.level(n);
    let g = sc.graph(n);
    let mut owner: Vec<Option<usize>> = vec![None; g.vertex_count()];
    for (i0, c) in lvl.circuits().enumerate() {
        let interior: BTreeSet<usize> = c[1..c.len() - 1].iter().copied().collect();
        for v in interior {
            match owner[v] {
                Some(first) => out.push(StructuredViolation::SharedInterior {
                    level: n,
                    first,
                    second: i0 + 1,
                    vertex: g.name(v).to_string(),
                }),
                None => owner[v] = Some(i0 + 1),
            }
        }
    }
    // A circuit that passes through the center mid-way is not a circuit and
    // is already reported; interior reuse within one circuit likewise.
}

fn tail_divergences(sc: &StructuredCovering, n: usize, out: &mut Vec<StructuredViolation>) {
    let lvl = sc.level(n);
    let circuits: Vec<&[usize]> = lvl.circuits().collect();
    let mut seen = BTreeSet::new();
    for (i, a) in circuits.iter().enumerate() {
        for (k, b) in circuits.iter().enumerate().skip(i) {
            for j in 1..a.len() - 1 {
                for j2 in 1..b.len() - 1 {
                    if (i, j) == (k, j2) || a[j] != b[j2] {
                        continue;
                    }
                    if a[j..] != b[j2..] && seen.insert((i, j, k, j2)) {
                        out.push(StructuredViolation::TailDivergence {
                            level: n,
                            first: i + 1,
                            at: j,
                            second: k + 1,
                            at_second: j2,
                        });
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::towers;

    #[test]
    fn dyadic_is_kr_and_gm() {
        let r = validate_structured(&towers::dyadic(4));
        assert!(r.is_valid() && r.kr_valid && r.gm_valid);
    }

    #[test]
    fn fibonacci_is_kr() {
        let r = validate_structured(&towers::fibonacci(5));
        assert!(r.is_valid() && r.kr_valid);
    }

    #[test]
    fn shared_tail_is_gm_but_not_kr() {
        let sc = towers::gm_shared_tail(3);
        let r = validate_structured(&sc);
        assert_eq!(r.mode, Mode::Gm);
        assert!(r.gm_valid, "{:?}", r.violations);
        assert!(!r.kr_valid);
        let kr = validate_structured(&sc.with_mode(Mode::Kr));
        assert!(kr
            .violations
            .iter()
            .any(|v| matches!(v, StructuredViolation::SharedInterior { level: 1, first: 1, second: 2, .. })));
    }

    #[test]
    fn diverging_tails_violate_item_three() {
        // c1 = (0,a,s,b,0), c2 = (0,s,0): they meet at s, then part.
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let circuits = vec![vec![s(&["0", "a", "s", "b", "0"]), s(&["0", "s", "0"])]];
        let sc = StructuredCovering::from_circuit_words(Mode::Gm, &circuits, &[]).unwrap();
        let r = validate_structured(&sc);
        assert!(r.violations.contains(&StructuredViolation::TailDivergence {
            level: 1,
            first: 1,
            at: 2,
            second: 2,
            at_second: 1
        }));
        // Brute-force oracle: the tails (s,b,0) and (s,0) differ.
        assert_ne!(&circuits[0][0][2..], &circuits[0][1][1..]);
    }

    #[test]
    fn gm_first_letter_and_first_step() {
        // Words starting with circuit 2 are KR-fine but not GM.
        let sc = StructuredCovering::kr_from_words(&[2, 1], &[vec![vec![2, 1], vec![2]]]).unwrap();
        let r = validate_structured(&sc.clone().with_mode(Mode::Gm));
        assert!(r.kr_valid && !r.gm_valid);
        assert!(r.violations.iter().any(|v| matches!(v, StructuredViolation::FirstLetter { level: 2, circuit: 1, letter: 2 })));
        assert!(r.violations.iter().any(|v| matches!(v, StructuredViolation::FirstStep { level: 2, .. })));
    }
}
