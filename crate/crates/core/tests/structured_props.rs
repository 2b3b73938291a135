mod common;

use gcover::graph::hom_profile;
use gcover::structured::{
    kr_partition, merge_equal_symbols, validate_structured, Mode, StructureError, StructuredCovering, StructuredViolation, WordTable,
};
use gcover::symbolic::language_of_level;
use gcover::towers;
use proptest::prelude::*;
use rand::Rng;

fn table_strategy() -> impl Strategy<Value = WordTable> {
    any::<u64>().prop_map(|seed| {
        let mut rng = common::rng(seed);
        let depth = rng.gen_range(1..=4);
        common::random_kr_table(&mut rng, depth, 3, 2)
    })
}

proptest! {
    #[test]
    fn tables_build_valid_kr_towers(table in table_strategy()) {
        let sc = StructuredCovering::kr_from_table(&table, Mode::Kr).unwrap();
        let report = validate_structured(&sc);
        prop_assert!(report.is_valid(), "{:?}", report.violations);
        prop_assert!(report.kr_valid);
        prop_assert_eq!(sc.word_table().unwrap(), table.clone());
        for (n, periods) in table.periods().iter().enumerate() {
            prop_assert_eq!(&sc.level(n).periods(), periods);
        }
    }

    #[test]
    fn kr_towers_with_leading_one_are_gm(table in table_strategy()) {
        let sc = StructuredCovering::kr_from_table(&table, Mode::Gm).unwrap();
        prop_assert!(validate_structured(&sc).gm_valid);
    }

    #[test]
    fn circuits_project_onto_their_words(table in table_strategy()) {
        let sc = StructuredCovering::kr_from_table(&table, Mode::Kr).unwrap();
        for n in 1..=sc.depth() {
            prop_assert!(hom_profile(sc.base().cover(n - 1)).is_cover);
            let below = sc.level(n - 1);
            for i in 1..=sc.circuit_count(n) {
                let image: Vec<usize> = sc.level(n).circuit(i).iter().map(|&v| sc.base().project(n, n - 1, v)).collect();
                let mut spelled = vec![below.center()];
                for &a in &sc.word(n, i).unwrap().letters {
                    spelled.extend_from_slice(&below.circuit(a)[1..]);
                }
                prop_assert_eq!(image, spelled);
            }
        }
    }

    #[test]
    fn kr_partitions_refine(table in table_strategy()) {
        let sc = StructuredCovering::kr_from_table(&table, Mode::Kr).unwrap();
        let depth = sc.depth();
        let parts: Vec<_> = (0..depth).map(|n| kr_partition(&sc, n, depth).unwrap()).collect();
        for p in &parts {
            prop_assert!(p.is_partition());
            for t in &p.towers {
                prop_assert_eq!(t.floors.len(), t.height);
                prop_assert!(!t.base().is_empty());
            }
        }
        for w in parts.windows(2) {
            prop_assert!(w[1].refines(&w[0]));
        }
    }

    #[test]
    fn merging_duplicates_keeps_languages(table in table_strategy(), seed in any::<u64>()) {
        prop_assume!(table.depth() >= 2);
        let mut rng = common::rng(seed);
        let mut words = table.words.clone();
        let m = rng.gen_range(1..words.len());
        let copy = words[m - 1][rng.gen_range(0..words[m - 1].len())].clone();
        words[m - 1].push(copy);
        let extra = words[m - 1].len();
        for w in &mut words[m] {
            let at = rng.gen_range(1..=w.len());
            w.insert(at, extra);
        }
        // A copied one-step loop would be the same circuit twice.
        let sc = StructuredCovering::kr_from_table(&WordTable { words }, Mode::Kr);
        prop_assume!(!matches!(sc, Err(StructureError::RepeatedCircuit { .. })));
        let sc = sc.unwrap();
        let merged = merge_equal_symbols(&sc, m).unwrap();
        prop_assert!(validate_structured(&merged).is_valid());
        prop_assert!(merged.circuit_count(m) < sc.circuit_count(m));
        for len in 1..=8 {
            let a = language_of_level(&sc, m - 1, len);
            let b = language_of_level(&merged, m - 1, len);
            match (a, b) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a.words, b.words),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn canonical_names_keep_structure(table in table_strategy()) {
        let sc = StructuredCovering::kr_from_table(&table, Mode::Kr).unwrap();
        let canon = sc.canonical().unwrap();
        prop_assert!(canon.same_structure(&sc));
        prop_assert_eq!(canon.word_table().unwrap(), table);
    }
}

#[test]
fn leading_letter_other_than_one_breaks_gm_only() {
    let sc = StructuredCovering::kr_from_words(&[2, 1], &[vec![vec![2, 1], vec![2, 1, 1]]]).unwrap();
    let kr = validate_structured(&sc);
    assert!(kr.kr_valid);
    let gm = validate_structured(&sc.with_mode(Mode::Gm));
    assert!(!gm.gm_valid);
    assert!(gm
        .violations
        .iter()
        .all(|v| matches!(v, StructuredViolation::FirstLetter { .. } | StructuredViolation::FirstStep { .. })));
}

#[test]
fn shared_tails_are_gm_but_not_kr() {
    let r = validate_structured(&towers::gm_shared_tail(3));
    assert!(r.gm_valid && !r.kr_valid);
}
