mod common;

use gcover::structured::{validate_structured, Mode, StructuredCovering};
use gcover::symbolic::Seed;
use gcover::towers;
use gcover::transform::{all_seeds, gm_to_kr, kr_vertex_count, verify_linked_array_coincidence};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kr_inputs_pass_through(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let depth = rng.gen_range(1..=4);
        let table = common::random_kr_table(&mut rng, depth, 3, 2);
        let sc = StructuredCovering::kr_from_table(&table, Mode::Gm).unwrap();
        let r = gm_to_kr(&sc).unwrap();
        prop_assert!(validate_structured(&r.output).kr_valid);
        for n in 0..=depth {
            prop_assert_eq!(r.output.graph(n).vertex_count(), sc.graph(n).vertex_count());
            prop_assert_eq!(kr_vertex_count(&sc, n), sc.graph(n).vertex_count());
        }
        let half = rng.gen_range(0..4);
        let seeds = all_seeds(&sc, depth, half);
        prop_assert!(verify_linked_array_coincidence(&sc, &r, depth, half, &seeds).unwrap().agrees());
    }

    #[test]
    fn shared_tails_split_and_agree(depth in 1usize..=4, half in 0usize..8, pick in any::<u64>()) {
        let sc = towers::gm_shared_tail(depth);
        let r = gm_to_kr(&sc).unwrap();
        prop_assert!(validate_structured(&r.output).is_valid());
        for n in 1..=depth {
            prop_assert_eq!(r.output.graph(n).vertex_count(), kr_vertex_count(&sc, n));
            prop_assert!(r.output.graph(n).vertex_count() > sc.graph(n).vertex_count());
            for (new, old) in &r.vertex_correspondence[n] {
                let v = r.output.graph(n).index_of(new).unwrap();
                let u = sc.graph(n).index_of(old).unwrap();
                // Copies project like their originals.
                let below = r.output.graph(n - 1).name(r.output.base().project(n, n - 1, v));
                let below = r.vertex_correspondence[n - 1].get(below).map_or(below, String::as_str);
                prop_assert_eq!(below, sc.graph(n - 1).name(sc.base().project(n, n - 1, u)));
            }
        }
        let mut rng = common::rng(pick);
        let seeds: Vec<Seed> = all_seeds(&sc, depth, half).into_iter().filter(|_| rng.gen_bool(0.3)).collect();
        prop_assert!(verify_linked_array_coincidence(&sc, &r, depth, half, &seeds).unwrap().agrees());
    }
}
