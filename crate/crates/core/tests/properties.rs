use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subfactor_index5::catalog::{all_graph_strings, catalog_entries};
use subfactor_index5::connections::{build_cells, solve, SolveOptions};
use subfactor_index5::iso::random_relabeling;
use subfactor_index5::obstructions::{run_battery, BatteryOptions};
use subfactor_index5::spectral::pair_dimensions;
use subfactor_index5::{norm_squared, pair_isomorphic, parse_bigraph, serialize_bigraph, Execution};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabeled_graphs_round_trip(k in 0usize..40, seed in any::<u64>()) {
        let entries = catalog_entries();
        let e = &entries[k % entries.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_relabeling(&e.pair, &mut rng).apply(&e.pair);
        for g in [q.plus(), q.minus()] {
            let s = serialize_bigraph(g);
            prop_assert_eq!(&parse_bigraph(&s).unwrap(), g);
        }
    }

    #[test]
    fn relabeling_is_an_isomorphism(k in 0usize..40, seed in any::<u64>()) {
        let entries = catalog_entries();
        let p = &entries[k % entries.len()].pair;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_relabeling(p, &mut rng).apply(p);
        let iso = pair_isomorphic(p, &q, false);
        prop_assert!(iso.is_some());
        prop_assert!(iso.unwrap().verify(p, &q));
        for (a, b) in [(p.plus(), q.plus()), (p.minus(), q.minus())] {
            prop_assert_eq!(norm_squared(a, Some(5)).char_poly, norm_squared(b, Some(5)).char_poly);
        }
    }

    #[test]
    fn dimension_multisets_are_label_free(k in 0usize..40, seed in any::<u64>()) {
        let entries = catalog_entries();
        let p = &entries[k % entries.len()].pair;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_relabeling(p, &mut rng).apply(p);
        if let (Ok((a, _)), Ok((b, _))) = (pair_dimensions(p), pair_dimensions(&q)) {
            for d in 0..a.layers().len() {
                let mut x = a.layer(d).to_vec();
                let mut y = b.layer(d).to_vec();
                x.sort();
                y.sort();
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn battery_is_label_free(k in 0usize..40, seed in any::<u64>()) {
        let entries = catalog_entries();
        let p = &entries[k % entries.len()].pair;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_relabeling(p, &mut rng).apply(p);
        let a = run_battery(p, BatteryOptions::default()).unwrap();
        let b = run_battery(&q, BatteryOptions::default()).unwrap();
        prop_assert_eq!(a.eliminated_by, b.eliminated_by);
        prop_assert_eq!(a.outcome, b.outcome);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn solver_depends_only_on_seed(seed in any::<u64>()) {
        let c = build_cells(&catalog_entries().into_iter().find(|e| e.name == "S4<S5").unwrap().pair).unwrap();
        let opts = |execution| SolveOptions { restarts: 3, seed, execution, ..SolveOptions::default() };
        let a = solve(&c, &opts(Execution::Sequential));
        let b = solve(&c, &opts(Execution::Parallel));
        prop_assert_eq!(a.residuals(), b.residuals());
    }
}

#[test]
fn catalog_strings_are_canonical() {
    for s in all_graph_strings() {
        assert_eq!(serialize_bigraph(&parse_bigraph(&s).unwrap()), s);
    }
}
