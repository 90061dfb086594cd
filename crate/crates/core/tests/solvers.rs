//! Every exact solver agrees with exhaustive enumeration.

use genfac::decomp::{cutwidth_of_layout, heuristic_td, make_nice, LinearLayout};
use genfac::oracle::{backtrack_profile, brute_force_profile};
use genfac::solver_cutw::{count_cutw, StepMode};
use genfac::solver_tw::{count_tw, decide_tw, size_range_tw, JoinMode};
use genfac::{DegreeList, Instance, MultiGraph};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = Instance> {
    (2usize..=7)
        .prop_flat_map(|n| {
            let edges = prop::collection::vec((0..n, 1..n), 0..=12);
            let lists = prop::collection::vec(prop::collection::btree_set(0usize..=4, 0..=4), n);
            (Just(n), edges, lists)
        })
        .prop_map(|(n, edges, lists)| {
            let mut g = MultiGraph::new(n);
            for (u, d) in edges {
                g.add_edge(u, (u + d) % n).unwrap();
            }
            let lists = lists.into_iter().map(DegreeList::new).collect();
            Instance::with_lists(g, lists).unwrap()
        })
}

fn with_order() -> impl Strategy<Value = (Instance, Vec<usize>)> {
    instance().prop_flat_map(|inst| {
        let order = Just((0..inst.n()).collect::<Vec<_>>()).prop_shuffle();
        (Just(inst), order)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tw_matches_enumeration(inst in instance()) {
        let expected = brute_force_profile(&inst).unwrap();
        let nd = make_nice(inst.graph(), &heuristic_td(inst.graph())).unwrap();
        prop_assert_eq!(&count_tw(&inst, &nd, JoinMode::Naive).unwrap(), &expected);
        prop_assert_eq!(&count_tw(&inst, &nd, JoinMode::Fast).unwrap(), &expected);
        let summary = expected.summary();
        prop_assert_eq!(decide_tw(&inst, &nd).unwrap(), summary.decide);
        let range = size_range_tw(&inst, &nd).unwrap();
        prop_assert_eq!(range.map(|r| r.0), summary.min_size);
        prop_assert_eq!(range.map(|r| r.1), summary.max_size);
    }

    #[test]
    fn cutw_matches_enumeration((inst, order) in with_order()) {
        let expected = brute_force_profile(&inst).unwrap();
        let layout = LinearLayout::new(order);
        prop_assert!(cutwidth_of_layout(inst.graph(), &layout).unwrap() <= inst.m());
        prop_assert_eq!(&count_cutw(&inst, &layout, StepMode::Naive).unwrap(), &expected);
        prop_assert_eq!(&count_cutw(&inst, &layout, StepMode::Improved).unwrap(), &expected);
    }

    #[test]
    fn backtracking_matches_enumeration(inst in instance()) {
        prop_assert_eq!(backtrack_profile(&inst).unwrap(), brute_force_profile(&inst).unwrap());
    }
}
