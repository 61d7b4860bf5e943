mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use regsep::baselines::for_each_strategy;
use regsep::gen::all_small_games;
use regsep::scc::tarjan_sccs;
use regsep::{
    check_strategy_winning, gen_random, limsup_winner, parse_game, sample_plays, strategy_subgraph,
    GenSpec, LassoWord, Letter, Player, PositionalStrategy,
};

fn l(u: usize, p: u32, v: usize) -> Letter {
    Letter::new(u, p, v)
}

#[test]
fn limsup_examples() {
    let w = LassoWord::new(vec![], vec![l(1, 2, 1), l(1, 1, 2), l(2, 2, 2), l(2, 1, 1)]).unwrap();
    assert_eq!(limsup_winner(&w), Player::Even);
    let w = LassoWord::new(vec![l(1, 6, 1)], vec![l(1, 3, 1)]).unwrap();
    assert_eq!(limsup_winner(&w), Player::Odd);
    let w = LassoWord::new(vec![], vec![l(1, 1, 1), l(1, 4, 1)]).unwrap();
    assert_eq!(limsup_winner(&w), Player::Even);
    assert_eq!(
        LassoWord::new(vec![l(1, 1, 1)], vec![]),
        Err(regsep::GameError::EmptyCycle)
    );
}

proptest! {
    #[test]
    fn limsup_ignores_rotation_and_prefix(
        prefix in proptest::collection::vec(1u32..8, 0..5),
        cycle in proptest::collection::vec(1u32..8, 1..6),
        shift in 0usize..6,
        copies in 1usize..4,
    ) {
        let letters = |ps: &[u32]| ps.iter().map(|&p| l(1, p, 1)).collect::<Vec<_>>();
        let w = LassoWord::new(letters(&prefix), letters(&cycle)).unwrap();
        let mut rotated = cycle.clone();
        rotated.rotate_left(shift % cycle.len());
        let repeated: Vec<u32> = rotated.iter().copied().cycle().take(copies * cycle.len()).collect();
        let v = LassoWord::new(vec![], letters(&repeated)).unwrap();
        prop_assert_eq!(limsup_winner(&w), limsup_winner(&v));
        let top = *cycle.iter().max().unwrap();
        prop_assert_eq!(limsup_winner(&w), Player::of_priority(top));
    }
}

#[test]
fn even_choice_drops_the_other_edge() {
    let g = parse_game("parity 2; start 1; 1 even 1:2->1, 1:1->2; 2 odd 2:1->2;").unwrap();
    let s = PositionalStrategy::new(&g, Player::Even, BTreeMap::from([(1, l(1, 2, 1))])).unwrap();
    let sg = strategy_subgraph(&g, &s);
    assert_eq!(sg.out_edges(1), &[l(1, 2, 1)]);
    assert_eq!(sg.reachable().iter().copied().collect::<Vec<_>>(), vec![1]);
    assert!(check_strategy_winning(&sg));
}

#[test]
fn odd_edges_are_all_kept() {
    let g = parse_game("parity 3; start 1; 1 odd 1:1->2, 1:2->3; 2 odd 2:2->2; 3 odd 3:1->1; ")
        .unwrap();
    let s = PositionalStrategy::new(&g, Player::Even, BTreeMap::new()).unwrap();
    let sg = strategy_subgraph(&g, &s);
    assert_eq!(sg.edges(), g.edges());
    assert_eq!(sg.reachable().len(), 3);
}

#[test]
fn strategies_are_validated() {
    let g = parse_game("parity 2; start 1; 1 even 1:2->2; 2 odd 2:1->1;").unwrap();
    assert!(PositionalStrategy::new(&g, Player::Even, BTreeMap::new()).is_err());
    assert!(PositionalStrategy::new(&g, Player::Even, BTreeMap::from([(1, l(1, 1, 2))])).is_err());
    assert!(PositionalStrategy::new(&g, Player::Even, BTreeMap::from([(2, l(2, 1, 1))])).is_err());
}

#[test]
fn cut_off_nodes_are_unreachable() {
    // Even leaves 1 for 2 and never comes back; 3 is only reachable by the dropped edge.
    let g = parse_game("parity 3; start 1; 1 even 1:2->2, 1:2->3; 2 even 2:2->2; 3 odd 3:1->1;")
        .unwrap();
    let s = PositionalStrategy::new(
        &g,
        Player::Even,
        BTreeMap::from([(1, l(1, 2, 2)), (2, l(2, 2, 2))]),
    )
    .unwrap();
    let sg = strategy_subgraph(&g, &s);
    let oracle = common::reachable(1, sg.edges());
    assert_eq!(sg.reachable().iter().copied().collect::<Vec<_>>(), oracle);
    assert_eq!(oracle, vec![1, 2]);
}

#[test]
fn single_node_loops() {
    let even = parse_game("parity 1; start 1; 1 odd 1:2->1;").unwrap();
    let s = PositionalStrategy::new(&even, Player::Even, BTreeMap::new()).unwrap();
    assert!(check_strategy_winning(&strategy_subgraph(&even, &s)));
    let mixed = parse_game("parity 1; start 1; 1 odd 1:2->1, 1:1->1;").unwrap();
    let s = PositionalStrategy::new(&mixed, Player::Even, BTreeMap::new()).unwrap();
    assert!(!check_strategy_winning(&strategy_subgraph(&mixed, &s)));
}

#[test]
fn tree_example_is_winning() {
    let (g, s) = common::tree_example();
    let sg = strategy_subgraph(&g, &s);
    assert!(check_strategy_winning(&sg));
    let nodes: Vec<usize> = sg.reachable().iter().copied().collect();
    let tops = common::simple_cycle_tops(&nodes, &sg.reachable_edges());
    assert!(!tops.is_empty());
    assert!(tops.iter().all(|p| p % 2 == 0), "{tops:?}");
}

#[test]
fn winning_check_matches_cycle_enumeration() {
    let mut games = all_small_games(2, 3, 2);
    games.extend((0..200).map(|seed| gen_random(&GenSpec::new(1 + seed as usize % 5, 4, seed))));
    let mut checked = 0;
    for g in &games {
        for player in [Player::Even, Player::Odd] {
            for_each_strategy(g, player, 10_000, |s| {
                let sg = strategy_subgraph(g, &s);
                let nodes: Vec<usize> = sg.reachable().iter().copied().collect();
                let expected = common::simple_cycle_tops(&nodes, &sg.reachable_edges())
                    .iter()
                    .all(|&p| Player::of_priority(p) == player);
                assert_eq!(
                    check_strategy_winning(&sg),
                    expected,
                    "{}",
                    regsep::render_game(g)
                );
                checked += 1;
                false
            })
            .unwrap();
        }
    }
    assert!(checked > 1000);
}

#[test]
fn sampled_plays_are_paths_and_reproducible() {
    let single = parse_game("parity 1; start 1; 1 even 1:2->1;").unwrap();
    let s =
        PositionalStrategy::new(&single, Player::Even, BTreeMap::from([(1, l(1, 2, 1))])).unwrap();
    // Every sample spells (1,2,1)^ω, possibly with an unrolled cycle.
    for w in sample_plays(&strategy_subgraph(&single, &s), 5, 4, 9) {
        assert!(w.letters().all(|e| *e == l(1, 2, 1)));
    }

    let (g, s) = common::tree_example();
    let sg = strategy_subgraph(&g, &s);
    let a = sample_plays(&sg, 30, 10, 3);
    assert_eq!(a, sample_plays(&sg, 30, 10, 3));
    for w in &a {
        assert!(w.is_path_from(g.start(), |e| sg.has_edge(e)), "{w}");
        assert_eq!(w.cycle.last().unwrap().target, w.cycle[0].source);
    }
}

#[test]
fn scc_examples() {
    assert_eq!(
        tarjan_sccs(&[1, 2], &[l(1, 1, 2)], 1),
        vec![vec![1], vec![2]]
    );
    assert_eq!(
        tarjan_sccs(&[1, 2], &[l(1, 1, 2), l(2, 1, 1)], 1),
        vec![vec![1, 2]]
    );
    // The edge back is above the cap.
    assert_eq!(
        tarjan_sccs(&[1, 2], &[l(1, 1, 2), l(2, 2, 1)], 1),
        vec![vec![1], vec![2]]
    );
}

#[test]
fn tree_example_splits_at_the_root() {
    let (g, s) = common::tree_example();
    let sg = strategy_subgraph(&g, &s);
    let nodes: Vec<usize> = sg.reachable().iter().copied().collect();
    assert_eq!(
        tarjan_sccs(&nodes, &sg.reachable_edges(), 5),
        vec![vec![1, 2, 3], vec![4, 5, 6]]
    );
}

proptest! {
    #[test]
    fn sccs_partition_in_topological_order(n in 1usize..9, d in 1u32..6, seed: u64, cap in 1u32..6) {
        let g = gen_random(&GenSpec::new(n, d, seed));
        let nodes: Vec<usize> = g.nodes().collect();
        let comps = tarjan_sccs(&nodes, g.edges(), cap);
        prop_assert_eq!(&comps, &tarjan_sccs(&nodes, g.edges(), cap));

        let mut all: Vec<usize> = comps.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, nodes.clone());

        let index = |v: usize| comps.iter().position(|c| c.contains(&v)).unwrap();
        let capped: Vec<Letter> = g.edges().iter().copied().filter(|e| e.priority <= cap).collect();
        for e in &capped {
            prop_assert!(index(e.source) <= index(e.target), "edge {} goes back", e);
        }
        // Components are exactly mutual reachability.
        for &u in &nodes {
            let from_u = common::reachable(u, &capped);
            for &v in &from_u {
                let both = common::reachable(v, &capped).contains(&u);
                prop_assert_eq!(both, index(u) == index(v));
            }
        }
    }
}
