mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use regsep::baselines::{find_winning_strategy, DEFAULT_STRATEGY_BOUND};
use regsep::register::{ResetChoice, TransitionKind};
use regsep::witness::{
    adversarial_word_vs_strategy, bad_of_finite, bad_of_lasso_run, bad_of_priorities,
    build_game_tree, build_witness_run, lift_to_safety, rejected_even_word, AdversaryError, Bad,
    FnStrategy, GameTree, LowestOddRegister, NeverReset, SeededRandom, TreeError, Verdict,
    DEFAULT_FOLD_BUDGET,
};
use regsep::{
    gen_random, lasso_accepts_s, limsup_winner, parse_game, rn, sample_plays, strategy_subgraph,
    GenSpec, LassoWord, Letter, Node, Player, PositionalStrategy, Priority, RegisterState,
    SafetyAutomaton, SafetyState,
};

/// Largest count of one odd priority over every infix with nothing higher.
fn bad_oracle(seq: &[Priority]) -> usize {
    let mut best = 0;
    for i in 0..seq.len() {
        for j in i..seq.len() {
            let infix = &seq[i..=j];
            let top = *infix.iter().max().unwrap();
            if top % 2 == 1 {
                best = best.max(infix.iter().filter(|&&p| p == top).count());
            }
        }
    }
    best
}

#[test]
fn bad_examples() {
    assert_eq!(bad_of_priorities(&[], &[3]), Bad::Infinite);
    assert_eq!(bad_of_priorities(&[4, 3, 3], &[2]), Bad::Finite(2));
    assert_eq!(bad_of_priorities(&[2, 4], &[6, 2]), Bad::Finite(0));
    assert_eq!(bad_of_priorities(&[1, 1, 1], &[2]), Bad::Finite(3));
    assert_eq!(bad_of_finite([3, 1, 3, 5, 3]), 2);
    assert!(Bad::Finite(usize::MAX) < Bad::Infinite);
}

proptest! {
    #[test]
    fn bad_matches_long_unrolling(
        prefix in proptest::collection::vec(1u32..8, 0..6),
        cycle in proptest::collection::vec(1u32..8, 1..5),
    ) {
        let top = *cycle.iter().max().unwrap();
        let got = bad_of_priorities(&prefix, &cycle);
        if top % 2 == 1 {
            prop_assert_eq!(got, Bad::Infinite);
        } else {
            let mut seq = prefix.clone();
            for _ in 0..10 {
                seq.extend(&cycle);
            }
            prop_assert_eq!(got, Bad::Finite(bad_oracle(&seq)));
        }
    }

    #[test]
    fn finite_bad_matches_infix_search(seq in proptest::collection::vec(1u32..8, 0..12)) {
        prop_assert_eq!(bad_of_finite(seq.iter().copied()), bad_oracle(&seq));
    }
}

fn sets(tree: &GameTree, ids: &[usize]) -> Vec<Vec<Node>> {
    ids.iter().map(|&c| tree.node(c).set.clone()).collect()
}

#[test]
fn tree_example_shape() {
    let (g, s) = common::tree_example();
    let tree = build_game_tree(&strategy_subgraph(&g, &s)).unwrap();
    let root = tree.node(GameTree::ROOT);
    assert_eq!((root.level, root.set.clone()), (3, vec![1, 2, 3, 4, 5, 6]));
    assert_eq!(
        sets(&tree, &root.children),
        vec![vec![1, 2, 3], vec![4, 5, 6]]
    );
    let (s1, s2) = (root.children[0], root.children[1]);
    assert_eq!(
        sets(&tree, &tree.node(s1).children),
        vec![vec![2], vec![3], vec![1]]
    );
    assert_eq!(
        sets(&tree, &tree.node(s2).children),
        vec![vec![4, 5], vec![6]]
    );
    let s45 = tree.node(s2).children[0];
    assert_eq!(
        sets(&tree, &tree.node(s45).children),
        vec![vec![4], vec![5]]
    );
    assert_eq!(tree.len(), 14);
    assert_eq!(tree.fst(GameTree::ROOT, 1), &[2]);
    assert_eq!(tree.fst(GameTree::ROOT, 2), &[1, 2, 3]);
    assert_eq!(tree.child_containing(GameTree::ROOT, 5), Some(s2));
    assert_eq!(tree.at_level(1, 5), Some(s45));
    assert_eq!(tree.node(s45).index_in_parent, 0);
}

#[test]
fn two_node_tree() {
    let g = parse_game("parity 2; start 1; 1 even 1:2->2; 2 odd 2:1->1;").unwrap();
    let s = PositionalStrategy::new(&g, Player::Even, [(1, Letter::new(1, 2, 2))].into()).unwrap();
    let tree = build_game_tree(&strategy_subgraph(&g, &s)).unwrap();
    let root = tree.node(GameTree::ROOT);
    assert_eq!((root.level, root.set.clone()), (1, vec![1, 2]));
    // Only 2 -> 1 survives the cap, so {2} comes first.
    assert_eq!(sets(&tree, &root.children), vec![vec![2], vec![1]]);
    assert_eq!(tree.len(), 3);
}

#[test]
fn trees_need_winning_even_strategies() {
    let g = parse_game("parity 1; start 1; 1 odd 1:3->1, 1:2->1;").unwrap();
    let odd = PositionalStrategy::new(&g, Player::Odd, [(1, Letter::new(1, 3, 1))].into()).unwrap();
    assert_eq!(
        build_game_tree(&strategy_subgraph(&g, &odd)),
        Err(TreeError::NotEven(Player::Odd))
    );
    let losing = parse_game("parity 1; start 1; 1 even 1:3->1;").unwrap();
    let s =
        PositionalStrategy::new(&losing, Player::Even, [(1, Letter::new(1, 3, 1))].into()).unwrap();
    assert!(matches!(
        build_game_tree(&strategy_subgraph(&losing, &s)),
        Err(TreeError::OddEdgeInComponent { .. })
    ));
}

/// Random games with a brute-forced winning Even strategy.
fn winning_strategies(count: usize) -> Vec<(regsep::GameGraph, PositionalStrategy)> {
    (0..)
        .map(|seed| {
            gen_random(&GenSpec::new(
                1 + seed as usize % 7,
                1 + seed as u32 % 6,
                77 + seed,
            ))
        })
        .filter_map(|g| {
            let s = find_winning_strategy(&g, Player::Even, DEFAULT_STRATEGY_BOUND).ok()??;
            Some((g, s))
        })
        .take(count)
        .collect()
}

#[test]
fn tree_invariants_on_random_strategies() {
    for (g, s) in winning_strategies(120) {
        let sg = strategy_subgraph(&g, &s);
        let tree = build_game_tree(&sg).unwrap();
        let reach: Vec<Node> = sg.reachable().iter().copied().collect();
        let edges = sg.reachable_edges();
        let root = tree.node(GameTree::ROOT);
        assert_eq!(root.level, g.d().div_ceil(2));
        assert_eq!(root.set, reach);
        for (id, node) in tree.nodes().iter().enumerate() {
            if node.level == 0 {
                assert!(node.children.is_empty());
                continue;
            }
            let cap = 2 * node.level - 1;
            let inner: Vec<Letter> = edges
                .iter()
                .copied()
                .filter(|e| {
                    e.priority <= cap
                        && node.set.contains(&e.source)
                        && node.set.contains(&e.target)
                })
                .collect();
            // Children are the mutual-reachability classes, in topological order.
            let mut all = Vec::new();
            for (i, &c) in node.children.iter().enumerate() {
                let child = tree.node(c);
                assert_eq!(
                    (child.level, child.parent, child.index_in_parent),
                    (node.level - 1, Some(id), i)
                );
                for &u in &child.set {
                    for &v in &node.set {
                        let mutual = common::reachable(u, &inner).contains(&v)
                            && common::reachable(v, &inner).contains(&u);
                        assert_eq!(mutual, child.set.contains(&v));
                    }
                }
                all.extend(child.set.iter().copied());
            }
            let index = |v: Node| {
                node.children
                    .iter()
                    .position(|&c| tree.node(c).set.contains(&v))
                    .unwrap()
            };
            for e in &inner {
                assert!(index(e.source) <= index(e.target));
            }
            all.sort_unstable();
            assert_eq!(all, node.set);
            // No odd edge inside a component at this level.
            for &c in &node.children {
                let set = &tree.node(c).set;
                assert!(inner
                    .iter()
                    .filter(|e| set.contains(&e.source) && set.contains(&e.target))
                    .all(|e| e.priority % 2 == 0 || e.priority < cap));
            }
        }
    }
}

#[test]
fn witness_runs_on_the_tree_example() {
    let (g, s) = common::tree_example();
    let sg = strategy_subgraph(&g, &s);
    for w in sample_plays(&sg, 40, 12, 5) {
        let run = build_witness_run(&sg, &w).unwrap();
        assert!(run.is_accepting(), "{}", run.render());
        let bad = bad_of_lasso_run(&run);
        assert!(bad <= Bad::Finite(5), "bad {bad} on {w}");
        assert!(lift_to_safety(g.n(), g.d(), &run, DEFAULT_FOLD_BUDGET).is_ok());
        // The run reads the play: prefixes agree and each step continues the last.
        let letters: Vec<Letter> = run.steps().map(|s| s.transition.letter).collect();
        assert_eq!(&letters[..w.prefix.len()], w.prefix.as_slice());
        let steps: Vec<_> = run.steps().collect();
        for pair in steps.windows(2) {
            assert_eq!(pair[0].transition.target, pair[1].transition.source);
        }
        assert_eq!(
            run.cycle.last().unwrap().transition.target,
            run.cycle[0].transition.source
        );
    }
}

#[test]
fn witness_runs_on_random_strategies() {
    let mut runs = 0;
    for (i, (g, s)) in winning_strategies(80).into_iter().enumerate() {
        let sg = strategy_subgraph(&g, &s);
        for w in sample_plays(&sg, 4, 10, i as u64) {
            assert_eq!(limsup_winner(&w), Player::Even);
            let run = build_witness_run(&sg, &w).unwrap();
            assert!(run.is_accepting());
            let v_tau = sg.reachable().len();
            assert!(bad_of_lasso_run(&run) <= Bad::Finite(v_tau - 1));
            assert!(lift_to_safety(g.n(), g.d(), &run, DEFAULT_FOLD_BUDGET).is_ok());
            runs += 1;
        }
    }
    assert!(runs >= 200);
}

#[test]
fn single_even_loop_resets_register_one() {
    let g = parse_game("parity 1; start 1; 1 even 1:2->1;").unwrap();
    let s = PositionalStrategy::new(&g, Player::Even, [(1, Letter::new(1, 2, 1))].into()).unwrap();
    let w = LassoWord::new(vec![], vec![Letter::new(1, 2, 1)]).unwrap();
    let run = build_witness_run(&strategy_subgraph(&g, &s), &w).unwrap();
    assert!(run
        .cycle
        .iter()
        .all(|s| s.transition.kind == TransitionKind::EvenReset(1)));
    assert_eq!(bad_of_lasso_run(&run), Bad::Finite(0));
}

#[test]
fn plays_off_the_strategy_are_refused() {
    let (g, s) = common::tree_example();
    let w = LassoWord::new(vec![], vec![Letter::new(1, 5, 1)]).unwrap();
    assert!(build_witness_run(&strategy_subgraph(&g, &s), &w).is_err());
}

#[test]
fn adversary_defeats_positional_strategies() {
    let out = adversarial_word_vs_strategy(2, 6, &mut NeverReset, 1000).unwrap();
    // (1,2,1)^ω, though the lasso may carry a prefix.
    assert!(out.word.letters().all(|l| *l == Letter::new(1, 2, 1)));
    assert!(!out.run_accepting);
    assert_eq!(out.word_winner, Player::Even);
    for n in [2, 4] {
        let d = 2 * rn(n) as Priority + 2;
        for o in [
            adversarial_word_vs_strategy(n, d, &mut LowestOddRegister, 1_000_000).unwrap(),
            adversarial_word_vs_strategy(n, d, &mut SeededRandom { seed: 9 }, 1_000_000).unwrap(),
        ] {
            assert_eq!(o.verdict, Verdict::StrategyFails, "{}", o.word);
            assert_eq!(limsup_winner(&o.word), Player::Even);
            let top = o.run_cycle.iter().map(|t| t.priority).max().unwrap();
            assert_eq!(top % 2 == 0, o.run_accepting);
        }
    }
}

#[test]
fn adversary_needs_room_and_positional_strategies() {
    assert!(matches!(
        adversarial_word_vs_strategy(4, 6, &mut NeverReset, 10),
        Err(AdversaryError::SmallD { need: 8, .. })
    ));
    let mut s = FnStrategy(|read: &[Letter], _: &RegisterState, _: Letter| {
        if read.len().is_multiple_of(2) {
            ResetChoice::NonReset
        } else {
            ResetChoice::Reset(1)
        }
    });
    assert_eq!(
        adversarial_word_vs_strategy(2, 6, &mut s, 200),
        Err(AdversaryError::Budget { steps: 200 })
    );
}

/// Longest run of `(1,1,1)` letters from `q` that avoids `Rej`, by
/// memoized depth-first search.
fn longest_ones(
    s: &SafetyAutomaton,
    q: &SafetyState,
    memo: &mut HashMap<SafetyState, usize>,
) -> usize {
    if let Some(&k) = memo.get(q) {
        return k;
    }
    let best = s
        .transitions(q, Letter::new(1, 1, 1))
        .into_iter()
        .filter(|t| !t.target.is_rej())
        .map(|t| 1 + longest_ones(s, &t.target, memo))
        .max()
        .unwrap_or(0);
    memo.insert(q.clone(), best);
    best
}

#[test]
fn rejected_even_words() {
    for (n, k) in [(1, 0), (2, 7)] {
        for d in [2, 4] {
            let s = SafetyAutomaton::new(n, d).unwrap();
            assert_eq!(longest_ones(&s, &s.initial(), &mut HashMap::new()), k);
            let w = rejected_even_word(n, d).unwrap();
            assert_eq!(w.prefix, vec![Letter::new(1, 1, 1); k + 1]);
            assert_eq!(w.cycle, vec![Letter::new(1, 2, 1)]);
            assert_eq!(limsup_winner(&w), Player::Even);
            assert_eq!(lasso_accepts_s(n, d, &w), Ok(false));
        }
    }
    assert!(rejected_even_word(1, 1).is_err());
}
