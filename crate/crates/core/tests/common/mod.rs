#![allow(dead_code)]

use std::collections::BTreeMap;

use regsep::{parse_game, GameGraph, Letter, Node, Player, PositionalStrategy, Priority};

/// A six-node winning Even strategy whose game tree has root `(3, V)` and
/// two level-2 children `{1,2,3}` and `{4,5,6}`, with odd edges only going
/// from left to right. The Even choices at 1 and 6 drop an extra edge each.
pub const TREE_EXAMPLE: &str = "
parity 6;
start 1;
1 even 1:4->2, 1:5->1;
2 even 2:3->3;
3 odd 3:2->1, 3:5->4;
4 even 4:2->5;
5 odd 5:1->6, 5:2->4, 5:6->1;
6 even 6:4->4, 6:1->6;
";

pub fn tree_example() -> (GameGraph, PositionalStrategy) {
    let g = parse_game(TREE_EXAMPLE).unwrap();
    let choice = [
        (1, (1, 4, 2)),
        (2, (2, 3, 3)),
        (4, (4, 2, 5)),
        (6, (6, 4, 4)),
    ]
    .into_iter()
    .map(|(v, (a, p, b))| (v, Letter::new(a, p, b)))
    .collect();
    let s = PositionalStrategy::new(&g, Player::Even, choice).unwrap();
    (g, s)
}

/// Largest priority of every simple cycle among `edges`, by depth-first
/// search from each node through larger nodes only.
pub fn simple_cycle_tops(nodes: &[Node], edges: &[Letter]) -> Vec<Priority> {
    fn dfs(
        start: Node,
        at: Node,
        top: Priority,
        on_path: &mut Vec<Node>,
        edges: &[Letter],
        allowed: &[Node],
        out: &mut Vec<Priority>,
    ) {
        for e in edges.iter().filter(|e| e.source == at) {
            let top = top.max(e.priority);
            if e.target == start {
                out.push(top);
            } else if e.target > start
                && allowed.contains(&e.target)
                && !on_path.contains(&e.target)
            {
                on_path.push(e.target);
                dfs(start, e.target, top, on_path, edges, allowed, out);
                on_path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for &s in nodes {
        dfs(s, s, 0, &mut vec![s], edges, nodes, &mut out);
    }
    out
}

/// Nodes reachable from `start` along `edges`.
pub fn reachable(start: Node, edges: &[Letter]) -> Vec<Node> {
    let mut seen = vec![start];
    let mut i = 0;
    while i < seen.len() {
        let v = seen[i];
        for e in edges.iter().filter(|e| e.source == v) {
            if !seen.contains(&e.target) {
                seen.push(e.target);
            }
        }
        i += 1;
    }
    seen.sort_unstable();
    seen
}

/// Whether `player` wins from the start by fixing one edge per owned node,
/// by enumerating every such choice and every simple cycle it leaves.
pub fn positional_winner_oracle(g: &GameGraph) -> Player {
    let wins = |player: Player| {
        let owned: Vec<Node> = g.nodes().filter(|&v| g.owner(v) == player).collect();
        let mut digits = vec![0usize; owned.len()];
        loop {
            let chosen: BTreeMap<Node, Letter> = owned
                .iter()
                .zip(&digits)
                .map(|(&v, &i)| (v, g.out_edges(v)[i]))
                .collect();
            let edges: Vec<Letter> = g
                .edges()
                .iter()
                .copied()
                .filter(|e| chosen.get(&e.source).is_none_or(|c| c == e))
                .collect();
            let live = reachable(g.start(), &edges);
            let kept: Vec<Letter> = edges
                .iter()
                .copied()
                .filter(|e| live.contains(&e.source))
                .collect();
            if simple_cycle_tops(&live, &kept)
                .iter()
                .all(|&p| Player::of_priority(p) == player)
            {
                return true;
            }
            let mut i = 0;
            loop {
                if i == owned.len() {
                    return false;
                }
                digits[i] += 1;
                if digits[i] < g.out_edges(owned[i]).len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    };
    let even = wins(Player::Even);
    assert_ne!(
        even,
        wins(Player::Odd),
        "exactly one player wins positionally"
    );
    if even {
        Player::Even
    } else {
        Player::Odd
    }
}

pub fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `1 + floor(log2 n)` by repeated halving.
pub fn register_count(n: usize) -> usize {
    let mut r = 0;
    let mut m = n;
    while m > 0 {
        r += 1;
        m /= 2;
    }
    r
}
