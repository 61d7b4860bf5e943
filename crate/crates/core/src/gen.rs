//! Random and exhaustive game generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{Edge, GameGraph, Letter, Node, Player, Priority};

/// Parameters of a random game.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    /// Largest priority an edge may get.
    pub d: Priority,
    /// Expected out-degree; every node gets at least one edge.
    pub density: f64,
    /// Probability that a node is owned by Even.
    pub even_bias: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, d: Priority, seed: u64) -> Self {
        GenSpec {
            n,
            d,
            density: 2.0,
            even_bias: 0.5,
            seed,
        }
    }
}

/// A random game with start node 1. Deterministic in its parameters.
///
/// Panics if `n` or `d` is zero.
pub fn gen_random(spec: &GenSpec) -> GameGraph {
    assert!(
        spec.n >= 1 && spec.d >= 1,
        "games need a node and a priority"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let owners: Vec<Player> = (0..spec.n)
        .map(|_| {
            if rng.gen_bool(spec.even_bias.clamp(0.0, 1.0)) {
                Player::Even
            } else {
                Player::Odd
            }
        })
        .collect();
    let density = spec.density.max(1.0);
    let base = density.floor() as usize;
    let frac = density - base as f64;
    let mut edges = Vec::new();
    for u in 1..=spec.n {
        let degree = base + usize::from(rng.gen_bool(frac));
        for _ in 0..degree {
            let v = rng.gen_range(1..=spec.n);
            let p = rng.gen_range(1..=spec.d);
            edges.push(Letter::new(u, p, v));
        }
    }
    GameGraph::new(owners, 1, edges).expect("every node has an edge")
}

/// Every game on `n` nodes with start 1, priorities in `1..=d`, and between
/// one and `max_out` outgoing edges per node, for both owners of each node.
pub fn all_small_games(n: usize, d: Priority, max_out: usize) -> Vec<GameGraph> {
    let letters_from = |u: Node| -> Vec<Edge> {
        (1..=d)
            .flat_map(|p| (1..=n).map(move |v| Letter::new(u, p, v)))
            .collect()
    };
    // Per node: every (owner, nonempty edge set of size <= max_out).
    let choices: Vec<Vec<(Player, Vec<Edge>)>> = (1..=n)
        .map(|u| {
            let letters = letters_from(u);
            let sets = subsets_up_to(&letters, max_out);
            [Player::Even, Player::Odd]
                .into_iter()
                .flat_map(|o| sets.iter().map(move |s| (o, s.clone())))
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let owners = digits.iter().zip(&choices).map(|(&i, c)| c[i].0).collect();
        let edges: Vec<Edge> = digits
            .iter()
            .zip(&choices)
            .flat_map(|(&i, c)| c[i].1.iter().copied())
            .collect();
        out.push(GameGraph::new(owners, 1, edges).expect("nonempty edge sets"));
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            digits[i] += 1;
            if digits[i] < choices[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn subsets_up_to<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for item in items {
        let extended: Vec<Vec<T>> = out
            .iter()
            .filter(|s| s.len() < max)
            .map(|s| {
                let mut s = s.clone();
                s.push(item.clone());
                s
            })
            .collect();
        out.extend(extended);
    }
    out.retain(|s| !s.is_empty());
    out
}
