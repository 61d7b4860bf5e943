//! Zielonka's recursive algorithm on edge-priority games.
//!
//! For the subgame on a vertex set with edges capped at some priority, let
//! `p` be its largest edge priority and `α` the player who likes `p`. The
//! attractor `A` is where `α` can force taking a `p`-edge. The rest, with
//! `p`-edges removed, is solved recursively; if the opponent wins nowhere
//! there, `α` wins everywhere. Otherwise the opponent's attractor to their
//! winning part is removed and the remainder is solved again.

use crate::arena::{attractor, Arena};
use crate::game::{GameGraph, Player, Priority};

pub fn solve_zielonka(g: &GameGraph) -> Player {
    solve_arena(&Arena::from_game(g))
}

/// Winner from the arena's start vertex.
pub fn solve_arena(arena: &Arena) -> Player {
    let regions = winning_regions(arena);
    if regions[Player::Even.index()][arena.start()] {
        Player::Even
    } else {
        Player::Odd
    }
}

/// Winning regions `[even, odd]`; they partition the vertices.
pub fn winning_regions(arena: &Arena) -> [Vec<bool>; 2] {
    let all = vec![true; arena.len()];
    let regions = solve(arena, all, arena.max_priority());
    debug_assert!(regions[0].iter().zip(&regions[1]).all(|(a, b)| a ^ b));
    regions
}

fn solve(arena: &Arena, mut region: Vec<bool>, cap: Priority) -> [Vec<bool>; 2] {
    let n = arena.len();
    let mut won = [vec![false; n], vec![false; n]];
    loop {
        let top = (0..n)
            .filter(|&v| region[v])
            .flat_map(|v| arena.successors(v).iter())
            .filter(|&&(p, w)| p <= cap && region[w as usize])
            .map(|&(p, _)| p)
            .max();
        let Some(p) = top else {
            // Empty region: every vertex of a subgame keeps a successor.
            debug_assert!(region.iter().all(|&r| !r));
            return won;
        };
        let alpha = Player::of_priority(p);
        let opp = alpha.opponent();

        let none = vec![false; n];
        let forced = attractor(arena, alpha, &region, cap, &none, |q| q == p);
        let rest: Vec<bool> = (0..n).map(|v| region[v] && !forced[v]).collect();
        let sub = solve(arena, rest, p - 1);

        if !sub[opp.index()].iter().any(|&w| w) {
            for v in 0..n {
                won[alpha.index()][v] |= region[v];
            }
            return won;
        }
        let lost = attractor(arena, opp, &region, cap, &sub[opp.index()], |_| false);
        for v in 0..n {
            if lost[v] {
                won[opp.index()][v] = true;
                region[v] = false;
            }
        }
    }
}
