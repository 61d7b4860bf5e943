//! Winner by enumerating positional strategies. Sound because parity games
//! are positionally determined.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::game::{
    check_strategy_winning, strategy_subgraph, GameGraph, Node, Player, PositionalStrategy,
};

pub const DEFAULT_STRATEGY_BOUND: u128 = 1_000_000;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("{count} positional strategies exceed the enumeration bound {bound}")]
pub struct BruteError {
    pub count: u128,
    pub bound: u128,
}

/// Number of positional strategies of `player`.
pub fn strategy_count(g: &GameGraph, player: Player) -> u128 {
    g.nodes()
        .filter(|&v| g.owner(v) == player)
        .map(|v| g.out_edges(v).len() as u128)
        .try_fold(1u128, |acc, k| acc.checked_mul(k))
        .unwrap_or(u128::MAX)
}

/// Calls `visit` on every positional strategy of `player` until it returns `true`.
pub fn for_each_strategy(
    g: &GameGraph,
    player: Player,
    bound: u128,
    mut visit: impl FnMut(PositionalStrategy) -> bool,
) -> Result<bool, BruteError> {
    let count = strategy_count(g, player);
    if count > bound {
        return Err(BruteError { count, bound });
    }
    let owned: Vec<Node> = g.nodes().filter(|&v| g.owner(v) == player).collect();
    let mut digits = vec![0usize; owned.len()];
    loop {
        let choice: BTreeMap<Node, _> = owned
            .iter()
            .zip(&digits)
            .map(|(&v, &i)| (v, g.out_edges(v)[i]))
            .collect();
        let strategy = PositionalStrategy::new(g, player, choice).expect("choices are game edges");
        if visit(strategy) {
            return Ok(true);
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == owned.len() {
                return Ok(false);
            }
            digits[i] += 1;
            if digits[i] < g.out_edges(owned[i]).len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Some positional strategy of `player` that wins from the start, if any.
pub fn find_winning_strategy(
    g: &GameGraph,
    player: Player,
    bound: u128,
) -> Result<Option<PositionalStrategy>, BruteError> {
    let mut found = None;
    for_each_strategy(g, player, bound, |s| {
        if check_strategy_winning(&strategy_subgraph(g, &s)) {
            found = Some(s);
            true
        } else {
            false
        }
    })?;
    Ok(found)
}

/// Even wins iff one of her positional strategies is winning.
pub fn brute_force_winner(g: &GameGraph, bound: u128) -> Result<Player, BruteError> {
    Ok(match find_winning_strategy(g, Player::Even, bound)? {
        Some(_) => Player::Even,
        None => Player::Odd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_game;

    #[test]
    fn one_node_even_loop() {
        let g = parse_game("parity 1; start 1; 1 even 1:2->1;").unwrap();
        assert_eq!(
            brute_force_winner(&g, DEFAULT_STRATEGY_BOUND),
            Ok(Player::Even)
        );
    }

    #[test]
    fn loser_has_no_strategy_and_winner_has_one() {
        let g =
            parse_game("parity 2; start 1; 1 even 1:1->2, 1:3->1; 2 odd 2:2->1, 2:1->2;").unwrap();
        let even = find_winning_strategy(&g, Player::Even, DEFAULT_STRATEGY_BOUND).unwrap();
        let odd = find_winning_strategy(&g, Player::Odd, DEFAULT_STRATEGY_BOUND).unwrap();
        assert!(even.is_none() ^ odd.is_none());
    }

    #[test]
    fn bound_exceeded() {
        let g =
            parse_game("parity 2; start 1; 1 even 1:1->2, 1:2->1; 2 even 2:1->1, 2:2->2;").unwrap();
        assert_eq!(strategy_count(&g, Player::Even), 4);
        assert_eq!(
            brute_force_winner(&g, 3),
            Err(BruteError { count: 4, bound: 3 })
        );
    }
}
