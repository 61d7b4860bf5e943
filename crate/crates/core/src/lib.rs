//! Solving parity games through register-based separating automata.
//!
//! A parity game is turned into a product with a nondeterministic automaton
//! that accepts every play won by a positional Even strategy and rejects
//! every play won by Odd. With the safety version of the automaton the
//! product is a safety game, solved by one backward attractor computation.
//!
//! The crate also carries the classical solvers used as oracles, and
//! executable versions of the correctness arguments: game trees, witness
//! runs that stay within a bounded number of odd emissions, and the
//! counterexamples showing the automata are not good for games.

pub mod arena;
pub mod baselines;
pub mod format;
pub mod game;
pub mod gen;
pub mod product;
pub mod register;
pub mod safety;
pub mod scc;
pub mod separator;
pub mod suites;
pub mod witness;

pub use baselines::{brute_force_winner, solve_spm, solve_zielonka};
pub use format::{parse_game, render_game, ParseError};
pub use game::{
    check_strategy_winning, limsup_winner, sample_plays, strategy_subgraph, Edge, GameError,
    GameGraph, LassoWord, Letter, Node, Player, PositionalStrategy, Priority, StrategySubgraph,
};
pub use gen::{gen_random, GenSpec};
pub use product::{
    build_product, solve_with_registers, solve_with_safety, ProductError, ProductSolve, DEFAULT_CAP,
};
pub use register::{count_states_r, lasso_accepts_r, rn, RegisterAutomaton, RegisterState};
pub use safety::{count_states_s, lasso_accepts_s, SafetyAutomaton, SafetyState};
