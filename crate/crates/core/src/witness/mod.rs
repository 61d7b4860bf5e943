//! Executable proof objects: game trees, witness runs with their `bad`
//! bound and the lift to the safety automaton, and words on which the
//! automata cannot be resolved without lookahead.

pub mod adversary;
pub mod bad;
pub mod lift;
pub mod run;
pub mod tree;

pub use adversary::{
    adversarial_word_vs_strategy, AdversaryError, AdversaryOutcome, FnStrategy, LowestOddRegister,
    NeverReset, SeededRandom, TransitionStrategy, Verdict,
};
pub use bad::{bad_of_finite, bad_of_priorities, Bad};
pub use lift::{lift_to_safety, rejected_even_word, LiftError};
pub use run::{
    bad_of_lasso_run, build_witness_run, build_witness_run_in, Role, Step, WitnessError,
    WitnessRun, DEFAULT_FOLD_BUDGET,
};
pub use tree::{build_game_tree, GameTree, TreeError, TreeNode};
