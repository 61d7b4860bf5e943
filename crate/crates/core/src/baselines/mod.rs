//! Classical solvers used as ground truth for the product-based solvers.

pub mod brute;
pub mod spm;
pub mod zielonka;

pub use brute::{
    brute_force_winner, find_winning_strategy, for_each_strategy, strategy_count, BruteError,
    DEFAULT_STRATEGY_BOUND,
};
pub use spm::solve_spm;
pub use zielonka::solve_zielonka;
