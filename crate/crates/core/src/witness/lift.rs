//! Following register runs with the safety automaton, and a word the safety
//! automaton rejects although it is won by Even.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::run::WitnessRun;
use crate::game::{LassoWord, Letter, Priority};
use crate::register::{AutomatonError, RegTransition};
use crate::safety::{SafetyAutomaton, SafetyState};
use crate::separator::Separator;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("safety run reached the rejecting state at step {step}")]
    Rejected { step: usize },
    #[error("safety run did not repeat within {budget} cycle copies")]
    Budget { budget: usize },
}

/// Feed the transition kinds of `run` to `S_{n,d}`, going around the cycle
/// until the safety state repeats at a cycle boundary. Returns the number of
/// cycle copies read.
pub fn lift_to_safety(
    n: usize,
    d: Priority,
    run: &WitnessRun,
    budget: usize,
) -> Result<usize, LiftError> {
    let s = SafetyAutomaton::new(n, d)?;
    let mut q = s.initial();
    let mut step = 0;
    let mut follow = |q: &mut SafetyState, t: &RegTransition| -> Result<(), LiftError> {
        debug_assert_eq!(
            q.registers(),
            Some(&t.source),
            "lift follows the register run"
        );
        let next = s.lift(q, t);
        if next.target.is_rej() {
            return Err(LiftError::Rejected { step });
        }
        *q = next.target;
        step += 1;
        Ok(())
    };
    for st in &run.prefix {
        follow(&mut q, &st.transition)?;
    }
    let mut seen = HashMap::new();
    for copy in 0..budget {
        if seen.insert(q.clone(), copy).is_some() {
            return Ok(copy);
        }
        for st in &run.cycle {
            follow(&mut q, &st.transition)?;
        }
    }
    Err(LiftError::Budget { budget })
}

/// `(1,1,1)^(k+1) (1,2,1)^ω`, where `k` is the most `(1,1,1)` letters any
/// run of `S_{n,d}` reads from the initial state without being rejected.
///
/// Requires `d >= 2`.
pub fn rejected_even_word(n: usize, d: Priority) -> Result<LassoWord, AutomatonError> {
    if d < 2 {
        return Err(AutomatonError::BadParameters { n, d });
    }
    let s = SafetyAutomaton::new(n, d)?;
    let one = Letter::new(1, 1, 1);
    let mut states = vec![s.initial()];
    let mut k = 0;
    loop {
        let mut next: HashSet<SafetyState> = HashSet::new();
        for q in &states {
            for (_, t) in s.successors(q, one) {
                if !t.is_rej() {
                    next.insert(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        k += 1;
        states = next.into_iter().collect();
    }
    Ok(LassoWord::new(vec![one; k + 1], vec![Letter::new(1, 2, 1)]).expect("nonempty cycle"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{limsup_winner, Player};
    use crate::safety::lasso_accepts_s;

    #[test]
    fn a4_smallest_case() {
        // From ⟨1⟩,⟨1,1⟩ every (1,1,1) transition is rejecting: k = 0.
        let w = rejected_even_word(1, 2).unwrap();
        assert_eq!(w.prefix.len(), 1);
        assert_eq!(limsup_winner(&w), Player::Even);
        assert!(!lasso_accepts_s(1, 2, &w).unwrap());
    }
}
