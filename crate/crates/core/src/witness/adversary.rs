//! Words built against a transition strategy of the register automaton, so
//! that the word is won by Even but the strategy's run rejects it.
//!
//! Starting with `(1,2,1)`, each transition the strategy picks decides the
//! next letter: after a non-reset `(1,2,1)`, after an odd `k`-reset
//! `(1,2k+2,1)`, after an even `k`-reset `(1,2k+1,1)`.

use std::collections::HashMap;

use thiserror::Error;

use crate::game::{limsup_winner, LassoWord, Letter, Player, Priority};
use crate::register::{
    rn, AutomatonError, RegTransition, RegisterAutomaton, RegisterState, ResetChoice,
    TransitionKind,
};

/// A resolver of the register automaton's nondeterminism.
pub trait TransitionStrategy {
    /// Choose the transition reading `next` from `state`, after `read`.
    fn choose(&mut self, read: &[Letter], state: &RegisterState, next: Letter) -> ResetChoice;

    /// Whether `choose` depends only on `state` and `next`. Only positional
    /// strategies can be driven to a cycle.
    fn is_positional(&self) -> bool {
        false
    }
}

/// A strategy given as a closure; treated as history dependent.
pub struct FnStrategy<F>(pub F);

impl<F> TransitionStrategy for FnStrategy<F>
where
    F: FnMut(&[Letter], &RegisterState, Letter) -> ResetChoice,
{
    fn choose(&mut self, read: &[Letter], state: &RegisterState, next: Letter) -> ResetChoice {
        (self.0)(read, state, next)
    }
}

/// Always the non-reset transition.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeverReset;

impl TransitionStrategy for NeverReset {
    fn choose(&mut self, _: &[Letter], _: &RegisterState, _: Letter) -> ResetChoice {
        ResetChoice::NonReset
    }

    fn is_positional(&self) -> bool {
        true
    }
}

/// Reset the lowest register holding an odd value above 1 after the update,
/// or take the non-reset transition if there is none.
#[derive(Clone, Copy, Debug, Default)]
pub struct LowestOddRegister;

impl TransitionStrategy for LowestOddRegister {
    fn choose(&mut self, _: &[Letter], state: &RegisterState, next: Letter) -> ResetChoice {
        let updated = state.update(next.priority);
        (1..=updated.len())
            .find(|&k| {
                let v = updated.register(k);
                v % 2 == 1 && v > 1
            })
            .map_or(ResetChoice::NonReset, ResetChoice::Reset)
    }

    fn is_positional(&self) -> bool {
        true
    }
}

/// A fixed pseudo-random function of `(seed, state, letter)`.
#[derive(Clone, Copy, Debug)]
pub struct SeededRandom {
    pub seed: u64,
}

impl TransitionStrategy for SeededRandom {
    fn choose(&mut self, _: &[Letter], state: &RegisterState, next: Letter) -> ResetChoice {
        let h = state
            .values()
            .iter()
            .map(|&v| v as u64)
            .chain([next.source as u64, next.priority as u64, next.target as u64])
            .fold(splitmix(self.seed), |acc, x| splitmix(acc ^ x));
        match (h % (state.len() as u64 + 1)) as usize {
            0 => ResetChoice::NonReset,
            k => ResetChoice::Reset(k),
        }
    }

    fn is_positional(&self) -> bool {
        true
    }
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The word is won by Even and the strategy's run rejects it.
    StrategyFails,
    /// The run's verdict agrees with the word's winner, which the
    /// construction rules out for a correct automaton.
    AutomatonBug,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryOutcome {
    pub word: LassoWord,
    pub run_prefix: Vec<RegTransition>,
    pub run_cycle: Vec<RegTransition>,
    pub run_accepting: bool,
    pub word_winner: Player,
    pub verdict: Verdict,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdversaryError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("the construction needs d >= 2 rn(n) + 2 = {need}, got {d}")]
    SmallD { d: Priority, need: Priority },
    #[error("strategy chose register {register}, but there are {registers}")]
    NoSuchRegister { register: usize, registers: usize },
    #[error("no cycle within {steps} steps")]
    Budget { steps: usize },
}

fn next_letter(kind: TransitionKind) -> Letter {
    let p = match kind {
        TransitionKind::NonReset => 2,
        TransitionKind::OddReset(k) => 2 * k as Priority + 2,
        TransitionKind::EvenReset(k) => 2 * k as Priority + 1,
    };
    Letter::new(1, p, 1)
}

/// Drive `strategy` for at most `steps` letters and fold the result into a
/// lasso once `(state, next letter)` repeats.
pub fn adversarial_word_vs_strategy(
    n: usize,
    d: Priority,
    strategy: &mut dyn TransitionStrategy,
    steps: usize,
) -> Result<AdversaryOutcome, AdversaryError> {
    let need = 2 * rn(n) as Priority + 2;
    if d < need {
        return Err(AdversaryError::SmallD { d, need });
    }
    let a = RegisterAutomaton::new(n, d)?;
    let mut state = a.initial();
    let mut next = Letter::new(1, 2, 1);
    let mut read: Vec<Letter> = Vec::new();
    let mut run: Vec<RegTransition> = Vec::new();
    let mut seen: HashMap<(RegisterState, Letter), usize> = HashMap::new();
    for _ in 0..steps {
        if strategy.is_positional() {
            if let Some(&at) = seen.get(&(state.clone(), next)) {
                let run_cycle = run.split_off(at);
                let cycle = read.split_off(at);
                let word = LassoWord::new(read, cycle).expect("a repeat spans at least one step");
                let run_accepting = run_cycle
                    .iter()
                    .map(|t| t.priority)
                    .max()
                    .is_some_and(|p| p % 2 == 0);
                let word_winner = limsup_winner(&word);
                let verdict = if !run_accepting && word_winner == Player::Even {
                    Verdict::StrategyFails
                } else {
                    Verdict::AutomatonBug
                };
                return Ok(AdversaryOutcome {
                    word,
                    run_prefix: run,
                    run_cycle,
                    run_accepting,
                    word_winner,
                    verdict,
                });
            }
            seen.insert((state.clone(), next), run.len());
        }
        let choice = strategy.choose(&read, &state, next);
        if let ResetChoice::Reset(k) = choice {
            if k == 0 || k > a.registers() {
                return Err(AdversaryError::NoSuchRegister {
                    register: k,
                    registers: a.registers(),
                });
            }
        }
        let t = a.transition(&state, next, choice);
        read.push(next);
        state = t.target.clone();
        next = next_letter(t.kind);
        run.push(t);
    }
    Err(AdversaryError::Budget { steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn never_reset_reads_twos_forever() {
        let out = adversarial_word_vs_strategy(2, 6, &mut NeverReset, 100).unwrap();
        assert!(out.word.letters().all(|l| *l == Letter::new(1, 2, 1)));
        assert_eq!(out.verdict, Verdict::StrategyFails);
    }

    struct ResetOne;

    impl TransitionStrategy for ResetOne {
        fn choose(&mut self, _: &[Letter], _: &RegisterState, _: Letter) -> ResetChoice {
            ResetChoice::Reset(1)
        }

        fn is_positional(&self) -> bool {
            true
        }
    }

    #[test]
    fn reset_one_always_fails() {
        for n in [2, 4] {
            let d = 2 * rn(n) as Priority + 2;
            let out = adversarial_word_vs_strategy(n, d, &mut ResetOne, 1000).unwrap();
            assert_eq!(out.verdict, Verdict::StrategyFails, "{}", out.word);
        }
    }

    #[test]
    fn closures_stop_at_the_budget() {
        let mut s = FnStrategy(|_: &[Letter], _: &RegisterState, _: Letter| ResetChoice::Reset(1));
        assert_eq!(
            adversarial_word_vs_strategy(2, 6, &mut s, 50),
            Err(AdversaryError::Budget { steps: 50 })
        );
    }

    #[test]
    fn small_d_is_rejected() {
        assert!(matches!(
            adversarial_word_vs_strategy(2, 4, &mut NeverReset, 10),
            Err(AdversaryError::SmallD { need: 6, .. })
        ));
    }
}
