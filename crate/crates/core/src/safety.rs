//! The safety automaton: register states extended with one counter per
//! odd output priority of the register automaton, plus a rejecting sink.
//!
//! Counter `c_k` (for `k = 0..=rn(n)`) counts down emissions of priority
//! `2k + 1` (priority 1 for `k = 0`) that happen without a larger emission
//! in between. Reaching zero sends the run to `Rej`.

use std::fmt;

use crate::game::{LassoWord, Letter, Priority};
use crate::register::{
    self, AutomatonError, RegTransition, RegisterAutomaton, RegisterState, SizeOverflow,
    TransitionKind,
};
use crate::scc;
use crate::separator::{self, Separator};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SafetyState {
    /// Registers and counters; `counters[k]` is `c_k`.
    Live {
        registers: RegisterState,
        counters: Box<[usize]>,
    },
    Rej,
}

impl SafetyState {
    pub fn is_rej(&self) -> bool {
        matches!(self, SafetyState::Rej)
    }

    pub fn registers(&self) -> Option<&RegisterState> {
        match self {
            SafetyState::Live { registers, .. } => Some(registers),
            SafetyState::Rej => None,
        }
    }

    pub fn counters(&self) -> Option<&[usize]> {
        match self {
            SafetyState::Live { counters, .. } => Some(counters),
            SafetyState::Rej => None,
        }
    }

    /// Build a live state, counters listed highest first as `⟨c_rn, ..., c_0⟩`.
    pub fn live(registers: RegisterState, counters_high_to_low: &[usize]) -> Self {
        SafetyState::Live {
            registers,
            counters: counters_high_to_low.iter().rev().copied().collect(),
        }
    }
}

impl fmt::Display for SafetyState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SafetyState::Rej => write!(f, "rej"),
            SafetyState::Live {
                registers,
                counters,
            } => {
                write!(f, "({registers}, ⟨")?;
                for (i, c) in counters.iter().rev().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "⟩)")
            }
        }
    }
}

impl fmt::Debug for SafetyState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetyTransition {
    /// 2 for live targets, 1 for transitions into (or inside) `Rej`.
    pub priority: Priority,
    pub target: SafetyState,
    /// The register transition this one lifts; `None` for the `Rej` self-loop.
    pub lifted: Option<TransitionKind>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetyAutomaton {
    registers: RegisterAutomaton,
}

impl SafetyAutomaton {
    pub fn new(n: usize, d: Priority) -> Result<Self, AutomatonError> {
        Ok(SafetyAutomaton {
            registers: RegisterAutomaton::new(n, d)?,
        })
    }

    pub fn register_automaton(&self) -> &RegisterAutomaton {
        &self.registers
    }

    pub fn n(&self) -> usize {
        self.registers.n()
    }

    pub fn d(&self) -> Priority {
        self.registers.d()
    }

    pub fn initial(&self) -> SafetyState {
        SafetyState::Live {
            registers: self.registers.initial(),
            counters: vec![self.n(); self.registers.registers() + 1].into_boxed_slice(),
        }
    }

    /// Counter update for a register transition, or `None` if it leads to `Rej`.
    fn lift_counters(&self, counters: &[usize], kind: TransitionKind) -> Option<Box<[usize]>> {
        let n = self.n();
        let mut next: Box<[usize]> = counters.into();
        let k = match kind {
            TransitionKind::EvenReset(k) => k,
            TransitionKind::NonReset => {
                if next[0] == 1 {
                    return None;
                }
                next[0] -= 1;
                0
            }
            TransitionKind::OddReset(k) => {
                if next[k] == 1 {
                    return None;
                }
                next[k] -= 1;
                k
            }
        };
        next[..k].fill(n);
        Some(next)
    }

    /// Follow the register transition `t` from `q`.
    pub fn lift(&self, q: &SafetyState, t: &RegTransition) -> SafetyTransition {
        match q {
            SafetyState::Rej => SafetyTransition {
                priority: 1,
                target: SafetyState::Rej,
                lifted: None,
            },
            SafetyState::Live { counters, .. } => match self.lift_counters(counters, t.kind) {
                Some(counters) => SafetyTransition {
                    priority: 2,
                    target: SafetyState::Live {
                        registers: t.target.clone(),
                        counters,
                    },
                    lifted: Some(t.kind),
                },
                None => SafetyTransition {
                    priority: 1,
                    target: SafetyState::Rej,
                    lifted: Some(t.kind),
                },
            },
        }
    }

    /// One transition per register transition for live states; the single
    /// priority-1 self-loop for `Rej`.
    pub fn transitions(&self, q: &SafetyState, letter: Letter) -> Vec<SafetyTransition> {
        match q {
            SafetyState::Rej => vec![SafetyTransition {
                priority: 1,
                target: SafetyState::Rej,
                lifted: None,
            }],
            SafetyState::Live { registers, .. } => self
                .registers
                .transitions(registers, letter)
                .iter()
                .map(|t| self.lift(q, t))
                .collect(),
        }
    }

    /// Every state: all register states with all counter vectors, then `Rej`.
    pub fn all_states(&self) -> Vec<SafetyState> {
        let n = self.n();
        let width = self.registers.registers() + 1;
        let mut counter_vectors: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..width {
            counter_vectors = counter_vectors
                .into_iter()
                .flat_map(|prefix| {
                    (1..=n).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for registers in self.registers.all_states() {
            for c in &counter_vectors {
                out.push(SafetyState::Live {
                    registers: registers.clone(),
                    counters: c.clone().into_boxed_slice(),
                });
            }
        }
        out.push(SafetyState::Rej);
        out
    }
}

impl Separator for SafetyAutomaton {
    type State = SafetyState;

    fn n(&self) -> usize {
        SafetyAutomaton::n(self)
    }

    fn d(&self) -> Priority {
        SafetyAutomaton::d(self)
    }

    fn initial(&self) -> SafetyState {
        SafetyAutomaton::initial(self)
    }

    fn successors(&self, state: &SafetyState, letter: Letter) -> Vec<(Priority, SafetyState)> {
        let SafetyState::Live {
            registers,
            counters,
        } = state
        else {
            return vec![(1, SafetyState::Rej)];
        };
        self.registers
            .targets(registers, letter.priority)
            .into_iter()
            .map(|(kind, target)| match self.lift_counters(counters, kind) {
                Some(counters) => (
                    2,
                    SafetyState::Live {
                        registers: target,
                        counters,
                    },
                ),
                None => (1, SafetyState::Rej),
            })
            .collect()
    }

    fn reads_priority_only(&self) -> bool {
        true
    }

    fn states(&self) -> Vec<SafetyState> {
        self.all_states()
    }

    fn is_rejecting(&self, state: &SafetyState) -> bool {
        state.is_rej()
    }
}

/// `η · n^(rn(n) + 1) + 1`.
pub fn count_states_s(n: usize, d: Priority) -> Result<u128, SizeOverflow> {
    let eta = register::count_states_r(n, d)?;
    let exp = u32::try_from(register::rn(n) + 1).map_err(|_| SizeOverflow)?;
    let counters = (n as u128).checked_pow(exp).ok_or(SizeOverflow)?;
    eta.checked_mul(counters)
        .and_then(|x| x.checked_add(1))
        .ok_or(SizeOverflow)
}

/// Whether some run on `w` avoids `Rej` forever.
pub fn lasso_accepts_s(n: usize, d: Priority, w: &LassoWord) -> Result<bool, AutomatonError> {
    let automaton = SafetyAutomaton::new(n, d)?;
    for &l in w.letters() {
        automaton.register_automaton().check_letter(l)?;
    }
    let g = separator::lasso_run_graph(&automaton, w, |q| !q.is_rej());
    let plain: Vec<(usize, usize)> = g.edges.iter().map(|&(u, _, v)| (u, v)).collect();
    Ok(scc::has_cycle(g.vertices, &plain))
}
