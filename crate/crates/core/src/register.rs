//! The nondeterministic register automaton that separates plays won by Even
//! from plays won by Odd.
//!
//! A state is a non-increasing sequence of `rn(n)` registers holding
//! priorities. Reading a letter of priority `p` first raises every low
//! register below `p` to `p`, then either leaves the registers alone
//! (emitting 1) or resets one register `k` (emitting `2k` or `2k + 1`
//! depending on the parity of the value being reset).
//!
//! Transitions are computed on demand; the state space is never tabulated.

use std::fmt;

use log::info;
use thiserror::Error;

use crate::game::{LassoWord, Letter, Player, Priority};
use crate::separator::{self, Separator};

/// Number of registers needed for games with `n` nodes: `1 + floor(log2 n)`.
pub fn rn(n: usize) -> usize {
    assert!(n >= 1, "rn is defined for n >= 1");
    1 + n.ilog2() as usize
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("automaton parameters must be positive (n = {n}, d = {d})")]
    BadParameters { n: usize, d: Priority },
    #[error("letter {letter} is outside the alphabet for n = {n}, d = {d}")]
    LetterOutOfAlphabet {
        letter: Letter,
        n: usize,
        d: Priority,
    },
    #[error("register index {k} outside 1..={registers}")]
    NoSuchRegister { k: usize, registers: usize },
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("state count does not fit in 128 bits")]
pub struct SizeOverflow;

/// Register contents, stored lowest register first: `regs[0]` is `r_1`.
/// Displayed highest first, as `⟨r_rn, ..., r_1⟩`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegisterState {
    regs: Box<[Priority]>,
}

impl RegisterState {
    /// The state `⟨1, ..., 1⟩` with `registers` registers.
    pub fn initial(registers: usize) -> Self {
        RegisterState {
            regs: vec![1; registers].into_boxed_slice(),
        }
    }

    /// Build from values listed highest register first, as written `⟨r_rn, ..., r_1⟩`.
    /// Returns `None` if the sequence increases anywhere or holds a 0.
    pub fn from_high_to_low(values: &[Priority]) -> Option<Self> {
        let regs: Vec<Priority> = values.iter().rev().copied().collect();
        let ok = regs.iter().all(|&r| r >= 1) && regs.windows(2).all(|w| w[0] <= w[1]);
        ok.then(|| RegisterState {
            regs: regs.into_boxed_slice(),
        })
    }

    pub fn len(&self) -> usize {
        self.regs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regs.is_empty()
    }

    /// Value of register `k`, 1-based.
    pub fn register(&self, k: usize) -> Priority {
        self.regs[k - 1]
    }

    /// Values lowest register first.
    pub fn values(&self) -> &[Priority] {
        &self.regs
    }

    /// Set registers `1..=k` to `p`, for the greatest `k` with `r_1, ..., r_k < p`.
    pub fn update(&self, p: Priority) -> Self {
        let k = self.regs.iter().take_while(|&&r| r < p).count();
        let mut regs = self.regs.clone();
        regs[..k].fill(p);
        RegisterState { regs }
    }

    /// Drop register `k`, shift the registers below it up by one, and put 1
    /// into register 1. Also returns the parity of the dropped value.
    pub fn k_reset(&self, k: usize) -> (Self, Player) {
        assert!(k >= 1 && k <= self.len(), "register {k} out of range");
        let parity = Player::of_priority(self.regs[k - 1]);
        let mut regs = self.regs.clone();
        regs.copy_within(0..k - 1, 1);
        regs[0] = 1;
        (RegisterState { regs }, parity)
    }
}

impl fmt::Display for RegisterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, r) in self.regs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "⟩")
    }
}

impl fmt::Debug for RegisterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// How a transition resolves the nondeterminism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResetChoice {
    NonReset,
    Reset(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransitionKind {
    NonReset,
    EvenReset(usize),
    OddReset(usize),
}

impl TransitionKind {
    pub fn priority(self) -> Priority {
        match self {
            TransitionKind::NonReset => 1,
            TransitionKind::EvenReset(k) => 2 * k as Priority,
            TransitionKind::OddReset(k) => 2 * k as Priority + 1,
        }
    }

    pub fn reset_register(self) -> Option<usize> {
        match self {
            TransitionKind::NonReset => None,
            TransitionKind::EvenReset(k) | TransitionKind::OddReset(k) => Some(k),
        }
    }

    pub fn choice(self) -> ResetChoice {
        match self.reset_register() {
            None => ResetChoice::NonReset,
            Some(k) => ResetChoice::Reset(k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegTransition {
    pub source: RegisterState,
    pub letter: Letter,
    pub priority: Priority,
    pub target: RegisterState,
    pub kind: TransitionKind,
}

/// The automaton for plays of games with at most `n` nodes and priorities
/// up to `d` (rounded up to even).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterAutomaton {
    n: usize,
    d: Priority,
    registers: usize,
}

/// `d` rounded up to the next even number.
pub(crate) fn even_bound(d: Priority) -> Priority {
    if d % 2 == 1 {
        info!("priority bound {d} is odd; using {}", d + 1);
        d + 1
    } else {
        d
    }
}

impl RegisterAutomaton {
    pub fn new(n: usize, d: Priority) -> Result<Self, AutomatonError> {
        if n == 0 || d == 0 {
            return Err(AutomatonError::BadParameters { n, d });
        }
        Ok(RegisterAutomaton {
            n,
            d: even_bound(d),
            registers: rn(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> Priority {
        self.d
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    pub fn initial(&self) -> RegisterState {
        RegisterState::initial(self.registers)
    }

    pub fn check_letter(&self, letter: Letter) -> Result<(), AutomatonError> {
        let node_ok = |v| v >= 1 && v <= self.n;
        if node_ok(letter.source)
            && node_ok(letter.target)
            && letter.priority >= 1
            && letter.priority <= self.d
        {
            Ok(())
        } else {
            Err(AutomatonError::LetterOutOfAlphabet {
                letter,
                n: self.n,
                d: self.d,
            })
        }
    }

    /// The single transition selected by `choice`.
    pub fn transition(
        &self,
        s: &RegisterState,
        letter: Letter,
        choice: ResetChoice,
    ) -> RegTransition {
        let updated = s.update(letter.priority);
        let (target, kind) = match choice {
            ResetChoice::NonReset => (updated, TransitionKind::NonReset),
            ResetChoice::Reset(k) => {
                let (target, parity) = updated.k_reset(k);
                let kind = match parity {
                    Player::Even => TransitionKind::EvenReset(k),
                    Player::Odd => TransitionKind::OddReset(k),
                };
                (target, kind)
            }
        };
        RegTransition {
            source: s.clone(),
            letter,
            priority: kind.priority(),
            target,
            kind,
        }
    }

    /// All `rn(n) + 1` transitions from `s` reading `letter`: the non-reset
    /// transition first, then resets of registers `1..=rn(n)`.
    pub fn transitions(&self, s: &RegisterState, letter: Letter) -> Vec<RegTransition> {
        std::iter::once(ResetChoice::NonReset)
            .chain((1..=self.registers).map(ResetChoice::Reset))
            .map(|c| self.transition(s, letter, c))
            .collect()
    }

    /// Kind and target of every transition from `s` reading priority `p`, in
    /// the order of [`RegisterAutomaton::transitions`].
    pub fn targets(&self, s: &RegisterState, p: Priority) -> Vec<(TransitionKind, RegisterState)> {
        let updated = s.update(p);
        let resets: Vec<_> = (1..=self.registers)
            .map(|k| {
                let (target, parity) = updated.k_reset(k);
                let kind = match parity {
                    Player::Even => TransitionKind::EvenReset(k),
                    Player::Odd => TransitionKind::OddReset(k),
                };
                (kind, target)
            })
            .collect();
        std::iter::once((TransitionKind::NonReset, updated))
            .chain(resets)
            .collect()
    }

    /// Every state, in lexicographic order of the low-first register vector.
    pub fn all_states(&self) -> Vec<RegisterState> {
        let mut out = Vec::new();
        let mut regs = vec![1; self.registers];
        fn rec(
            regs: &mut Vec<Priority>,
            i: usize,
            min: Priority,
            d: Priority,
            out: &mut Vec<RegisterState>,
        ) {
            if i == regs.len() {
                out.push(RegisterState {
                    regs: regs.clone().into_boxed_slice(),
                });
                return;
            }
            for v in min..=d {
                regs[i] = v;
                rec(regs, i + 1, v, d, out);
            }
        }
        rec(&mut regs, 0, 1, self.d, &mut out);
        out
    }
}

impl Separator for RegisterAutomaton {
    type State = RegisterState;

    fn n(&self) -> usize {
        self.n
    }

    fn d(&self) -> Priority {
        self.d
    }

    fn initial(&self) -> RegisterState {
        RegisterAutomaton::initial(self)
    }

    fn successors(&self, state: &RegisterState, letter: Letter) -> Vec<(Priority, RegisterState)> {
        self.targets(state, letter.priority)
            .into_iter()
            .map(|(kind, t)| (kind.priority(), t))
            .collect()
    }

    fn reads_priority_only(&self) -> bool {
        true
    }

    fn states(&self) -> Vec<RegisterState> {
        self.all_states()
    }
}

/// Binomial coefficient with overflow detection.
pub(crate) fn binomial(n: u128, k: u128) -> Result<u128, SizeOverflow> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul(n - i).ok_or(SizeOverflow)? / (i + 1);
    }
    Ok(acc)
}

/// `C(rn(n) + d - 1, rn(n))`, the number of states for `n` nodes and bound `d`
/// (rounded up to even).
pub fn count_states_r(n: usize, d: Priority) -> Result<u128, SizeOverflow> {
    let d = even_bound(d) as u128;
    let r = rn(n) as u128;
    binomial(r + d - 1, r)
}

/// Whether some run on `w` is accepting.
pub fn lasso_accepts_r(n: usize, d: Priority, w: &LassoWord) -> Result<bool, AutomatonError> {
    let automaton = RegisterAutomaton::new(n, d)?;
    for &l in w.letters() {
        automaton.check_letter(l)?;
    }
    Ok(separator::accepts_lasso(&automaton, w))
}
