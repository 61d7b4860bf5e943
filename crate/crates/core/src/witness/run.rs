//! Runs of the register automaton on plays of a winning Even strategy,
//! built by walking the game tree.
//!
//! The builder is a transducer. It keeps one frame per tree level it is
//! currently inside. A frame for `(k, S)` remembers which child component
//! the play is visiting, the preparatory resets still owed on entry to that
//! child, and two flags used by the invariant checks. Every edge is handed
//! down the stack until some frame decides the transition:
//!
//! - an edge leaving the visited child with priority `2k` resets register
//!   `rn(|S|)` (valuable),
//! - any other edge leaving it takes the non-reset transition (regressive),
//! - an edge inside the child pays the next preparatory reset, if one is
//!   owed, and otherwise goes to the child's frame.
//!
//! Lasso plays are unrolled until the register state and frame stack repeat
//! at a cycle boundary, then folded back into a lasso run.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use thiserror::Error;

use super::bad::{bad_of_finite, bad_of_priorities, Bad};
use super::tree::{build_game_tree, GameTree, TreeError};
use crate::game::{LassoWord, Letter, Node, Priority, StrategySubgraph};
use crate::register::{
    rn, AutomatonError, RegTransition, RegisterAutomaton, RegisterState, ResetChoice,
    TransitionKind,
};

/// Default number of cycle copies unrolled before giving up on folding.
pub const DEFAULT_FOLD_BUDGET: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Preparatory,
    Valuable,
    Regressive,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Preparatory => "preparatory",
            Role::Valuable => "valuable",
            Role::Regressive => "regressive",
        })
    }
}

/// One transition and the tree level of the frame that chose it. Levels
/// below the root mark transitions inside a block of local transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub transition: RegTransition,
    pub role: Role,
    pub level: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRun {
    pub prefix: Vec<Step>,
    pub cycle: Vec<Step>,
    /// Level of the root frame.
    pub root_level: u32,
}

impl WitnessRun {
    pub fn steps(&self) -> impl Iterator<Item = &Step> {
        self.prefix.iter().chain(&self.cycle)
    }

    pub fn prefix_priorities(&self) -> Vec<Priority> {
        self.prefix.iter().map(|s| s.transition.priority).collect()
    }

    pub fn cycle_priorities(&self) -> Vec<Priority> {
        self.cycle.iter().map(|s| s.transition.priority).collect()
    }

    /// Whether the largest priority emitted on the cycle is even.
    pub fn is_accepting(&self) -> bool {
        self.cycle_priorities()
            .iter()
            .max()
            .is_some_and(|p| p % 2 == 0)
    }

    /// One transition per line: letter, kind, priority, role, level.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (part, steps) in [("prefix", &self.prefix), ("cycle", &self.cycle)] {
            let _ = writeln!(out, "{part}:");
            for s in steps {
                let t = &s.transition;
                let local = if s.level < self.root_level {
                    " local"
                } else {
                    ""
                };
                let _ = writeln!(
                    out,
                    "  {} {} -> {} {:?} prio={} {}@{}{}",
                    t.letter, t.source, t.target, t.kind, t.priority, s.role, s.level, local
                );
            }
        }
        out
    }
}

/// `bad` of a witness run.
pub fn bad_of_lasso_run(run: &WitnessRun) -> Bad {
    bad_of_priorities(&run.prefix_priorities(), &run.cycle_priorities())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("play is not a path of the strategy subgraph from its start")]
    NotAPath,
    #[error("edge {edge} reached a level-0 frame")]
    EdgeAtLeaf { edge: Letter },
    #[error(
        "step {step}: register {register} holds odd {value} above 2k = {bound} at level {level}"
    )]
    Spade {
        step: usize,
        level: u32,
        register: usize,
        value: Priority,
        bound: Priority,
    },
    #[error("step {step}: reset of register {register} above rn(|S|) = {limit} at level {level}")]
    ResetAboveLimit {
        step: usize,
        level: u32,
        register: usize,
        limit: usize,
    },
    #[error("step {step}: odd reset of register {register} at level {level}, which started even and at least 2k")]
    OddResetAfterEvenStart {
        step: usize,
        level: u32,
        register: usize,
    },
    #[error("step {step}: odd reset of register {register} at level {level} after a valuable transition")]
    Club {
        step: usize,
        level: u32,
        register: usize,
    },
    #[error("step {step}: entering ({level}, {set:?}) at node {node} with odd {value} in register {register}")]
    Precondition {
        step: usize,
        level: u32,
        set: Vec<Node>,
        node: Node,
        register: usize,
        value: Priority,
    },
    #[error("block for ({level}, {set:?}) has bad = {bad} above |S| - 1")]
    BadBound {
        level: u32,
        set: Vec<Node>,
        bad: usize,
    },
    #[error("run did not fold within {budget} cycle copies")]
    Budget { budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Visit {
    child: usize,
    /// Registers still to be reset on entry, lowest first.
    pending: VecDeque<usize>,
}

#[derive(Clone, Debug)]
struct Frame {
    tree: usize,
    visit: Option<Visit>,
    /// Register `rn(|S|)` held an even value of at least `2k` on entry.
    even_start: bool,
    valuable_seen: bool,
    /// Index of the frame's first step.
    first_step: usize,
}

type FrameKey = (usize, Option<Visit>, bool, bool);

impl Frame {
    fn key(&self) -> FrameKey {
        (
            self.tree,
            self.visit.clone(),
            self.even_start,
            self.valuable_seen,
        )
    }
}

struct Builder<'t> {
    tree: &'t GameTree,
    automaton: RegisterAutomaton,
    state: RegisterState,
    stack: Vec<Frame>,
    steps: Vec<Step>,
}

impl<'t> Builder<'t> {
    fn new(tree: &'t GameTree, automaton: RegisterAutomaton) -> Self {
        let state = automaton.initial();
        let root = tree.node(GameTree::ROOT);
        let limit = rn(root.set.len());
        let held = state.register(limit);
        let root_frame = Frame {
            tree: GameTree::ROOT,
            visit: None,
            even_start: held.is_multiple_of(2) && held >= 2 * root.level,
            valuable_seen: false,
            first_step: 0,
        };
        Builder {
            tree,
            automaton,
            state,
            stack: vec![root_frame],
            steps: Vec::new(),
        }
    }

    fn limit(&self, frame: &Frame) -> usize {
        rn(self.tree.node(frame.tree).set.len())
    }

    fn key(&self) -> (RegisterState, Vec<FrameKey>) {
        (
            self.state.clone(),
            self.stack.iter().map(Frame::key).collect(),
        )
    }

    /// Drop frames deeper than `depth`, checking each finished block.
    fn pop_to(&mut self, depth: usize) -> Result<(), WitnessError> {
        while self.stack.len() > depth + 1 {
            let frame = self.stack.pop().expect("nonempty");
            let node = self.tree.node(frame.tree);
            let bad = bad_of_finite(
                self.steps[frame.first_step..]
                    .iter()
                    .map(|s| s.transition.priority),
            );
            if bad + 1 > node.set.len() {
                return Err(WitnessError::BadBound {
                    level: node.level,
                    set: node.set.clone(),
                    bad,
                });
            }
        }
        Ok(())
    }

    /// Open a frame for `child` at node `v`, checking the entry condition.
    fn push(&mut self, child: usize, v: Node) -> Result<(), WitnessError> {
        let node = self.tree.node(child);
        let limit = rn(node.set.len());
        for j in 1..=limit {
            let value = self.state.register(j);
            if value % 2 == 1 && value >= 3 {
                let l = (value - 1) / 2;
                if l >= node.level || self.tree.fst(child, l).binary_search(&v).is_ok() {
                    return Err(WitnessError::Precondition {
                        step: self.steps.len(),
                        level: node.level,
                        set: node.set.clone(),
                        node: v,
                        register: j,
                        value,
                    });
                }
            }
        }
        let held = self.state.register(limit);
        self.stack.push(Frame {
            tree: child,
            visit: None,
            even_start: held.is_multiple_of(2) && held >= 2 * node.level,
            valuable_seen: false,
            first_step: self.steps.len(),
        });
        Ok(())
    }

    /// Decide the transition for `e` by walking down the frame stack.
    fn choose(&mut self, e: Letter) -> Result<(ResetChoice, Role, u32), WitnessError> {
        let mut depth = 0;
        loop {
            let id = self.stack[depth].tree;
            let k = self.tree.node(id).level;
            if k == 0 {
                return Err(WitnessError::EdgeAtLeaf { edge: e });
            }
            let child = self.tree.child_containing(id, e.source);
            let inside = e.priority < 2 * k
                && child.is_some()
                && child == self.tree.child_containing(id, e.target);
            if !inside {
                self.pop_to(depth)?;
                let limit = self.limit(&self.stack[depth]);
                let frame = &mut self.stack[depth];
                frame.visit = None;
                return Ok(if e.priority == 2 * k {
                    frame.valuable_seen = true;
                    (ResetChoice::Reset(limit), Role::Valuable, k)
                } else {
                    (ResetChoice::NonReset, Role::Regressive, k)
                });
            }
            let child = child.expect("inside edges have a component");
            if self.stack[depth].visit.is_none() {
                let child_node = self.tree.node(child);
                let pending = if child_node.index_in_parent >= 1 {
                    (1..=rn(child_node.set.len()))
                        .filter(|&j| {
                            let value = self.state.register(j);
                            value % 2 == 1 && value > 1
                        })
                        .collect()
                } else {
                    VecDeque::new()
                };
                self.pop_to(depth)?;
                self.stack[depth].visit = Some(Visit { child, pending });
            }
            let visit = self.stack[depth].visit.as_mut().expect("visit just opened");
            debug_assert_eq!(visit.child, child, "a path cannot jump between components");
            if let Some(j) = visit.pending.pop_front() {
                return Ok((ResetChoice::Reset(j), Role::Preparatory, k));
            }
            if self.stack.len() == depth + 1 {
                self.push(child, e.source)?;
            }
            depth += 1;
        }
    }

    /// Checks that hold after every transition for every open frame.
    fn check(&self, t: &RegTransition) -> Result<(), WitnessError> {
        let step = self.steps.len();
        for frame in &self.stack {
            let node = self.tree.node(frame.tree);
            let limit = self.limit(frame);
            if let Some(register) = t.kind.reset_register() {
                if register > limit {
                    return Err(WitnessError::ResetAboveLimit {
                        step,
                        level: node.level,
                        register,
                        limit,
                    });
                }
            }
            if t.kind == TransitionKind::OddReset(limit) {
                if frame.even_start {
                    return Err(WitnessError::OddResetAfterEvenStart {
                        step,
                        level: node.level,
                        register: limit,
                    });
                }
                if frame.valuable_seen {
                    return Err(WitnessError::Club {
                        step,
                        level: node.level,
                        register: limit,
                    });
                }
            }
            let bound = 2 * node.level;
            for register in 1..=limit {
                let value = t.target.register(register);
                if value % 2 == 1 && value > bound {
                    return Err(WitnessError::Spade {
                        step,
                        level: node.level,
                        register,
                        value,
                        bound,
                    });
                }
            }
        }
        Ok(())
    }

    fn read(&mut self, e: Letter) -> Result<(), WitnessError> {
        let (choice, role, level) = self.choose(e)?;
        let t = self.automaton.transition(&self.state, e, choice);
        self.check(&t)?;
        self.state = t.target.clone();
        self.steps.push(Step {
            transition: t,
            role,
            level,
        });
        Ok(())
    }
}

/// The witness run for `play` in the subgraph of a winning Even strategy,
/// checked against every invariant along the way.
pub fn build_witness_run(
    sg: &StrategySubgraph<'_>,
    play: &LassoWord,
) -> Result<WitnessRun, WitnessError> {
    let tree = build_game_tree(sg)?;
    build_witness_run_in(&tree, sg, play, DEFAULT_FOLD_BUDGET)
}

/// As [`build_witness_run`], reusing a tree and with an explicit budget.
pub fn build_witness_run_in(
    tree: &GameTree,
    sg: &StrategySubgraph<'_>,
    play: &LassoWord,
    budget: usize,
) -> Result<WitnessRun, WitnessError> {
    let g = sg.game();
    if !play.is_path_from(g.start(), |e| sg.has_edge(e)) {
        return Err(WitnessError::NotAPath);
    }
    let automaton = RegisterAutomaton::new(g.n(), g.d())?;
    let mut b = Builder::new(tree, automaton);
    for &e in &play.prefix {
        b.read(e)?;
    }
    let mut seen = HashMap::new();
    for _ in 0..budget {
        if let Some(&at) = seen.get(&b.key()) {
            let cycle = b.steps.split_off(at);
            return Ok(WitnessRun {
                prefix: b.steps,
                cycle,
                root_level: tree.node(GameTree::ROOT).level,
            });
        }
        seen.insert(b.key(), b.steps.len());
        for &e in &play.cycle {
            b.read(e)?;
        }
    }
    Err(WitnessError::Budget { budget })
}
