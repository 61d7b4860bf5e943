//! Common interface of the separating automata, and lasso membership.

use std::fmt::Debug;
use std::hash::Hash;

use rustc_hash::FxHashMap;

use crate::game::{LassoWord, Letter, Player, Priority};
use crate::scc;

/// A nondeterministic parity automaton over the letters of `n`-node games
/// with priorities up to `d`, explored state by state.
pub trait Separator {
    type State: Clone + Eq + Hash + Debug;

    fn n(&self) -> usize;

    fn d(&self) -> Priority;

    fn initial(&self) -> Self::State;

    /// Emitted priority and target of every transition reading `letter`.
    fn successors(&self, state: &Self::State, letter: Letter) -> Vec<(Priority, Self::State)>;

    /// Every state of the automaton.
    fn states(&self) -> Vec<Self::State>;

    /// Whether runs are lost as soon as they enter `state`.
    fn is_rejecting(&self, _state: &Self::State) -> bool {
        false
    }

    /// Whether `successors` depends on the letter's priority alone, which
    /// lets products share transitions between edges of equal priority.
    fn reads_priority_only(&self) -> bool {
        false
    }
}

/// The finite graph of all runs on a lasso: vertices are
/// `(position in the lasso, state)` reachable from `(0, initial)`, numbered
/// in discovery order.
pub(crate) struct LassoRunGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, Priority, usize)>,
}

const NONE: u32 = u32::MAX;

/// Explores runs breadth first, dropping states that fail `keep`.
pub(crate) fn lasso_run_graph<A: Separator>(
    a: &A,
    w: &LassoWord,
    keep: impl Fn(&A::State) -> bool,
) -> LassoRunGraph {
    let positions = w.prefix.len() + w.cycle.len();
    let per_state = a.d() as usize + 1;
    let shared = a.reads_priority_only();
    let mut states: Vec<A::State> = Vec::new();
    let mut state_ids: FxHashMap<A::State, u32> = FxHashMap::default();
    // Vertex at `state id * positions + position`.
    let mut vertex_ids: Vec<u32> = Vec::new();
    // Per `(state id, priority)`: a range of `transitions`; kept targets only.
    let mut cached: Vec<(u32, u32)> = Vec::new();
    let mut transitions: Vec<(Priority, u32)> = Vec::new();
    let mut vertices: Vec<(usize, u32)> = Vec::new();
    let mut edges = Vec::new();

    let mut intern = |s: A::State,
                      states: &mut Vec<A::State>,
                      vertex_ids: &mut Vec<u32>,
                      cached: &mut Vec<(u32, u32)>| {
        if let Some(&id) = state_ids.get(&s) {
            return id;
        }
        let id = states.len() as u32;
        states.push(s.clone());
        state_ids.insert(s, id);
        vertex_ids.resize(states.len() * positions, NONE);
        cached.resize(states.len() * per_state, (NONE, 0));
        id
    };

    let root = a.initial();
    if !keep(&root) {
        return LassoRunGraph { vertices: 0, edges };
    }
    let sid = intern(root, &mut states, &mut vertex_ids, &mut cached);
    vertex_ids[sid as usize * positions] = 0;
    vertices.push((0, sid));
    let mut next = 0;
    while next < vertices.len() {
        let (pos, sid) = vertices[next];
        let letter = w.letter(pos);
        let succ_pos = w.next_position(pos);
        let slot = sid as usize * per_state + letter.priority as usize;
        let range = if shared && cached[slot].0 != NONE {
            let (at, len) = cached[slot];
            at as usize..(at + len) as usize
        } else {
            if !shared {
                transitions.clear();
            }
            let at = transitions.len();
            for (p, t) in a.successors(&states[sid as usize], letter) {
                if keep(&t) {
                    let tid = intern(t, &mut states, &mut vertex_ids, &mut cached);
                    transitions.push((p, tid));
                }
            }
            if shared {
                cached[slot] = (at as u32, (transitions.len() - at) as u32);
            }
            at..transitions.len()
        };
        for j in range {
            let (p, tid) = transitions[j];
            let key = tid as usize * positions + succ_pos;
            if vertex_ids[key] == NONE {
                vertex_ids[key] = vertices.len() as u32;
                vertices.push((succ_pos, tid));
            }
            edges.push((next, p, vertex_ids[key] as usize));
        }
        next += 1;
    }
    LassoRunGraph {
        vertices: vertices.len(),
        edges,
    }
}

/// Whether some run of `a` on `w` is accepting under the max-parity condition.
pub fn accepts_lasso<A: Separator>(a: &A, w: &LassoWord) -> bool {
    let g = lasso_run_graph(a, w, |_| true);
    scc::has_cycle_with_top(g.vertices, &g.edges, Player::Even)
}
