//! Synchronized product of a game with a separating automaton.
//!
//! From `(u, s)` the owner of `u` picks a game edge `e` (priority 1) and
//! moves to `(e, s)`; Even then picks an automaton transition on `e`, whose
//! priority the product edge carries, and moves to `(target of e, s')`.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::arena::{self, Arena};
use crate::baselines::zielonka;
use crate::game::{GameGraph, Letter, Node, Player, Priority};
use crate::register::{AutomatonError, RegisterAutomaton};
use crate::safety::SafetyAutomaton;
use crate::separator::Separator;

/// Default bound on materialized product nodes.
pub const DEFAULT_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("product exceeds the resource cap of {cap} nodes")]
    ResourceLimit { cap: usize },
    #[error("game with n = {n}, d = {d} does not fit automaton with n = {auto_n}, d = {auto_d}")]
    Mismatch {
        n: usize,
        d: Priority,
        auto_n: usize,
        auto_d: Priority,
    },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// A game position: a node of the game, or (by index into
/// [`GameGraph::edges`]) an edge just taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    Node(Node),
    Edge(usize),
}

#[derive(Clone, Debug)]
pub struct ProductGame<S> {
    /// Nodes of the game.
    n: usize,
    /// `(position index, index into states)` per product vertex.
    vertices: Vec<(u32, u32)>,
    states: Vec<S>,
    /// Per state.
    rejecting: Vec<bool>,
    arena: Arena,
}

impl<S> ProductGame<S> {
    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn node_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.arena.edge_count()
    }

    pub fn position(&self, v: usize) -> Position {
        let pos = self.vertices[v].0 as usize;
        match pos < self.n {
            true => Position::Node(pos + 1),
            false => Position::Edge(pos - self.n),
        }
    }

    pub fn state(&self, v: usize) -> &S {
        &self.states[self.vertices[v].1 as usize]
    }

    /// Whether the automaton component of `v` is a rejecting state.
    pub fn is_rejecting(&self, v: usize) -> bool {
        self.rejecting[self.vertices[v].1 as usize]
    }

    /// Distinct automaton states occurring in the product.
    pub fn states(&self) -> &[S] {
        &self.states
    }
}

fn check_fit<A: Separator>(g: &GameGraph, a: &A) -> Result<(), ProductError> {
    if g.n() > a.n() || g.d() > a.d() {
        return Err(ProductError::Mismatch {
            n: g.n(),
            d: g.d(),
            auto_n: a.n(),
            auto_d: a.d(),
        });
    }
    Ok(())
}

const NONE: u32 = u32::MAX;

struct Builder<'a, A: Separator> {
    game: &'a GameGraph,
    automaton: &'a A,
    cap: usize,
    states: Vec<A::State>,
    state_ids: FxHashMap<A::State, u32>,
    /// `(position index, state id)`; nodes `u` sit at `u - 1`, edges `i` at `n + i`.
    vertices: Vec<(u32, u32)>,
    /// Vertex id at `state id * positions + position index`, or `NONE`.
    vertex_ids: Vec<u32>,
    positions: usize,
    /// When the automaton reads priorities only: a range of `transitions`
    /// per `(state id, priority)`, at `state id * (d + 1) + priority`.
    cached: Vec<(u32, u32)>,
    transitions: Vec<(Priority, u32)>,
    succ_at: Vec<u32>,
    succ: Vec<(Priority, u32)>,
}

impl<'a, A: Separator> Builder<'a, A> {
    fn new(game: &'a GameGraph, automaton: &'a A, cap: usize) -> Self {
        Builder {
            game,
            automaton,
            cap,
            states: Vec::new(),
            state_ids: FxHashMap::default(),
            vertices: Vec::new(),
            vertex_ids: Vec::new(),
            positions: game.n() + game.edge_count(),
            cached: Vec::new(),
            transitions: Vec::new(),
            succ_at: vec![0],
            succ: Vec::new(),
        }
    }

    fn state_id(&mut self, s: A::State) -> u32 {
        if let Some(&id) = self.state_ids.get(&s) {
            return id;
        }
        let id = self.states.len() as u32;
        self.states.push(s.clone());
        self.state_ids.insert(s, id);
        self.vertex_ids
            .resize(self.states.len() * self.positions, NONE);
        if self.automaton.reads_priority_only() {
            self.cached.resize(
                self.states.len() * (self.automaton.d() as usize + 1),
                (NONE, 0),
            );
        }
        id
    }

    fn vertex_id(&mut self, pos: u32, sid: u32) -> Result<u32, ProductError> {
        let slot = sid as usize * self.positions + pos as usize;
        if self.vertex_ids[slot] != NONE {
            return Ok(self.vertex_ids[slot]);
        }
        if self.vertices.len() >= self.cap || self.vertices.len() >= NONE as usize {
            return Err(ProductError::ResourceLimit { cap: self.cap });
        }
        let id = self.vertices.len() as u32;
        self.vertices.push((pos, sid));
        self.vertex_ids[slot] = id;
        Ok(id)
    }

    /// The range of `self.transitions` holding the successors of `sid` on `letter`.
    fn transitions(&mut self, sid: u32, letter: Letter) -> std::ops::Range<usize> {
        let cached = self.automaton.reads_priority_only();
        let slot = sid as usize * (self.automaton.d() as usize + 1) + letter.priority as usize;
        if cached && self.cached[slot].0 != NONE {
            let (at, len) = self.cached[slot];
            return at as usize..(at + len) as usize;
        }
        if !cached {
            self.transitions.clear();
        }
        let at = self.transitions.len();
        for (p, t) in self
            .automaton
            .successors(&self.states[sid as usize], letter)
        {
            let tid = self.state_id(t);
            self.transitions.push((p, tid));
        }
        if cached {
            self.cached[slot] = (at as u32, (self.transitions.len() - at) as u32);
        }
        at..self.transitions.len()
    }

    /// Append the successors of vertex `v`, registering new vertices as needed.
    fn expand(&mut self, v: usize) -> Result<(), ProductError> {
        let (pos, sid) = self.vertices[v];
        let n = self.game.n();
        let from = self.succ.len();
        if (pos as usize) < n {
            let u = pos as usize + 1;
            let first = self
                .game
                .edge_index(&self.game.out_edges(u)[0])
                .expect("own edge");
            for i in 0..self.game.out_edges(u).len() {
                let w = self.vertex_id((n + first + i) as u32, sid)?;
                self.succ.push((1, w));
            }
        } else {
            let letter = self.game.edges()[pos as usize - n];
            for j in self.transitions(sid, letter) {
                let (p, tid) = self.transitions[j];
                let w = self.vertex_id((letter.target - 1) as u32, tid)?;
                self.succ.push((p, w));
            }
        }
        let out = &mut self.succ[from..];
        out.sort_unstable();
        let mut kept = 0;
        for i in 0..out.len() {
            if i == 0 || out[i] != out[kept - 1] {
                out[kept] = out[i];
                kept += 1;
            }
        }
        self.succ.truncate(from + kept);
        self.succ_at.push(self.succ.len() as u32);
        Ok(())
    }

    fn finish(self) -> ProductGame<A::State> {
        let Builder {
            game,
            automaton,
            states,
            vertices,
            vertex_ids,
            cached,
            transitions,
            succ_at,
            succ,
            ..
        } = self;
        drop((vertex_ids, cached, transitions));
        let n = game.n();
        let owner = vertices
            .iter()
            .map(|&(pos, _)| match (pos as usize) < n {
                true => game.owner(pos as usize + 1),
                false => Player::Even,
            })
            .collect();
        let rejecting = states.iter().map(|s| automaton.is_rejecting(s)).collect();
        ProductGame {
            arena: Arena::from_compressed(owner, succ_at, succ, 0),
            n,
            vertices,
            states,
            rejecting,
        }
    }
}

/// The part of `g × a` reachable from `(start, initial)`, explored breadth
/// first; vertex 0 is the start and ids follow discovery order.
pub fn build_product<A>(
    g: &GameGraph,
    a: &A,
    cap: usize,
) -> Result<ProductGame<A::State>, ProductError>
where
    A: Separator,
{
    check_fit(g, a)?;
    let mut b = Builder::new(g, a, cap);
    let init = b.state_id(a.initial());
    b.vertex_id((g.start() - 1) as u32, init)?;
    let mut next = 0;
    while next < b.vertices.len() {
        b.expand(next)?;
        next += 1;
    }
    Ok(b.finish())
}

/// All of `(V ∪ E) × Q`, reachable or not. Only meant for checking the
/// closed-form size bounds on small instances.
pub fn build_full_product<A>(
    g: &GameGraph,
    a: &A,
    cap: usize,
) -> Result<ProductGame<A::State>, ProductError>
where
    A: Separator,
{
    check_fit(g, a)?;
    let mut b = Builder::new(g, a, cap);
    let init = b.state_id(a.initial());
    b.vertex_id((g.start() - 1) as u32, init)?;
    let positions = (g.n() + g.edge_count()) as u32;
    for s in a.states() {
        let sid = b.state_id(s);
        for pos in 0..positions {
            b.vertex_id(pos, sid)?;
        }
    }
    let total = b.vertices.len();
    for v in 0..total {
        b.expand(v)?;
    }
    debug_assert_eq!(b.vertices.len(), total, "full product is closed");
    Ok(b.finish())
}

/// Vertices from which Odd can force a visit to `targets`.
pub fn odd_attractor<S>(p: &ProductGame<S>, targets: &[bool]) -> Vec<bool> {
    let everywhere = vec![true; p.node_count()];
    arena::attractor(
        p.arena(),
        Player::Odd,
        &everywhere,
        Priority::MAX,
        targets,
        |_| false,
    )
}

/// Winner of a product with the safety automaton: Odd wins exactly when she
/// can force the automaton into its rejecting state.
pub fn solve_safety_product<S>(p: &ProductGame<S>) -> Player {
    let targets: Vec<bool> = (0..p.node_count()).map(|v| p.is_rejecting(v)).collect();
    let attracted = odd_attractor(p, &targets);
    if attracted[p.arena().start()] {
        Player::Odd
    } else {
        Player::Even
    }
}

/// Winner of a product with the register automaton, solved as a parity game.
pub fn solve_parity_product<S>(p: &ProductGame<S>) -> Player {
    zielonka::solve_arena(p.arena())
}

/// Winner and product size of one solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductSolve {
    pub winner: Player,
    pub product_nodes: usize,
    pub product_edges: usize,
}

/// Build `g × S_{n,d}` for the game's own `n` and `d` and solve it as a safety game.
pub fn solve_with_safety(g: &GameGraph, cap: usize) -> Result<ProductSolve, ProductError> {
    let a = SafetyAutomaton::new(g.n(), g.d())?;
    let p = build_product(g, &a, cap)?;
    Ok(ProductSolve {
        winner: solve_safety_product(&p),
        product_nodes: p.node_count(),
        product_edges: p.edge_count(),
    })
}

/// Build `g × R_{n,d}` and solve it as a parity game.
pub fn solve_with_registers(g: &GameGraph, cap: usize) -> Result<ProductSolve, ProductError> {
    let a = RegisterAutomaton::new(g.n(), g.d())?;
    let p = build_product(g, &a, cap)?;
    Ok(ProductSolve {
        winner: solve_parity_product(&p),
        product_nodes: p.node_count(),
        product_edges: p.edge_count(),
    })
}
