//! Parity games with priorities on edges, lasso words, and positional strategies.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scc;

/// Node identifier; nodes of an `n`-node game are numbered `1..=n`.
pub type Node = usize;

/// Edge and transition priority. Larger is more significant.
pub type Priority = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player that wins when `p` is the largest priority seen infinitely often.
    pub fn of_priority(p: Priority) -> Player {
        if p.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::Even => 0,
            Player::Odd => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Even => write!(f, "Even"),
            Player::Odd => write!(f, "Odd"),
        }
    }
}

/// A letter `(u, p, v)` of the alphabet of plays. It need not be an edge of
/// any particular game; edges of a game are letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub source: Node,
    pub priority: Priority,
    pub target: Node,
}

pub type Edge = Letter;

impl Letter {
    pub const fn new(source: Node, priority: Priority, target: Node) -> Self {
        Letter {
            source,
            priority,
            target,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.source, self.priority, self.target)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("game has no nodes")]
    Empty,
    #[error("node {node} out of range 1..={n}")]
    NodeOutOfRange { node: Node, n: usize },
    #[error("priority 0 on edge {0}; priorities start at 1")]
    ZeroPriority(Edge),
    #[error("no outgoing edge: {0}")]
    NoOutgoingEdge(Node),
    #[error("edge {edge} is not an edge of the game")]
    UnknownEdge { edge: Edge },
    #[error("node {node} is owned by {owner}, not the strategy player")]
    NotOwned { node: Node, owner: Player },
    #[error("strategy has no choice for node {0}")]
    MissingChoice(Node),
    #[error("lasso cycle must be nonempty")]
    EmptyCycle,
}

/// A finite parity game `(V, V_even, V_odd, v_I, E)` with priorities on edges.
///
/// The priority bound `d` is the largest priority carried by an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameGraph {
    owner: Vec<Player>,
    start: Node,
    d: Priority,
    /// Sorted by (source, priority, target), deduplicated.
    edges: Vec<Edge>,
    /// `offsets[v - 1]..offsets[v]` indexes the edges leaving `v`.
    offsets: Vec<usize>,
}

impl GameGraph {
    pub fn new(
        owner: Vec<Player>,
        start: Node,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GameError> {
        let n = owner.len();
        if n == 0 {
            return Err(GameError::Empty);
        }
        if start == 0 || start > n {
            return Err(GameError::NodeOutOfRange { node: start, n });
        }
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            for node in [e.source, e.target] {
                if node == 0 || node > n {
                    return Err(GameError::NodeOutOfRange { node, n });
                }
            }
            if e.priority == 0 {
                return Err(GameError::ZeroPriority(*e));
            }
        }
        edges.sort_unstable();
        edges.dedup();

        let mut offsets = vec![0; n + 1];
        for e in &edges {
            offsets[e.source] += 1;
        }
        for v in 1..=n {
            if offsets[v] == 0 {
                return Err(GameError::NoOutgoingEdge(v));
            }
            offsets[v] += offsets[v - 1];
        }
        let d = edges.iter().map(|e| e.priority).max().unwrap_or(1);
        Ok(GameGraph {
            owner,
            start,
            d,
            edges,
            offsets,
        })
    }

    pub fn n(&self) -> usize {
        self.owner.len()
    }

    pub fn d(&self) -> Priority {
        self.d
    }

    pub fn start(&self) -> Node {
        self.start
    }

    pub fn owner(&self, v: Node) -> Player {
        self.owner[v - 1]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<Node> {
        1..=self.n()
    }

    /// All edges, ordered by source, then priority, then target.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn out_edges(&self, v: Node) -> &[Edge] {
        &self.edges[self.offsets[v - 1]..self.offsets[v]]
    }

    /// Index of `e` in [`GameGraph::edges`], if it is an edge of this game.
    pub fn edge_index(&self, e: &Edge) -> Option<usize> {
        if e.source == 0 || e.source > self.n() {
            return None;
        }
        let lo = self.offsets[e.source - 1];
        self.out_edges(e.source)
            .binary_search(e)
            .ok()
            .map(|i| lo + i)
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        self.edge_index(e).is_some()
    }

    /// The same game with a different starting node.
    pub fn with_start(&self, start: Node) -> Result<Self, GameError> {
        if start == 0 || start > self.n() {
            return Err(GameError::NodeOutOfRange {
                node: start,
                n: self.n(),
            });
        }
        Ok(GameGraph {
            start,
            ..self.clone()
        })
    }
}

/// An ultimately periodic word `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self, GameError> {
        if cycle.is_empty() {
            return Err(GameError::EmptyCycle);
        }
        Ok(LassoWord { prefix, cycle })
    }

    /// The `i`-th letter of the infinite word.
    pub fn letter(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Number of distinct positions: prefix positions plus cycle positions.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Position following `pos` in the finite position graph of the lasso.
    pub fn next_position(&self, pos: usize) -> usize {
        if pos + 1 < self.positions() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = &Letter> {
        self.prefix.iter().chain(self.cycle.iter())
    }

    /// Whether the word is an infinite path from `start` using edges of `edge_ok`.
    pub fn is_path_from(&self, start: Node, mut edge_ok: impl FnMut(&Letter) -> bool) -> bool {
        let mut at = start;
        for e in self.letters() {
            if e.source != at || !edge_ok(e) {
                return false;
            }
            at = e.target;
        }
        let first = self.cycle[0].source;
        at == first
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.prefix {
            write!(f, "{l}")?;
        }
        write!(f, "[")?;
        for l in &self.cycle {
            write!(f, "{l}")?;
        }
        write!(f, "]^w")
    }
}

/// Winner of the play `w`: the parity of the largest priority on its cycle.
pub fn limsup_winner(w: &LassoWord) -> Player {
    let top = w
        .cycle
        .iter()
        .map(|l| l.priority)
        .max()
        .expect("nonempty cycle");
    Player::of_priority(top)
}

/// A positional strategy: one chosen edge per node of `player`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionalStrategy {
    player: Player,
    choice: BTreeMap<Node, Edge>,
}

impl PositionalStrategy {
    pub fn new(
        game: &GameGraph,
        player: Player,
        choice: BTreeMap<Node, Edge>,
    ) -> Result<Self, GameError> {
        for (&v, e) in &choice {
            if v == 0 || v > game.n() {
                return Err(GameError::NodeOutOfRange {
                    node: v,
                    n: game.n(),
                });
            }
            if game.owner(v) != player {
                return Err(GameError::NotOwned {
                    node: v,
                    owner: game.owner(v),
                });
            }
            if e.source != v || !game.has_edge(e) {
                return Err(GameError::UnknownEdge { edge: *e });
            }
        }
        if let Some(v) = game
            .nodes()
            .find(|&v| game.owner(v) == player && !choice.contains_key(&v))
        {
            return Err(GameError::MissingChoice(v));
        }
        Ok(PositionalStrategy { player, choice })
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn choice(&self, v: Node) -> Option<&Edge> {
        self.choice.get(&v)
    }

    pub fn choices(&self) -> &BTreeMap<Node, Edge> {
        &self.choice
    }
}

/// The game restricted to the strategy owner's chosen edges plus all
/// opponent edges, with the set of nodes reachable from the start.
#[derive(Clone, Debug)]
pub struct StrategySubgraph<'g> {
    game: &'g GameGraph,
    player: Player,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    reachable: BTreeSet<Node>,
}

impl<'g> StrategySubgraph<'g> {
    pub fn game(&self) -> &'g GameGraph {
        self.game
    }

    /// Owner of the strategy that induced this subgraph.
    pub fn player(&self) -> Player {
        self.player
    }

    /// Every retained edge, including those outside the reachable part.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: Node) -> &[Edge] {
        &self.edges[self.offsets[v - 1]..self.offsets[v]]
    }

    /// `V_τ`: nodes reachable from the start inside the subgraph.
    pub fn reachable(&self) -> &BTreeSet<Node> {
        &self.reachable
    }

    /// Retained edges whose source is reachable.
    pub fn reachable_edges(&self) -> Vec<Edge> {
        self.reachable
            .iter()
            .flat_map(|&v| self.out_edges(v).iter().copied())
            .collect()
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        e.source >= 1
            && e.source <= self.game.n()
            && self.out_edges(e.source).binary_search(e).is_ok()
    }
}

pub fn strategy_subgraph<'g>(
    game: &'g GameGraph,
    strategy: &PositionalStrategy,
) -> StrategySubgraph<'g> {
    let player = strategy.player();
    let mut edges = Vec::with_capacity(game.edge_count());
    let mut offsets = vec![0; game.n() + 1];
    for v in game.nodes() {
        if game.owner(v) == player {
            let e = strategy.choice(v).expect("validated strategy");
            edges.push(*e);
        } else {
            edges.extend_from_slice(game.out_edges(v));
        }
        offsets[v] = edges.len();
    }

    let mut reachable = BTreeSet::new();
    let mut queue = VecDeque::from([game.start()]);
    reachable.insert(game.start());
    while let Some(v) = queue.pop_front() {
        for e in &edges[offsets[v - 1]..offsets[v]] {
            if reachable.insert(e.target) {
                queue.push_back(e.target);
            }
        }
    }

    StrategySubgraph {
        game,
        player,
        edges,
        offsets,
        reachable,
    }
}

/// Whether every cycle reachable from the start has a maximum priority of
/// the strategy owner's parity, i.e. whether the strategy is winning.
pub fn check_strategy_winning(sg: &StrategySubgraph<'_>) -> bool {
    let nodes: Vec<Node> = sg.reachable().iter().copied().collect();
    let edges = sg.reachable_edges();
    let loser = sg.player().opponent();
    let top = sg.game().d();
    (1..=top)
        .filter(|&p| Player::of_priority(p) == loser)
        .all(|p| {
            scc::tarjan_sccs(&nodes, &edges, p).iter().all(|component| {
                !edges.iter().any(|e| {
                    e.priority == p
                        && component.binary_search(&e.source).is_ok()
                        && component.binary_search(&e.target).is_ok()
                })
            })
        })
}

/// Random lasso plays inside `sg`, starting at the game's start node.
///
/// Each play walks for a random length up to `max_len`, then keeps walking
/// until it revisits a node, and closes its cycle at a randomly chosen earlier
/// visit of that node.
pub fn sample_plays(
    sg: &StrategySubgraph<'_>,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Vec<LassoWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plays = Vec::with_capacity(count);
    for _ in 0..count {
        let walk_len = rng.gen_range(0..=max_len);
        let mut path: Vec<Edge> = Vec::new();
        let mut visits: BTreeMap<Node, Vec<usize>> = BTreeMap::new();
        let mut at = sg.game().start();
        loop {
            if path.len() >= walk_len {
                if let Some(earlier) = visits.get(&at) {
                    let cut = *earlier.choose(&mut rng).expect("nonempty");
                    let cycle = path.split_off(cut);
                    plays.push(LassoWord {
                        prefix: path,
                        cycle,
                    });
                    break;
                }
            }
            visits.entry(at).or_default().push(path.len());
            let e = *sg
                .out_edges(at)
                .choose(&mut rng)
                .expect("every node has an edge");
            path.push(e);
            at = e.target;
        }
    }
    plays
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(u: Node, p: Priority, v: Node) -> Letter {
        Letter::new(u, p, v)
    }

    #[test]
    fn limsup_ignores_prefix() {
        let w =
            LassoWord::new(vec![], vec![l(1, 2, 1), l(1, 1, 2), l(2, 2, 2), l(2, 1, 1)]).unwrap();
        assert_eq!(limsup_winner(&w), Player::Even);
        let w = LassoWord::new(vec![l(1, 6, 1)], vec![l(1, 3, 1)]).unwrap();
        assert_eq!(limsup_winner(&w), Player::Odd);
        let w = LassoWord::new(vec![], vec![l(1, 1, 1), l(1, 4, 1)]).unwrap();
        assert_eq!(limsup_winner(&w), Player::Even);
    }

    #[test]
    fn empty_cycle_rejected() {
        assert_eq!(
            LassoWord::new(vec![l(1, 1, 1)], vec![]),
            Err(GameError::EmptyCycle)
        );
    }

    #[test]
    fn missing_out_edge_is_error() {
        let err = GameGraph::new(vec![Player::Even, Player::Odd], 1, [l(1, 1, 2)]).unwrap_err();
        assert_eq!(err.to_string(), "no outgoing edge: 2");
    }

    #[test]
    fn subgraph_drops_unchosen_edges() {
        let g = GameGraph::new(
            vec![Player::Even, Player::Odd],
            1,
            [l(1, 2, 1), l(1, 1, 2), l(2, 1, 1)],
        )
        .unwrap();
        let tau =
            PositionalStrategy::new(&g, Player::Even, BTreeMap::from([(1, l(1, 2, 1))])).unwrap();
        let sg = strategy_subgraph(&g, &tau);
        assert!(!sg.has_edge(&l(1, 1, 2)));
        assert_eq!(sg.reachable().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert!(check_strategy_winning(&sg));

        let tau =
            PositionalStrategy::new(&g, Player::Even, BTreeMap::from([(1, l(1, 1, 2))])).unwrap();
        let sg = strategy_subgraph(&g, &tau);
        assert_eq!(sg.reachable().len(), 2);
        assert!(!check_strategy_winning(&sg));
    }

    #[test]
    fn all_odd_subgraph_keeps_reachable_part() {
        let g = GameGraph::new(
            vec![Player::Odd; 3],
            1,
            [l(1, 1, 2), l(2, 2, 1), l(3, 1, 1)],
        )
        .unwrap();
        let tau = PositionalStrategy::new(&g, Player::Even, BTreeMap::new()).unwrap();
        let sg = strategy_subgraph(&g, &tau);
        assert_eq!(sg.edges(), g.edges());
        assert_eq!(
            sg.reachable().iter().copied().collect::<Vec<_>>(),
            vec![1, 2]
        );
    }

    #[test]
    fn strategy_validation() {
        let g =
            GameGraph::new(vec![Player::Even, Player::Odd], 1, [l(1, 2, 1), l(2, 1, 1)]).unwrap();
        assert_eq!(
            PositionalStrategy::new(&g, Player::Even, BTreeMap::new()),
            Err(GameError::MissingChoice(1))
        );
        assert!(matches!(
            PositionalStrategy::new(&g, Player::Even, BTreeMap::from([(1, l(1, 3, 1))])),
            Err(GameError::UnknownEdge { .. })
        ));
        assert!(matches!(
            PositionalStrategy::new(&g, Player::Odd, BTreeMap::from([(1, l(1, 2, 1))])),
            Err(GameError::NotOwned { .. })
        ));
    }

    #[test]
    fn winning_check_single_node() {
        let one =
            |edges: &[Edge]| GameGraph::new(vec![Player::Odd], 1, edges.iter().copied()).unwrap();
        let g = one(&[l(1, 2, 1)]);
        let sg = strategy_subgraph(
            &g,
            &PositionalStrategy::new(&g, Player::Even, BTreeMap::new()).unwrap(),
        );
        assert!(check_strategy_winning(&sg));
        let g = one(&[l(1, 2, 1), l(1, 1, 1)]);
        let sg = strategy_subgraph(
            &g,
            &PositionalStrategy::new(&g, Player::Even, BTreeMap::new()).unwrap(),
        );
        assert!(!check_strategy_winning(&sg));
    }

    #[test]
    fn single_loop_sample_is_unique_lasso() {
        let g = GameGraph::new(vec![Player::Even], 1, [l(1, 2, 1)]).unwrap();
        let tau =
            PositionalStrategy::new(&g, Player::Even, BTreeMap::from([(1, l(1, 2, 1))])).unwrap();
        let sg = strategy_subgraph(&g, &tau);
        for w in sample_plays(&sg, 5, 4, 9) {
            assert!(w.cycle.iter().all(|e| *e == l(1, 2, 1)));
            assert!(w.prefix.iter().all(|e| *e == l(1, 2, 1)));
            assert!(w.is_path_from(1, |e| sg.has_edge(e)));
        }
    }

    #[test]
    fn edge_index_roundtrip() {
        let g = GameGraph::new(
            vec![Player::Even, Player::Odd],
            2,
            [l(2, 1, 1), l(1, 3, 2), l(1, 2, 2)],
        )
        .unwrap();
        for (i, e) in g.edges().iter().enumerate() {
            assert_eq!(g.edge_index(e), Some(i));
        }
        assert_eq!(g.edge_index(&l(2, 2, 1)), None);
        assert_eq!(g.d(), 3);
    }
}
