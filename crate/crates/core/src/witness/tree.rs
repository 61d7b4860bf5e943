//! Game trees: the recursive decomposition of a winning strategy subgraph
//! into strongly connected components under descending priority caps.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::game::{Edge, Node, Player, Priority, StrategySubgraph};
use crate::scc::tarjan_sccs;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("game trees are built from Even strategies, got a strategy of {0}")]
    NotEven(Player),
    #[error(
        "component at level {level} contains the odd edge {edge}; the strategy is not winning"
    )]
    OddEdgeInComponent { level: u32, edge: Edge },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub level: u32,
    /// Sorted ascending.
    pub set: Vec<Node>,
    pub parent: Option<usize>,
    /// Position among the parent's children, in topological order.
    pub index_in_parent: usize,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTree {
    nodes: Vec<TreeNode>,
    /// `by_level[l][v]` is the tree node at level `l` whose set holds `v`.
    by_level: Vec<BTreeMap<Node, usize>>,
    edges: Vec<Edge>,
}

/// Build the full game tree of a winning Even strategy subgraph, down to
/// level 0. The root is `(⌈d/2⌉, V_τ)`.
pub fn build_game_tree(sg: &StrategySubgraph<'_>) -> Result<GameTree, TreeError> {
    if sg.player() != Player::Even {
        return Err(TreeError::NotEven(sg.player()));
    }
    let top = sg.game().d().div_ceil(2);
    let edges = sg.reachable_edges();
    let root_set: Vec<Node> = sg.reachable().iter().copied().collect();

    let mut nodes = vec![TreeNode {
        level: top,
        set: root_set,
        parent: None,
        index_in_parent: 0,
        children: Vec::new(),
    }];
    let mut by_level = vec![BTreeMap::new(); top as usize + 1];
    for &v in &nodes[0].set {
        by_level[top as usize].insert(v, 0);
    }

    // Nodes are appended level by level, so a plain index walk is breadth first.
    let mut next = 0;
    while next < nodes.len() {
        let k = nodes[next].level;
        if k > 0 {
            let cap: Priority = 2 * k - 1;
            let components = tarjan_sccs(&nodes[next].set, &edges, cap);
            for (i, set) in components.into_iter().enumerate() {
                if let Some(&edge) = edges.iter().find(|e| {
                    e.priority == cap
                        && set.binary_search(&e.source).is_ok()
                        && set.binary_search(&e.target).is_ok()
                }) {
                    return Err(TreeError::OddEdgeInComponent { level: k - 1, edge });
                }
                let id = nodes.len();
                for &v in &set {
                    by_level[k as usize - 1].insert(v, id);
                }
                nodes[next].children.push(id);
                nodes.push(TreeNode {
                    level: k - 1,
                    set,
                    parent: Some(next),
                    index_in_parent: i,
                    children: Vec::new(),
                });
            }
        }
        next += 1;
    }
    Ok(GameTree {
        nodes,
        by_level,
        edges,
    })
}

impl GameTree {
    pub const ROOT: usize = 0;

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    /// Edges of the reachable strategy subgraph the tree was built from.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The child of `id` whose set holds `v`, if `v` lies in `id`'s set.
    pub fn child_containing(&self, id: usize, v: Node) -> Option<usize> {
        let node = &self.nodes[id];
        if node.level == 0 || node.set.binary_search(&v).is_err() {
            return None;
        }
        self.by_level[node.level as usize - 1].get(&v).copied()
    }

    /// The tree node at `level` whose set holds `v`.
    pub fn at_level(&self, level: u32, v: Node) -> Option<usize> {
        self.by_level.get(level as usize)?.get(&v).copied()
    }

    /// Set of the leftmost level-`l` descendant of `id`. Requires `l < level`.
    pub fn fst(&self, id: usize, l: u32) -> &[Node] {
        let mut at = id;
        assert!(l < self.nodes[id].level, "fst below own level");
        while self.nodes[at].level > l {
            at = self.nodes[at].children[0];
        }
        &self.nodes[at].set
    }

    /// Indented outline, one tree node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(Self::ROOT, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let n = &self.nodes[id];
            let _ = writeln!(
                out,
                "{:indent$}({}, {:?})",
                "",
                n.level,
                n.set,
                indent = 2 * depth
            );
            stack.extend(n.children.iter().rev().map(|&c| (c, depth + 1)));
        }
        out
    }
}

impl fmt::Display for GameTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
