//! Explicit game arenas with 0-based vertices, shared by all solvers, and
//! the linear-time attractor.

use std::collections::VecDeque;

use crate::game::{GameGraph, Player, Priority};

/// An edge-priority game on vertices `0..len`, stored as compressed
/// successor and predecessor lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    owner: Vec<Player>,
    succ_at: Vec<u32>,
    succ: Vec<(Priority, u32)>,
    pred_at: Vec<u32>,
    pred: Vec<(Priority, u32)>,
    start: usize,
}

impl Arena {
    /// Every vertex must have at least one successor.
    pub fn new(owner: Vec<Player>, succ: Vec<Vec<(Priority, usize)>>, start: usize) -> Self {
        assert_eq!(owner.len(), succ.len());
        let mut at = Vec::with_capacity(succ.len() + 1);
        let mut flat = Vec::new();
        at.push(0);
        for out in &succ {
            flat.extend(
                out.iter()
                    .map(|&(p, v)| (p, u32::try_from(v).expect("vertex fits in u32"))),
            );
            at.push(flat.len() as u32);
        }
        Arena::from_compressed(owner, at, flat, start)
    }

    /// Successors of `v` are `succ[succ_at[v]..succ_at[v + 1]]`.
    pub fn from_compressed(
        owner: Vec<Player>,
        succ_at: Vec<u32>,
        succ: Vec<(Priority, u32)>,
        start: usize,
    ) -> Self {
        let n = owner.len();
        assert_eq!(succ_at.len(), n + 1);
        assert!(start < n);
        let mut indegree = vec![0u32; n + 1];
        for u in 0..n {
            assert!(succ_at[u] < succ_at[u + 1], "vertex {u} has no successor");
        }
        for &(_, v) in &succ {
            indegree[v as usize + 1] += 1;
        }
        let mut pred_at = indegree;
        for i in 1..=n {
            pred_at[i] += pred_at[i - 1];
        }
        let mut fill = pred_at.clone();
        let mut pred = vec![(0, 0); succ.len()];
        for u in 0..n {
            for &(p, v) in &succ[succ_at[u] as usize..succ_at[u + 1] as usize] {
                let slot = &mut fill[v as usize];
                pred[*slot as usize] = (p, u as u32);
                *slot += 1;
            }
        }
        Arena {
            owner,
            succ_at,
            succ,
            pred_at,
            pred,
            start,
        }
    }

    pub fn from_game(g: &GameGraph) -> Self {
        let owner = g.owners().to_vec();
        let succ = g
            .nodes()
            .map(|v| {
                g.out_edges(v)
                    .iter()
                    .map(|e| (e.priority, e.target - 1))
                    .collect()
            })
            .collect();
        Arena::new(owner, succ, g.start() - 1)
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn successors(&self, v: usize) -> &[(Priority, u32)] {
        &self.succ[self.succ_at[v] as usize..self.succ_at[v + 1] as usize]
    }

    pub fn predecessors(&self, v: usize) -> &[(Priority, u32)] {
        &self.pred[self.pred_at[v] as usize..self.pred_at[v + 1] as usize]
    }

    pub fn max_priority(&self) -> Priority {
        self.succ.iter().map(|&(p, _)| p).max().unwrap_or(0)
    }
}

/// Attractor of `player` inside the subgame on `region` restricted to edges
/// of priority at most `cap`.
///
/// A vertex joins when `player` owns it and has one edge that is a hit or
/// leads into the set, or the opponent owns it and all its edges are hits or
/// lead into the set. `seed` vertices are in from the start. Runs in time
/// linear in the edges touching `region`.
pub fn attractor(
    arena: &Arena,
    player: Player,
    region: &[bool],
    cap: Priority,
    seed: &[bool],
    hit: impl Fn(Priority) -> bool,
) -> Vec<bool> {
    let n = arena.len();
    let mut inside = vec![false; n];
    // Edges of each opponent vertex that neither hit nor have entered the set yet.
    let mut escapes = vec![0u32; n];
    let mut queue = VecDeque::new();

    for v in (0..n).filter(|&v| region[v]) {
        let mut count = 0u32;
        let mut any_hit = false;
        for &(p, w) in arena.successors(v) {
            if p > cap || !region[w as usize] {
                continue;
            }
            if hit(p) {
                any_hit = true;
            } else {
                count += 1;
            }
        }
        escapes[v] = count;
        let joins = seed[v]
            || match arena.owner(v) == player {
                true => any_hit,
                false => count == 0,
            };
        if joins {
            inside[v] = true;
            queue.push_back(v);
        }
    }

    while let Some(w) = queue.pop_front() {
        for &(p, u) in arena.predecessors(w) {
            let u = u as usize;
            if !region[u] || inside[u] || p > cap || hit(p) {
                continue;
            }
            if arena.owner(u) == player {
                inside[u] = true;
                queue.push_back(u);
            } else {
                escapes[u] -= 1;
                if escapes[u] == 0 {
                    inside[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    inside
}
