//! Small progress measures, lifted over edges.
//!
//! A measure has one coordinate per odd priority, most significant first
//! (highest odd priority at index 0). The coordinate for priority `q` is
//! bounded by the number of `q`-edges, which bounds how often a simple cycle
//! of the edge-split game can see `q`.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::arena::Arena;
use crate::game::{GameGraph, Player, Priority};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProgressMeasure {
    Finite(Vec<u32>),
    Top,
}

impl Ord for ProgressMeasure {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProgressMeasure::Top, ProgressMeasure::Top) => Ordering::Equal,
            (ProgressMeasure::Top, _) => Ordering::Greater,
            (_, ProgressMeasure::Top) => Ordering::Less,
            (ProgressMeasure::Finite(a), ProgressMeasure::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ProgressMeasure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Space {
    /// Largest odd priority with a coordinate, or 0 when there is none.
    top_odd: Priority,
    bounds: Vec<u32>,
}

impl Space {
    fn new(arena: &Arena) -> Self {
        let max = arena.max_priority();
        let top_odd = if max % 2 == 1 {
            max
        } else {
            max.saturating_sub(1)
        };
        let width = top_odd.div_ceil(2) as usize;
        let mut bounds = vec![0u32; width];
        for v in 0..arena.len() {
            for &(p, _) in arena.successors(v) {
                if p % 2 == 1 {
                    bounds[self_index(top_odd, p)] += 1;
                }
            }
        }
        Space { top_odd, bounds }
    }

    fn zero(&self) -> ProgressMeasure {
        ProgressMeasure::Finite(vec![0; self.bounds.len()])
    }

    /// Least measure that is `>= m` on coordinates `>= p`, strictly greater
    /// when `p` is odd.
    fn prog(&self, m: &ProgressMeasure, p: Priority) -> ProgressMeasure {
        let ProgressMeasure::Finite(m) = m else {
            return ProgressMeasure::Top;
        };
        let keep = if p > self.top_odd {
            0
        } else {
            self_index(self.top_odd, p) + 1
        };
        let mut out = vec![0; m.len()];
        out[..keep].copy_from_slice(&m[..keep]);
        if p.is_multiple_of(2) {
            return ProgressMeasure::Finite(out);
        }
        for i in (0..keep).rev() {
            if out[i] < self.bounds[i] {
                out[i] += 1;
                return ProgressMeasure::Finite(out);
            }
            out[i] = 0;
        }
        ProgressMeasure::Top
    }
}

fn self_index(top_odd: Priority, p: Priority) -> usize {
    ((top_odd - p) / 2) as usize
}

/// Recompute the measure of `v` from its successors; returns whether it grew.
fn lift(arena: &Arena, space: &Space, measures: &mut [ProgressMeasure], v: usize) -> bool {
    let candidates = arena
        .successors(v)
        .iter()
        .map(|&(p, w)| space.prog(&measures[w as usize], p));
    let best = match arena.owner(v) {
        Player::Even => candidates.min(),
        Player::Odd => candidates.max(),
    }
    .expect("every vertex has a successor");
    if best > measures[v] {
        measures[v] = best;
        true
    } else {
        false
    }
}

/// The least progress measure of the arena.
pub fn progress_measures(arena: &Arena) -> Vec<ProgressMeasure> {
    let space = Space::new(arena);
    let mut measures = vec![space.zero(); arena.len()];
    let mut queued = vec![true; arena.len()];
    let mut queue: VecDeque<usize> = (0..arena.len()).collect();
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        if lift(arena, &space, &mut measures, v) {
            for &(_, u) in arena.predecessors(v) {
                let u = u as usize;
                if !queued[u] {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    measures
}

pub fn solve_arena_spm(arena: &Arena) -> Player {
    match progress_measures(arena)[arena.start()] {
        ProgressMeasure::Top => Player::Odd,
        ProgressMeasure::Finite(_) => Player::Even,
    }
}

pub fn solve_spm(g: &GameGraph) -> Player {
    solve_arena_spm(&Arena::from_game(g))
}
