//! Strongly connected components (iterative Tarjan) and cycle queries.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::game::{Edge, Node, Player, Priority};

/// Component id of every vertex of `adj`, and the number of components.
///
/// Ids are assigned in Tarjan completion order, so an edge `u -> v` between
/// different components always satisfies `id[u] > id[v]`.
pub(crate) fn scc_ids(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    // (vertex, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    (comp, next_comp)
}

/// SCCs of the graph on `nodes` using only `edges` of priority at most `cap`
/// whose endpoints both lie in `nodes`.
///
/// Components are returned in topological order: no edge enters `S_i` from
/// `S_j` with `i < j`. Among valid orders, the one that repeatedly picks the
/// available component with the smallest node id is chosen. Each component
/// is sorted ascending.
pub fn tarjan_sccs(nodes: &[Node], edges: &[Edge], cap: Priority) -> Vec<Vec<Node>> {
    let local: BTreeMap<Node, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![Vec::new(); nodes.len()];
    for e in edges.iter().filter(|e| e.priority <= cap) {
        if let (Some(&u), Some(&v)) = (local.get(&e.source), local.get(&e.target)) {
            adj[u].push(v);
        }
    }
    let (comp, count) = scc_ids(&adj);

    let mut members = vec![Vec::new(); count];
    for (i, &c) in comp.iter().enumerate() {
        members[c].push(nodes[i]);
    }
    for m in &mut members {
        m.sort_unstable();
    }

    let mut indegree = vec![0usize; count];
    let mut dag = vec![Vec::new(); count];
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            if comp[u] != comp[v] {
                dag[comp[u]].push(comp[v]);
                indegree[comp[v]] += 1;
            }
        }
    }

    let mut ready: BinaryHeap<Reverse<(Node, usize)>> = (0..count)
        .filter(|&c| indegree[c] == 0)
        .map(|c| Reverse((members[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(count);
    while let Some(Reverse((_, c))) = ready.pop() {
        order.push(c);
        for &next in &dag[c] {
            indegree[next] -= 1;
            if indegree[next] == 0 {
                ready.push(Reverse((members[next][0], next)));
            }
        }
    }
    order
        .into_iter()
        .map(|c| std::mem::take(&mut members[c]))
        .collect()
}

/// Whether the graph with `vertices` vertices and labelled `edges` has a
/// cycle whose largest label has the parity of `parity`.
///
/// Every vertex is assumed reachable; callers pass only explored graphs.
pub(crate) fn has_cycle_with_top(
    vertices: usize,
    edges: &[(usize, Priority, usize)],
    parity: Player,
) -> bool {
    let mut tops: Vec<Priority> = edges
        .iter()
        .map(|&(_, p, _)| p)
        .filter(|&p| Player::of_priority(p) == parity)
        .collect();
    tops.sort_unstable();
    tops.dedup();
    tops.into_iter().any(|q| {
        let mut adj = vec![Vec::new(); vertices];
        for &(u, p, v) in edges {
            if p <= q {
                adj[u].push(v);
            }
        }
        let (comp, _) = scc_ids(&adj);
        edges.iter().any(|&(u, p, v)| p == q && comp[u] == comp[v])
    })
}

/// Whether the graph has any cycle at all.
pub(crate) fn has_cycle(vertices: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); vertices];
    for &(u, v) in edges {
        if u == v {
            return true;
        }
        adj[u].push(v);
    }
    let (comp, count) = scc_ids(&adj);
    count < vertices || edges.iter().any(|&(u, v)| comp[u] == comp[v])
}
