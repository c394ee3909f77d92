//! Splitting a finite tree into a forest of small trees.
//!
//! Given a tree `T` and a budget `0 < P ≤ (|E(T)| − 1)·deg(T)`, remove `k − 1`
//! edges so that the remaining pieces `T₁, …, T_k` all have at most `P` edges,
//! every piece but the last has at least `P / deg(T)` edges, and hence
//! `k ≤ |E(T)|·deg(T)/P + 1`.
//!
//! The procedure fixes a leaf `v`. Among the edges whose removal cuts off a
//! subtree away from `v` with at least `P / deg(T)` edges, it removes the one
//! farthest from `v`, emits the cut-off subtree as the next piece, and repeats
//! on the part containing `v` until `P > (|E| − 1)·deg(T)` there. `deg(T)` is
//! the degree of the original tree throughout.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Pieces produced by [`split_tree`].
#[derive(Debug, Clone, PartialEq)]
pub struct ForestSplit {
    /// Removed edges, in removal order.
    pub removed_edges: Vec<usize>,
    /// Edge sets of the pieces in construction order, each sorted ascending.
    /// A piece may be a single vertex (empty edge set).
    pub components: Vec<Vec<usize>>,
    pub piece_count: usize,
    pub budget: f64,
    pub base_degree: usize,
}

fn check_tree(t: &MultiGraph) -> Result<()> {
    if t.vertex_count() == 0 {
        return Err(Error::NotATree("no vertices"));
    }
    if t.edges().iter().any(|&(a, b)| a == b) {
        return Err(Error::NotATree("contains a loop"));
    }
    if t.edge_count() + 1 != t.vertex_count() {
        return Err(Error::NotATree("|E| != |V| - 1"));
    }
    if !t.is_connected() {
        return Err(Error::NotATree("disconnected"));
    }
    Ok(())
}

/// Smallest-index vertex of degree one.
pub fn leaf_of(t: &MultiGraph) -> Result<usize> {
    check_tree(t)?;
    if t.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    Ok(t.degrees()
        .iter()
        .position(|&d| d == 1)
        .expect("a finite tree with an edge has a leaf"))
}

pub fn split_tree(t: &MultiGraph, budget: f64) -> Result<ForestSplit> {
    check_tree(t)?;
    let deg = t.max_degree();
    let max_budget = t.edge_count().saturating_sub(1) as f64 * deg as f64;
    if !(budget > 0.0 && budget <= max_budget) {
        return Err(Error::BudgetOutOfRange {
            budget,
            max: max_budget,
        });
    }

    let adj = t.adjacency();
    let n = t.vertex_count();
    let mut alive = vec![true; t.edge_count()];
    let mut removed_edges = Vec::new();
    let mut components = Vec::new();
    let mut leaf = leaf_of(t)?;

    loop {
        let current = (0..t.edge_count()).filter(|&e| alive[e]).count();
        if budget > (current as f64 - 1.0) * deg as f64 {
            components.push((0..t.edge_count()).filter(|&e| alive[e]).collect());
            break;
        }

        let touches_leaf = adj[leaf].iter().any(|&(e, _)| alive[e]);
        if !touches_leaf {
            leaf = fresh_leaf(&adj, &alive).expect("current piece has edges");
        }

        // Root the current piece at the leaf.
        let mut depth = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        depth[leaf] = 0;
        let mut queue = VecDeque::from([leaf]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(e, w) in &adj[u] {
                if alive[e] && depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent_edge[w] = e;
                    queue.push_back(w);
                }
            }
        }
        // Edges in the subtree hanging below each vertex.
        let mut below = vec![0usize; n];
        for &u in order.iter().rev() {
            if u == leaf {
                continue;
            }
            let e = parent_edge[u];
            let (a, b) = t.edge(e);
            let parent = if a == u { b } else { a };
            below[parent] += below[u] + 1;
        }

        // (distance from leaf, edge, child endpoint) of the best edge
        let mut best: Option<(usize, usize, usize)> = None;
        for &child in &order {
            if child == leaf {
                continue;
            }
            if (below[child] as f64) * (deg as f64) < budget {
                continue;
            }
            let e = parent_edge[child];
            let dist = depth[child] - 1;
            let better = match best {
                None => true,
                Some((d, be, _)) => dist > d || (dist == d && e < be),
            };
            if better {
                best = Some((dist, e, child));
            }
        }
        let (_, cut, child) = best.expect("the edge at the leaf qualifies");

        let mut piece = Vec::new();
        let mut stack = vec![child];
        alive[cut] = false;
        while let Some(u) = stack.pop() {
            for &(e, w) in &adj[u] {
                if alive[e] && depth[w] > depth[u] && depth[w] != usize::MAX {
                    alive[e] = false;
                    piece.push(e);
                    stack.push(w);
                }
            }
        }
        piece.sort_unstable();
        removed_edges.push(cut);
        components.push(piece);
    }

    Ok(ForestSplit {
        piece_count: components.len(),
        removed_edges,
        components,
        budget,
        base_degree: deg,
    })
}

fn fresh_leaf(adj: &[Vec<(usize, usize)>], alive: &[bool]) -> Option<usize> {
    adj.iter()
        .position(|nbrs| nbrs.iter().filter(|&&(e, _)| alive[e]).count() == 1)
}
