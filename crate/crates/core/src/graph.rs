//! Finite directed multigraphs and the combinatorial quantities the spectral
//! estimates consume.
//!
//! Edges carry a direction (tail, head), but every metric and connectivity
//! notion here is undirected. Loops and parallel edges are allowed; an edge is
//! identified by its position in the edge list.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A finite directed multigraph with loops and parallel edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

/// Distance between two vertices in the path metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Finite(usize),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }
}

/// Degree, volume, diameter and Betti numbers of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    /// Degree of each vertex; a loop counts twice.
    pub degree_per_vertex: Vec<usize>,
    pub max_degree: usize,
    pub volume: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    /// `Unreachable` when the graph is disconnected.
    pub diameter: Distance,
    pub b0: usize,
    pub b1: usize,
}

impl GraphStats {
    pub fn is_connected(&self) -> bool {
        self.b0 <= 1
    }
}

impl MultiGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(t, h) in &edges {
            for v in [t, h] {
                if v >= vertex_count {
                    return Err(Error::InvalidVertex {
                        index: v,
                        vertex_count,
                    });
                }
            }
        }
        Ok(MultiGraph {
            vertex_count,
            edges,
        })
    }

    pub fn edgeless(vertex_count: usize) -> Self {
        MultiGraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    /// Path graph 0 - 1 - ... - (n-1), edges oriented i -> i+1.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        MultiGraph {
            vertex_count: n,
            edges,
        }
    }

    /// Cycle on `n >= 1` vertices, edges i -> i+1 mod n. `cycle(1)` is one loop.
    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph {
            vertex_count: n,
            edges,
        }
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves).map(|i| (0, i)).collect();
        MultiGraph {
            vertex_count: leaves + 1,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    pub fn is_loop(&self, index: usize) -> bool {
        let (t, h) = self.edges[index];
        t == h
    }

    /// Undirected adjacency: for every vertex, the list of `(edge, other endpoint)`
    /// in edge-index order. A loop appears once at its vertex.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            adj[t].push((e, h));
            if t != h {
                adj[h].push((e, t));
            }
        }
        adj
    }

    /// Vertex degrees, loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(t, h) in &self.edges {
            deg[t] += 1;
            deg[h] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Component label of each vertex (labels 0.. in order of first vertex) and
    /// the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for start in 0..self.vertex_count {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(_, w) in &adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn component_count(&self) -> usize {
        self.components().1
    }

    /// True when the graph has at most one component (the empty graph counts).
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    fn bfs_distances(&self, adj: &[Vec<(usize, usize)>], source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &(_, w) in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest undirected path length between `u` and `v`.
    pub fn distance(&self, u: usize, v: usize) -> Result<Distance> {
        for x in [u, v] {
            if x >= self.vertex_count {
                return Err(Error::InvalidVertex {
                    index: x,
                    vertex_count: self.vertex_count,
                });
            }
        }
        let adj = self.adjacency();
        Ok(match self.bfs_distances(&adj, u)[v] {
            Some(d) => Distance::Finite(d),
            None => Distance::Unreachable,
        })
    }

    /// Distances from `source` to every vertex.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        self.bfs_distances(&adj, source)
    }

    pub fn stats(&self) -> GraphStats {
        let degree_per_vertex = self.degrees();
        let max_degree = degree_per_vertex.iter().copied().max().unwrap_or(0);
        let volume = degree_per_vertex.iter().sum();
        let b0 = self.component_count();
        let edge_count = self.edges.len();
        let diameter = if b0 > 1 {
            Distance::Unreachable
        } else {
            let adj = self.adjacency();
            let diam = (0..self.vertex_count)
                .map(|s| {
                    self.bfs_distances(&adj, s)
                        .into_iter()
                        .flatten()
                        .max()
                        .unwrap_or(0)
                })
                .max()
                .unwrap_or(0);
            Distance::Finite(diam)
        };
        // b1 - b0 = |E| - |V|
        let b1 = edge_count + b0 - self.vertex_count;
        let stats = GraphStats {
            degree_per_vertex,
            max_degree,
            volume,
            vertex_count: self.vertex_count,
            edge_count,
            diameter,
            b0,
            b1,
        };
        debug_assert_eq!(stats.volume, 2 * stats.edge_count);
        stats
    }

    /// Spanning tree built greedily in edge-index order: an edge is kept when it
    /// joins two different components of the edges kept so far. Returns the
    /// sorted tree edge indices.
    pub fn spanning_tree(&self) -> Result<Vec<usize>> {
        if !self.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn root(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        let mut tree = Vec::with_capacity(self.vertex_count.saturating_sub(1));
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            let (a, b) = (root(&mut parent, t), root(&mut parent, h));
            if a != b {
                parent[a] = b;
                tree.push(e);
            }
        }
        Ok(tree)
    }

    /// Removes the given edges. Returns the new graph and, for every old edge
    /// index, its new index (`None` if removed).
    pub fn delete_edges(&self, removed: &[usize]) -> Result<(MultiGraph, Vec<Option<usize>>)> {
        let mut drop = vec![false; self.edges.len()];
        for &e in removed {
            if e >= self.edges.len() {
                return Err(Error::InvalidEdgeIndex {
                    index: e,
                    edge_count: self.edges.len(),
                });
            }
            drop[e] = true;
        }
        let mut remap = Vec::with_capacity(self.edges.len());
        let mut edges = Vec::new();
        for (e, &edge) in self.edges.iter().enumerate() {
            if drop[e] {
                remap.push(None);
            } else {
                remap.push(Some(edges.len()));
                edges.push(edge);
            }
        }
        Ok((
            MultiGraph {
                vertex_count: self.vertex_count,
                edges,
            },
            remap,
        ))
    }

    /// Subgraph on the same vertex set keeping only the listed edges (in the
    /// order given).
    pub fn edge_subgraph(&self, keep: &[usize]) -> Result<MultiGraph> {
        let mut edges = Vec::with_capacity(keep.len());
        for &e in keep {
            if e >= self.edges.len() {
                return Err(Error::InvalidEdgeIndex {
                    index: e,
                    edge_count: self.edges.len(),
                });
            }
            edges.push(self.edges[e]);
        }
        Ok(MultiGraph {
            vertex_count: self.vertex_count,
            edges,
        })
    }

    /// Disjoint union; vertices and edges of `other` are shifted after `self`.
    pub fn disjoint_union(&self, other: &MultiGraph) -> MultiGraph {
        let shift = self.vertex_count;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(t, h)| (t + shift, h + shift)));
        MultiGraph {
            vertex_count: self.vertex_count + other.vertex_count,
            edges,
        }
    }

    /// True for a connected, loop-free graph with |E| = |V| - 1.
    pub fn is_tree(&self) -> bool {
        self.vertex_count >= 1
            && self.edges.len() + 1 == self.vertex_count
            && self.edges.iter().all(|&(t, h)| t != h)
            && self.is_connected()
    }
}
