//! Seeded random inputs for the verification suites.
//!
//! The generator is xorshift64* (shifts 12, 25, 27; multiplier
//! `0x2545F4914F6CDD1D`) with its state initialised from the seed by one
//! splitmix64 step, so that streams are reproducible across implementations.

use crate::graph::MultiGraph;

#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let state = splitmix64(seed);
        XorShift64Star {
            state: if state == 0 {
                0x9E37_79B9_7F4A_7C15
            } else {
                state
            },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform-ish in `0..n` (`next % n`), `n > 0`.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

/// Random tree on `n ≥ 1` vertices: vertex `i` attaches to a uniform earlier
/// vertex, then labels are shuffled and edges randomly oriented.
pub fn random_tree(rng: &mut XorShift64Star, n: usize) -> MultiGraph {
    let mut label: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut label);
    let edges = (1..n)
        .map(|i| {
            let j = rng.below(i);
            let (a, b) = (label[i], label[j]);
            if rng.below(2) == 0 {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    MultiGraph::new(n, edges).expect("labels in range")
}

/// Random connected multigraph with `1..=max_vertices` vertices and at most
/// `max_edges` edges: a random spanning tree plus extra edges with uniform
/// endpoints (loops and parallel edges included), in shuffled order.
pub fn random_connected_multigraph(
    rng: &mut XorShift64Star,
    max_vertices: usize,
    max_edges: usize,
) -> MultiGraph {
    let n = rng.range(1, max_vertices.min(max_edges + 1).max(1));
    let tree = random_tree(rng, n);
    let mut edges = tree.edges().to_vec();
    let extra = rng.range(0, max_edges - (n - 1));
    for _ in 0..extra {
        edges.push((rng.below(n), rng.below(n)));
    }
    rng.shuffle(&mut edges);
    MultiGraph::new(n, edges).expect("endpoints in range")
}
