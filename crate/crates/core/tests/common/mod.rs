//! Brute-force oracles shared by the integration suites. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use sdfgraph::forest::ForestSplit;
use sdfgraph::MultiGraph;

/// All-pairs undirected distances by Floyd–Warshall; `None` for unreachable.
pub fn floyd_warshall(g: &MultiGraph) -> Vec<Vec<Option<usize>>> {
    let n = g.vertex_count();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for &(t, h) in g.edges() {
        if t != h {
            d[t][h] = Some(1);
            d[h][t] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Component count by union-find.
pub fn union_find_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut comps = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps
}

/// Whether the edges form a forest (no cycle, no loop).
pub fn is_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    union_find_components(n, edges) + edges.len() == n
}

/// Number of spanning trees by enumerating all `(|V|-1)`-subsets of edges.
pub fn enumerate_spanning_trees(g: &MultiGraph) -> u64 {
    fn go(
        n: usize,
        edges: &[(usize, usize)],
        start: usize,
        chosen: &mut Vec<(usize, usize)>,
    ) -> u64 {
        if chosen.len() + 1 == n {
            return u64::from(union_find_components(n, chosen) == 1);
        }
        let mut total = 0;
        for i in start..edges.len() {
            chosen.push(edges[i]);
            total += go(n, edges, i + 1, chosen);
            chosen.pop();
        }
        total
    }
    let edges: Vec<(usize, usize)> = g.edges().iter().copied().filter(|&(a, b)| a != b).collect();
    go(g.vertex_count(), &edges, 0, &mut Vec::new())
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    let mut det = 0i128;
    for c in 0..n {
        if m[0][c] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if c % 2 == 0 { 1 } else { -1 };
        det += sign * m[0][c] as i128 * cofactor_det(&minor);
    }
    det
}

/// Eigenvalues of the Laplacian of the cycle `C_n`: `2 − 2cos(2πk/n)`.
pub fn cycle_eigenvalues(n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|k| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues of the Laplacian of the `n × n` discrete torus.
pub fn torus_eigenvalues(n: usize) -> Vec<f64> {
    let tau = 2.0 * std::f64::consts::PI / n as f64;
    let mut v = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            v.push(4.0 - 2.0 * (tau * j as f64).cos() - 2.0 * (tau * k as f64).cos());
        }
    }
    v.sort_by(f64::total_cmp);
    v
}

/// Counts eigenvalues `<= t` in a sorted list.
pub fn count_le(sorted: &[f64], t: f64) -> usize {
    sorted.partition_point(|&x| x <= t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitInvariant {
    Bookkeeping,
    Partition,
    Trees,
    UpperBound,
    PieceCount,
    LowerBound,
}

/// Recomputes every property a tree split must have, from scratch. Returns
/// each failure with the invariant it breaks.
pub fn check_forest_split(
    t: &MultiGraph,
    split: &ForestSplit,
    budget: f64,
) -> Vec<(SplitInvariant, String)> {
    use SplitInvariant::*;
    let mut problems = Vec::new();
    let e_total = t.edge_count();
    let n = t.vertex_count();
    let deg = (0..n)
        .map(|v| t.edges().iter().filter(|&&(a, b)| a == v || b == v).count())
        .max()
        .unwrap_or(0);
    let k = split.components.len();
    if split.piece_count != k {
        problems.push((
            Bookkeeping,
            format!("piece_count {} != {}", split.piece_count, k),
        ));
    }
    if split.base_degree != deg {
        problems.push((
            Bookkeeping,
            format!("base_degree {} != {}", split.base_degree, deg),
        ));
    }

    // partition of E(T)
    let mut seen = vec![0usize; e_total];
    for &e in split
        .removed_edges
        .iter()
        .chain(split.components.iter().flatten())
    {
        if e >= e_total {
            problems.push((Partition, format!("edge index {e} out of range")));
            continue;
        }
        seen[e] += 1;
    }
    if seen.iter().any(|&c| c != 1) {
        problems.push((
            Partition,
            format!("not a partition: multiplicities {seen:?}"),
        ));
    }
    if split.removed_edges.len() + 1 != k {
        problems.push((
            Partition,
            format!("{} removed edges for {k} pieces", split.removed_edges.len()),
        ));
    }

    // every piece is a tree
    for (i, comp) in split.components.iter().enumerate() {
        let edges: Vec<(usize, usize)> = comp
            .iter()
            .filter(|&&e| e < e_total)
            .map(|&e| t.edges()[e])
            .collect();
        let mut verts: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        verts.sort_unstable();
        verts.dedup();
        if !edges.is_empty() {
            let relabel = |v: usize| verts.binary_search(&v).unwrap();
            let local: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(a, b)| (relabel(a), relabel(b)))
                .collect();
            if !(is_acyclic(verts.len(), &local) && union_find_components(verts.len(), &local) == 1)
            {
                problems.push((Trees, format!("piece {i} is not a tree")));
            }
        }
        if comp.len() as f64 > budget {
            problems.push((
                UpperBound,
                format!("piece {i} has {} > {budget} edges", comp.len()),
            ));
        }
        if i + 1 < k && (comp.len() as f64) * (deg as f64) < budget {
            problems.push((
                LowerBound,
                format!("piece {i} has {} < P/deg edges", comp.len()),
            ));
        }
    }
    if !(k >= 1 && k as f64 <= e_total as f64 * deg as f64 / budget + 1.0) {
        problems.push((
            PieceCount,
            format!("piece count {k} outside [1, |E|deg/P + 1]"),
        ));
    }

    // removing the edges leaves exactly k components
    let remaining: Vec<(usize, usize)> = (0..e_total)
        .filter(|e| !split.removed_edges.contains(e))
        .map(|e| t.edges()[e])
        .collect();
    let b0 = union_find_components(n, &remaining);
    if b0 != k {
        problems.push((Trees, format!("b0 after removal {b0} != k {k}")));
    }
    problems
}

/// Whether some set of removed edges meets every split invariant, by trying
/// all `2^|E|` subsets. Pieces are ordered smallest last.
pub fn admits_valid_split(t: &MultiGraph, budget: f64) -> bool {
    let e = t.edge_count();
    let n = t.vertex_count();
    let deg = t.max_degree() as f64;
    assert!(e <= 20, "exhaustive search over {e} edges");
    'mask: for mask in 0u32..(1 << e) {
        let kept: Vec<(usize, usize)> = (0..e)
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| t.edges()[i])
            .collect();
        let removed = e - kept.len();
        if union_find_components(n, &kept) != removed + 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(a, b) in &kept {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut sizes = vec![0usize; n];
        for &(a, _) in &kept {
            let r = find(&mut parent, a);
            sizes[r] += 1;
        }
        let mut pieces: Vec<usize> = (0..n)
            .filter(|&v| find(&mut parent, v) == v)
            .map(|v| sizes[v])
            .collect();
        pieces.sort_unstable_by(|a, b| b.cmp(a));
        let k = pieces.len();
        for (i, &s) in pieces.iter().enumerate() {
            if s as f64 > budget || (i + 1 < k && (s as f64) * deg < budget) {
                continue 'mask;
            }
        }
        return true;
    }
    false
}
