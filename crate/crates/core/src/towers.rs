//! Covering towers over free abelian deck groups.
//!
//! A [`VoltageGraph`] assigns a vector in `Zᵈ` to every edge of a base graph.
//! Reducing the voltages modulo `(n₁, …, n_d)` realizes the regular cover with
//! deck group `∏ Z/n_j`; a nested sequence of moduli is a covering tower whose
//! normalized log-determinants converge to the L²-log-determinant of the
//! infinite cover. For abelian deck groups that limit is a Mahler-measure type
//! integral of the twisted Laplacian over the torus, which
//! [`l2_log_det_oracle`] evaluates by midpoint quadrature.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::fmt_g15;
use crate::graph::MultiGraph;
use crate::linalg::Spectrum;
use crate::spectral::{self, StepFunction};

/// Upper bound on vertices of a constructed cover.
pub const MAX_COVER_VERTICES: u64 = 1 << 22;

/// Base multigraph with a `Zᵈ` voltage per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageGraph {
    base: MultiGraph,
    rank: usize,
    voltages: Vec<Vec<i64>>,
}

impl VoltageGraph {
    pub fn new(base: MultiGraph, rank: usize, voltages: Vec<Vec<i64>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::BadVoltages("rank must be at least 1".into()));
        }
        if voltages.len() != base.edge_count() {
            return Err(Error::BadVoltages(format!(
                "{} voltages for {} edges",
                voltages.len(),
                base.edge_count()
            )));
        }
        if let Some(i) = voltages.iter().position(|v| v.len() != rank) {
            return Err(Error::BadVoltages(format!(
                "edge {i} has {} voltage entries, expected {rank}",
                voltages[i].len()
            )));
        }
        Ok(VoltageGraph {
            base,
            rank,
            voltages,
        })
    }

    /// One vertex with one loop per coordinate direction of `Zᵈ`; its covers are
    /// cycles (`d = 1`) and discrete tori.
    pub fn bouquet(rank: usize) -> Self {
        let base = MultiGraph::new(1, vec![(0, 0); rank]).expect("valid");
        let voltages = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        VoltageGraph {
            base,
            rank,
            voltages,
        }
    }

    pub fn base(&self) -> &MultiGraph {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn voltages(&self) -> &[Vec<i64>] {
        &self.voltages
    }

    /// Voltages after removing the potential of a spanning tree of the base, so
    /// that tree edges carry zero. Their span is the holonomy lattice.
    pub fn reduced_voltages(&self) -> Result<Vec<Vec<i64>>> {
        let tree = self.base.spanning_tree()?;
        let n = self.base.vertex_count();
        let mut potential: Vec<Option<Vec<i64>>> = vec![None; n];
        if n > 0 {
            potential[0] = Some(vec![0; self.rank]);
        }
        // Tree edges in BFS order settle one new vertex each.
        let mut pending = tree.clone();
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|&e| {
                let (t, h) = self.base.edge(e);
                let s = &self.voltages[e];
                match (&potential[t], &potential[h]) {
                    (Some(pt), None) => {
                        potential[h] = Some(pt.iter().zip(s).map(|(a, b)| a + b).collect());
                        false
                    }
                    (None, Some(ph)) => {
                        potential[t] = Some(ph.iter().zip(s).map(|(a, b)| a - b).collect());
                        false
                    }
                    _ => true,
                }
            });
            debug_assert!(pending.len() < before);
            if pending.len() == before {
                break;
            }
        }
        let zero = vec![0; self.rank];
        Ok(self
            .base
            .edges()
            .iter()
            .zip(&self.voltages)
            .map(|(&(t, h), s)| {
                let pt = potential[t].as_ref().unwrap_or(&zero);
                let ph = potential[h].as_ref().unwrap_or(&zero);
                (0..self.rank).map(|j| pt[j] + s[j] - ph[j]).collect()
            })
            .collect())
    }

    /// True when the base is connected and the holonomy lattice is all of `Zᵈ`,
    /// i.e. the infinite cover is connected.
    pub fn voltages_generate(&self) -> Result<bool> {
        let reduced = self.reduced_voltages()?;
        lattice_is_full(&reduced, self.rank)
    }
}

/// Whether the integer vectors span `Zᵈ` (integer row reduction; the product of
/// the pivots is the index of the generated lattice).
fn lattice_is_full(vectors: &[Vec<i64>], rank: usize) -> Result<bool> {
    let overflow = || Error::BadVoltages("voltage magnitudes too large".into());
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| i128::from(x)).collect())
        .filter(|v: &Vec<i128>| v.iter().any(|&x| x != 0))
        .collect();
    let mut top = 0;
    for col in 0..rank {
        loop {
            let pivot = (top..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].unsigned_abs());
            let Some(p) = pivot else {
                return Ok(false);
            };
            rows.swap(top, p);
            let mut reduced_any = false;
            for r in top + 1..rows.len() {
                if rows[r][col] == 0 {
                    continue;
                }
                let q = rows[r][col] / rows[top][col];
                let (head, tail) = rows.split_at_mut(r);
                for (x, &y) in tail[0][col..rank].iter_mut().zip(&head[top][col..rank]) {
                    let sub = q.checked_mul(y).ok_or_else(overflow)?;
                    *x = x.checked_sub(sub).ok_or_else(overflow)?;
                }
                reduced_any |= rows[r][col] != 0;
            }
            if !reduced_any {
                break;
            }
        }
        if rows[top][col].abs() != 1 {
            return Ok(false);
        }
        top += 1;
    }
    Ok(true)
}

fn check_moduli(vg: &VoltageGraph, moduli: &[u64]) -> Result<u64> {
    if moduli.len() != vg.rank {
        return Err(Error::BadModuli(format!(
            "expected {} moduli, got {}",
            vg.rank,
            moduli.len()
        )));
    }
    if moduli.contains(&0) {
        return Err(Error::BadModuli("moduli must be positive".into()));
    }
    let sheets = moduli
        .iter()
        .try_fold(1u64, |acc, &m| acc.checked_mul(m))
        .ok_or_else(|| Error::BadModuli("sheet count overflows".into()))?;
    let vertices = sheets.checked_mul(vg.base.vertex_count() as u64);
    match vertices {
        Some(v) if v <= MAX_COVER_VERTICES => Ok(sheets),
        _ => Err(Error::BadModuli(format!(
            "cover would exceed {MAX_COVER_VERTICES} vertices"
        ))),
    }
}

/// The cover with deck group `∏ Z/n_j`. Vertex `(v, g)` has index
/// `v·N + lex(g)`; edge `(e, g)` has index `e·N + lex(g)` and runs from
/// `(tail(e), g)` to `(head(e), g + σ(e))`.
pub fn build_cover(vg: &VoltageGraph, moduli: &[u64]) -> Result<MultiGraph> {
    let sheets = check_moduli(vg, moduli)? as usize;
    let d = vg.rank;
    let mut stride = vec![1usize; d];
    for j in (0..d.saturating_sub(1)).rev() {
        stride[j] = stride[j + 1] * moduli[j + 1] as usize;
    }
    let mut edges = Vec::with_capacity(vg.base.edge_count() * sheets);
    let mut coords = vec![0u64; d];
    for (&(t, h), sigma) in vg.base.edges().iter().zip(&vg.voltages) {
        let shift: Vec<u64> = sigma
            .iter()
            .zip(moduli)
            .map(|(&s, &n)| s.rem_euclid(n as i64) as u64)
            .collect();
        for g in 0..sheets {
            let mut rest = g;
            for j in 0..d {
                coords[j] = (rest / stride[j]) as u64;
                rest %= stride[j];
            }
            let target: usize = (0..d)
                .map(|j| ((coords[j] + shift[j]) % moduli[j]) as usize * stride[j])
                .sum();
            edges.push((t * sheets + g, h * sheets + target));
        }
    }
    MultiGraph::new(vg.base.vertex_count() * sheets, edges)
}

/// Twisted Laplacian `Δ₀(θ) = Σ_e c_e c_e*` with `c_e = e^{i⟨θ,σ(e)⟩}·δ_head − δ_tail`,
/// row-major `|V| × |V|`.
pub fn twisted_laplacian(vg: &VoltageGraph, theta: &[f64]) -> Vec<Complex64> {
    let n = vg.base.vertex_count();
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for (&(t, h), sigma) in vg.base.edges().iter().zip(&vg.voltages) {
        let phase: f64 = theta.iter().zip(sigma).map(|(a, &s)| a * s as f64).sum();
        let chi = Complex64::from_polar(1.0, phase);
        if t == h {
            m[t * n + t] += (chi - 1.0).norm_sqr();
        } else {
            m[h * n + h] += 1.0;
            m[t * n + t] += 1.0;
            m[h * n + t] -= chi;
            m[t * n + h] -= chi.conj();
        }
    }
    m
}

/// `ln det` of a Hermitian positive definite matrix by Cholesky; `None` if a
/// pivot is not positive.
fn hermitian_log_det(mut a: Vec<Complex64>, n: usize) -> Option<f64> {
    let mut log_det = 0.0;
    for j in 0..n {
        let mut diag = a[j * n + j].re;
        for k in 0..j {
            diag -= a[j * n + k].norm_sqr();
        }
        if diag.is_nan() || diag <= 0.0 {
            return None;
        }
        let ljj = diag.sqrt();
        a[j * n + j] = Complex64::new(ljj, 0.0);
        log_det += 2.0 * ljj.ln();
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k].conj();
            }
            a[i * n + j] = s / ljj;
        }
    }
    Some(log_det)
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn check_oracle_input(vg: &VoltageGraph, nodes: usize) -> Result<()> {
    if nodes == 0 {
        return Err(Error::InvalidArgument(
            "quadrature needs at least one node".into(),
        ));
    }
    if vg.base.vertex_count() == 0 || !vg.base.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    if !vg.voltages_generate()? {
        return Err(Error::VoltagesNotGenerating { rank: vg.rank });
    }
    Ok(())
}

fn midpoint_mean(vg: &VoltageGraph, nodes: usize) -> Result<f64> {
    let d = vg.rank;
    let n = vg.base.vertex_count();
    let h = 2.0 * PI / nodes as f64;
    let inner: usize = (1..d)
        .try_fold(1usize, |acc, _| acc.checked_mul(nodes))
        .ok_or_else(|| Error::InvalidArgument("too many quadrature nodes".into()))?;
    let partials: Vec<Option<f64>> = (0..nodes)
        .into_par_iter()
        .map(|k0| {
            let mut theta = vec![0.0; d];
            theta[0] = (k0 as f64 + 0.5) * h;
            let mut row = Vec::with_capacity(inner);
            for idx in 0..inner {
                let mut rest = idx;
                for j in (1..d).rev() {
                    theta[j] = ((rest % nodes) as f64 + 0.5) * h;
                    rest /= nodes;
                }
                row.push(hermitian_log_det(twisted_laplacian(vg, &theta), n)?);
            }
            Some(pairwise_sum(&row))
        })
        .collect();
    let partials: Vec<f64> = partials
        .into_iter()
        .collect::<Option<_>>()
        .ok_or(Error::VoltagesNotGenerating { rank: d })?;
    Ok(pairwise_sum(&partials) / (nodes as f64).powi(d as i32))
}

/// `½ (2π)^{-d} ∫ ln det Δ₀(θ) dθ` by the midpoint rule with `nodes` points per
/// dimension (never sampling `θ = 0`).
pub fn l2_log_det_oracle(vg: &VoltageGraph, nodes: usize) -> Result<f64> {
    check_oracle_input(vg, nodes)?;
    Ok(0.5 * midpoint_mean(vg, nodes)?)
}

/// Midpoint values at `nodes` and `2·nodes` combined by Richardson extrapolation.
/// The logarithmic singularity at `θ = 0` makes the midpoint error `C·h^d` to
/// leading order.
pub fn l2_log_det_oracle_refined(vg: &VoltageGraph, nodes: usize) -> Result<f64> {
    check_oracle_input(vg, nodes)?;
    let coarse = midpoint_mean(vg, nodes)?;
    let fine = midpoint_mean(vg, 2 * nodes)?;
    let w = 2f64.powi(vg.rank as i32);
    Ok(0.5 * (w * fine - coarse) / (w - 1.0))
}

/// One level of a tower.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerLevel {
    pub moduli: Vec<u64>,
    pub sheets: u64,
    pub cover: MultiGraph,
    /// `ln det⁽²⁾(c₁(cover)) / N`.
    pub normalized_log_det: f64,
    pub spectrum: Spectrum,
    /// `F₁(cover)`; divide gaps by `sheets` for the normalized profile.
    pub sdf: StepFunction,
}

impl TowerLevel {
    /// `(F₁(λ) − F₁(0)) / N`.
    pub fn normalized_gap(&self, lambda: f64) -> f64 {
        self.sdf.gap(lambda) as f64 / self.sheets as f64
    }

    /// Normalized log-determinant recovered from the density,
    /// `ln K·(F₁(K) − F₁(0))/N − ∫₀ᴷ (F₁(λ) − F₁(0))/(N λ) dλ`.
    pub fn log_det_via_density(&self, k: f64) -> f64 {
        self.sdf.log_det_via_density(k) / self.sheets as f64
    }
}

/// Levels of a tower together with the limit value and the uniform constant.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerReport {
    pub levels: Vec<TowerLevel>,
    pub oracle_limit: f64,
    /// `2·|E(base)|·deg(base)`.
    pub uniform_constant: f64,
    pub lambda_grid: usize,
    /// `√(2·deg(base))`, above every singular value at every level.
    pub density_cutoff: f64,
}

impl TowerReport {
    /// `sheets,norm_log_det,oracle,abs_error`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sheets,norm_log_det,oracle,abs_error\n");
        for level in &self.levels {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                level.sheets,
                fmt_g15(level.normalized_log_det),
                fmt_g15(self.oracle_limit),
                fmt_g15((level.normalized_log_det - self.oracle_limit).abs())
            );
        }
        out
    }

    pub fn last_error(&self) -> Option<f64> {
        self.levels
            .last()
            .map(|l| (l.normalized_log_det - self.oracle_limit).abs())
    }
}

fn divides(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| y % x == 0)
}

/// Builds every level, its normalized log-determinant and density, and the
/// Richardson-refined limit value with `oracle_nodes` base nodes per dimension.
pub fn tower_report(
    vg: &VoltageGraph,
    moduli_sequence: &[Vec<u64>],
    lambda_grid: usize,
    oracle_nodes: usize,
) -> Result<TowerReport> {
    if moduli_sequence.is_empty() {
        return Err(Error::BadModuli("empty moduli sequence".into()));
    }
    if lambda_grid == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    for m in moduli_sequence {
        check_moduli(vg, m)?;
    }
    for w in moduli_sequence.windows(2) {
        if !divides(&w[0], &w[1]) {
            return Err(Error::NotNested {
                previous: w[0].clone(),
                next: w[1].clone(),
            });
        }
    }

    let mut levels = moduli_sequence
        .par_iter()
        .map(|moduli| build_level(vg, moduli))
        .collect::<Result<Vec<_>>>()?;
    levels.sort_by_key(|l| l.sheets);

    let stats = vg.base.stats();
    Ok(TowerReport {
        levels,
        oracle_limit: l2_log_det_oracle_refined(vg, oracle_nodes)?,
        uniform_constant: 2.0 * stats.edge_count as f64 * stats.max_degree as f64,
        lambda_grid,
        density_cutoff: (2.0 * stats.max_degree as f64).sqrt(),
    })
}

fn build_level(vg: &VoltageGraph, moduli: &[u64]) -> Result<TowerLevel> {
    let cover = build_cover(vg, moduli)?;
    let sheets = moduli.iter().product::<u64>();
    let stats = cover.stats();
    let spectrum = spectral::laplacian_spectrum(&cover)?;
    let normalized_log_det = spectral::log_det_from_spectrum(&spectrum) / sheets as f64;
    let sdf = StepFunction::from_laplacian_spectrum(&spectrum, stats.b1);
    Ok(TowerLevel {
        moduli: moduli.to_vec(),
        sheets,
        cover,
        normalized_log_det,
        spectrum,
        sdf,
    })
}

/// A point where `(F₁(λ) − F₁(0))/N > C·λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformViolation {
    pub sheets: u64,
    pub lambda: f64,
    pub normalized_gap: f64,
    pub bound: f64,
}

/// Checks the uniform estimate at every level on the report's uniform grid
/// and at every jump point below 1.
pub fn verify_uniform_estimate(report: &TowerReport) -> Vec<UniformViolation> {
    let c = report.uniform_constant;
    let mut out = Vec::new();
    for level in &report.levels {
        for lambda in spectral::probe_points(&level.sdf, report.lambda_grid) {
            let normalized_gap = level.normalized_gap(lambda);
            let bound = c * lambda;
            if normalized_gap > bound {
                out.push(UniformViolation {
                    sheets: level.sheets,
                    lambda,
                    normalized_gap,
                    bound,
                });
            }
        }
    }
    out
}
