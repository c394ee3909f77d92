//! Differential, Laplacian and first spectral density function of a graph,
//! Fuglede–Kadison determinants, the first-eigenvalue bound and the check of
//! the small-eigenvalue estimate `F₁(λ) − F₁(0) ≤ 2·|E|·deg·λ` on `[0, 1)`.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::format::fmt_g15;
use crate::graph::{Distance, MultiGraph};
use crate::linalg::{self, DenseMatrix, IntMatrix, Spectrum};

/// Singular values closer than this (relative) form one jump.
const JUMP_MERGE_TOL: f64 = 1e-10;
/// Offset used to probe the left side of each jump.
pub const JUMP_PROBE: f64 = 1e-12;

/// Right-continuous nondecreasing integer step function on `[0, ∞)`.
///
/// `values[0]` holds on `[0, jump_points[0])`, `values[i + 1]` on
/// `[jump_points[i], jump_points[i + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    jump_points: Vec<f64>,
    values: Vec<usize>,
}

impl StepFunction {
    pub fn constant(value: usize) -> Self {
        StepFunction {
            jump_points: Vec::new(),
            values: vec![value],
        }
    }

    /// Builds `λ ↦ base + #{x ∈ points : x ≤ λ}` from unsorted nonnegative
    /// points, merging points that agree to `1e-10` relative.
    pub fn counting(base: usize, points: &[f64]) -> Self {
        let mut sorted = points.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut jump_points: Vec<f64> = Vec::new();
        let mut values = vec![base];
        let mut count = base;
        for x in sorted {
            count += 1;
            match jump_points.last() {
                Some(&start) if x - start <= JUMP_MERGE_TOL * start.max(1.0) => {
                    *values.last_mut().unwrap() = count;
                }
                _ => {
                    jump_points.push(x);
                    values.push(count);
                }
            }
        }
        StepFunction {
            jump_points,
            values,
        }
    }

    /// `F₁` of a graph from its Laplacian spectrum: `b₁` plus the number of
    /// positive eigenvalues `μ` with `√μ ≤ λ`.
    pub fn from_laplacian_spectrum(spectrum: &Spectrum, b1: usize) -> Self {
        let sv: Vec<f64> = spectrum.positive().iter().map(|&mu| mu.sqrt()).collect();
        Self::counting(b1, &sv)
    }

    pub fn jump_points(&self) -> &[f64] {
        &self.jump_points
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Value at `lambda`, jumps included (`≤`).
    pub fn eval(&self, lambda: f64) -> usize {
        let idx = self.jump_points.partition_point(|&j| j <= lambda);
        self.values[idx]
    }

    pub fn at_zero(&self) -> usize {
        self.eval(0.0)
    }

    pub fn final_value(&self) -> usize {
        *self.values.last().unwrap()
    }

    /// `F(λ) − F(0)`.
    pub fn gap(&self, lambda: f64) -> usize {
        self.eval(lambda) - self.at_zero()
    }

    /// `ln K · (F(K) − F(0)) − ∫₀ᴷ (F(λ) − F(0))/λ dλ`, which equals the log of
    /// the product of the jump locations `≤ K` counted with multiplicity.
    pub fn log_det_via_density(&self, k: f64) -> f64 {
        let f0 = self.at_zero();
        let mut integral = 0.0;
        for (i, &start) in self.jump_points.iter().enumerate() {
            if start > k {
                break;
            }
            let end = self
                .jump_points
                .get(i + 1)
                .copied()
                .unwrap_or(f64::INFINITY)
                .min(k);
            let level = (self.values[i + 1] - f0) as f64;
            integral += level * (end / start).ln();
        }
        k.ln() * self.gap(k) as f64 - integral
    }
}

/// The differential `c₁ : C₁ → C₀` as a `|V| × |E|` matrix: `+1` at the head,
/// `−1` at the tail, zero column for a loop.
pub fn incidence(g: &MultiGraph) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(g.vertex_count(), g.edge_count());
    for (e, &(t, h)) in g.edges().iter().enumerate() {
        m[(h, e)] += 1.0;
        m[(t, e)] -= 1.0;
    }
    m
}

/// Integer zeroth Laplacian `Δ₀ = c₁ c₁*`; loops contribute nothing.
pub fn laplacian0_int(g: &MultiGraph) -> IntMatrix {
    let n = g.vertex_count();
    let mut m = IntMatrix::zeros(n, n);
    for &(t, h) in g.edges() {
        if t == h {
            continue;
        }
        m[(t, t)] += 1;
        m[(h, h)] += 1;
        m[(t, h)] -= 1;
        m[(h, t)] -= 1;
    }
    m
}

pub fn laplacian0(g: &MultiGraph) -> DenseMatrix {
    let n = g.vertex_count();
    let mut m = DenseMatrix::zeros(n, n);
    for &(t, h) in g.edges() {
        if t == h {
            continue;
        }
        m[(t, t)] += 1.0;
        m[(h, h)] += 1.0;
        m[(t, h)] -= 1.0;
        m[(h, t)] -= 1.0;
    }
    m
}

/// Eigenvalues of `Δ₀` with the kernel dimension set to the component count.
pub fn laplacian_spectrum(g: &MultiGraph) -> Result<Spectrum> {
    linalg::sym_eigenvalues(&laplacian0(g), g.component_count())
}

/// First spectral density function `F₁(X)`.
pub fn sdf(g: &MultiGraph) -> Result<StepFunction> {
    let stats = g.stats();
    let spectrum = laplacian_spectrum(g)?;
    Ok(StepFunction::from_laplacian_spectrum(&spectrum, stats.b1))
}

/// Smallest nonzero eigenvalue of `Δ₀`.
pub fn smallest_positive_eigenvalue(g: &MultiGraph) -> Result<f64> {
    laplacian_spectrum(g)?
        .min_positive()
        .ok_or(Error::NoPositiveSpectrum)
}

/// `1 / (diam · vol)`, a lower bound for the smallest nonzero eigenvalue.
pub fn chung_bound(g: &MultiGraph) -> Result<f64> {
    if g.vertex_count() < 2 {
        return Err(Error::TooFewVertices {
            needed: 2,
            actual: g.vertex_count(),
        });
    }
    let stats = g.stats();
    match stats.diameter {
        Distance::Finite(diam) => Ok(1.0 / (diam as f64 * stats.volume as f64)),
        Distance::Unreachable => Err(Error::DisconnectedGraph),
    }
}

/// Natural log of the Fuglede–Kadison determinant of `a`: the sum of the logs
/// of its nonzero singular values (0 for the zero map).
pub fn fk_det(a: &DenseMatrix, known_kernel_dim: usize) -> Result<f64> {
    let sv = linalg::singular_values(a, known_kernel_dim)?;
    Ok(sv.positive().iter().map(|x| x.ln()).sum())
}

/// `ln det⁽²⁾(c₁(X))` from the Laplacian spectrum: half the sum of the logs of
/// the positive eigenvalues of `Δ₀`.
pub fn log_det_from_spectrum(spectrum: &Spectrum) -> f64 {
    0.5 * spectrum.positive().iter().map(|x| x.ln()).sum::<f64>()
}

pub fn graph_log_det(g: &MultiGraph) -> Result<f64> {
    Ok(log_det_from_spectrum(&laplacian_spectrum(g)?))
}

/// Number of spanning trees via the reduced Laplacian determinant.
pub fn spanning_tree_count(g: &MultiGraph) -> Result<BigInt> {
    if g.vertex_count() == 0 {
        return Err(Error::TooFewVertices {
            needed: 1,
            actual: 0,
        });
    }
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    linalg::integer_determinant(&laplacian0_int(g).minor(0, 0))
}

/// Which estimate governs a probe point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Gap must vanish.
    Zero,
    /// Neither fine estimate applies; only the global linear bound is checked.
    Silent,
    /// Gap bounded by `2·|E|·deg·λ`.
    Linear,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Zero => "zero",
            Regime::Silent => "silent",
            Regime::Linear => "linear",
        }
    }
}

/// Which assertion a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assertion {
    /// `gap ≤ 2·|E|·deg·λ`.
    LinearBound,
    /// `gap = 0` below `1/(√2·|E|)` for connected graphs with `deg ≥ 2`.
    FineZero,
    /// `gap = 0` on `[0, 1]` for connected graphs with `deg ≤ 1`.
    LowDegree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub lambda: f64,
    pub gap: usize,
    pub bound: f64,
    pub assertion: Assertion,
}

/// Result of probing the spectral density estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub edge_count: usize,
    pub max_degree: usize,
    pub connected: bool,
    pub lambda_grid: Vec<f64>,
    pub sdf_gap: Vec<usize>,
    pub bound: Vec<f64>,
    pub regime: Vec<Regime>,
    pub fine_zero_threshold: f64,
    pub fine_linear_threshold: f64,
    pub violations: Vec<Violation>,
}

impl BoundReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated_at(&self, i: usize) -> bool {
        let lambda = self.lambda_grid[i];
        self.violations.iter().any(|v| v.lambda == lambda)
    }

    /// `lambda,gap,bound,regime,violated`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,gap,bound,regime,violated\n");
        for i in 0..self.lambda_grid.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_g15(self.lambda_grid[i]),
                self.sdf_gap[i],
                fmt_g15(self.bound[i]),
                self.regime[i].as_str(),
                self.violated_at(i)
            );
        }
        out
    }
}

/// Probe points: `k / grid_size` for `k < grid_size`, plus every jump point
/// below 1 and the point `1e-12` to its left.
pub fn probe_points(f: &StepFunction, grid_size: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..grid_size)
        .map(|k| k as f64 / grid_size as f64)
        .collect();
    for &j in f.jump_points().iter().filter(|&&j| j < 1.0) {
        pts.push(j);
        if j - JUMP_PROBE >= 0.0 {
            pts.push(j - JUMP_PROBE);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Checks `F₁(λ) − F₁(0) ≤ 2·|E|·deg·λ` on `[0, 1)`, the vanishing of the gap
/// below `1/(√2·|E|)` for connected graphs of degree at least 2, and on
/// `[0, 1]` for connected graphs of degree at most 1.
pub fn verify_main_bound(g: &MultiGraph, grid_size: usize) -> Result<BoundReport> {
    if grid_size == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    let stats = g.stats();
    let f = StepFunction::from_laplacian_spectrum(&laplacian_spectrum(g)?, stats.b1);
    Ok(check_bound(&f, &stats.clone().into(), grid_size))
}

/// The numbers of a graph the estimate depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundInputs {
    pub edge_count: usize,
    pub max_degree: usize,
    pub connected: bool,
}

impl From<crate::graph::GraphStats> for BoundInputs {
    fn from(s: crate::graph::GraphStats) -> Self {
        BoundInputs {
            edge_count: s.edge_count,
            max_degree: s.max_degree,
            connected: s.is_connected(),
        }
    }
}

/// Runs the bound check on an already computed spectral density function.
pub fn check_bound(f: &StepFunction, inputs: &BoundInputs, grid_size: usize) -> BoundReport {
    let e = inputs.edge_count;
    let deg = inputs.max_degree;
    let fine = inputs.connected && deg >= 2;
    let low_degree = inputs.connected && deg <= 1;

    let fine_zero_threshold = if e == 0 {
        f64::INFINITY
    } else {
        1.0 / (2f64.sqrt() * e as f64)
    };
    let fine_linear_threshold = if e <= 1 || deg == 0 {
        f64::INFINITY
    } else {
        1.0 / (2.0 * (e - 1) as f64 * deg as f64)
    };
    // λ < 1/(√2 e)  ⇔  2 λ² e² < 1
    let below_zero_threshold = |lambda: f64| 2.0 * lambda * lambda * ((e * e) as f64) < 1.0;

    let lambda_grid = probe_points(f, grid_size);
    let mut sdf_gap = Vec::with_capacity(lambda_grid.len());
    let mut bound = Vec::with_capacity(lambda_grid.len());
    let mut regime = Vec::with_capacity(lambda_grid.len());
    let mut violations = Vec::new();

    for &lambda in &lambda_grid {
        let gap = f.gap(lambda);
        let b = 2.0 * e as f64 * deg as f64 * lambda;
        let r = if low_degree || (fine && below_zero_threshold(lambda)) {
            Regime::Zero
        } else if fine && lambda < fine_linear_threshold {
            Regime::Silent
        } else {
            Regime::Linear
        };
        if gap as f64 > b {
            violations.push(Violation {
                lambda,
                gap,
                bound: b,
                assertion: Assertion::LinearBound,
            });
        } else if r == Regime::Zero && gap != 0 {
            violations.push(Violation {
                lambda,
                gap,
                bound: b,
                assertion: if low_degree {
                    Assertion::LowDegree
                } else {
                    Assertion::FineZero
                },
            });
        }
        sdf_gap.push(gap);
        bound.push(b);
        regime.push(r);
    }
    if low_degree && f.gap(1.0) != 0 {
        violations.push(Violation {
            lambda: 1.0,
            gap: f.gap(1.0),
            bound: 2.0 * e as f64 * deg as f64,
            assertion: Assertion::LowDegree,
        });
    }

    BoundReport {
        edge_count: e,
        max_degree: deg,
        connected: inputs.connected,
        lambda_grid,
        sdf_gap,
        bound,
        regime,
        fine_zero_threshold,
        fine_linear_threshold,
        violations,
    }
}
