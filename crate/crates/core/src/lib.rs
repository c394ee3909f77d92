//! Spectral density functions of finite multigraphs.
//!
//! * [`graph`]: the multigraph model, degrees, diameter, Betti numbers.
//! * [`linalg`]: symmetric eigenvalues, singular values, exact determinants.
//! * [`spectral`]: `c₁`, `Δ₀`, the first spectral density function `F₁`,
//!   Fuglede–Kadison determinants and the check of
//!   `F₁(λ) − F₁(0) ≤ 2·|E|·deg·λ` on `[0, 1)`.
//! * [`forest`]: splitting a tree into small subtrees.
//! * [`towers`]: covers from `Zᵈ` voltage graphs and the convergence of
//!   normalized log-determinants along a tower.
//! * [`format`]: the graph text format and CSV number rendering.

pub mod error;
pub mod forest;
pub mod format;
pub mod graph;
pub mod linalg;
pub mod rng;
pub mod spectral;
pub mod towers;

pub use error::{Error, Result};
pub use forest::{split_tree, ForestSplit};
pub use format::{parse_graph, parse_voltage_graph, ParseError};
pub use graph::{Distance, GraphStats, MultiGraph};
pub use linalg::{DenseMatrix, IntMatrix, Spectrum};
pub use spectral::{sdf, verify_main_bound, BoundReport, StepFunction};
pub use towers::{build_cover, tower_report, verify_uniform_estimate, TowerReport, VoltageGraph};
