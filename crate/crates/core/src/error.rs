use thiserror::Error;

/// Errors raised by graph, linear-algebra, splitting and tower operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("edge index {index} out of range for a graph with {edge_count} edges")]
    InvalidEdgeIndex { index: usize, edge_count: usize },
    #[error("vertex index {index} out of range for a graph with {vertex_count} vertices")]
    InvalidVertex { index: usize, vertex_count: usize },
    #[error("matrix is not symmetric (entry ({row}, {col}) differs from its transpose)")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error(
        "kernel dimension {expected} disagrees with numerics: next eigenvalue {next} is below {threshold}"
    )]
    KernelMismatch {
        expected: usize,
        next: f64,
        threshold: f64,
    },
    #[error("kernel dimension {kernel} exceeds matrix size {size}")]
    KernelTooLarge { kernel: usize, size: usize },
    #[error("Gram matrix has a negative eigenvalue {value}")]
    NotPositiveSemidefinite { value: f64 },
    #[error("eigenvalue sum {sum} differs from trace {trace}")]
    TraceMismatch { sum: f64, trace: f64 },
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("graph has no positive Laplacian spectrum (every edge is a loop)")]
    NoPositiveSpectrum,
    #[error("graph needs at least {needed} vertices, has {actual}")]
    TooFewVertices { needed: usize, actual: usize },
    #[error("not a tree: {0}")]
    NotATree(&'static str),
    #[error("tree has no edges")]
    NoEdges,
    #[error("budget {budget} out of range (0, {max}]")]
    BudgetOutOfRange { budget: f64, max: f64 },
    #[error("bad moduli: {0}")]
    BadModuli(String),
    #[error("moduli sequence is not nested: {previous:?} does not divide {next:?}")]
    NotNested { previous: Vec<u64>, next: Vec<u64> },
    #[error("voltages do not generate Z^{rank}")]
    VoltagesNotGenerating { rank: usize },
    #[error("voltage graph malformed: {0}")]
    BadVoltages(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
