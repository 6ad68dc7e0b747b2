use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A quaternion (or quaternionic quantity) that had to be inverted is
    /// numerically zero.
    #[error("degenerate input: {0} is not invertible")]
    Degenerate(&'static str),

    #[error("degenerate edge {edge}: consecutive vertices coincide")]
    DegenerateEdge { edge: usize },

    #[error("non-degeneracy violated on edge {edge}: spectral parameter {mu} equals the edge weight {weight}")]
    NonDegeneracy { edge: usize, mu: f64, weight: f64 },

    #[error("transform passes through infinity at vertex {vertex}")]
    HitsInfinity { vertex: usize },

    #[error("operation requires a closed curve")]
    OpenCurve,

    #[error("curve is not arc-length polarised (edge {edge} deviates by {deviation:e})")]
    NotArcLength { edge: usize, deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("weights must be nonzero (weight {index} is {value})")]
    ZeroWeight { index: usize, value: f64 },

    #[error("weights must share one sign (weight {index} is {value})")]
    MixedSignWeights { index: usize, value: f64 },

    #[error("consecutive vertices {index} and {next} coincide")]
    DuplicateVertices { index: usize, next: usize },

    #[error("curve document schema error: {0}")]
    Schema(String),

    #[error("eigen-solver did not converge after {iterations} iterations (best residual {residual:e})")]
    EigenNoConvergence { iterations: usize, residual: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
