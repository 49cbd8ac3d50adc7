use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {degree} exceeds the configured maximum {limit}")]
    Capacity { degree: usize, limit: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root {j} of P_{n} did not converge (Newton and bisection fallback)")]
    RootConvergence { n: usize, j: usize },

    #[error("quadrature did not converge: achieved {achieved:e}, wanted {wanted:e}")]
    Quadrature { achieved: f64, wanted: f64 },

    #[error("contour quadrature did not converge at {points} points: last delta {delta:e}")]
    ContourConvergence { points: usize, delta: f64 },

    #[error("invalid contour: {0}")]
    Contour(String),

    #[error("unknown test function `{0}`")]
    UnknownFunction(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
