use thiserror::Error;

/// Errors raised by the numerical kernels and the experiment runner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("QR iteration did not converge within {sweeps} sweeps for eigenvalue {index}")]
    NonConvergence { index: usize, sweeps: usize },

    #[error("exactly zero pivot in column {column}")]
    ExactSingular { column: usize },

    #[error("inverse iteration reached residual {residual:e}, target {target:e}")]
    NoNullVector { residual: f64, target: f64 },

    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("eigenpair is not trusted")]
    UntrustedEigenpair,

    #[error("curve gradient vanishes on the tangent complement (point off the curve?)")]
    SingularCurvePoint,

    #[error("Newton tracking diverged for parameter direction {direction}")]
    OracleDivergence { direction: usize },

    #[error("{resamples} resamples exceed the budget of {budget}")]
    TooManyResamples { resamples: usize, budget: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
