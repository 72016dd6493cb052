use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain violation: {0}")]
    Domain(String),

    /// The sign hypothesis A0(x)*C0(x) < 0 fails at a sample point.
    #[error("hypothesis A0(x)*C0(x) < 0 fails at x = {x} (A0*C0 = {product:e})")]
    Hypothesis { x: f64, product: f64 },

    /// Finite-difference derivative failed its two-step consistency check.
    #[error("derivative estimates disagree at x = {x}: {coarse:e} vs {fine:e} (rel {rel:e})")]
    Derivative {
        x: f64,
        coarse: f64,
        fine: f64,
        rel: f64,
    },

    /// An evaluator produced a non-finite value.
    #[error("non-finite evaluation at x = {x} in {context}")]
    Evaluation { x: f64, context: String },

    /// Iteration limit reached before the tolerance was met.
    #[error("no convergence within {limit} steps ({context})")]
    Convergence { limit: usize, context: String },

    /// A self-validation accuracy target could not be met.
    #[error("accuracy target not met: {0}")]
    Accuracy(String),

    /// The request lies outside the proven validity table.
    #[error("outside proven validity: {0}")]
    Validity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
