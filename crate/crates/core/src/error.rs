use thiserror::Error;

pub type Result<T, E = EvtError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvtError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter combination was rejected when building a model.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// A formula hit a removable or essential singularity (zero denominator).
    #[error("singular statistic: {0}")]
    Singular(String),

    /// An intermediate quantity overflowed or became non-finite.
    #[error("numerical overflow: {0}")]
    Overflow(String),

    #[error("second-order estimation failed: {0}")]
    EstimationFailure(String),

    /// The bootstrap MSE curves carried no usable minimum.
    #[error("sample fraction selection failed: {reason}")]
    SelectionFailure {
        reason: String,
        diagnostics: Box<crate::resampling::BootstrapDiagnostics>,
    },

    #[error("no observation exceeds the threshold {threshold}")]
    NoExceedance { threshold: f64 },

    #[error("optimizer did not converge: {0}")]
    NonConvergence(String),
}

impl EvtError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        EvtError::Domain(msg.into())
    }

    pub(crate) fn singular(msg: impl Into<String>) -> Self {
        EvtError::Singular(msg.into())
    }
}
