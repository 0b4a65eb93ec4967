use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("non-finite value at index {index} in {what}")]
    NonFinite { what: &'static str, index: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("hypothesis of {estimate} violated: {inequality}")]
    Hypothesis { estimate: &'static str, inequality: String },

    #[error("boundary decay precondition violated: |f| at left edge is {measured:e} of peak (limit {limit:e})")]
    BoundaryDecay { measured: f64, limit: f64 },

    #[error("multiplier undefined at xi = 0: {0}")]
    UndefinedMultiplier(String),

    #[error("numerical guard tripped at step {step}: relative mass drift {drift:e} in one step")]
    BlowUp { step: usize, drift: f64 },

    #[error("insufficient data: {0}")]
    Insufficient(String),
}

impl LabError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        LabError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors raised by a numerical guard rather than a precondition.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(self, LabError::BlowUp { .. })
    }
}
