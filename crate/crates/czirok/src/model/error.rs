use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("state has {state} agents but parameters expect {params}")]
    AgentCountMismatch { state: usize, params: usize },
    #[error("state torus length {state} does not match parameter length {params}")]
    LengthMismatch { state: f64, params: f64 },
    #[error("root bracket [{lo}, {hi}] is unusable: {reason}")]
    Bracket { lo: f64, hi: f64, reason: String },
}

impl ModelError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        ModelError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
