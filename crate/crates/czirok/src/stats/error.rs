use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },
    #[error("need at least {needed} snapshots spanning {span} time units, got {got} spanning {got_span}")]
    TooFewSnapshots {
        needed: usize,
        span: f64,
        got: usize,
        got_span: f64,
    },
    #[error("no coherent cluster: peak/mean ratio below {threshold} in {weak} of {total} snapshots")]
    NoCoherentCluster { threshold: f64, weak: usize, total: usize },
    #[error("quadrature did not converge: {coarse} vs {fine}")]
    Quadrature { coarse: f64, fine: f64 },
}

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> StatsError {
    StatsError::InvalidArgument {
        field,
        reason: reason.into(),
    }
}
