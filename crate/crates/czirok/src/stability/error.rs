use num_complex::Complex64;
use thiserror::Error;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("mode k = 0 has no memory kernel; use the zeroth-mode criterion")]
    ZeroMode,
    #[error("invalid mode context: {0}")]
    InvalidContext(String),
    #[error("Re(gamma) = {re} is too close to the decay rate -{decay} of the kernel")]
    NotAdmissible { re: f64, decay: f64 },
    #[error("gamma = {gamma} lies outside the precomputed evaluation window")]
    OutsideWindow { gamma: Complex64 },
    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },
    #[error("zeroth mode unstable: G'(xi) = {gp} >= 1")]
    ZerothModeUnstable { gp: f64 },
    #[error("no stability change between sigma = {lo} (unstable: {lo_unstable}) and sigma = {hi} (unstable: {hi_unstable})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        lo_unstable: bool,
        hi_unstable: bool,
    },
    #[error("all modes 1..={k_range} are stable")]
    AllModesStable { k_range: u32 },
    #[error("renewal solution saturated at t = {t}")]
    Saturation { t: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}
