use serde::{Deserialize, Serialize};

use super::{GSpec, KernelSpec, ModelError};

/// How the local velocity average is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Averaging {
    /// `(1/N) sum_j u_j phi(|x_j - x_i|)`.
    Symmetric,
    /// `sum_j u_j phi / sum_j phi`, zero when no weight is present.
    Normalized,
}

/// Full configuration of one particle run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub length: f64,
    pub sigma: f64,
    pub dt: f64,
    pub g: GSpec,
    pub kernel: KernelSpec,
    pub averaging: Averaging,
    pub steps: usize,
    pub seed: u64,
}

impl ModelParams {
    /// Parameters used throughout the numerical experiments: `L = 10`, top-hat
    /// kernel of radius one, cubic `G`, `dt = 0.1`, symmetric averaging.
    pub fn baseline(n: usize, h: f64, sigma: f64) -> Self {
        ModelParams {
            n,
            length: 10.0,
            sigma,
            dt: 0.1,
            g: GSpec::cubic(h),
            kernel: KernelSpec::top_hat(1.0, 10.0).expect("valid baseline kernel"),
            averaging: Averaging::Symmetric,
            steps: 0,
            seed: 0,
        }
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_averaging(mut self, averaging: Averaging) -> Self {
        self.averaging = averaging;
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n < 1 {
            return Err(ModelError::invalid("n", "at least one agent is required"));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(ModelError::invalid("l", format!("must be positive, got {}", self.length)));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(ModelError::invalid("sigma", format!("must be non-negative, got {}", self.sigma)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(ModelError::invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.kernel.length() != self.length {
            return Err(ModelError::invalid(
                "kernel",
                format!(
                    "kernel built for L = {} but model uses L = {}",
                    self.kernel.length(),
                    self.length
                ),
            ));
        }
        self.g.validate()
    }
}
