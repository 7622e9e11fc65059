use serde::{Deserialize, Serialize};

use super::StabilityError;
use crate::model::{GSpec, KernelSpec};

/// Data of one spatial mode `k` around the stationary state with mean
/// velocity `xi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeContext {
    pub k: i64,
    /// `D_k = 2 pi k / L`.
    pub d_k: f64,
    pub xi: f64,
    pub sigma: f64,
    /// `G'(xi)`.
    pub gp: f64,
    /// Fourier coefficient `phi_k` of the influence function.
    pub phik: f64,
}

impl ModeContext {
    pub fn new(k: i64, length: f64, xi: f64, sigma: f64, gp: f64, phik: f64) -> Result<Self, StabilityError> {
        if !(length > 0.0) {
            return Err(StabilityError::InvalidContext(format!("length must be positive, got {length}")));
        }
        if !(sigma >= 0.0) {
            return Err(StabilityError::InvalidContext(format!("sigma must be >= 0, got {sigma}")));
        }
        if !(phik.abs() <= 1.0) {
            return Err(StabilityError::InvalidContext(format!("|phi_k| must be <= 1, got {phik}")));
        }
        if !xi.is_finite() || !gp.is_finite() {
            return Err(StabilityError::InvalidContext("xi and G'(xi) must be finite".into()));
        }
        Ok(ModeContext {
            k,
            d_k: 2.0 * std::f64::consts::PI * k as f64 / length,
            xi,
            sigma,
            gp,
            phik,
        })
    }

    pub fn from_model(g: &GSpec, kernel: &KernelSpec, xi: f64, sigma: f64, k: i64) -> Result<Self, StabilityError> {
        g.validate()?;
        Self::new(k, kernel.length(), xi, sigma, g.derivative(xi), kernel.fourier_coefficient(k))
    }

    /// `G'(xi) phi_k`.
    pub fn prefactor(&self) -> f64 {
        self.gp * self.phik
    }

    /// Asymptotic decay rate `sigma^2 D_k^2 / 2` of the kernel.
    pub fn decay_rate(&self) -> f64 {
        0.5 * self.sigma * self.sigma * self.d_k * self.d_k
    }

    /// `beta_k(t) = D_k (1 - e^{-t})`.
    pub fn beta(&self, t: f64) -> f64 {
        -self.d_k * (-t).exp_m1()
    }

    /// Context of mode `-k`.
    pub fn conjugate(&self) -> Self {
        ModeContext {
            k: -self.k,
            d_k: -self.d_k,
            ..*self
        }
    }

    pub fn with_gp(&self, gp: f64) -> Self {
        ModeContext { gp, ..*self }
    }

    pub fn with_sigma(&self, sigma: f64) -> Self {
        ModeContext { sigma, ..*self }
    }

    pub(crate) fn require_kernel(&self) -> Result<(), StabilityError> {
        if self.k == 0 {
            return Err(StabilityError::ZeroMode);
        }
        if !(self.sigma > 0.0) {
            return Err(StabilityError::InvalidContext("kernel analysis needs sigma > 0".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_baseline_model() {
        let ctx = ModeContext::from_model(&GSpec::cubic(6.0), &KernelSpec::top_hat(1.0, 10.0).unwrap(), 0.0, 1.0, 1).unwrap();
        assert_eq!(ctx.d_k, 2.0 * std::f64::consts::PI / 10.0);
        assert!((ctx.gp - 1.4).abs() < 1e-15);
        assert!((ctx.phik - 0.935489).abs() < 1e-6);
        assert!((ctx.beta(0.0)).abs() < 1e-300);
    }

    #[test]
    fn rejects_bad_phik() {
        assert!(ModeContext::new(1, 10.0, 0.0, 1.0, 1.0, 1.5).is_err());
        assert!(ModeContext::new(1, 0.0, 0.0, 1.0, 1.0, 0.5).is_err());
    }
}
