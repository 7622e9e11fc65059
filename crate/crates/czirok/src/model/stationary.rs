use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{GSpec, ModelError};

/// Spatially uniform, Gaussian-in-velocity stationary density
/// `rho(x, u) = (1/L) (pi sigma^2)^(-1/2) exp(-(u - xi)^2 / sigma^2)`.
///
/// The velocity marginal has mean `xi` and variance `sigma^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryState {
    pub xi: f64,
    pub sigma: f64,
    pub length: f64,
}

impl StationaryState {
    pub fn new(xi: f64, sigma: f64, length: f64) -> Result<Self, ModelError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(ModelError::invalid(
                "sigma",
                format!("stationary densities need sigma > 0, got {sigma}"),
            ));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(ModelError::invalid("l", format!("must be positive, got {length}")));
        }
        if !xi.is_finite() {
            return Err(ModelError::invalid("xi", "must be finite"));
        }
        Ok(StationaryState { xi, sigma, length })
    }

    /// Build the state and check `|xi - G(xi)| <= tol`.
    pub fn compatible(g: &GSpec, xi: f64, sigma: f64, length: f64, tol: f64) -> Result<Self, ModelError> {
        let residual = (xi - g.eval(xi)).abs();
        if residual > tol {
            return Err(ModelError::invalid(
                "xi",
                format!("|xi - G(xi)| = {residual:e} exceeds tolerance {tol:e}"),
            ));
        }
        Self::new(xi, sigma, length)
    }

    pub fn velocity_density(&self, u: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        (-(u - self.xi).powi(2) / s2).exp() / (PI * s2).sqrt()
    }

    pub fn density(&self, _x: f64, u: f64) -> f64 {
        self.velocity_density(u) / self.length
    }

    pub fn velocity_variance(&self) -> f64 {
        0.5 * self.sigma * self.sigma
    }

    pub fn velocity_std(&self) -> f64 {
        self.velocity_variance().sqrt()
    }
}
