use serde::{Deserialize, Serialize};

use super::ModelError;

/// Odd velocity-response function `G`.
///
/// `u - G(u)` is the drift of each velocity towards its local average; a
/// double-well primitive of `u - G(u)` yields two ordered states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GSpec {
    /// `G(u) = (h+1)/5 u - h/125 u^3`; double well for `h > 4`.
    Cubic { h: f64 },
    /// `G(u) = a tanh(u)`.
    Tanh { a: f64 },
    /// `G(u) = sum_m coeffs[m] u^(2m+1)`.
    OddPolynomial { coeffs: Vec<f64> },
}

impl GSpec {
    /// Well depth at which the cubic family bifurcates into three stationary states.
    pub const CUBIC_CRITICAL_H: f64 = 4.0;

    pub fn cubic(h: f64) -> Self {
        GSpec::Cubic { h }
    }

    pub fn tanh(a: f64) -> Self {
        GSpec::Tanh { a }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let finite = match self {
            GSpec::Cubic { h } => h.is_finite(),
            GSpec::Tanh { a } => a.is_finite(),
            GSpec::OddPolynomial { coeffs } => {
                if coeffs.is_empty() {
                    return Err(ModelError::invalid("g.coeffs", "at least one coefficient required"));
                }
                coeffs.iter().all(|c| c.is_finite())
            }
        };
        if finite {
            Ok(())
        } else {
            Err(ModelError::invalid("g", "parameters must be finite"))
        }
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            GSpec::Cubic { h } => (h + 1.0) / 5.0 * u - h / 125.0 * u * u * u,
            GSpec::Tanh { a } => a * u.tanh(),
            GSpec::OddPolynomial { coeffs } => {
                // Horner in u^2, then one factor of u.
                let u2 = u * u;
                coeffs.iter().rev().fold(0.0, |acc, c| acc * u2 + c) * u
            }
        }
    }

    /// Exact derivative `G'(u)`.
    pub fn derivative(&self, u: f64) -> f64 {
        match self {
            GSpec::Cubic { h } => (h + 1.0) / 5.0 - 3.0 * h / 125.0 * u * u,
            GSpec::Tanh { a } => {
                let c = u.cosh();
                a / (c * c)
            }
            GSpec::OddPolynomial { coeffs } => {
                let u2 = u * u;
                coeffs
                    .iter()
                    .enumerate()
                    .rev()
                    .fold(0.0, |acc, (m, c)| acc * u2 + (2 * m + 1) as f64 * c)
            }
        }
    }

    /// Positive solution of `xi = G(xi)` in closed form, where one is known.
    pub fn closed_form_order_velocity(&self) -> Option<f64> {
        match self {
            GSpec::Cubic { h } if *h > Self::CUBIC_CRITICAL_H => {
                Some(5.0 * ((h - 4.0) / h).sqrt())
            }
            _ => None,
        }
    }
}

/// `G'(xi)` for the given interaction.
pub fn g_prime(g: &GSpec, xi: f64) -> f64 {
    g.derivative(xi)
}
