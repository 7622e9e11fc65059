use serde::{Deserialize, Serialize};

use super::ModelError;

/// Positions and velocities of every agent at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmState {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub t: f64,
    length: f64,
}

/// Map `x` into `[0, length)`.
#[inline]
pub(crate) fn wrap(x: f64, length: f64) -> f64 {
    // one-period shifts are exact and match rem_euclid on (-L, 2L)
    let w = if (0.0..length).contains(&x) {
        return x;
    } else if x < 0.0 && x > -length {
        x + length
    } else if x >= length && x < 2.0 * length {
        x - length
    } else {
        x.rem_euclid(length)
    };
    // rem_euclid rounds tiny negative inputs up to `length` itself
    if w >= length {
        0.0
    } else {
        w
    }
}

impl SwarmState {
    /// Build a state, wrapping positions onto the torus.
    pub fn new(x: Vec<f64>, u: Vec<f64>, length: f64) -> Result<Self, ModelError> {
        if x.len() != u.len() {
            return Err(ModelError::invalid(
                "state",
                format!("{} positions but {} velocities", x.len(), u.len()),
            ));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(ModelError::invalid("l", format!("must be positive, got {length}")));
        }
        if x.iter().chain(u.iter()).any(|v| !v.is_finite()) {
            return Err(ModelError::invalid("state", "positions and velocities must be finite"));
        }
        let x = x.into_iter().map(|xi| wrap(xi, length)).collect();
        Ok(SwarmState { x, u, t: 0.0, length })
    }

    /// `n` agents at the same point with a common velocity.
    pub fn colocated(n: usize, x0: f64, u0: f64, length: f64) -> Result<Self, ModelError> {
        Self::new(vec![x0; n], vec![u0; n], length)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Mirror image `(x, u) -> (L - x, -u)`.
    pub fn mirrored(&self) -> Self {
        SwarmState {
            x: self.x.iter().map(|&x| wrap(self.length - x, self.length)).collect(),
            u: self.u.iter().map(|&u| -u).collect(),
            t: self.t,
            length: self.length,
        }
    }
}
