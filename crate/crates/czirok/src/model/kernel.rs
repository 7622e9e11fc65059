use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Distance on the torus of length `length`.
#[inline]
pub fn torus_distance(a: f64, b: f64, length: f64) -> f64 {
    let d = (a - b).abs();
    d.min(length - d)
}

/// Shape of the influence function `phi` as a function of torus distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KernelShape {
    /// Constant on `[0, r]`, zero beyond.
    TopHat { r: f64 },
    /// `phi == 1`: every agent sees every other agent.
    Uniform,
}

/// Influence function normalized so that its spatial average over the torus is one.
///
/// The top-hat amplitude `L / (2r)` is derived from the normalization and is
/// never supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelRepr")]
pub struct KernelSpec {
    shape: KernelShape,
    length: f64,
    amplitude: f64,
}

#[derive(Deserialize)]
struct KernelRepr {
    shape: KernelShape,
    length: f64,
}

impl TryFrom<KernelRepr> for KernelSpec {
    type Error = ModelError;

    fn try_from(repr: KernelRepr) -> Result<Self, Self::Error> {
        KernelSpec::new(repr.shape, repr.length)
    }
}

impl KernelSpec {
    pub fn new(shape: KernelShape, length: f64) -> Result<Self, ModelError> {
        if !(length.is_finite() && length > 0.0) {
            return Err(ModelError::invalid("l", format!("torus length must be positive, got {length}")));
        }
        let amplitude = match shape {
            KernelShape::TopHat { r } => {
                if !(r.is_finite() && r > 0.0 && r <= length / 2.0) {
                    return Err(ModelError::invalid(
                        "kernel.r",
                        format!("top-hat radius must satisfy 0 < r <= L/2 = {}, got {r}", length / 2.0),
                    ));
                }
                length / (2.0 * r)
            }
            KernelShape::Uniform => 1.0,
        };
        Ok(KernelSpec {
            shape,
            length,
            amplitude,
        })
    }

    pub fn top_hat(r: f64, length: f64) -> Result<Self, ModelError> {
        Self::new(KernelShape::TopHat { r }, length)
    }

    pub fn uniform(length: f64) -> Result<Self, ModelError> {
        Self::new(KernelShape::Uniform, length)
    }

    pub fn shape(&self) -> KernelShape {
        self.shape
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Value of `phi` at the origin.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Interaction range, `None` for the uniform kernel.
    pub fn radius(&self) -> Option<f64> {
        match self.shape {
            KernelShape::TopHat { r } => Some(r),
            KernelShape::Uniform => None,
        }
    }

    /// `phi(d)` for a torus distance `d` in `[0, L/2]`.
    #[inline]
    pub fn weight(&self, d: f64) -> f64 {
        match self.shape {
            KernelShape::TopHat { r } => {
                if d <= r {
                    self.amplitude
                } else {
                    0.0
                }
            }
            KernelShape::Uniform => 1.0,
        }
    }

    /// Cosine Fourier coefficient `phi_k = (1/L) int_0^L phi(|x|) cos(2 pi k x / L) dx`.
    pub fn fourier_coefficient(&self, k: i64) -> f64 {
        if k == 0 {
            return 1.0;
        }
        match self.shape {
            KernelShape::TopHat { r } => {
                let z = 2.0 * PI * k as f64 * r / self.length;
                z.sin() / z
            }
            KernelShape::Uniform => 0.0,
        }
    }
}
