//! Simulation and semi-analytic stability analysis of the Czirók model of
//! collective motion on a one-dimensional torus `[0, L)`.
//!
//! Each of `N` agents carries a position `x_i` and a velocity `u_i`:
//!
//! ```text
//! dx_i = u_i dt
//! du_i = [G(<u>_i) - u_i] dt + sigma dW_i
//! ```
//!
//! where `<u>_i` is a kernel-weighted average of the velocities of the agents
//! near `x_i`. The crate is organised in three layers:
//!
//! * [`model`]: interaction functions, kernels, stationary states and the
//!   Euler–Maruyama particle integrator.
//! * [`stability`]: modal memory kernel `R_k`, its Laplace transform, complex
//!   growth rates, critical noise levels and a Volterra cross-check.
//! * [`stats`]: observables recorded during runs (mean velocity, centered
//!   L²-discrepancy, periodic KDE, cluster tracking, switching counts,
//!   initial-fluctuation covariance).

pub mod model;
pub mod stability;
pub mod stats;

pub use model::{
    Averaging, GSpec, KernelShape, KernelSpec, ModelError, ModelParams, StationaryState,
    SwarmState,
};
pub use stability::{GrowthResult, ModeContext, StabilityError};
pub use stats::{RunSeries, StatsError, TransitionReport};
