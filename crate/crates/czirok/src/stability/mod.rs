//! Linear stability of the stationary states `rho_xi`.
//!
//! A perturbation of spatial mode `k` evolves through a renewal equation
//! `w_k = psi_k + R_k * w_k`. The mode is unstable when the Laplace transform
//! of the memory kernel `R_k` reaches 1 somewhere in the right half-plane;
//! such points are the complex growth rates of the mode.

mod context;
mod critical;
mod error;
mod kernel;
mod laplace;
mod roots;
mod volterra;

pub use context::ModeContext;
pub use critical::{
    critical_sigma, critical_sigma_with, most_unstable_mode, most_unstable_mode_with, sufficient_mode_bound,
    zeroth_mode_stable, CriticalSigmaOptions, ModePrediction,
};
pub use error::StabilityError;
pub use kernel::{characteristic_exponent, characteristic_exponent_deta, h_xi, h_xi_prime, mode_kernel_r, psi_k};
pub use laplace::{kernel_l1_norm, laplace_r, laplace_r_with, LaplaceEvaluator, LaplaceOptions, LaplaceValue};
pub use roots::{dominant_root, find_growth_roots, GrowthResult, RootSearch, SearchStatus, STABLE_SENTINEL};
pub use volterra::{volterra_growth_check, volterra_solution};
