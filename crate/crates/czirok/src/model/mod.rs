//! Model definition and particle-level dynamics.

mod error;
mod integrator;
mod interaction;
mod kernel;
mod neighbor;
mod params;
pub mod rng;
mod roots;
mod state;
mod stationary;

pub use error::ModelError;
pub use integrator::{euler_step, sample_initial, simulate, Observer, Simulator};
pub use interaction::{g_prime, GSpec};
pub use kernel::{torus_distance, KernelShape, KernelSpec};
pub use neighbor::{neighbor_average, neighbor_average_direct, NeighborSearch};
pub use params::{Averaging, ModelParams};
pub use roots::{compatibility_roots, compatibility_roots_with, RootScan};
pub use state::SwarmState;
pub use stationary::StationaryState;
