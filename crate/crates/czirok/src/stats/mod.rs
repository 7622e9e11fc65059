//! Observables and statistical tests on particle runs.

mod discrepancy;
mod error;
mod fluctuation;
mod kde;
mod series;
mod transitions;

pub use discrepancy::{centered_l2_discrepancy, centered_l2_discrepancy_direct, uniform_discrepancy_mean};
pub use error::StatsError;
pub use fluctuation::{fluctuation_covariance_test, stationary_expectation, FluctuationResult};
pub(crate) use kde::slope;
pub use kde::{cluster_velocity, cluster_velocity_with, kde_peak, periodic_kde, ClusterOptions, Kde};
pub use series::{mean_velocity, RunMeta, RunSeries};
pub use transitions::{count_transitions, count_transitions_in, TransitionEvent, TransitionReport, Well};
