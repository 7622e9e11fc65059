use serde::{Deserialize, Serialize};

use crate::model::{ModelParams, SwarmState};

/// Run configuration attached to a [`RunSeries`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub params: ModelParams,
    pub seed: u64,
}

/// Observables recorded at `t_0` and after every step of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSeries {
    pub times: Vec<f64>,
    pub mean_velocity: Vec<f64>,
    pub discrepancy: Vec<f64>,
    pub position_snapshots: Vec<(f64, Vec<f64>)>,
    pub meta: RunMeta,
}

impl RunSeries {
    pub fn new(meta: RunMeta) -> Self {
        RunSeries {
            times: Vec::new(),
            mean_velocity: Vec::new(),
            discrepancy: Vec::new(),
            position_snapshots: Vec::new(),
            meta,
        }
    }

    /// Mean of `values` over indices `from..`.
    pub fn tail_mean(values: &[f64], from: usize) -> f64 {
        let tail = &values[from.min(values.len())..];
        tail.iter().sum::<f64>() / tail.len() as f64
    }
}

/// Empirical mean velocity `(1/N) sum u_i`.
pub fn mean_velocity(state: &SwarmState) -> f64 {
    state.u.iter().sum::<f64>() / state.u.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_means() {
        let s = SwarmState::new(vec![0.0; 3], vec![1.0; 3], 10.0).unwrap();
        assert_eq!(mean_velocity(&s), 1.0);
        let s = SwarmState::new(vec![0.0, 1.0], vec![-2.0, 2.0], 10.0).unwrap();
        assert_eq!(mean_velocity(&s), 0.0);
    }

    #[test]
    fn tail_mean_window() {
        assert_eq!(RunSeries::tail_mean(&[1.0, 2.0, 3.0, 5.0], 2), 4.0);
    }
}
