use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::neighbor::NeighborSearch;
use super::rng::{dynamics_rng, SimRng};
use super::state::wrap;
use super::{ModelError, ModelParams, SwarmState};
use crate::stats::{centered_l2_discrepancy, mean_velocity, RunMeta, RunSeries};

/// Per-step statistic recorded by [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observer {
    MeanVelocity,
    Discrepancy,
    /// Copy of all positions every `every` steps (step 0 included).
    Positions { every: usize },
}

/// Draw `N` agents from the stationary density with mean velocity `xi`:
/// positions uniform on `[0, L)`, velocities `N(xi, sigma^2 / 2)`.
pub fn sample_initial<R: Rng + ?Sized>(xi: f64, params: &ModelParams, rng: &mut R) -> Result<SwarmState, ModelError> {
    params.validate()?;
    let std = params.sigma / std::f64::consts::SQRT_2;
    let velocity = Normal::new(xi, std).map_err(|e| ModelError::invalid("sigma", e.to_string()))?;
    let mut x = Vec::with_capacity(params.n);
    let mut u = Vec::with_capacity(params.n);
    for _ in 0..params.n {
        x.push(rng.random_range(0.0..params.length));
        u.push(velocity.sample(rng));
    }
    SwarmState::new(x, u, params.length)
}

/// One Euler–Maruyama step of the particle system.
pub fn euler_step<R: Rng + ?Sized>(state: &SwarmState, params: &ModelParams, rng: &mut R) -> SwarmState {
    let mut next = state.clone();
    let mut search = NeighborSearch::new();
    let mut avg = vec![0.0; state.len()];
    advance(&mut next, params, rng, &mut search, &mut avg);
    next
}

fn advance<R: Rng + ?Sized>(
    state: &mut SwarmState,
    params: &ModelParams,
    rng: &mut R,
    search: &mut NeighborSearch,
    avg: &mut [f64],
) {
    search.average_into(state, &params.kernel, params.averaging, avg);
    let dt = params.dt;
    let noise = params.sigma * dt.sqrt();
    let l = params.length;
    for i in 0..state.len() {
        let u = state.u[i];
        let z: f64 = StandardNormal.sample(rng);
        state.x[i] = wrap(state.x[i] + u * dt, l);
        state.u[i] = u + (params.g.eval(avg[i]) - u) * dt + noise * z;
    }
    state.t += dt;
}

fn check_consistent(params: &ModelParams, state: &SwarmState) -> Result<(), ModelError> {
    params.validate()?;
    if state.len() != params.n {
        return Err(ModelError::AgentCountMismatch {
            state: state.len(),
            params: params.n,
        });
    }
    if state.length() != params.length {
        return Err(ModelError::LengthMismatch {
            state: state.length(),
            params: params.length,
        });
    }
    Ok(())
}

/// Stepper that owns its state, generator and scratch buffers.
#[derive(Debug, Clone)]
pub struct Simulator {
    params: ModelParams,
    state: SwarmState,
    rng: SimRng,
    search: NeighborSearch,
    avg: Vec<f64>,
}

impl Simulator {
    /// Starts from `init`, drawing increments from the dynamics stream of `params.seed`.
    pub fn new(params: ModelParams, init: SwarmState) -> Result<Self, ModelError> {
        check_consistent(&params, &init)?;
        let rng = dynamics_rng(params.seed);
        let avg = vec![0.0; init.len()];
        Ok(Simulator {
            params,
            state: init,
            rng,
            search: NeighborSearch::new(),
            avg,
        })
    }

    pub fn step(&mut self) {
        advance(&mut self.state, &self.params, &mut self.rng, &mut self.search, &mut self.avg);
    }

    pub fn state(&self) -> &SwarmState {
        &self.state
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn into_state(self) -> SwarmState {
        self.state
    }
}

/// Run `params.steps` Euler steps from `init`, recording the requested
/// observables at `t_0` and after every step.
pub fn simulate(params: &ModelParams, init: SwarmState, observers: &[Observer]) -> Result<RunSeries, ModelError> {
    let mut sim = Simulator::new(params.clone(), init)?;
    let want_mean = observers.contains(&Observer::MeanVelocity);
    let want_disc = observers.contains(&Observer::Discrepancy);
    let snapshot_every = observers.iter().find_map(|o| match o {
        Observer::Positions { every } => Some((*every).max(1)),
        _ => None,
    });

    let mut series = RunSeries::new(RunMeta {
        params: params.clone(),
        seed: params.seed,
    });
    let record = |step: usize, state: &SwarmState, series: &mut RunSeries| {
        series.times.push(state.t);
        if want_mean {
            series.mean_velocity.push(mean_velocity(state));
        }
        if want_disc {
            series.discrepancy.push(centered_l2_discrepancy(&state.x, state.length()));
        }
        if let Some(every) = snapshot_every {
            if step % every == 0 {
                series.position_snapshots.push((state.t, state.x.clone()));
            }
        }
    };
    record(0, sim.state(), &mut series);
    for step in 1..=params.steps {
        sim.step();
        record(step, sim.state(), &mut series);
    }
    Ok(series)
}
