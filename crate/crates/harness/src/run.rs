use czirok::model::rng::init_rng;
use czirok::model::{sample_initial, simulate, Observer};
use czirok::stability::{
    critical_sigma, dominant_root, find_growth_roots, most_unstable_mode, GrowthResult, ModeContext, RootSearch,
    SearchStatus,
};
use czirok::stats::{cluster_velocity_with, count_transitions, fluctuation_covariance_test, ClusterOptions};
use czirok::{ModelParams, RunSeries, StabilityError};
use rayon::prelude::*;

use crate::config::{order_velocity, Cell, ExperimentConfig, ExperimentKind, StateChoice};
use crate::presets;
use crate::table::{ResultTable, FAILED};
use crate::HarnessError;

/// Window, in steps, of the trailing `|ubar|` average reported by sweeps.
pub const TAIL_STEPS: usize = 500;

/// Time between position snapshots used for cluster tracking.
const SNAPSHOT_INTERVAL: f64 = 0.5;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one run inside a sweep. Depends only on the master seed, the
/// cell's axis indices and the replicate index.
pub fn cell_seed(master: u64, index: [usize; 3], replicate: usize) -> u64 {
    let mut h = splitmix64(master);
    for v in index.iter().chain(std::iter::once(&replicate)) {
        h = splitmix64(h ^ *v as u64);
    }
    h
}

fn flag(failed: bool) -> f64 {
    if failed {
        1.0
    } else {
        0.0
    }
}

/// Run an experiment on the current rayon pool.
pub fn run_config(cfg: &ExperimentConfig) -> Result<ResultTable, HarnessError> {
    cfg.validate()?;
    let mut table = match cfg.experiment.kind {
        ExperimentKind::Simulate => run_simulate(cfg)?,
        ExperimentKind::Sweep => run_sweep(cfg)?,
        ExperimentKind::Transitions => run_transitions(cfg)?,
        ExperimentKind::Stability => run_stability(cfg)?,
        ExperimentKind::CriticalSigma => run_critical(cfg)?,
        ExperimentKind::Fluctuation => run_fluctuation(cfg)?,
        ExperimentKind::FigurePreset => {
            let id = cfg.experiment.id.as_deref().expect("validated preset id");
            let preset = presets::preset(id, cfg.model.seed, None)?;
            return presets::run_preset(&preset);
        }
    };
    table.annotate("config_hash", cfg.hash());
    table.annotate("experiment", cfg.experiment.kind.name());
    table.annotate("seed", cfg.model.seed.to_string());
    table.annotate("version", env!("CARGO_PKG_VERSION"));
    Ok(table)
}

/// Run an experiment on a dedicated pool of `threads` workers (all cores
/// when `None`). Results do not depend on the thread count.
pub fn run_config_with_threads(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<ResultTable, HarnessError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(HarnessError::config("--threads", "must be at least 1"));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::config("--threads", e.to_string()))?;
    pool.install(|| run_config(cfg))
}

struct Job<'a> {
    cell: &'a Cell,
    replicate: usize,
}

fn jobs(cells: &[Cell], replicates: usize) -> Vec<Job<'_>> {
    cells
        .iter()
        .flat_map(|cell| (0..replicates).map(move |replicate| Job { cell, replicate }))
        .collect()
}

fn run_one(
    cfg: &ExperimentConfig,
    job: &Job,
    observers: &[Observer],
) -> Result<(ModelParams, RunSeries), HarnessError> {
    let mut params = job.cell.params.clone();
    params.seed = cell_seed(cfg.model.seed, job.cell.index, job.replicate);
    let xi = cfg.experiment.xi.resolve(&params.g)?;
    let init = sample_initial(xi, &params, &mut init_rng(params.seed))?;
    let series = simulate(&params, init, observers)?;
    Ok((params, series))
}

fn cell_columns(cell: &Cell) -> [f64; 3] {
    [cell.params.n as f64, cell.params.sigma, cell.h]
}

fn run_simulate(cfg: &ExperimentConfig) -> Result<ResultTable, HarnessError> {
    let cells = cfg.cells()?;
    let every = cfg.experiment.every;
    let runs: Vec<_> = jobs(&cells, cfg.experiment.replicates)
        .par_iter()
        .map(|job| {
            let (_, s) = run_one(cfg, job, &[Observer::MeanVelocity, Observer::Discrepancy])?;
            let last = s.times.len() - 1;
            let mut rows = Vec::new();
            for i in (0..=last).filter(|i| i % every == 0 || *i == last) {
                let (u, d) = (s.mean_velocity[i], s.discrepancy[i]);
                let [n, sigma, h] = cell_columns(job.cell);
                let failed = !(u.is_finite() && d.is_finite());
                rows.push(vec![n, sigma, h, job.replicate as f64, i as f64, s.times[i], u, d, flag(failed)]);
            }
            Ok(rows)
        })
        .collect::<Result<_, HarnessError>>()?;
    let mut table = ResultTable::new([
        "n", "sigma", "h", "replicate", "step", "t", "mean_velocity", "discrepancy", FAILED,
    ]);
    for row in runs.into_iter().flatten() {
        table.push(row);
    }
    Ok(table)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Median with the midpoint convention for even sample sizes.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m == 0 {
        f64::NAN
    } else if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

fn predicted_velocity(cfg: &ExperimentConfig, cell: &Cell) -> Result<f64, HarnessError> {
    let p = &cell.params;
    let xi = cfg.experiment.xi.resolve(&p.g)?;
    match most_unstable_mode(&p.g, xi, &p.kernel, p.sigma, cfg.experiment.k_range) {
        Ok(pred) => Ok(pred.velocity),
        Err(StabilityError::AllModesStable { .. }) => Ok(f64::NAN),
        Err(e) => Err(e.into()),
    }
}

fn run_sweep(cfg: &ExperimentConfig) -> Result<ResultTable, HarnessError> {
    let cells = cfg.cells()?;
    let e = &cfg.experiment;
    let mut columns = vec![
        "n",
        "sigma",
        "h",
        "replicate",
        "mean_velocity",
        "abs_mean_velocity_tail",
        "discrepancy_mean",
        "discrepancy_final",
        "transitions",
    ];
    if e.kde.is_some() {
        columns.extend(["cluster_velocity", "predicted_velocity"]);
    }
    columns.push(FAILED);

    let predicted: Vec<f64> = match e.kde {
        Some(_) => cells
            .par_iter()
            .map(|c| predicted_velocity(cfg, c))
            .collect::<Result<_, _>>()?,
        None => vec![f64::NAN; cells.len()],
    };
    let job_list = jobs(&cells, e.replicates);
    let rows: Vec<Vec<f64>> = job_list
        .par_iter()
        .enumerate()
        .map(|(j, job)| {
            let mut observers = vec![Observer::MeanVelocity, Observer::Discrepancy];
            if e.kde.is_some() {
                let every = (SNAPSHOT_INTERVAL / job.cell.params.dt).round().max(1.0) as usize;
                observers.push(Observer::Positions { every });
            }
            let (params, s) = run_one(cfg, job, &observers)?;
            let records = s.mean_velocity.len();
            let tail_from = records.saturating_sub(TAIL_STEPS);
            let abs_tail = mean(&s.mean_velocity[tail_from..].iter().map(|u| u.abs()).collect::<Vec<_>>());
            let transitions = match order_velocity(&params.g) {
                Some(xi_e) => count_transitions(&s, xi_e, e.detector.enter_frac, e.detector.exit_frac)?.count as f64,
                None => f64::NAN,
            };
            let mut row = cell_columns(job.cell).to_vec();
            row.extend([
                job.replicate as f64,
                mean(&s.mean_velocity),
                abs_tail,
                mean(&s.discrepancy),
                *s.discrepancy.last().expect("initial record"),
                transitions,
            ]);
            if let Some(kde) = e.kde {
                // cluster motion is measured once the instability has developed
                let half = 0.5 * s.times.last().copied().unwrap_or(0.0);
                let late: Vec<_> = s.position_snapshots.iter().filter(|(t, _)| *t >= half).cloned().collect();
                let opts = ClusterOptions {
                    grid: kde.grid,
                    ..ClusterOptions::new(kde.bandwidth)
                };
                let v = cluster_velocity_with(&late, params.length, &opts).unwrap_or(f64::NAN);
                row.extend([v, predicted[j / e.replicates]]);
            }
            let failed = row[4..8].iter().any(|v| !v.is_finite());
            row.push(flag(failed));
            Ok(row)
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut table = ResultTable::new(columns);
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

fn run_transitions(cfg: &ExperimentConfig) -> Result<ResultTable, HarnessError> {
    let cells = cfg.cells()?;
    let e = &cfg.experiment;
    let job_list = jobs(&cells, e.replicates);
    let counts: Vec<Option<f64>> = job_list
        .par_iter()
        .map(|job| {
            let (params, s) = run_one(cfg, job, &[Observer::MeanVelocity])?;
            if s.mean_velocity.iter().any(|u| !u.is_finite()) {
                return Ok(None);
            }
            let xi_e = order_velocity(&params.g).expect("validated order state");
            let report = count_transitions(&s, xi_e, e.detector.enter_frac, e.detector.exit_frac)?;
            Ok(Some(report.count as f64))
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut table = ResultTable::new([
        "n", "sigma", "h", "replicates", "median", "mean", "min", "max", FAILED,
    ]);
    for (cell, chunk) in cells.iter().zip(counts.chunks(e.replicates)) {
        let ok: Vec<f64> = chunk.iter().flatten().copied().collect();
        let failed = ok.len() < chunk.len();
        let mut row = cell_columns(cell).to_vec();
        row.extend([
            e.replicates as f64,
            median(&ok),
            if ok.is_empty() { f64::NAN } else { mean(&ok) },
            ok.iter().copied().reduce(f64::min).unwrap_or(f64::NAN),
            ok.iter().copied().reduce(f64::max).unwrap_or(f64::NAN),
            flag(failed),
        ]);
        table.push(row);
    }
    Ok(table)
}

/// One row of a stability table for mode `k >= 1`.
fn mode_row(ctx: &ModeContext) -> Result<Vec<f64>, StabilityError> {
    let res: GrowthResult = find_growth_roots(ctx, &RootSearch::default())?;
    let damped = if res.is_unstable() {
        res.dominant()
    } else {
        dominant_root(ctx, &RootSearch::damped())?
    };
    let (velocity, gamma_i) = match res.dominant() {
        Some(g) => (g.im / ctx.d_k, g.im),
        None => (f64::NAN, f64::NAN),
    };
    let (dr, di) = damped.map_or((f64::NAN, f64::NAN), |g| (g.re, g.im));
    let failed = res.status == SearchStatus::GridExhausted;
    Ok(vec![
        res.gamma_r,
        gamma_i,
        velocity,
        res.roots.len() as f64,
        flag(res.sufficient_bound_ok),
        dr,
        di,
        flag(failed),
    ])
}

fn run_stability(cfg: &ExperimentConfig) -> Result<ResultTable, HarnessError> {
    let cells = cfg.cells()?;
    let e = &cfg.experiment;
    let mut work: Vec<(&Cell, i64)> = Vec::new();
    for cell in &cells {
        for k in 0..=e.k_range as i64 {
            work.push((cell, k));
        }
    }
    let rows: Vec<Vec<f64>> = work
        .par_iter()
        .map(|&(cell, k)| {
            let p = &cell.params;
            let xi = e.xi.resolve(&p.g)?;
            let mut row = vec![cell.params.sigma, cell.h, xi, k as f64];
            if k == 0 {
                // the mean velocity relaxes at rate G'(xi) - 1
                let gp = p.g.derivative(xi);
                let nan = f64::NAN;
                row.extend([gp - 1.0, 0.0, nan, nan, nan, nan, nan, 0.0]);
                return Ok(row);
            }
            let ctx = ModeContext::from_model(&p.g, &p.kernel, xi, p.sigma, k)?;
            match mode_row(&ctx) {
                Ok(r) => row.extend(r),
                Err(StabilityError::Quadrature { .. } | StabilityError::NotAdmissible { .. }) => {
                    row.extend([f64::NAN; 7]);
                    row.push(1.0);
                }
                Err(other) => return Err(other.into()),
            }
            Ok(row)
        })
        .collect::<Result<_, HarnessError>>()?;
    let mut table = ResultTable::new([
        "sigma",
        "h",
        "xi",
        "k",
        "gamma_r",
        "gamma_i",
        "velocity",
        "roots",
        "sufficient_bound",
        "damped_r",
        "damped_i",
        FAILED,
    ]);
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

fn run_critical(cfg: &ExperimentConfig) -> Result<ResultTable, HarnessError> {
    let cells = cfg.cells()?;
    let k_range = cfg.experiment.k_range;
    let rows: Vec<Vec<f64>> = cells
        .par_iter()
        .map(|cell| {
            let p = &cell.params;
            let xi = StateChoice::default().resolve(&p.g)?;
            let (sc, failed) = match critical_sigma(&p.g, xi, &p.kernel, k_range, 0.01) {
                Ok(s) => (s, false),
                Err(StabilityError::NoSignChange { .. } | StabilityError::ZerothModeUnstable { .. }) => {
                    (f64::NAN, true)
                }
                Err(e) => return Err(e.into()),
            };
            Ok(vec![cell.h, xi, sc, flag(failed)])
        })
        .collect::<Result<_, HarnessError>>()?;
    let mut table = ResultTable::new(["h", "xi", "sigma_c", FAILED]);
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

/// Test functions of the fluctuation experiment, indexed by the `function`
/// column: `1`, `u` and `cos(2 pi x / L)`.
pub fn fluctuation_functions(length: f64) -> [Box<dyn Fn(f64, f64) -> f64 + Sync>; 3] {
    let w = 2.0 * std::f64::consts::PI / length;
    [
        Box::new(|_, _| 1.0),
        Box::new(|_, u| u),
        Box::new(move |x, _| (w * x).cos()),
    ]
}

fn run_fluctuation(cfg: &ExperimentConfig) -> Result<ResultTable, HarnessError> {
    let cells = cfg.cells()?;
    let e = &cfg.experiment;
    let mut table = ResultTable::new([
        "n",
        "sigma",
        "h",
        "function",
        "empirical",
        "predicted",
        "z",
        "standard_error",
        FAILED,
    ]);
    for cell in &cells {
        let p = &cell.params;
        let xi = e.xi.resolve(&p.g)?;
        for (i, f) in fluctuation_functions(p.length).iter().enumerate() {
            let seed = cell_seed(cfg.model.seed, cell.index, i);
            let r = fluctuation_covariance_test(xi, p.sigma, p.length, f.as_ref(), f.as_ref(), p.n, e.replicates, seed)?;
            let failed = !(r.empirical.is_finite() && r.predicted.is_finite() && r.z.is_finite());
            let mut row = cell_columns(cell).to_vec();
            row.extend([i as f64, r.empirical, r.predicted, r.z, r.standard_error, flag(failed)]);
            table.push(row);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_seeds_are_stable_and_distinct() {
        let a = cell_seed(7, [0, 1, 2], 3);
        assert_eq!(a, cell_seed(7, [0, 1, 2], 3));
        assert_ne!(a, cell_seed(7, [0, 1, 2], 4));
        assert_ne!(a, cell_seed(7, [1, 0, 2], 3));
        assert_ne!(a, cell_seed(8, [0, 1, 2], 3));
    }

    #[test]
    fn median_conventions() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }
}
