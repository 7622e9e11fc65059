use std::num::NonZeroUsize;

use gauss_quad::{GaussHermite, GaussLegendre};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::error::invalid;
use super::StatsError;
use crate::model::rng::{init_rng, run_seed};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationResult {
    pub empirical: f64,
    pub predicted: f64,
    pub z: f64,
    pub standard_error: f64,
}

fn expectation_at(f: &(dyn Fn(f64, f64) -> f64 + Sync), xi: f64, sigma: f64, length: f64, panels: usize, hermite: usize) -> f64 {
    let gl = GaussLegendre::new(NonZeroUsize::new(16).unwrap());
    let gh = GaussHermite::new(NonZeroUsize::new(hermite).unwrap());
    let w = length / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 * w;
        total += gl.integrate(a, a + w, |x| gh.integrate(|y| f(x, xi + sigma * y)));
    }
    total / (length * std::f64::consts::PI.sqrt())
}

/// `<rho_xi, f>` for the stationary density uniform in `x` and Gaussian in
/// `u` with mean `xi` and variance `sigma^2 / 2`.
pub fn stationary_expectation(
    f: &(dyn Fn(f64, f64) -> f64 + Sync),
    xi: f64,
    sigma: f64,
    length: f64,
) -> Result<f64, StatsError> {
    if !(sigma > 0.0) {
        return Err(invalid("sigma", "must be positive"));
    }
    if !(length > 0.0) {
        return Err(invalid("length", "must be positive"));
    }
    let coarse = expectation_at(f, xi, sigma, length, 8, 40);
    let fine = expectation_at(f, xi, sigma, length, 16, 80);
    if !((coarse - fine).abs() <= 1e-8 * fine.abs().max(1.0)) {
        return Err(StatsError::Quadrature { coarse, fine });
    }
    Ok(fine)
}

/// Monte Carlo check of the initial fluctuation covariance.
///
/// Each replicate draws `n` agents i.i.d. from the stationary density and
/// forms `S_a = sqrt(n) (<mu_n, f_a> - <rho_xi, f_a>)`. The empirical
/// covariance of `(S_1, S_2)` over replicates is compared with
/// `<rho, f1 f2> - <rho, f1><rho, f2>`; `z` is the deviation in units of the
/// estimator's standard error.
#[allow(clippy::too_many_arguments)]
pub fn fluctuation_covariance_test(
    xi: f64,
    sigma: f64,
    length: f64,
    f1: &(dyn Fn(f64, f64) -> f64 + Sync),
    f2: &(dyn Fn(f64, f64) -> f64 + Sync),
    n: usize,
    replicates: usize,
    seed: u64,
) -> Result<FluctuationResult, StatsError> {
    if n == 0 {
        return Err(invalid("n", "need at least one agent"));
    }
    if replicates < 2 {
        return Err(invalid("replicates", "need at least two replicates"));
    }
    let m1 = stationary_expectation(f1, xi, sigma, length)?;
    let m2 = stationary_expectation(f2, xi, sigma, length)?;
    let m12 = stationary_expectation(&|x, u| f1(x, u) * f2(x, u), xi, sigma, length)?;
    let predicted = m12 - m1 * m2;

    let velocity = Normal::new(xi, sigma / std::f64::consts::SQRT_2).map_err(|e| invalid("sigma", e.to_string()))?;
    let root_n = (n as f64).sqrt();
    let samples: Vec<(f64, f64)> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = init_rng(run_seed(seed, r as u64));
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            for _ in 0..n {
                let x = rng.random_range(0.0..length);
                let u = velocity.sample(&mut rng);
                s1 += f1(x, u);
                s2 += f2(x, u);
            }
            (root_n * (s1 / n as f64 - m1), root_n * (s2 / n as f64 - m2))
        })
        .collect();

    let rf = replicates as f64;
    let a_mean = samples.iter().map(|s| s.0).sum::<f64>() / rf;
    let b_mean = samples.iter().map(|s| s.1).sum::<f64>() / rf;
    let products: Vec<f64> = samples.iter().map(|s| (s.0 - a_mean) * (s.1 - b_mean)).collect();
    let empirical = products.iter().sum::<f64>() / (rf - 1.0);
    let p_mean = products.iter().sum::<f64>() / rf;
    let p_var = products.iter().map(|p| (p - p_mean) * (p - p_mean)).sum::<f64>() / (rf - 1.0);
    let standard_error = (p_var / rf).sqrt();
    let dev = empirical - predicted;
    // degenerate estimator (deterministic statistic): no meaningful error scale
    let z = if standard_error > 1e-12 {
        dev / standard_error
    } else if dev.abs() <= 1e-12 {
        0.0
    } else {
        dev.signum() * f64::INFINITY
    };
    Ok(FluctuationResult {
        empirical,
        predicted,
        z,
        standard_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectations_of_simple_functions() {
        let l = 10.0;
        let one = stationary_expectation(&|_, _| 1.0, 2.0, 1.5, l).unwrap();
        assert!((one - 1.0).abs() < 1e-13);
        let u2 = stationary_expectation(&|_, u| u * u, 2.0, 1.5, l).unwrap();
        assert!((u2 - (4.0 + 1.125)).abs() < 1e-12);
        let c2 = stationary_expectation(&|x, _| (2.0 * std::f64::consts::PI * x / l).cos().powi(2), 0.0, 1.0, l).unwrap();
        assert!((c2 - 0.5).abs() < 1e-13);
    }

    #[test]
    fn constant_has_no_fluctuation() {
        let r = fluctuation_covariance_test(0.0, 1.0, 10.0, &|_, _| 1.0, &|_, _| 1.0, 100, 20, 1).unwrap();
        assert!(r.predicted.abs() < 1e-13);
        assert!(r.empirical.abs() < 1e-20);
        assert_eq!(r.z, 0.0);
    }
}
