use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::roots::{find_growth_roots, has_growth_root, GrowthResult, RootSearch};
use super::{ModeContext, StabilityError};
use crate::model::{GSpec, KernelSpec};

/// The mean-velocity mode is stable iff `G'(xi) < 1`; equality (linear growth
/// of the first moment) counts as unstable.
pub fn zeroth_mode_stable(g: &GSpec, xi: f64) -> bool {
    g.derivative(xi) < 1.0
}

/// Sufficient condition for `int |R_k| < 1`, which rules out any growth rate
/// of mode `k`.
pub fn sufficient_mode_bound(ctx: &ModeContext) -> bool {
    let s = ctx.sigma;
    let d = ctx.d_k.abs();
    let c = ctx.decay_rate();
    let rhs = 1.0
        / (1.0
            + 3.0 * (2.0 * std::f64::consts::PI).sqrt() / (s * d)
            + 3.0 * ctx.xi.abs() / (0.5 * s * s * d)
            + (-1f64).exp() / (1.0 + c));
    ctx.prefactor().abs() < rhs
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalSigmaOptions {
    pub lo: f64,
    pub hi: f64,
    pub k_range: u32,
    pub tol: f64,
    pub search: RootSearch,
}

impl Default for CriticalSigmaOptions {
    fn default() -> Self {
        CriticalSigmaOptions {
            lo: 0.5,
            hi: 5.0,
            k_range: 8,
            tol: 0.01,
            search: RootSearch::default(),
        }
    }
}

fn any_mode_unstable(g: &GSpec, xi: f64, kernel: &KernelSpec, sigma: f64, opts: &CriticalSigmaOptions) -> Result<bool, StabilityError> {
    for k in 1..=opts.k_range as i64 {
        let ctx = ModeContext::from_model(g, kernel, xi, sigma, k)?;
        if sufficient_mode_bound(&ctx) {
            continue;
        }
        if has_growth_root(&ctx, &opts.search)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Noise level at which the last unstable mode of `rho_xi` stabilises.
pub fn critical_sigma(g: &GSpec, xi: f64, kernel: &KernelSpec, k_range: u32, tol: f64) -> Result<f64, StabilityError> {
    critical_sigma_with(
        g,
        xi,
        kernel,
        &CriticalSigmaOptions {
            k_range,
            tol,
            ..Default::default()
        },
    )
}

/// Bisection on `sigma` between an unstable `opts.lo` and a stable `opts.hi`.
/// Returns the midpoint of the final bracket, whose width is at most `tol`.
pub fn critical_sigma_with(g: &GSpec, xi: f64, kernel: &KernelSpec, opts: &CriticalSigmaOptions) -> Result<f64, StabilityError> {
    g.validate()?;
    let gp = g.derivative(xi);
    if !zeroth_mode_stable(g, xi) {
        return Err(StabilityError::ZerothModeUnstable { gp });
    }
    let (mut lo, mut hi) = (opts.lo, opts.hi);
    let lo_unstable = any_mode_unstable(g, xi, kernel, lo, opts)?;
    let hi_unstable = any_mode_unstable(g, xi, kernel, hi, opts)?;
    if !lo_unstable || hi_unstable {
        return Err(StabilityError::NoSignChange {
            lo,
            hi,
            lo_unstable,
            hi_unstable,
        });
    }
    while hi - lo > opts.tol {
        let mid = 0.5 * (lo + hi);
        if any_mode_unstable(g, xi, kernel, mid, opts)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModePrediction {
    pub k_max: i64,
    pub gamma: Complex64,
    /// Phase velocity `gamma_i L / (2 pi k_max)` of the growing mode.
    pub velocity: f64,
    pub modes: Vec<GrowthResult>,
}

pub fn most_unstable_mode(g: &GSpec, xi: f64, kernel: &KernelSpec, sigma: f64, k_range: u32) -> Result<ModePrediction, StabilityError> {
    most_unstable_mode_with(g, xi, kernel, sigma, k_range, &RootSearch::default())
}

pub fn most_unstable_mode_with(
    g: &GSpec,
    xi: f64,
    kernel: &KernelSpec,
    sigma: f64,
    k_range: u32,
    search: &RootSearch,
) -> Result<ModePrediction, StabilityError> {
    let mut modes = Vec::with_capacity(k_range as usize);
    for k in 1..=k_range as i64 {
        let ctx = ModeContext::from_model(g, kernel, xi, sigma, k)?;
        modes.push(find_growth_roots(&ctx, search)?);
    }
    let best = modes
        .iter()
        .filter(|m| m.is_unstable())
        .fold(None::<&GrowthResult>, |acc, m| match acc {
            Some(a) if a.gamma_r >= m.gamma_r => Some(a),
            _ => Some(m),
        })
        .ok_or(StabilityError::AllModesStable { k_range })?;
    let gamma = best.dominant().expect("unstable mode has a root");
    let velocity = gamma.im * kernel.length() / (2.0 * std::f64::consts::PI * best.k as f64);
    Ok(ModePrediction {
        k_max: best.k,
        gamma,
        velocity,
        modes,
    })
}
