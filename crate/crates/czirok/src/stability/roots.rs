use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::critical::sufficient_mode_bound;
use super::laplace::{LaplaceEvaluator, LaplaceOptions};
use super::{ModeContext, StabilityError};

/// `gamma_r` reported when no growth rate exists.
pub const STABLE_SENTINEL: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    /// At least one root with positive real part.
    Unstable,
    /// Newton converged from some starts, never into the right half-plane.
    Stable,
    /// No start converged at all.
    GridExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthResult {
    pub k: i64,
    /// Growth rates with positive real part, most unstable first.
    pub roots: Vec<Complex64>,
    pub gamma_r: f64,
    pub gamma_i: f64,
    pub sufficient_bound_ok: bool,
    pub status: SearchStatus,
    pub converged_starts: usize,
}

impl GrowthResult {
    pub fn is_unstable(&self) -> bool {
        !self.roots.is_empty()
    }

    pub fn dominant(&self) -> Option<Complex64> {
        self.roots.first().copied()
    }
}

/// Newton search configuration. Starts form a lattice with real parts
/// log-spaced in `[re_lo, re_hi]` (plus `damped_rows` rows in the left
/// half-plane when requested) and imaginary parts spread over
/// `|Im| <= |xi D_k| + im_pad`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootSearch {
    pub re_lo: f64,
    pub re_hi: f64,
    pub n_re: usize,
    pub n_im: usize,
    pub im_pad: f64,
    pub damped_rows: usize,
    /// Iterates with `Re gamma < -floor_frac * c` are abandoned.
    pub floor_frac: f64,
    pub dedup: f64,
    pub newton_tol: f64,
    pub validity_tol: f64,
    pub max_iter: usize,
    pub max_step: f64,
    pub max_modulus: f64,
    pub laplace: LaplaceOptions,
}

impl Default for RootSearch {
    fn default() -> Self {
        RootSearch {
            re_lo: 1e-3,
            re_hi: 5.0,
            n_re: 16,
            n_im: 32,
            im_pad: 4.0,
            damped_rows: 0,
            floor_frac: 0.3,
            dedup: 1e-4,
            newton_tol: 1e-10,
            validity_tol: 1e-6,
            max_iter: 50,
            max_step: 1.0,
            max_modulus: 100.0,
            laplace: LaplaceOptions::default(),
        }
    }
}

impl RootSearch {
    /// Search that also follows roots into the left half-plane, used to find
    /// the least damped rate of a stable mode.
    pub fn damped() -> Self {
        RootSearch {
            damped_rows: 8,
            floor_frac: 0.9,
            ..Default::default()
        }
    }

    fn im_half(&self, ctx: &ModeContext) -> f64 {
        (ctx.xi * ctx.d_k).abs() + self.im_pad
    }

    /// Start points, ordered by distance of `Im` from `xi D_k` and then by `Re`.
    pub fn starts(&self, ctx: &ModeContext) -> Vec<Complex64> {
        let c = ctx.decay_rate();
        let mut re: Vec<f64> = Vec::new();
        let lo = -(self.floor_frac - 0.05) * c;
        for i in 0..self.damped_rows {
            re.push(lo * (1.0 - i as f64 / self.damped_rows as f64));
        }
        let ratio = (self.re_hi / self.re_lo).ln();
        for i in 0..self.n_re {
            let f = if self.n_re > 1 { i as f64 / (self.n_re - 1) as f64 } else { 0.0 };
            re.push(self.re_lo * (ratio * f).exp());
        }
        let half = self.im_half(ctx);
        let mut im: Vec<f64> = (0..self.n_im)
            .map(|j| {
                if self.n_im > 1 {
                    -half + 2.0 * half * j as f64 / (self.n_im - 1) as f64
                } else {
                    0.0
                }
            })
            .collect();
        let centre = ctx.xi * ctx.d_k;
        im.sort_by(|a, b| (a - centre).abs().total_cmp(&(b - centre).abs()));
        im.iter()
            .flat_map(|&y| re.iter().map(move |&x| Complex64::new(x, y)))
            .collect()
    }

    fn evaluator(&self, ctx: &ModeContext, panel_scale: f64) -> Result<LaplaceEvaluator, StabilityError> {
        let c = ctx.decay_rate();
        let opts = LaplaceOptions {
            panel_scale: self.laplace.panel_scale * panel_scale,
            ..self.laplace
        };
        LaplaceEvaluator::new(ctx, -self.floor_frac * c, self.im_half(ctx) + self.im_pad, &opts)
    }
}

enum Newton {
    Converged(Complex64),
    Failed,
}

fn newton(ev: &LaplaceEvaluator, start: Complex64, s: &RootSearch) -> Result<Newton, StabilityError> {
    let mut gamma = start;
    for _ in 0..s.max_iter {
        if !ev.contains(gamma) || gamma.norm() > s.max_modulus || !gamma.re.is_finite() {
            return Ok(Newton::Failed);
        }
        let v = ev.eval(gamma)?;
        let f = v.value - 1.0;
        if f.norm() <= s.newton_tol {
            return Ok(Newton::Converged(gamma));
        }
        if v.derivative.norm() == 0.0 {
            return Ok(Newton::Failed);
        }
        let mut delta = f / v.derivative;
        let len = delta.norm();
        if len > s.max_step {
            delta *= s.max_step / len;
        }
        gamma -= delta;
    }
    Ok(Newton::Failed)
}

struct Found {
    roots: Vec<Complex64>,
    converged: usize,
}

/// Runs Newton from every start; `stop_at_unstable` ends the scan at the first
/// validated root with positive real part.
fn scan(ctx: &ModeContext, s: &RootSearch, stop_at_unstable: bool) -> Result<Found, StabilityError> {
    let mut found = Found {
        roots: Vec::new(),
        converged: 0,
    };
    if ctx.prefactor() == 0.0 {
        return Ok(found);
    }
    let ev = s.evaluator(ctx, 1.0)?;
    let mut check: Option<LaplaceEvaluator> = None;
    for start in s.starts(ctx) {
        let Newton::Converged(root) = newton(&ev, start, s)? else {
            continue;
        };
        found.converged += 1;
        if found.roots.iter().any(|r| (r - root).norm() <= s.dedup) {
            continue;
        }
        if check.is_none() {
            check = Some(s.evaluator(ctx, 0.5)?);
        }
        let v = check.as_ref().expect("built above").eval(root)?;
        if (v.value - 1.0).norm() > s.validity_tol {
            continue;
        }
        found.roots.push(root);
        if stop_at_unstable && root.re > 0.0 {
            break;
        }
    }
    Ok(found)
}

fn order(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.abs().total_cmp(&a.im.abs())));
}

pub(crate) fn has_growth_root(ctx: &ModeContext, s: &RootSearch) -> Result<bool, StabilityError> {
    Ok(scan(ctx, s, true)?.roots.iter().any(|r| r.re > 0.0))
}

/// Growth rates of mode `k`: solutions of `F(gamma) = 1` with `Re gamma > 0`.
pub fn find_growth_roots(ctx: &ModeContext, search: &RootSearch) -> Result<GrowthResult, StabilityError> {
    ctx.require_kernel()?;
    let found = scan(ctx, search, false)?;
    let mut roots: Vec<Complex64> = found.roots.into_iter().filter(|r| r.re > 0.0).collect();
    order(&mut roots);
    let status = if !roots.is_empty() {
        SearchStatus::Unstable
    } else if found.converged > 0 {
        SearchStatus::Stable
    } else {
        SearchStatus::GridExhausted
    };
    let (gamma_r, gamma_i) = roots.first().map_or((STABLE_SENTINEL, 0.0), |r| (r.re, r.im));
    Ok(GrowthResult {
        k: ctx.k,
        roots,
        gamma_r,
        gamma_i,
        sufficient_bound_ok: sufficient_mode_bound(ctx),
        status,
        converged_starts: found.converged,
    })
}

/// Root of `F(gamma) = 1` with the largest real part anywhere in the search
/// window, including the left half-plane (see [`RootSearch::damped`]).
pub fn dominant_root(ctx: &ModeContext, search: &RootSearch) -> Result<Option<Complex64>, StabilityError> {
    ctx.require_kernel()?;
    let mut roots = scan(ctx, search, false)?.roots;
    order(&mut roots);
    Ok(roots.first().copied())
}
