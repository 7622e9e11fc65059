//! Laplace transform `F(gamma) = int_0^inf R_k(t) e^{-gamma t} dt`.
//!
//! The integral is truncated at `T` where the bound
//! `|R_k(t)| <= |G' phi_k| (c + |xi D_k| + 1) e^{c} e^{-c t}`, `c = sigma^2 D_k^2 / 2`,
//! makes the tail smaller than `tail_tol`, and `[0, T]` is covered by
//! Gauss–Kronrod (7, 15) panels. A [`LaplaceEvaluator`] tabulates `R_k` at the
//! nodes once, so evaluating `F` and `F'` at a new `gamma` only costs a few
//! complex exponentials plus one pass over the table.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::r_unchecked;
use super::{ModeContext, StabilityError};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Nodes on `[-1, 1]` with Kronrod and embedded Gauss weights.
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[2 * i] = (-XGK[i], WGK[i], wg);
        out[2 * i + 1] = (XGK[i], WGK[i], wg);
    }
    out[14] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceOptions {
    /// Upper bound on the panel width.
    pub max_panel: f64,
    /// Multiplies the automatic panel width (0.5 halves the step).
    pub panel_scale: f64,
    /// Bound on the neglected tail of the integral.
    pub tail_tol: f64,
    /// Target absolute error of the transform.
    pub abs_tol: f64,
    /// Multiplies the automatic truncation time.
    pub truncation_factor: f64,
    /// Smallest admissible `(c + Re gamma) / c`.
    pub min_margin: f64,
    /// Panel refinements attempted by [`laplace_r`] before giving up.
    pub max_refinements: u32,
}

impl Default for LaplaceOptions {
    fn default() -> Self {
        LaplaceOptions {
            max_panel: 1.0,
            panel_scale: 1.0,
            tail_tol: 1e-10,
            abs_tol: 1e-8,
            truncation_factor: 1.0,
            min_margin: 0.05,
            max_refinements: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceValue {
    pub value: Complex64,
    /// `dF/dgamma = -int t R_k(t) e^{-gamma t} dt`.
    pub derivative: Complex64,
    /// Kronrod–Gauss discrepancy plus the tail bound.
    pub error: f64,
}

/// Tabulated transform for one mode, valid on the window
/// `Re gamma >= re_min`, `|Im gamma| <= im_max`.
#[derive(Debug, Clone)]
pub struct LaplaceEvaluator {
    ctx: ModeContext,
    re_min: f64,
    im_max: f64,
    panel: f64,
    truncation: f64,
    tail: f64,
    offsets: [f64; 15],
    kr: Vec<Complex64>,
    ktr: Vec<Complex64>,
    gr: Vec<Complex64>,
}

fn log_tail(ctx: &ModeContext, r: f64, t: f64) -> f64 {
    let c = ctx.decay_rate();
    let a = ctx.prefactor().abs() * (c + (ctx.xi * ctx.d_k).abs() + 1.0);
    // value tail e^{-rT}/r and derivative tail e^{-rT}(T/r + 1/r^2), both times a e^c
    a.ln() + c - r * t + ((t / r + 1.0 / (r * r)).max(1.0 / r)).ln()
}

impl LaplaceEvaluator {
    pub fn new(ctx: &ModeContext, re_min: f64, im_max: f64, opts: &LaplaceOptions) -> Result<Self, StabilityError> {
        ctx.require_kernel()?;
        let c = ctx.decay_rate();
        let r = c + re_min;
        if !(r >= opts.min_margin * c) || !re_min.is_finite() {
            return Err(StabilityError::NotAdmissible { re: re_min, decay: c });
        }
        let omega = (ctx.xi * ctx.d_k).abs() + im_max.abs();
        let panel = (opts.max_panel.min(4.0 / omega.max(1e-300)).min(2.0 / c.sqrt())) * opts.panel_scale;

        let mut truncation = 1f64.max(20.0 / c) * opts.truncation_factor;
        let log_tol = opts.tail_tol.ln();
        let mut doublings = 0;
        while ctx.prefactor() != 0.0 && log_tail(ctx, r, truncation) > log_tol {
            truncation *= 2.0;
            doublings += 1;
            if doublings > 60 {
                return Err(StabilityError::NotAdmissible { re: re_min, decay: c });
            }
        }
        let n_panels = (truncation / panel).ceil().max(1.0) as usize;
        let truncation = n_panels as f64 * panel;
        let tail = if ctx.prefactor() == 0.0 {
            0.0
        } else {
            log_tail(ctx, r, truncation).exp()
        };

        let nodes = rule();
        let half = 0.5 * panel;
        let mut offsets = [0.0; 15];
        for (o, n) in offsets.iter_mut().zip(nodes.iter()) {
            *o = half * (1.0 + n.0);
        }
        let mut kr = Vec::with_capacity(15 * n_panels);
        let mut ktr = Vec::with_capacity(15 * n_panels);
        let mut gr = Vec::with_capacity(15 * n_panels);
        for p in 0..n_panels {
            let a = p as f64 * panel;
            for (q, n) in nodes.iter().enumerate() {
                let t = a + offsets[q];
                let rt = r_unchecked(ctx, t);
                kr.push(rt * (n.1 * half));
                ktr.push(rt * (n.1 * half * t));
                gr.push(rt * (n.2 * half));
            }
        }
        Ok(LaplaceEvaluator {
            ctx: *ctx,
            re_min,
            im_max,
            panel,
            truncation,
            tail,
            offsets,
            kr,
            ktr,
            gr,
        })
    }

    pub fn context(&self) -> &ModeContext {
        &self.ctx
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn panel(&self) -> f64 {
        self.panel
    }

    pub fn contains(&self, gamma: Complex64) -> bool {
        gamma.re >= self.re_min && gamma.im.abs() <= self.im_max
    }

    pub fn eval(&self, gamma: Complex64) -> Result<LaplaceValue, StabilityError> {
        if !self.contains(gamma) {
            return Err(StabilityError::OutsideWindow { gamma });
        }
        let mut e = [Complex64::new(0.0, 0.0); 15];
        for (eq, &o) in e.iter_mut().zip(self.offsets.iter()) {
            *eq = (-gamma * o).exp();
        }
        let step = (-gamma * self.panel).exp();
        let mut scale = Complex64::new(1.0, 0.0);
        let mut value = Complex64::new(0.0, 0.0);
        let mut deriv = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for ((kp, ktp), gp) in self.kr.chunks_exact(15).zip(self.ktr.chunks_exact(15)).zip(self.gr.chunks_exact(15)) {
            let mut k = Complex64::new(0.0, 0.0);
            let mut kt = Complex64::new(0.0, 0.0);
            let mut g = Complex64::new(0.0, 0.0);
            for q in 0..15 {
                k += kp[q] * e[q];
                kt += ktp[q] * e[q];
                g += gp[q] * e[q];
            }
            value += scale * k;
            deriv += scale * kt;
            err += scale.norm() * (k - g).norm();
            scale *= step;
        }
        Ok(LaplaceValue {
            value,
            derivative: -deriv,
            error: err + self.tail,
        })
    }
}

/// Transform at a single point with the default options.
pub fn laplace_r(ctx: &ModeContext, gamma: Complex64) -> Result<Complex64, StabilityError> {
    laplace_r_with(ctx, gamma, &LaplaceOptions::default()).map(|v| v.value)
}

/// Transform at a single point; the panel width is halved until the error
/// estimate meets `opts.abs_tol`.
pub fn laplace_r_with(ctx: &ModeContext, gamma: Complex64, opts: &LaplaceOptions) -> Result<LaplaceValue, StabilityError> {
    let mut o = *opts;
    let mut last = f64::INFINITY;
    for _ in 0..=opts.max_refinements {
        let ev = LaplaceEvaluator::new(ctx, gamma.re, gamma.im.abs(), &o)?;
        let v = ev.eval(gamma)?;
        if v.error <= opts.abs_tol {
            return Ok(v);
        }
        last = v.error;
        o.panel_scale *= 0.5;
    }
    Err(StabilityError::Quadrature {
        estimate: last,
        tol: opts.abs_tol,
    })
}

/// `int_0^inf |R_k(t)| dt`, by 15-point Kronrod panels of width at most 1/4.
pub fn kernel_l1_norm(ctx: &ModeContext, opts: &LaplaceOptions) -> Result<f64, StabilityError> {
    ctx.require_kernel()?;
    if ctx.prefactor() == 0.0 {
        return Ok(0.0);
    }
    let c = ctx.decay_rate();
    let omega = (ctx.xi * ctx.d_k).abs();
    let panel = 0.25f64.min(1.0 / omega.max(1e-300)).min(1.0 / c.sqrt()) * opts.panel_scale;
    let mut truncation = 1f64.max(20.0 / c) * opts.truncation_factor;
    while log_tail(ctx, c, truncation) > opts.tail_tol.ln() {
        truncation *= 2.0;
    }
    let n = (truncation / panel).ceil() as usize;
    let half = 0.5 * panel;
    let nodes = rule();
    let mut total = 0.0;
    for p in 0..n {
        let mid = (p as f64 + 0.5) * panel;
        total += nodes
            .iter()
            .map(|&(x, w, _)| w * r_unchecked(ctx, mid + half * x).norm())
            .sum::<f64>()
            * half;
    }
    Ok(total)
}
