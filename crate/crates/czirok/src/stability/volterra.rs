use num_complex::Complex64;

use super::kernel::{psi_unchecked, r_unchecked};
use super::{ModeContext, StabilityError};
use crate::stats::slope;

/// Trapezoidal solution of `w = psi + int_0^t R(t - s) w(s) ds` on the grid
/// `t_n = n dt`, `n = 0..=horizon/dt`.
pub fn volterra_solution(ctx: &ModeContext, horizon: f64, dt: f64) -> Result<Vec<Complex64>, StabilityError> {
    ctx.require_kernel()?;
    if !(dt > 0.0 && horizon > dt) {
        return Err(StabilityError::InvalidContext(format!(
            "need 0 < dt < horizon, got dt={dt}, horizon={horizon}"
        )));
    }
    let n = (horizon / dt).round() as usize + 1;
    let r: Vec<Complex64> = (0..n).map(|i| r_unchecked(ctx, i as f64 * dt)).collect();
    let mut w = Vec::with_capacity(n);
    w.push(psi_unchecked(ctx, 0.0));
    let denom = 1.0 - 0.5 * dt * r[0];
    for i in 1..n {
        let mut acc = 0.5 * r[i] * w[0];
        for j in 1..i {
            acc += r[i - j] * w[j];
        }
        let wi = (psi_unchecked(ctx, i as f64 * dt) + dt * acc) / denom;
        let mag = wi.norm();
        if !mag.is_finite() || mag < 1e-290 || mag > 1e290 {
            return Err(StabilityError::Saturation { t: i as f64 * dt });
        }
        w.push(wi);
    }
    Ok(w)
}

/// Empirical growth rate: least-squares slope of `ln |w_k(t)|` over the last
/// third of `[0, horizon]`.
pub fn volterra_growth_check(ctx: &ModeContext, horizon: f64, dt: f64) -> Result<f64, StabilityError> {
    let w = volterra_solution(ctx, horizon, dt)?;
    let from = 2 * w.len() / 3;
    let t: Vec<f64> = (from..w.len()).map(|i| i as f64 * dt).collect();
    let y: Vec<f64> = w[from..].iter().map(|v| v.norm().ln()).collect();
    Ok(slope(&t, &y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_slope_decays_at_kernel_rate() {
        let ctx = ModeContext::new(1, 10.0, 2.886751345948129, 2.0, 0.0, 0.935489).unwrap();
        let s = volterra_growth_check(&ctx, 60.0, 0.05).unwrap();
        assert!((s + ctx.decay_rate()).abs() < 1e-6, "{s}");
    }

    #[test]
    fn rejects_bad_grid() {
        let ctx = ModeContext::new(1, 10.0, 1.0, 1.0, 0.2, 0.9).unwrap();
        assert!(volterra_solution(&ctx, 1.0, 0.0).is_err());
        assert!(volterra_solution(&ctx, 0.01, 0.1).is_err());
    }
}
