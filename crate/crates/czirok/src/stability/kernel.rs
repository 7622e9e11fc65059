//! Closed-form ingredients of the renewal equation for mode `k`.

use num_complex::Complex64;

use super::{ModeContext, StabilityError};

/// `g_k(t, 0)`, exponent of the characteristic flow at `eta = 0`.
pub fn characteristic_exponent(ctx: &ModeContext, t: f64) -> Complex64 {
    let s2 = ctx.sigma * ctx.sigma;
    let d = ctx.d_k;
    let b = ctx.beta(t);
    Complex64::new(-0.25 * s2 * b * b - 0.5 * s2 * d * b + 0.5 * s2 * d * d * t, ctx.xi * (b - d * t))
}

/// `d/d eta g_k(t, eta)` at `eta = 0`.
pub fn characteristic_exponent_deta(ctx: &ModeContext, t: f64) -> Complex64 {
    let e = (-t).exp();
    let b = ctx.beta(t);
    Complex64::new(0.5 * ctx.sigma * ctx.sigma * (e - 1.0) * b, ctx.xi * (1.0 - e))
}

fn velocity_transform(ctx: &ModeContext, eta: f64) -> Complex64 {
    Complex64::new(-0.25 * ctx.sigma * ctx.sigma * eta * eta, -ctx.xi * eta).exp()
}

/// `H_xi(eta) = eta F_xi^(eta)` with `F_xi^` the Fourier transform of the
/// Gaussian velocity profile.
pub fn h_xi(ctx: &ModeContext, eta: f64) -> Complex64 {
    eta * velocity_transform(ctx, eta)
}

pub fn h_xi_prime(ctx: &ModeContext, eta: f64) -> Complex64 {
    let s2 = ctx.sigma * ctx.sigma;
    Complex64::new(1.0 - 0.5 * s2 * eta * eta, -ctx.xi * eta) * velocity_transform(ctx, eta)
}

#[inline]
pub(crate) fn r_unchecked(ctx: &ModeContext, t: f64) -> Complex64 {
    let s2 = ctx.sigma * ctx.sigma;
    let d = ctx.d_k;
    let one_minus_e = -(-t).exp_m1();
    let b = d * one_minus_e;
    let c = 0.5 * s2 * d * d;
    let poly = Complex64::new(-0.5 * s2 * b * b + (1.0 - one_minus_e), ctx.xi * b);
    let expo = Complex64::new(c * (one_minus_e - t), ctx.xi * d * t).exp();
    ctx.prefactor() * poly * expo
}

/// Memory kernel `R_k(t)` of the renewal equation.
pub fn mode_kernel_r(ctx: &ModeContext, t: f64) -> Result<Complex64, StabilityError> {
    ctx.require_kernel()?;
    Ok(r_unchecked(ctx, t))
}

/// Source term `psi_k(t)` for the initial perturbation
/// `rho_k^(0, eta) = exp(-eta^2 / 2)`.
pub fn psi_k(ctx: &ModeContext, t: f64) -> Result<Complex64, StabilityError> {
    ctx.require_kernel()?;
    Ok(psi_unchecked(ctx, t))
}

pub(crate) fn psi_unchecked(ctx: &ModeContext, t: f64) -> Complex64 {
    let b = ctx.beta(t);
    let rho = (-0.5 * b * b).exp();
    let drho = b * rho;
    let g = characteristic_exponent(ctx, t);
    let dg = characteristic_exponent_deta(ctx, t);
    (-dg * rho + drho * (-t).exp()) * (-g).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GSpec, KernelSpec};

    fn ctx(sigma: f64) -> ModeContext {
        let g = GSpec::cubic(6.0);
        let xi = g.closed_form_order_velocity().unwrap();
        ModeContext::from_model(&g, &KernelSpec::top_hat(1.0, 10.0).unwrap(), xi, sigma, 1).unwrap()
    }

    #[test]
    fn value_at_zero_is_prefactor() {
        let c = ctx(1.0);
        let r = mode_kernel_r(&c, 0.0).unwrap();
        assert!((r - Complex64::new(c.prefactor(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_mode_rejected() {
        let c = ModeContext { k: 0, d_k: 0.0, ..ctx(1.0) };
        assert_eq!(mode_kernel_r(&c, 1.0), Err(StabilityError::ZeroMode));
    }

    #[test]
    fn closed_form_matches_structural_form() {
        let c = ctx(1.3);
        for &t in &[0.0, 0.1, 0.7, 2.5, 9.0] {
            let b = c.beta(t);
            let structural = c.prefactor()
                * (-characteristic_exponent_deta(&c, t) * h_xi(&c, -b) + (-t as f64).exp() * h_xi_prime(&c, -b))
                * (-characteristic_exponent(&c, t)).exp();
            let closed = mode_kernel_r(&c, t).unwrap();
            assert!((structural - closed).norm() < 1e-13 * (1.0 + closed.norm()), "t={t}");
        }
    }

    #[test]
    fn exponent_matches_expanded_form() {
        let c = ctx(0.8);
        let (s2, d, xi) = (c.sigma * c.sigma, c.d_k, c.xi);
        for t in [0.3f64, 1.0, 4.0] {
            let expanded = Complex64::new(
                0.25 * s2 * d * d * (1.0 - (-2.0 * t).exp()) - s2 * d * d * (1.0 - (-t).exp()) + 0.5 * s2 * d * d * t,
                xi * d * (1.0 - (-t).exp()) - xi * d * t,
            );
            assert!((characteristic_exponent(&c, t) - expanded).norm() < 1e-13);
            let dexp = Complex64::new(
                0.5 * s2 * d * (1.0 - (-2.0 * t).exp()) - s2 * d * (1.0 - (-t).exp()),
                xi * (1.0 - (-t).exp()),
            );
            assert!((characteristic_exponent_deta(&c, t) - dexp).norm() < 1e-13);
        }
    }

    #[test]
    fn conjugate_mode() {
        let c = ctx(1.0);
        let a = mode_kernel_r(&c, 0.7).unwrap();
        let b = mode_kernel_r(&c.conjugate(), 0.7).unwrap();
        assert!((a.conj() - b).norm() < 1e-15);
    }

    #[test]
    fn zero_slope_kernel_vanishes() {
        let c = ctx(1.0).with_gp(0.0);
        for &t in &[0.0, 1.0, 10.0] {
            assert_eq!(mode_kernel_r(&c, t).unwrap(), Complex64::new(0.0, 0.0));
        }
    }
}
