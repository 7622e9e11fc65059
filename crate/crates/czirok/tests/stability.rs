use czirok::model::{GSpec, KernelSpec};
use czirok::stability::*;
use num_complex::Complex64;
use proptest::prelude::*;

/// `int_0^inf R_k e^{-gamma t} dt` from the power series of `exp(c e^{-t})`.
fn laplace_series(ctx: &ModeContext, gamma: Complex64) -> Complex64 {
    let c = ctx.decay_rate();
    let w = Complex64::new(0.0, ctx.xi * ctx.d_k);
    let p = [-c + w, 2.0 * c - w + 1.0, Complex64::new(-c, 0.0)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut coef = 1.0;
    for n in 0..120 {
        if n > 0 {
            coef *= -c / n as f64;
        }
        for (j, pj) in p.iter().enumerate() {
            total += coef * pj / (gamma + c - w + (n + j) as f64);
        }
    }
    ctx.prefactor() * c.exp() * total
}

fn baseline(h: f64, sigma: f64, k: i64) -> ModeContext {
    let g = GSpec::cubic(h);
    let xi = g.closed_form_order_velocity().unwrap();
    ModeContext::from_model(&g, &KernelSpec::top_hat(1.0, 10.0).unwrap(), xi, sigma, k).unwrap()
}

fn context() -> impl Strategy<Value = ModeContext> {
    (1i64..4, 0.3f64..3.0, -4.0f64..4.0, -3.0f64..3.0, -1.0f64..1.0)
        .prop_map(|(k, s, xi, gp, phik)| ModeContext::new(k, 10.0, xi, s, gp, phik).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn negative_mode_kernel_is_conjugate(ctx in context(), t in 0.0f64..30.0) {
        let a = mode_kernel_r(&ctx, t).unwrap();
        let b = mode_kernel_r(&ctx.conjugate(), t).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn laplace_matches_series(ctx in context(), re in 0.0f64..2.0, im in -6.0f64..6.0) {
        // the alternating series loses ~e^{2c} ulps
        prop_assume!(ctx.decay_rate() <= 4.0);
        let gamma = Complex64::new(re, im);
        let v = laplace_r(&ctx, gamma).unwrap();
        let oracle = laplace_series(&ctx, gamma);
        prop_assert!((v - oracle).norm() <= 1e-8, "{} vs {}", v, oracle);
    }

    #[test]
    fn laplace_doubling_truncation_changes_little(ctx in context(), re in 0.0f64..1.0, im in -5.0f64..5.0) {
        let gamma = Complex64::new(re, im);
        let base = laplace_r_with(&ctx, gamma, &LaplaceOptions::default()).unwrap();
        let opts = LaplaceOptions { truncation_factor: 2.0, ..Default::default() };
        let long = laplace_r_with(&ctx, gamma, &opts).unwrap();
        prop_assert!((base.value - long.value).norm() < 1e-7);
    }

    #[test]
    fn laplace_is_linear_in_prefactor(ctx in context(), s in -3.0f64..3.0) {
        for gamma in [Complex64::new(0.1, 0.0), Complex64::new(0.5, 2.0), Complex64::new(1.5, -3.0)] {
            let a = laplace_r(&ctx, gamma).unwrap();
            let b = laplace_r(&ctx.with_gp(ctx.gp * s), gamma).unwrap();
            prop_assert!((a * s - b).norm() <= 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sufficient_bound_excludes_growth(k in 1i64..4, s in 0.5f64..3.0, xi in -3.0f64..3.0, frac in -0.999f64..0.999) {
        let probe = ModeContext::new(k, 10.0, xi, s, 1.0, 1.0).unwrap();
        // largest |G' phi| the bound admits, approached from below
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if sufficient_mode_bound(&probe.with_gp(mid)) { lo = mid } else { hi = mid }
        }
        let ctx = probe.with_gp(frac * lo);
        prop_assert!(sufficient_mode_bound(&ctx));
        let res = find_growth_roots(&ctx, &RootSearch::default()).unwrap();
        prop_assert!(res.roots.is_empty(), "roots {:?}", res.roots);
        prop_assert!(res.sufficient_bound_ok);
    }
}

#[test]
fn series_oracle_reproduces_known_root() {
    let ctx = baseline(6.0, 0.5, 1);
    let root = dominant_root(&ctx, &RootSearch::default()).unwrap().unwrap();
    assert!((laplace_series(&ctx, root) - 1.0).norm() < 1e-8);
    assert!(root.re > 0.0);
}

#[test]
fn growth_roots_solve_the_criterion() {
    let ctx = baseline(6.0, 0.5, 1);
    let res = find_growth_roots(&ctx, &RootSearch::default()).unwrap();
    assert!(res.is_unstable());
    let fine = LaplaceOptions { panel_scale: 0.25, truncation_factor: 2.0, ..Default::default() };
    for g in &res.roots {
        assert!(g.re > 0.0);
        let v = laplace_r_with(&ctx, *g, &fine).unwrap();
        assert!((v.value - 1.0).norm() <= 1e-6, "{g}: {}", v.value);
    }
    for w in res.roots.windows(2) {
        assert!(w[0].re >= w[1].re);
    }
}

#[test]
fn conjugate_mode_has_conjugate_roots() {
    let ctx = baseline(6.0, 0.5, 1);
    let a = find_growth_roots(&ctx, &RootSearch::default()).unwrap();
    let b = find_growth_roots(&ctx.conjugate(), &RootSearch::default()).unwrap();
    assert_eq!(a.roots.len(), b.roots.len());
    for r in &a.roots {
        assert!(b.roots.iter().any(|q| (q - r.conj()).norm() < 1e-6), "missing conjugate of {r}");
    }
}

#[test]
fn flat_response_has_no_growth() {
    let ctx = baseline(6.0, 0.5, 1).with_gp(0.0);
    assert!(find_growth_roots(&ctx, &RootSearch::default()).unwrap().roots.is_empty());
}

#[test]
fn large_noise_stabilises_first_mode() {
    let res = find_growth_roots(&baseline(6.0, 2.0, 1), &RootSearch::default()).unwrap();
    assert!(res.roots.is_empty(), "{:?}", res.roots);
    assert_eq!(res.gamma_r, STABLE_SENTINEL);
}

#[test]
fn volterra_slope_tracks_growth_rate() {
    let ctx = baseline(6.0, 0.5, 1);
    let root = dominant_root(&ctx, &RootSearch::default()).unwrap().unwrap();
    let slope = volterra_growth_check(&ctx, 150.0, 0.05).unwrap();
    assert!((slope - root.re).abs() <= 0.05 * root.re.abs(), "{slope} vs {}", root.re);
}

#[test]
fn zeroth_mode_criterion() {
    assert!(zeroth_mode_stable(&GSpec::cubic(6.0), 5.0 * (2.0f64 / 6.0).sqrt()));
    // disorder state of a double well: G'(0) = (h+1)/5 > 1
    assert!(!zeroth_mode_stable(&GSpec::cubic(6.0), 0.0));
    assert!(zeroth_mode_stable(&GSpec::cubic(2.0), 0.0));
}

#[test]
fn h_xi_prime_matches_finite_difference() {
    let ctx = baseline(6.0, 1.3, 2);
    let h = 1e-6;
    for eta in [-1.5f64, 0.0, 0.7, 3.0] {
        let fd = (h_xi(&ctx, eta + h) - h_xi(&ctx, eta - h)) / (2.0 * h);
        assert!((h_xi_prime(&ctx, eta) - fd).norm() < 1e-7, "eta={eta}");
    }
}

#[test]
fn characteristic_flow_starts_at_rest() {
    let ctx = baseline(6.0, 1.3, 2);
    assert!(characteristic_exponent(&ctx, 0.0).norm() < 1e-15);
    assert!(characteristic_exponent_deta(&ctx, 0.0).norm() < 1e-15);
    // psi_k(0) = rho_k^'(0, 0) - d_eta g(0, 0) rho_k^(0, 0) = 0
    assert!(psi_k(&ctx, 0.0).unwrap().norm() < 1e-15);
}
