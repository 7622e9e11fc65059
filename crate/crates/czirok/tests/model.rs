use czirok::model::rng::{init_rng, run_seed};
use czirok::model::*;
use czirok::stats::mean_velocity;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(n: usize, length: f64, seed: u64) -> SwarmState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = (0..n).map(|_| rng.random_range(0.0..length)).collect();
    let u = (0..n).map(|_| rng.random_range(-4.0..4.0)).collect();
    SwarmState::new(x, u, length).unwrap()
}

proptest! {
    #[test]
    fn g_is_odd(h in 0.5f64..12.0, a in 0.1f64..3.0, u in -20.0f64..20.0) {
        for g in [GSpec::cubic(h), GSpec::tanh(a), GSpec::OddPolynomial { coeffs: vec![a, -0.01 * h, 1e-4] }] {
            prop_assert!((g.eval(-u) + g.eval(u)).abs() <= 1e-12 * (1.0 + g.eval(u).abs()));
            prop_assert!((g.derivative(-u) - g.derivative(u)).abs() <= 1e-12 * (1.0 + g.derivative(u).abs()));
        }
    }

    #[test]
    fn cubic_order_velocity_is_compatible(h in 4.1f64..20.0) {
        let g = GSpec::cubic(h);
        let xi = g.closed_form_order_velocity().unwrap();
        prop_assert!((g.eval(xi) - xi).abs() < 1e-12);
        prop_assert!((xi - 5.0 * ((h - 4.0) / h).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn positions_stay_on_torus(seed in any::<u64>(), sigma in 0.0f64..6.0, n in 1usize..150) {
        let mut p = ModelParams::baseline(n, 6.0, sigma).with_steps(20).with_seed(seed);
        p.g = GSpec::OddPolynomial { coeffs: vec![0.1] };
        let mut state = sample_initial(2.0, &p, &mut init_rng(seed)).unwrap();
        state.u.iter_mut().for_each(|u| *u *= 40.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            state = euler_step(&state, &p, &mut rng);
            prop_assert!(state.x.iter().all(|&x| (0.0..10.0).contains(&x)));
        }
    }

    #[test]
    fn mirror_equivariance_without_noise(seed in any::<u64>(), n in 2usize..120, h in 2.0f64..9.0) {
        let mut p = ModelParams::baseline(n, h, 0.0).with_steps(30);
        p.sigma = 0.0;
        let s0 = random_state(n, 10.0, seed);
        let mut a = Simulator::new(p.clone(), s0.clone()).unwrap();
        let mut b = Simulator::new(p, s0.mirrored()).unwrap();
        for _ in 0..30 {
            a.step();
            b.step();
        }
        let ma = a.state().mirrored();
        for i in 0..n {
            let dx = torus_distance(ma.x[i], b.state().x[i], 10.0);
            prop_assert!(dx < 1e-9, "agent {} position differs by {}", i, dx);
            prop_assert!((ma.u[i] - b.state().u[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn sweep_matches_direct_sum(seed in any::<u64>(), n in 1usize..400, r in 0.05f64..2.5) {
        let kernel = KernelSpec::top_hat(r, 10.0).unwrap();
        let state = random_state(n, 10.0, seed);
        for averaging in [Averaging::Symmetric, Averaging::Normalized] {
            let direct = neighbor_average_direct(&state, &kernel, averaging);
            let mut out = vec![0.0; n];
            NeighborSearch::new().average_into(&state, &kernel, averaging, &mut out);
            let scale = kernel.amplitude() * state.u.iter().map(|u| u.abs()).fold(1.0, f64::max);
            for (a, b) in out.iter().zip(&direct) {
                prop_assert!((a - b).abs() <= 1e-12 * scale, "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn kernel_has_unit_mean(r in 0.01f64..5.0, length in 1.0f64..50.0) {
        prop_assume!(r <= length / 2.0);
        let kernel = KernelSpec::top_hat(r, length).unwrap();
        // midpoint rule on a grid aligned with the support edges
        let m = 20_000;
        let h = r / m as f64;
        let inside: f64 = (0..m).map(|i| kernel.weight((i as f64 + 0.5) * h)).sum::<f64>() * h;
        prop_assert!((2.0 * inside / length - 1.0).abs() < 1e-12);
        prop_assert_eq!(kernel.weight(r * 1.0001), 0.0);
        prop_assert!((kernel.fourier_coefficient(0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn same_seed_same_run(seed in any::<u64>()) {
        let p = ModelParams::baseline(80, 6.0, 1.0).with_steps(50).with_seed(seed);
        let obs = [Observer::MeanVelocity, Observer::Discrepancy];
        let a = simulate(&p, sample_initial(1.0, &p, &mut init_rng(seed)).unwrap(), &obs).unwrap();
        let b = simulate(&p, sample_initial(1.0, &p, &mut init_rng(seed)).unwrap(), &obs).unwrap();
        prop_assert_eq!(a.mean_velocity, b.mean_velocity);
        prop_assert_eq!(a.discrepancy, b.discrepancy);
    }
}

#[test]
fn top_hat_fourier_coefficients_match_quadrature() {
    let kernel = KernelSpec::top_hat(1.0, 10.0).unwrap();
    for k in 0..6i64 {
        let m = 200_000;
        let h = 10.0 / m as f64;
        let integral: f64 = (0..m)
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                kernel.weight(torus_distance(x, 0.0, 10.0)) * (2.0 * std::f64::consts::PI * k as f64 * x / 10.0).cos()
            })
            .sum::<f64>()
            * h
            / 10.0;
        assert!((integral - kernel.fourier_coefficient(k)).abs() < 1e-4, "k={k}");
    }
}

#[test]
fn four_agent_average_by_hand() {
    // amplitude 5; agents 0 and 1 see each other, agent 3 sees agent 0 across the seam
    let state = SwarmState::new(vec![0.2, 1.0, 5.0, 9.5], vec![1.0, 2.0, 3.0, 4.0], 10.0).unwrap();
    let kernel = KernelSpec::top_hat(1.0, 10.0).unwrap();
    let avg = neighbor_average_direct(&state, &kernel, Averaging::Symmetric);
    let expect = [5.0 * (1.0 + 2.0 + 4.0) / 4.0, 5.0 * (1.0 + 2.0) / 4.0, 5.0 * 3.0 / 4.0, 5.0 * (1.0 + 4.0) / 4.0];
    for (a, e) in avg.iter().zip(expect) {
        assert!((a - e).abs() < 1e-14);
    }
    let norm = neighbor_average_direct(&state, &kernel, Averaging::Normalized);
    let expect = [7.0 / 3.0, 1.5, 3.0, 2.5];
    for (a, e) in norm.iter().zip(expect) {
        assert!((a - e).abs() < 1e-14);
    }
}

#[test]
fn initial_mean_velocity_obeys_clt() {
    let (n, sigma, xi) = (1000, 1.3, 2.5);
    let p = ModelParams::baseline(n, 6.0, sigma);
    let reps = 2000;
    let means: Vec<f64> = (0..reps)
        .map(|r| mean_velocity(&sample_initial(xi, &p, &mut init_rng(run_seed(99, r))).unwrap()))
        .collect();
    let m = means.iter().sum::<f64>() / reps as f64;
    let var = means.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (reps - 1) as f64;
    let predicted = sigma * sigma / 2.0 / n as f64;
    let z = (m - xi) / (predicted / reps as f64).sqrt();
    assert!(z.abs() < 4.0, "z = {z}");
    // sample variance of a Gaussian has relative standard error sqrt(2/(reps-1))
    assert!((var / predicted - 1.0).abs() < 4.0 * (2.0 / (reps - 1) as f64).sqrt());
}

#[test]
fn mismatched_state_is_rejected() {
    let p = ModelParams::baseline(10, 6.0, 1.0).with_steps(1);
    let s = SwarmState::colocated(9, 0.0, 0.0, 10.0).unwrap();
    assert!(matches!(simulate(&p, s, &[]), Err(ModelError::AgentCountMismatch { .. })));
}
