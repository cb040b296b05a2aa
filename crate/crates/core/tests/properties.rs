use proptest::prelude::*;
use singlab_core::asymptotics::{fit_critical_samples, fit_decay, fit_gamma_samples};
use singlab_core::model::{inverse_log, transform_log, Branch, ProblemParams, RSamples};

fn branches(p: &ProblemParams) -> Vec<Branch> {
    let mut v = vec![Branch::NoShift, Branch::ShiftTwoOverB];
    if p.q < 2.0 {
        v.push(Branch::LambdaCritical);
        v.push(Branch::ShiftGamma(0.7));
    } else {
        v.push(Branch::ShiftQOverB);
    }
    v
}

fn grid(n: usize, t0: f64) -> Vec<f64> {
    (0..n).map(|i| t0 * (1.0 - i as f64 / (n - 1) as f64)).collect()
}

proptest! {
    #[test]
    fn log_transform_round_trip(
        b in 0.2f64..4.0,
        q in prop_oneof![1.1f64..1.9, 2.1f64..5.0],
        log_r in -18.0f64..0.0,
        u in -50.0f64..50.0,
        u_r in -1e3f64..1e3,
    ) {
        let p = ProblemParams::new(1.0, 1.0, b, q, None).unwrap();
        let r = log_r.exp();
        let input = RSamples { r: vec![r], u: vec![u], u_r: vec![u_r] };
        for br in branches(&p) {
            let ts = transform_log(&p, br, &input).unwrap();
            let back = inverse_log(&p, br, &ts).unwrap();
            let t = ts.t[0];
            let s = br.slope(&p);
            let scale_u = u.abs() + s * t.abs() + 2.0 / b * (1.0 - t).ln() + 1.0;
            let scale_d = u_r.abs() + (s + 2.0 / b) / r;
            prop_assert!((back.r[0] - r).abs() <= 1e-14 * r);
            prop_assert!((back.u[0] - u).abs() <= 1e-14 * scale_u, "{br:?}: {} vs {u}", back.u[0]);
            prop_assert!((back.u_r[0] - u_r).abs() <= 1e-14 * scale_d, "{br:?}: {} vs {u_r}", back.u_r[0]);
        }
    }

    #[test]
    fn slope_fit_is_exact_on_lines_and_shift_covariant(
        gamma in 0.0f64..4.0,
        ell in -5.0f64..5.0,
        k in -10.0f64..10.0,
        amp in -1.0f64..1.0,
    ) {
        let t = grid(2048, -18.0);
        let line: Vec<f64> = t.iter().map(|t| -gamma * t + ell).collect();
        let f = fit_gamma_samples(&t, &line, (-17.0, -6.0)).unwrap();
        prop_assert!((f.gamma_hat - gamma).abs() < 1e-10);
        prop_assert!((f.ell_hat - ell).abs() < 1e-9);
        let u: Vec<f64> = t.iter().map(|t| -gamma * t + ell + amp * (0.5 * t).exp()).collect();
        let shifted: Vec<f64> = u.iter().map(|v| v + k).collect();
        let a = fit_gamma_samples(&t, &u, (-17.0, -6.0)).unwrap();
        let c = fit_gamma_samples(&t, &shifted, (-17.0, -6.0)).unwrap();
        prop_assert!((a.gamma_hat - c.gamma_hat).abs() < 1e-10);
        prop_assert!((c.ell_hat - a.ell_hat - k).abs() < 1e-9);
    }

    #[test]
    fn critical_fit_recovers_the_model(
        b in 0.5f64..3.0,
        ell in -2.0f64..2.0,
        c1 in -10.0f64..10.0,
        k in -5.0f64..5.0,
    ) {
        let t = grid(4096, -36.0);
        let g = 2.0 / b;
        let u: Vec<f64> = t.iter().map(|t| -g * t - g * (1.0 - t).ln() + ell + c1 / (1.0 - t)).collect();
        let f = fit_critical_samples(&t, &u, b, (-34.0, -12.0)).unwrap();
        prop_assert!((f.gamma_hat - g).abs() < 1e-9);
        prop_assert!((f.ell_hat - ell).abs() < 1e-8);
        let shifted: Vec<f64> = u.iter().map(|v| v + k).collect();
        let s = fit_critical_samples(&t, &shifted, b, (-34.0, -12.0)).unwrap();
        prop_assert!((s.ell_hat - f.ell_hat - k).abs() < 1e-8);
        prop_assert!((s.gamma_hat - f.gamma_hat).abs() < 1e-10);
    }

    #[test]
    fn decay_rate_is_scale_invariant(
        beta in 0.05f64..3.0,
        log_c in -20.0f64..20.0,
    ) {
        let t = grid(1024, -18.0);
        let s: Vec<f64> = t.iter().map(|t| (beta * t).exp() * (1.0 + 0.1 * (2.0 * beta * t).exp())).collect();
        let scaled: Vec<f64> = s.iter().map(|v| v * log_c.exp()).collect();
        let a = fit_decay(&t, &s, (-17.0, -8.0)).unwrap();
        let c = fit_decay(&t, &scaled, (-17.0, -8.0)).unwrap();
        prop_assert!((a.beta_hat - c.beta_hat).abs() < 1e-10 * (1.0 + beta));
        let pure: Vec<f64> = t.iter().map(|t| log_c.exp() * (beta * t).exp()).collect();
        let e = fit_decay(&t, &pure, (-17.0, -8.0)).unwrap();
        prop_assert!((e.beta_hat - beta).abs() < 1e-10 * (1.0 + beta));
    }
}
