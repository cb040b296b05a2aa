use singlab_core::annulus2d::{
    angular_variation, fourier_mode_norms, parseval_defect, sample_boundary, solve_nonradial, Seed,
};
use singlab_core::model::{Branch, ProblemParams};
use singlab_core::radial::{solve_bvp_subcritical, SolverConfig};
use singlab_core::Error;

fn cfg(n: usize) -> SolverConfig {
    SolverConfig {
        n_points: n,
        ..SolverConfig::default()
    }
}

fn liouville(b: f64, k: f64, c: f64, t: f64) -> f64 {
    let s = (0.5 * k * t + c).sinh();
    ((0.5 * k * k).ln() - 2.0 * s.abs().ln() - 2.0 * t - b.ln()) / b
}

#[test]
fn radial_data_reproduce_the_radial_solver() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(1.0)).unwrap();
    let c = cfg(1024);
    let radial = solve_bvp_subcritical(&p, 0.0, &c).unwrap();
    let seed = Seed::Perturbed {
        amplitude: 0.2,
        mode: 2,
        phase: 0.3,
    };
    let f = solve_nonradial(&p, Branch::ShiftGamma(1.0), &[0.0; 16], &c, seed).unwrap();
    for j in [0, 5, 11] {
        let col = f.column(j).unwrap();
        let d = col.w.iter().zip(&radial.w).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(d < 1e-8, "column {j}: {d}");
    }
}

#[test]
fn two_dimensional_solver_converges_at_second_order() {
    let (b, k, c) = (1.0, 1.0, -0.5);
    let gamma = (2.0 - k) / b;
    let p = ProblemParams::new(1.0, 1.0, b, 1.5, Some(gamma)).unwrap().emden_companion();
    let phi = vec![liouville(b, k, c, 0.0); 8];
    let mut errors = Vec::new();
    for n in [257, 513, 1025] {
        let f = solve_nonradial(&p, Branch::ShiftGamma(gamma), &phi, &cfg(n), Seed::Radial).unwrap();
        let (u, _) = f.u();
        let e = u
            .iter()
            .enumerate()
            .fold(0.0_f64, |m, (i, v)| m.max((v - liouville(b, k, c, f.t[i / 8])).abs()));
        errors.push(e);
    }
    for w in errors.windows(2) {
        assert!((w[0] / w[1]).log2() >= 1.8, "{errors:?}");
    }
}

#[test]
fn newton_seeds_reach_the_same_solution() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(1.0)).unwrap();
    let phi = sample_boundary(16, |th| 0.3 * th.cos() + 0.1 * (2.0 * th).sin());
    let c = cfg(1024);
    let a = solve_nonradial(&p, Branch::ShiftGamma(1.0), &phi, &c, Seed::Radial).unwrap();
    let seed = Seed::Perturbed {
        amplitude: 0.5,
        mode: 3,
        phase: 1.0,
    };
    let b = solve_nonradial(&p, Branch::ShiftGamma(1.0), &phi, &c, seed).unwrap();
    let d = a.w.iter().zip(&b.w).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    assert!(d < 1e-8, "{d}");
    assert!(parseval_defect(&a) < 1e-12);
    let modes = fourier_mode_norms(&a, 3, None);
    let m1 = modes.mode(1).unwrap();
    assert!(m1.beta_hat_t.unwrap() >= 0.45);
    assert_eq!(a.row(a.len() - 1), phi.as_slice());
}

#[test]
fn supercritical_constant_data_stay_symmetric() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 3.0, None).unwrap();
    let seed = Seed::Perturbed {
        amplitude: 0.3,
        mode: 1,
        phase: 0.4,
    };
    let f = solve_nonradial(&p, Branch::ShiftQOverB, &[3.2; 16], &cfg(1024), seed).unwrap();
    assert!(angular_variation(&f, None).sup < 1e-8);
}

#[test]
fn angular_resolution_must_be_a_power_of_two() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(1.0)).unwrap();
    let r = solve_nonradial(&p, Branch::ShiftGamma(1.0), &[0.0; 12], &cfg(256), Seed::Radial);
    assert!(matches!(r, Err(Error::InvalidInput(_))));
    let r = solve_nonradial(&p, Branch::ShiftGamma(1.0), &[0.0, f64::NAN, 0.0, 0.0], &cfg(256), Seed::Radial);
    assert!(matches!(r, Err(Error::InvalidInput(_))));
}
