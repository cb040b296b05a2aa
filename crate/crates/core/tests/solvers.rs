use singlab_core::asymptotics::holder_exponent;
use singlab_core::model::{eikonal_constant, emden_critical_exact, Branch, ProblemParams};
use singlab_core::radial::{
    integrate_ivp, lyapunov_w, shoot_subcritical, solve_bvp_critical, solve_bvp_subcritical, solve_emden,
    solve_regular, solve_supercritical_singular, supercritical_boundary_floor, SolverConfig,
};
use singlab_core::Error;

fn cfg(n: usize) -> SolverConfig {
    SolverConfig {
        n_points: n,
        ..SolverConfig::default()
    }
}

/// Radial solutions of `Δu = a·e^{bu}` in the plane (Liouville):
/// with `z = bu + ln(ab) + 2t`, `z_tt = e^z`, so
/// `e^z = k²/(2·sinh²(kt/2 + c))`. For `c < 0` and `0 < k < 2` this is
/// singular at the origin with strength `γ = (2 − k)/b`.
fn liouville(a: f64, b: f64, k: f64, c: f64, t: f64) -> f64 {
    let s = (0.5 * k * t + c).sinh();
    ((0.5 * k * k).ln() - 2.0 * s.abs().ln() - 2.0 * t - (a * b).ln()) / b
}

fn max_error(p: &singlab_core::RadialProfile, exact: impl Fn(f64) -> f64) -> f64 {
    p.t.iter().zip(p.u()).fold(0.0_f64, |e, (t, u)| e.max((u - exact(*t)).abs()))
}

#[test]
fn liouville_profiles_converge_at_second_order() {
    let (a, b, k, c) = (1.0, 1.0, 1.0, -0.5);
    let gamma = (2.0 - k) / b;
    let params = ProblemParams::new(1.0, a, b, 1.5, Some(gamma)).unwrap().emden_companion();
    let phi0 = liouville(a, b, k, c, 0.0);
    let mut errors = Vec::new();
    for n in [513, 1025, 2049, 4097] {
        let p = solve_emden(&params, gamma, phi0, &cfg(n)).unwrap();
        errors.push(max_error(&p, |t| liouville(a, b, k, c, t)));
    }
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 1.8, "errors {errors:?}");
    }
    assert!(errors[3] < 1e-5, "{errors:?}");
}

#[test]
fn critical_emden_matches_the_exact_profile() {
    let params = ProblemParams::new(1.0, 1.0, 2.0, 1.5, Some(1.0)).unwrap().emden_companion();
    let exact = |t: f64| emden_critical_exact(&params, t.exp()).unwrap();
    let p = solve_emden(&params, 1.0, 0.0, &cfg(4096)).unwrap();
    assert!(max_error(&p, exact) < 1e-7);
    let q = solve_bvp_critical(&params, 0.0, &cfg(4096)).unwrap();
    assert!(max_error(&q, exact) < 1e-7);
}

#[test]
fn newton_residual_meets_the_tolerance() {
    let c = cfg(4096);
    let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(1.0)).unwrap();
    let prof = solve_bvp_subcritical(&p, 0.0, &c).unwrap();
    assert!(prof.stats.residual_max <= c.newton_tol);
    assert!(prof.stats.newton_iterations > 0);
}

#[test]
fn shooting_agrees_with_collocation() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(1.0)).unwrap();
    let c = cfg(4096);
    let bvp = solve_bvp_subcritical(&p, 0.0, &c).unwrap();
    let (ivp, ell) = shoot_subcritical(&p, 0.0, &c).unwrap();
    let d = bvp.w.iter().zip(&ivp.w).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    assert!(d < 1e-6, "max difference {d}");
    assert!((ell - bvp.w[0]).abs() < 1e-6);
}

#[test]
fn eikonal_constant_matches_its_closed_form() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 3.0, None).unwrap();
    assert!((eikonal_constant(&p) - 3.0 * 3f64.ln()).abs() < 1e-14);
}

#[test]
fn ivp_reproduces_the_collocated_profile() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(0.5)).unwrap();
    let c = cfg(4096);
    let bvp = solve_bvp_subcritical(&p, 0.0, &c).unwrap();
    let ivp = integrate_ivp(&p, Branch::ShiftGamma(0.5), c.t0, bvp.w[0], bvp.w_t[0], 0.0, &c).unwrap();
    let d = bvp.w.iter().zip(&ivp.w).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    assert!(d < 1e-6, "max difference {d}");
}

#[test]
fn supercritical_floor_and_attainable_values() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 3.0, None).unwrap();
    let floor = supercritical_boundary_floor(&p).unwrap();
    assert!((floor - 3.09953).abs() < 1e-4, "floor {floor}");
    let above = solve_supercritical_singular(&p, floor + 0.02, &cfg(4096)).unwrap();
    assert!((above.u()[above.len() - 1] - (floor + 0.02)).abs() < 1e-10);
    match solve_supercritical_singular(&p, 0.0, &cfg(4096)) {
        Err(Error::UnattainableBoundary { phi0, floor: f }) => {
            assert_eq!(phi0, 0.0);
            assert!((f - floor).abs() < 1e-12);
        }
        other => panic!("expected UnattainableBoundary, got {other:?}"),
    }
}

#[test]
fn supercritical_singular_branch_has_slope_q_over_b() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 3.0, None).unwrap();
    let prof = solve_supercritical_singular(&p, 3.2, &cfg(4096)).unwrap();
    let f = singlab_core::asymptotics::fit_gamma(&prof, None).unwrap();
    assert!((f.gamma_hat - 3.0).abs() < 1e-2);
    assert!(lyapunov_w(&prof).inner_one_signed);
}

#[test]
fn regular_supercritical_profile_is_holder() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 3.0, None).unwrap();
    let prof = solve_regular(&p, 0.0, &cfg(4096)).unwrap();
    let h = holder_exponent(&prof).unwrap();
    assert!(h.exponent >= 0.45, "{h:?}");
    assert!((h.radial_bound - 0.5).abs() < 1e-15);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert_eq!(
        ProblemParams::new(1.0, 1.0, 1.0, 2.0, None).unwrap_err(),
        Error::CriticalExponentUnsupported
    );
    let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, None).unwrap();
    assert!(solve_bvp_subcritical(&p, 0.0, &cfg(4096)).is_err());
    let bad = SolverConfig {
        n_points: 16,
        ..SolverConfig::default()
    };
    let g = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(1.0)).unwrap();
    assert!(matches!(solve_bvp_subcritical(&g, 0.0, &bad), Err(Error::InvalidParameter(_))));
    let q3 = ProblemParams::new(1.0, 1.0, 1.0, 3.0, None).unwrap();
    assert!(matches!(
        solve_bvp_subcritical(&q3, 0.0, &cfg(4096)),
        Err(Error::PreconditionViolation(_))
    ));
    assert!(solve_emden(&g, 2.5, 0.0, &cfg(4096)).is_err());
}
