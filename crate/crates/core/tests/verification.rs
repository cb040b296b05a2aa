use singlab_core::model::ProblemParams;
use singlab_core::radial::{solve_bvp_subcritical, solve_regular, solve_supercritical_singular, SolverConfig};
use singlab_core::verify::{
    integrability_report, oracle_suite, profile_mass, quadrature_identity_check, verify_profile, Integrability,
    OracleOptions, SandwichKind, TestFunction, VerifyOptions,
};

fn deep() -> SolverConfig {
    SolverConfig {
        t0: -36.0,
        n_points: 8192,
        ..SolverConfig::default()
    }
}

fn cfg(n: usize) -> SolverConfig {
    SolverConfig {
        n_points: n,
        ..SolverConfig::default()
    }
}

#[test]
fn mass_equals_the_singularity_strength() {
    let c = deep();
    for gamma in [0.5, 1.0, 1.5] {
        let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(gamma)).unwrap();
        let prof = solve_bvp_subcritical(&p, 0.0, &c).unwrap();
        let cubic = profile_mass(&prof, TestFunction::Cubic).unwrap().mass;
        let plateau = profile_mass(&prof, TestFunction::Plateau(0.5)).unwrap().mass;
        assert!((cubic - gamma).abs() < 1e-2 * gamma, "gamma {gamma}: {cubic}");
        assert!((plateau - cubic).abs() < 1e-3, "gamma {gamma}: {cubic} vs {plateau}");
    }
}

#[test]
fn regular_profile_carries_no_mass() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, None).unwrap();
    let prof = solve_regular(&p, 0.0, &cfg(4096)).unwrap();
    let m = profile_mass(&prof, TestFunction::Quartic).unwrap();
    assert!(m.mass.abs() < 1e-5, "{m:?}");
}

#[test]
fn integrability_separates_the_branches() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(1.0)).unwrap();
    let sub = solve_bvp_subcritical(&p, 0.0, &cfg(4096)).unwrap();
    let r = integrability_report(&sub).unwrap();
    assert_eq!(r.exp.verdict, Integrability::Integrable);
    assert_eq!(r.grad.verdict, Integrability::Integrable);

    let q3 = ProblemParams::new(1.0, 1.0, 1.0, 3.0, None).unwrap();
    let sing = solve_supercritical_singular(&q3, 3.2, &cfg(4096)).unwrap();
    let r = integrability_report(&sing).unwrap();
    assert_eq!(r.exp.verdict, Integrability::Divergent);
    assert_eq!(r.grad.verdict, Integrability::Divergent);
}

#[test]
fn oracle_suite_passes_and_detects_a_sign_error() {
    let ok = oracle_suite(OracleOptions::default()).unwrap();
    assert!(ok.pass(), "{:?}", ok.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    let bad = oracle_suite(OracleOptions { flip_reaction: true }).unwrap();
    assert!(!bad.pass());
}

#[test]
fn two_pi_identity() {
    let id = quadrature_identity_check(-36.0);
    assert!((id.value - 2.0 * std::f64::consts::PI).abs() < 1e-10);
    assert!((id.truncated + id.exact_tail - id.value).abs() < 1e-10);
}

#[test]
fn subcritical_profile_lies_between_its_barriers() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(1.0)).unwrap();
    let c = cfg(4096);
    let prof = solve_bvp_subcritical(&p, 0.0, &c).unwrap();
    let r = verify_profile(&prof, &VerifyOptions::default(), &c).unwrap();
    let s = r.sandwich.unwrap();
    assert_eq!(s.kind, SandwichKind::Emden);
    assert!(s.margins.lower >= -1e-8 && s.margins.upper >= -1e-8, "{s:?}");
    assert!(r.apriori_margin.unwrap() >= -1e-8);
}

#[test]
fn singular_supercritical_profile_respects_the_barriers() {
    let p = ProblemParams::new(1.0, 1.0, 1.0, 3.0, None).unwrap();
    let c = cfg(4096);
    let prof = solve_supercritical_singular(&p, 3.2, &c).unwrap();
    let r = verify_profile(&prof, &VerifyOptions::default(), &c).unwrap();
    let s = r.sandwich.unwrap();
    assert_eq!(s.kind, SandwichKind::Supercritical);
    assert!(s.margins.lower >= -1e-8 && s.margins.upper >= -1e-8, "{s:?}");
    assert!(r.apriori_margin.unwrap() >= -1e-8);
    let census = r.census.unwrap();
    assert!(census.inf_lower.unwrap() >= 0.9 * census.lower_reference.unwrap());
}
