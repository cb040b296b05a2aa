//! Parameters, regimes, log-variable transforms, closed-form solutions and
//! the special functions they need.

mod bessel;
mod closed;
mod params;
mod residual;
mod transform;
mod truncated;

pub use bessel::{bessel_phi1, j0, j01, j1, EigenData};
pub use closed::{
    apriori_bound, apriori_constants, apriori_mu, eikonal_root_radius, eikonal_wc, eikonal_wc_jet,
    eikonal_winf, eikonal_winf_jet, emden_critical_exact, emden_critical_exact_jet, eta_profile,
    eta_profile_jet, kappa_bounds, psi_kappa, psi_kappa_jet, subsol_h_a, subsol_h_a_jet,
    supersol_apriori, supersol_apriori_jet, AprioriConstants, ClosedForm, ClosedFormKind, Jet,
    Terms, APRIORI_MARGIN,
};
pub use params::{classify_regime, ProblemParams, Regime};
pub use residual::{residual_point, residual_strong, FieldSample, ResidualField};
pub use transform::{inverse_log, transform_log, Branch, RSamples, TSamples};
pub use truncated::{lower_branch, truncated_power, truncated_power_jet, upper_branch, PowerJet};

/// The eikonal constant `c∞ = (q/b)·ln K`: `w_∞` in the `q/b`-shifted variable.
pub fn eikonal_constant(params: &ProblemParams) -> f64 {
    params.q_over_b() * crate::math::ln(eikonal_root_radius(params))
}

/// The explicit profile as printed in the introduction,
/// `(q/b)·(m/a)^{1/q}·ln(q/(b·r))`. It solves the eikonal equation only when
/// `m = a`; [`eikonal_winf`] is the form that is exact for all parameters.
pub fn intro_profile(params: &ProblemParams, r: f64) -> f64 {
    let q = params.q;
    params.q_over_b()
        * crate::math::pow(params.m / params.a, 1.0 / q)
        * crate::math::ln(q / (params.b * r))
}
