//! The JSON report and the theorem verdicts.

use serde::Serialize;
use singlab_core::annulus2d::ModeSeries;
use singlab_core::asymptotics::{DecayFit, HolderFit, SingularityFit};
use singlab_core::radial::SolveStats;
use singlab_core::verify::{Integrability, MassEstimate, VerificationReport};
use singlab_core::{ProblemParams, SolverConfig};

use crate::config::{Resolved, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance on barrier and bound margins.
pub const MARGIN_TOL: f64 = 1e-8;

/// Boundary mode norms below this carry no decay information.
const MODE_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config_echo: ConfigEcho,
    pub fits: Fits,
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSummary>,
    pub verdict: Vec<Verdict>,
    pub timings: Timings,
    pub version: &'static str,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.verdict.iter().any(|v| v.outcome == Outcome::Fail)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub config: RunConfig,
    pub resolved: Resolved,
    pub params: ProblemParams,
    pub solver: SolverConfig,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Fits {
    pub singularity: Option<SingularityFit>,
    /// Decay of `|w − ℓ̂|` and its predicted rate.
    pub decay: Option<DecayFit>,
    pub decay_target: Option<f64>,
    pub holder: Option<HolderFit>,
    pub issues: Vec<String>,
}

/// Diagnostics of a 2-D run.
#[derive(Debug, Clone, Serialize)]
pub struct FieldSummary {
    pub n_theta: usize,
    pub mass: Option<MassEstimate>,
    pub parseval_defect: f64,
    /// `max |w − w_seeded|` over the extra Newton seeds.
    pub seed_spread: Option<f64>,
    pub seeds: usize,
    pub angular_variation: f64,
    pub constant_boundary: bool,
    pub modes: Vec<ModeRate>,
    pub mode_window: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeRate {
    pub k: usize,
    pub beta_hat: Option<f64>,
    pub beta_hat_t: Option<f64>,
    pub initial_norm: f64,
}

impl From<&ModeSeries> for ModeRate {
    fn from(s: &ModeSeries) -> Self {
        ModeRate {
            k: s.k,
            beta_hat: s.beta_hat,
            beta_hat_t: s.beta_hat_t,
            initial_norm: *s.norms.last().unwrap_or(&0.0),
        }
    }
}

/// Deterministic work counters; wall-clock time is not recorded.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Timings {
    pub newton_iterations: usize,
    pub linear_solves: usize,
    pub continuation_steps: usize,
    pub rk_steps: usize,
    pub residual_max: f64,
    pub grid_points: usize,
    pub n_theta: usize,
}

impl Timings {
    pub fn new(s: &SolveStats, grid_points: usize, n_theta: usize) -> Self {
        Timings {
            newton_iterations: s.newton_iterations,
            linear_solves: s.linear_solves,
            continuation_steps: s.continuation_steps,
            rk_steps: s.rk_steps,
            residual_max: s.residual_max,
            grid_points,
            n_theta,
        }
    }
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    T1_Classification,
    T2_ExistenceUniqueness,
    T3_Dichotomy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: Option<f64>,
    pub target: f64,
    pub tolerance: f64,
    /// How `value` is compared with `target`.
    pub rule: Rule,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `|value − target| ≤ tolerance`.
    Absolute,
    /// `|value − target| ≤ tolerance·|target|`.
    Relative,
    /// `value ≥ target − tolerance`.
    AtLeast,
    /// `value ≤ target + tolerance`.
    AtMost,
    /// `target ≤ value ≤ tolerance`.
    Between,
}

impl Check {
    pub fn new(name: &'static str, value: Option<f64>, rule: Rule, target: f64, tolerance: f64) -> Self {
        let pass = value.map(|v| {
            v.is_finite()
                && match rule {
                    Rule::Absolute => (v - target).abs() <= tolerance,
                    Rule::Relative => (v - target).abs() <= tolerance * target.abs(),
                    Rule::AtLeast => v >= target - tolerance,
                    Rule::AtMost => v <= target + tolerance,
                    Rule::Between => v >= target && v <= tolerance,
                }
        });
        Check {
            name,
            value,
            target,
            tolerance,
            rule,
            pass,
        }
    }

    /// A yes/no condition, recorded as `1` or `0`.
    pub fn flag(name: &'static str, ok: Option<bool>) -> Self {
        Check::new(name, ok.map(|b| if b { 1.0 } else { 0.0 }), Rule::Absolute, 1.0, 0.0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub fit: Option<SingularityFit>,
    pub verification: Option<VerificationReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub theorem: Theorem,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    pub evidence: Evidence,
}

impl Verdict {
    fn new(theorem: Theorem, checks: Vec<Check>, evidence: &Evidence) -> Self {
        let outcome = if checks.iter().any(|c| c.pass == Some(false)) {
            Outcome::Fail
        } else if checks.iter().any(|c| c.pass.is_none()) {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        };
        Verdict {
            theorem,
            outcome,
            checks,
            evidence: evidence.clone(),
        }
    }
}

/// Whether a verdict may rely on the solver having converged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Solved,
    Loaded,
}

fn integrable(v: &Option<VerificationReport>) -> Option<bool> {
    let i = v.as_ref()?.integrability.as_ref()?;
    Some(i.exp.verdict == Integrability::Integrable && i.grad.verdict == Integrability::Integrable)
}

fn sandwich(v: &Option<VerificationReport>) -> (Option<f64>, Option<f64>) {
    match v.as_ref().and_then(|v| v.sandwich.as_ref()) {
        Some(s) => (Some(s.margins.lower), Some(s.margins.upper)),
        None => (None, None),
    }
}

/// Verdicts for a radial profile.
pub fn radial_verdicts(
    resolved: Resolved,
    params: &ProblemParams,
    fits: &Fits,
    verification: &Option<VerificationReport>,
    origin: Origin,
) -> Vec<Verdict> {
    let fit = fits.singularity;
    let gamma_hat = fit.map(|f| f.gamma_hat);
    let mass = verification.as_ref().and_then(|v| v.mass.map(|m| m.mass));
    let (lower, upper) = sandwich(verification);
    let apriori = verification.as_ref().and_then(|v| v.apriori_margin);
    let evidence = Evidence {
        fit,
        verification: verification.clone(),
    };
    let converged = || (origin == Origin::Solved).then(|| Check::flag("converged", Some(true)));
    match resolved {
        Resolved::Subcritical { gamma } => {
            let beta = params.decay_rate(gamma);
            let t1 = vec![
                Check::new("gamma_hat", gamma_hat, Rule::Absolute, gamma, 1e-2),
                Check::new("mass", mass, Rule::Relative, gamma, 1e-2),
                Check::flag("integrable", integrable(verification)),
            ];
            let mut t2: Vec<Check> = converged().into_iter().collect();
            t2.push(Check::new(
                "decay_rate",
                fits.decay.map(|d| d.beta_hat),
                Rule::Between,
                0.9 * beta,
                1.3 * beta,
            ));
            t2.push(Check::new("sandwich_lower", lower, Rule::AtLeast, 0.0, MARGIN_TOL));
            t2.push(Check::new("sandwich_upper", upper, Rule::AtLeast, 0.0, MARGIN_TOL));
            vec![
                Verdict::new(Theorem::T1_Classification, t1, &evidence),
                Verdict::new(Theorem::T2_ExistenceUniqueness, t2, &evidence),
            ]
        }
        Resolved::Critical => {
            let g = params.two_over_b();
            let checks = vec![
                Check::new("gamma_hat", gamma_hat, Rule::Absolute, g, 1e-2),
                Check::new("ell_hat", fit.map(|f| f.ell_hat), Rule::Absolute, params.critical_constant(), 5e-2),
                Check::new("mass", mass, Rule::Relative, g, 5e-2),
                Check::new("sandwich_lower", lower, Rule::AtLeast, 0.0, MARGIN_TOL),
                Check::new("sandwich_upper", upper, Rule::AtLeast, 0.0, MARGIN_TOL),
            ];
            vec![Verdict::new(Theorem::T1_Classification, checks, &evidence)]
        }
        Resolved::Regular if params.q < 2.0 => {
            let checks = vec![
                Check::new("gamma_hat", gamma_hat, Rule::Absolute, 0.0, 1e-2),
                Check::new("mass", mass, Rule::Absolute, 0.0, 1e-2),
            ];
            vec![Verdict::new(Theorem::T1_Classification, checks, &evidence)]
        }
        Resolved::Regular => {
            let holder = fits.holder;
            let checks = vec![
                Check::new("gamma_hat", gamma_hat, Rule::Absolute, 0.0, 1e-2),
                Check::new(
                    "holder_exponent",
                    holder.map(|h| h.exponent),
                    Rule::AtLeast,
                    0.9 * (params.q - 2.0) / (params.q - 1.0),
                    0.0,
                ),
                Check::new("apriori_margin", apriori, Rule::AtLeast, 0.0, MARGIN_TOL),
                Check::new("sandwich_upper", upper, Rule::AtLeast, 0.0, MARGIN_TOL),
            ];
            vec![Verdict::new(Theorem::T3_Dichotomy, checks, &evidence)]
        }
        Resolved::SupercriticalSingular => {
            let census = verification.as_ref().and_then(|v| v.census);
            let mut checks: Vec<Check> = converged().into_iter().collect();
            checks.extend([
                Check::new("gamma_hat", gamma_hat, Rule::Absolute, params.q_over_b(), 1e-2),
                Check::new(
                    "gradient_census",
                    census.and_then(|c| c.inf_lower),
                    Rule::AtLeast,
                    0.9 * census.and_then(|c| c.lower_reference).unwrap_or(f64::NAN),
                    0.0,
                ),
                Check::new("sandwich_lower", lower, Rule::AtLeast, 0.0, MARGIN_TOL),
                Check::new("sandwich_upper", upper, Rule::AtLeast, 0.0, MARGIN_TOL),
                Check::new("apriori_margin", apriori, Rule::AtLeast, 0.0, MARGIN_TOL),
            ]);
            vec![Verdict::new(Theorem::T3_Dichotomy, checks, &evidence)]
        }
    }
}

/// Verdict for a 2-D run from the angular-mean fit and the field summary.
pub fn field_verdicts(resolved: Resolved, params: &ProblemParams, fits: &Fits, field: &FieldSummary) -> Vec<Verdict> {
    let evidence = Evidence {
        fit: fits.singularity,
        verification: None,
    };
    let gamma_hat = fits.singularity.map(|f| f.gamma_hat);
    let mut checks = vec![Check::flag("converged", Some(true))];
    let spread = Check::new("seed_spread", field.seed_spread, Rule::AtMost, 0.0, MARGIN_TOL);
    let mass = field.mass.map(|m| m.mass);
    match resolved {
        Resolved::SupercriticalSingular => {
            checks.push(Check::new("mean_slope", gamma_hat, Rule::Absolute, params.q_over_b(), 1e-2));
            if field.constant_boundary {
                checks.push(Check::new(
                    "angular_variation",
                    Some(field.angular_variation),
                    Rule::AtMost,
                    0.0,
                    MARGIN_TOL,
                ));
            }
            checks.push(spread);
            vec![Verdict::new(Theorem::T3_Dichotomy, checks, &evidence)]
        }
        _ => {
            let gamma = resolved.branch().slope(params);
            let gamma = if resolved == Resolved::Regular { 0.0 } else { gamma };
            checks.push(Check::new("mean_slope", gamma_hat, Rule::Absolute, gamma, 1e-2));
            if gamma > 0.0 {
                checks.push(Check::new("mass", mass, Rule::Relative, gamma, 1e-2));
            } else {
                checks.push(Check::new("mass", mass, Rule::Absolute, 0.0, 1e-2));
            }
            let mode1 = field.modes.iter().find(|m| m.k == 1 && m.initial_norm > MODE_FLOOR);
            if let (Some(m), true) = (mode1, params.q < 2.0) {
                let beta = params.decay_rate(gamma);
                let rate = m.beta_hat_t.or(m.beta_hat);
                checks.push(Check::new("mode1_rate", rate, Rule::AtLeast, 0.9 * beta, 0.0));
            }
            checks.push(spread);
            vec![Verdict::new(Theorem::T2_ExistenceUniqueness, checks, &evidence)]
        }
    }
}
