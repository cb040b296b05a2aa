//! `solve` and `verify`: solver dispatch, fits, verification and verdicts.

use std::path::Path;

use singlab_core::annulus2d::{
    angular_variation, default_mode_window, fourier_mode_norms, parseval_defect, solve_nonradial, Field2D, ModeDecay,
    Seed,
};
use singlab_core::asymptotics::{
    default_window, fit_critical, fit_critical_samples, fit_gamma, fit_gamma_samples, fit_limit_decay,
    holder_exponent,
};
use singlab_core::radial::{solve_bvp_critical, solve_bvp_subcritical, solve_regular, solve_supercritical_singular};
use singlab_core::verify::{distributional_mass, verify_profile};
use singlab_core::{ProblemParams, RadialProfile, SolverConfig};

use crate::config::{Resolved, RunConfig};
use crate::csvio;
use crate::error::CliError;
use crate::report::{field_verdicts, radial_verdicts, ConfigEcho, FieldSummary, Fits, ModeRate, Origin, Report, Timings};

/// Highest Fourier mode reported for 2-D runs.
const MODES_REPORTED: usize = 4;

pub struct RunOutput {
    pub report: Report,
    pub profile: Option<RadialProfile>,
    pub field: Option<(Field2D, ModeDecay)>,
}

/// The problem as set up from a validated configuration.
#[derive(Debug, Clone, Copy)]
pub struct Setup {
    pub params: ProblemParams,
    pub resolved: Resolved,
    pub solver: SolverConfig,
}

impl Setup {
    pub fn new(cfg: &RunConfig) -> Result<Self, CliError> {
        cfg.validate()?;
        let (params, resolved) = cfg.resolved()?;
        Ok(Setup {
            params,
            resolved,
            solver: cfg.solver_config()?,
        })
    }

    fn echo(&self, cfg: &RunConfig, seed: Option<u64>) -> ConfigEcho {
        ConfigEcho {
            config: cfg.clone(),
            resolved: self.resolved,
            params: self.params,
            solver: self.solver,
            seed,
        }
    }
}

pub fn solve_radial(setup: &Setup, phi0: f64) -> Result<RadialProfile, CliError> {
    let (p, c) = (&setup.params, &setup.solver);
    match setup.resolved {
        Resolved::Subcritical { .. } => solve_bvp_subcritical(p, phi0, c),
        Resolved::Critical => solve_bvp_critical(p, phi0, c),
        Resolved::SupercriticalSingular => solve_supercritical_singular(p, phi0, c),
        Resolved::Regular => solve_regular(p, phi0, c),
    }
    .map_err(CliError::from_core)
}

/// Slope, limit, decay and Hölder fits appropriate to the branch.
pub fn radial_fits(resolved: Resolved, profile: &RadialProfile) -> Fits {
    let mut fits = Fits::default();
    let fit = match resolved {
        Resolved::Critical => fit_critical(profile, None),
        _ => fit_gamma(profile, None),
    };
    match fit {
        Ok(f) => fits.singularity = Some(f),
        Err(e) => fits.issues.push(format!("singularity fit: {e}")),
    }
    if let Resolved::Subcritical { gamma } = resolved {
        fits.decay_target = Some(profile.params.decay_rate(gamma));
        match fit_limit_decay(&profile.t, &profile.w, &profile.w_t, default_window(&profile.t)) {
            Ok((_, d)) => fits.decay = Some(d),
            Err(e) => fits.issues.push(format!("decay fit: {e}")),
        }
    }
    if resolved == Resolved::Regular && profile.params.q > 2.0 {
        match holder_exponent(profile) {
            Ok(h) => fits.holder = Some(h),
            Err(e) => fits.issues.push(format!("Hölder fit: {e}")),
        }
    }
    fits
}

/// Fits, verification and verdicts for a radial profile.
pub fn assess_profile(
    cfg: &RunConfig,
    setup: &Setup,
    profile: &RadialProfile,
    origin: Origin,
    seed: Option<u64>,
) -> Result<Report, CliError> {
    let fits = radial_fits(setup.resolved, profile);
    let verification = verify_profile(profile, &cfg.verification.checks(), &setup.solver).map_err(CliError::from_core)?;
    let verification = Some(verification);
    let verdict = radial_verdicts(setup.resolved, &setup.params, &fits, &verification, origin);
    Ok(Report {
        config_echo: setup.echo(cfg, seed),
        fits,
        verification,
        field: None,
        verdict,
        timings: Timings::new(&profile.stats, profile.len(), 1),
        version: crate::report::VERSION,
    })
}

/// Newton seeds beyond the default radial one.
pub fn extra_seeds(n: usize) -> Vec<Seed> {
    (1..=n)
        .map(|i| Seed::Perturbed {
            amplitude: 0.1 * i as f64,
            mode: i,
            phase: 0.7 * i as f64,
        })
        .collect()
}

fn solve_field(cfg: &RunConfig, setup: &Setup, boundary: &[f64], seed: Option<u64>) -> Result<RunOutput, CliError> {
    let branch = setup.resolved.branch();
    let field = solve_nonradial(&setup.params, branch, boundary, &setup.solver, Seed::Radial)
        .map_err(CliError::from_core)?;
    let mut spread: Option<f64> = None;
    for s in extra_seeds(cfg.verification.seeds) {
        let other = solve_nonradial(&setup.params, branch, boundary, &setup.solver, s).map_err(CliError::from_core)?;
        let d = field
            .w
            .iter()
            .zip(&other.w)
            .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        spread = Some(spread.unwrap_or(0.0).max(d));
    }
    let u_mean = field.u_mean();
    let window = default_window(&field.t);
    let mut fits = Fits::default();
    let fit = match setup.resolved {
        Resolved::Critical => fit_critical_samples(&field.t, &u_mean, setup.params.b, window),
        _ => fit_gamma_samples(&field.t, &u_mean, window),
    };
    match fit {
        Ok(f) => fits.singularity = Some(f),
        Err(e) => fits.issues.push(format!("singularity fit: {e}")),
    }
    let mass = if cfg.verification.mass {
        match distributional_mass(&field.mass_input(), cfg.verification.test_function) {
            Ok(m) => Some(m),
            Err(e) => {
                fits.issues.push(format!("mass: {e}"));
                None
            }
        }
    } else {
        None
    };
    let modes = fourier_mode_norms(&field, MODES_REPORTED, None);
    let constant_boundary = boundary.iter().all(|v| *v == boundary[0]);
    let summary = FieldSummary {
        n_theta: field.n_theta,
        mass,
        parseval_defect: parseval_defect(&field),
        seed_spread: spread,
        seeds: cfg.verification.seeds,
        angular_variation: angular_variation(&field, None).sup,
        constant_boundary,
        modes: modes.modes.iter().map(ModeRate::from).collect(),
        mode_window: default_mode_window(&field.t),
    };
    let verdict = field_verdicts(setup.resolved, &setup.params, &fits, &summary);
    let report = Report {
        config_echo: setup.echo(cfg, seed),
        fits,
        verification: None,
        field: Some(summary),
        verdict,
        timings: Timings::new(&field.stats, field.len(), field.n_theta),
        version: crate::report::VERSION,
    };
    let profile = mean_profile(&field)?;
    Ok(RunOutput {
        report,
        profile: Some(profile),
        field: Some((field, modes)),
    })
}

/// Angular mean of a field as a radial profile in the same branch variable.
fn mean_profile(field: &Field2D) -> Result<RadialProfile, CliError> {
    let m = field.n_theta;
    let mean = |v: &[f64]| -> Vec<f64> { v.chunks_exact(m).map(|r| r.iter().sum::<f64>() / m as f64).collect() };
    let w = mean(&field.w);
    let wt = mean(&field.w_t());
    let mut p = RadialProfile::from_parts(field.t.clone(), w, wt, field.branch, field.params)
        .map_err(CliError::from_core)?;
    p.stats = field.stats;
    Ok(p)
}

/// Runs `solve`.
pub fn execute(cfg: &RunConfig, seed: Option<u64>) -> Result<RunOutput, CliError> {
    let setup = Setup::new(cfg)?;
    if let Some(boundary) = cfg.boundary.samples() {
        return solve_field(cfg, &setup, &boundary, seed);
    }
    let profile = solve_radial(&setup, cfg.boundary.mean())?;
    let report = assess_profile(cfg, &setup, &profile, Origin::Solved, seed)?;
    Ok(RunOutput {
        report,
        profile: Some(profile),
        field: None,
    })
}

/// Writes the files of a finished run into `out`.
pub fn write_outputs(cfg: &RunConfig, out: &Path, run: &RunOutput) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    if let Some(p) = &run.profile {
        csvio::write_profile(&out.join(&cfg.output.profile), p)?;
    }
    if let Some((f, modes)) = &run.field {
        csvio::write_field(&out.join(&cfg.output.field), f)?;
        csvio::write_modes(&out.join(&cfg.output.modes), modes)?;
    }
    csvio::write_json(&out.join(&cfg.output.report), &run.report)
}

/// Runs `verify` on a stored profile.
pub fn verify_file(cfg: &RunConfig, profile: &Path, seed: Option<u64>) -> Result<Report, CliError> {
    let setup = Setup::new(cfg)?;
    let p = csvio::read_profile(profile, setup.params, setup.resolved.branch())?;
    assess_profile(cfg, &setup, &p, Origin::Loaded, seed)
}
