//! The JSON run configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};
use singlab_core::model::Regime;
use singlab_core::radial::InnerClosure;
use singlab_core::verify::{TestFunction, VerifyOptions};
use singlab_core::{Branch, ProblemParams, SolverConfig};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsConfig,
    #[serde(default)]
    pub branch: BranchChoice,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub verification: VerificationSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepGrid>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub m: f64,
    pub a: f64,
    pub b: f64,
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchChoice {
    /// Chosen from the regime and `gamma`.
    #[default]
    Auto,
    Singular,
    Critical,
    Regular,
}

/// Solver settings; omitted keys take the library defaults, except that
/// critical runs default to a deeper grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_points: Option<usize>,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub damping: f64,
    pub continuation_steps: usize,
    pub ivp_tol: f64,
    pub inner_closure: InnerClosure,
}

impl Default for SolverSection {
    fn default() -> Self {
        let c = SolverConfig::default();
        SolverSection {
            t0: None,
            n_points: None,
            newton_tol: c.newton_tol,
            newton_max_iter: c.newton_max_iter,
            damping: c.damping,
            continuation_steps: c.continuation_steps,
            ivp_tol: c.ivp_tol,
            inner_closure: c.inner_closure,
        }
    }
}

/// `(T0, n)` for critical runs without explicit grid settings.
pub const CRITICAL_GRID: (f64, usize) = (-36.0, 8192);

impl SolverSection {
    pub fn resolve(&self, resolved: Resolved) -> SolverConfig {
        let d = SolverConfig::default();
        let (t0, n) = match resolved {
            Resolved::Critical => CRITICAL_GRID,
            _ => (d.t0, d.n_points),
        };
        SolverConfig {
            t0: self.t0.unwrap_or(t0),
            n_points: self.n_points.unwrap_or(n),
            newton_tol: self.newton_tol,
            newton_max_iter: self.newton_max_iter,
            damping: self.damping,
            continuation_steps: self.continuation_steps,
            ivp_tol: self.ivp_tol,
            inner_closure: self.inner_closure,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Boundary {
    /// Radial data `u = c` on the unit circle.
    Constant(f64),
    /// `φ(θ_j)` at `θ_j = 2πj/n`.
    Samples(Vec<f64>),
    /// `mean + amplitude·cos(mode·θ)` sampled at `n_theta` angles.
    Harmonic {
        mean: f64,
        amplitude: f64,
        mode: usize,
        n_theta: usize,
    },
}

impl Default for Boundary {
    fn default() -> Self {
        Boundary::Constant(0.0)
    }
}

impl Boundary {
    /// `None` for radial data.
    pub fn samples(&self) -> Option<Vec<f64>> {
        match self {
            Boundary::Constant(_) => None,
            Boundary::Samples(v) => Some(v.clone()),
            Boundary::Harmonic {
                mean,
                amplitude,
                mode,
                n_theta,
            } => Some(singlab_core::annulus2d::sample_boundary(*n_theta, |th| {
                mean + amplitude * (*mode as f64 * th).cos()
            })),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Boundary::Constant(c) => *c,
            _ => {
                let s = self.samples().unwrap_or_default();
                s.iter().sum::<f64>() / s.len().max(1) as f64
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerificationSection {
    pub mass: bool,
    pub integrability: bool,
    pub sandwich: bool,
    pub apriori: bool,
    pub census: bool,
    pub test_function: TestFunction,
    /// Extra perturbed Newton seeds for 2-D runs.
    pub seeds: usize,
}

impl Default for VerificationSection {
    fn default() -> Self {
        let o = VerifyOptions::default();
        VerificationSection {
            mass: o.mass,
            integrability: o.integrability,
            sandwich: o.sandwich,
            apriori: o.apriori,
            census: o.census,
            test_function: o.test_function,
            seeds: 3,
        }
    }
}

impl VerificationSection {
    pub fn checks(&self) -> VerifyOptions {
        VerifyOptions {
            mass: self.mass,
            integrability: self.integrability,
            sandwich: self.sandwich,
            apriori: self.apriori,
            census: self.census,
            test_function: self.test_function,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub profile: String,
    pub report: String,
    pub field: String,
    pub modes: String,
    pub sweep: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            profile: "profile.csv".into(),
            report: "report.json".into(),
            field: "field.csv".into(),
            modes: "modes.csv".into(),
            sweep: "sweep.csv".into(),
        }
    }
}

/// Parameter lists for `sweep`; missing lists keep the base value.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub m: Option<Vec<f64>>,
    pub a: Option<Vec<f64>>,
    pub b: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
}

/// The solver a configuration resolves to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolved {
    Subcritical { gamma: f64 },
    Critical,
    SupercriticalSingular,
    Regular,
}

impl Resolved {
    pub fn branch(&self) -> Branch {
        match *self {
            Resolved::Subcritical { gamma } => Branch::ShiftGamma(gamma),
            Resolved::Critical => Branch::LambdaCritical,
            Resolved::SupercriticalSingular => Branch::ShiftQOverB,
            Resolved::Regular => Branch::NoShift,
        }
    }
}

const GAMMA_TOL: f64 = 1e-12;

/// Builds and checks the problem parameters and the branch.
pub fn resolve(params: &ParamsConfig, choice: BranchChoice) -> Result<(ProblemParams, Resolved), CliError> {
    let base = ProblemParams::new(params.m, params.a, params.b, params.q, None).map_err(CliError::validation)?;
    let two_b = base.two_over_b();
    let resolved = match (base.regime().map_err(CliError::validation)?, choice) {
        (_, BranchChoice::Regular) => Resolved::Regular,
        (Regime::Subcritical, BranchChoice::Critical) => {
            if let Some(g) = params.gamma {
                if (g - two_b).abs() > GAMMA_TOL * two_b {
                    return Err(CliError::Validation(format!(
                        "critical branch needs gamma = 2/b = {two_b}, got {g}"
                    )));
                }
            }
            Resolved::Critical
        }
        (Regime::Subcritical, BranchChoice::Auto | BranchChoice::Singular) => {
            let g = params.gamma.ok_or_else(|| {
                CliError::Validation("subcritical runs need params.gamma in [0, 2/b]".into())
            })?;
            if !(g >= 0.0 && g <= two_b * (1.0 + GAMMA_TOL)) {
                return Err(CliError::Validation(format!(
                    "gamma = {g} outside [0, 2/b] = [0, {two_b}]"
                )));
            }
            if (g - two_b).abs() <= GAMMA_TOL * two_b {
                Resolved::Critical
            } else if g == 0.0 {
                if choice == BranchChoice::Singular {
                    return Err(CliError::Validation("singular branch needs gamma > 0".into()));
                }
                Resolved::Regular
            } else {
                Resolved::Subcritical { gamma: g }
            }
        }
        (Regime::Supercritical, BranchChoice::Critical) => {
            return Err(CliError::Validation("the critical branch needs 1 < q < 2".into()))
        }
        (Regime::Supercritical, BranchChoice::Auto | BranchChoice::Singular) => {
            if let Some(g) = params.gamma {
                let qb = base.q_over_b();
                if (g - qb).abs() > GAMMA_TOL * qb {
                    return Err(CliError::Validation(format!(
                        "for q > 2 the singular slope is q/b = {qb}; gamma = {g} is not admissible"
                    )));
                }
            }
            Resolved::SupercriticalSingular
        }
    };
    let p = match resolved {
        Resolved::Subcritical { gamma } => base.with_gamma(Some(gamma)),
        Resolved::Critical => base.with_gamma(Some(two_b)),
        _ => Ok(base),
    }
    .map_err(CliError::validation)?;
    Ok((p, resolved))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolved(&self) -> Result<(ProblemParams, Resolved), CliError> {
        resolve(&self.params, self.branch)
    }

    pub fn solver_config(&self) -> Result<SolverConfig, CliError> {
        Ok(self.solver.resolve(self.resolved()?.1))
    }

    /// Checks every precondition that does not need a solve. With a sweep
    /// section the parameters are checked per grid row instead.
    pub fn validate(&self) -> Result<(), CliError> {
        let solver = match &self.sweep {
            None => self.solver_config()?,
            Some(_) => self.solver.resolve(Resolved::Regular),
        };
        solver.validate().map_err(CliError::validation)?;
        self.verification.test_function.validate().map_err(CliError::validation)?;
        if let Some(s) = self.boundary.samples() {
            let n = s.len();
            if n < 4 || !n.is_power_of_two() {
                return Err(CliError::Validation(format!(
                    "boundary needs a power-of-two number (>= 4) of samples, got {n}"
                )));
            }
            if s.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Validation("boundary samples must be finite".into()));
            }
        } else if !self.boundary.mean().is_finite() {
            return Err(CliError::Validation("boundary value must be finite".into()));
        }
        if let Some(g) = &self.sweep {
            for (name, list) in [("m", &g.m), ("a", &g.a), ("b", &g.b), ("q", &g.q), ("gamma", &g.gamma)] {
                if let Some(l) = list {
                    if l.is_empty() {
                        return Err(CliError::Validation(format!("sweep list `{name}` is empty")));
                    }
                }
            }
        }
        Ok(())
    }
}
