//! `sweep`: independent radial runs over a cartesian parameter grid.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ParamsConfig, RunConfig};
use crate::csvio;
use crate::error::CliError;
use crate::report::{Origin, Outcome, Report};
use crate::run::{assess_profile, solve_radial, Setup};

/// One line of the sweep table.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub m: f64,
    pub a: f64,
    pub b: f64,
    pub q: f64,
    pub gamma: Option<f64>,
    pub branch: String,
    /// `ok`, or the exit-code class of the failure.
    pub status: String,
    pub gamma_hat: Option<f64>,
    pub ell_hat: Option<f64>,
    pub beta_hat: Option<f64>,
    pub mass: Option<f64>,
    pub sandwich_lower: Option<f64>,
    pub sandwich_upper: Option<f64>,
    pub apriori_margin: Option<f64>,
    pub verdict: String,
    pub message: String,
}

/// Grid points in row order: `m` outermost, then `a`, `b`, `q`, `gamma`.
pub fn grid(cfg: &RunConfig) -> Result<Vec<ParamsConfig>, CliError> {
    let g = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Validation("sweep needs a `sweep` section in the configuration".into()))?;
    let base = cfg.params;
    let list = |l: &Option<Vec<f64>>, v: f64| l.clone().unwrap_or_else(|| vec![v]);
    let gammas: Vec<Option<f64>> = match &g.gamma {
        Some(l) => l.iter().map(|v| Some(*v)).collect(),
        None => vec![base.gamma],
    };
    let mut out = Vec::new();
    for m in list(&g.m, base.m) {
        for a in list(&g.a, base.a) {
            for b in list(&g.b, base.b) {
                for q in list(&g.q, base.q) {
                    for gamma in &gammas {
                        out.push(ParamsConfig {
                            m,
                            a,
                            b,
                            q,
                            gamma: *gamma,
                        });
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Validation("the sweep grid is empty".into()));
    }
    Ok(out)
}

fn row_config(cfg: &RunConfig, params: ParamsConfig) -> RunConfig {
    RunConfig {
        params,
        sweep: None,
        ..cfg.clone()
    }
}

fn run_row(cfg: &RunConfig, index: usize, out: &Path) -> SweepRow {
    let params = cfg.params;
    let mut row = SweepRow {
        index,
        m: params.m,
        a: params.a,
        b: params.b,
        q: params.q,
        gamma: params.gamma,
        branch: String::new(),
        status: "ok".into(),
        gamma_hat: None,
        ell_hat: None,
        beta_hat: None,
        mass: None,
        sandwich_lower: None,
        sandwich_upper: None,
        apriori_margin: None,
        verdict: String::new(),
        message: String::new(),
    };
    let result = (|| {
        let setup = Setup::new(cfg)?;
        row.branch = serde_json::to_value(setup.resolved)
            .ok()
            .and_then(|v| match v {
                serde_json::Value::String(s) => Some(s),
                serde_json::Value::Object(o) => o.keys().next().cloned(),
                _ => None,
            })
            .unwrap_or_default();
        let profile = solve_radial(&setup, cfg.boundary.mean())?;
        let report = assess_profile(cfg, &setup, &profile, Origin::Solved, None)?;
        let dir = out.join(format!("row-{index:03}"));
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        csvio::write_profile(&dir.join(&cfg.output.profile), &profile)?;
        csvio::write_json(&dir.join(&cfg.output.report), &report)?;
        Ok::<Report, CliError>(report)
    })();
    match result {
        Ok(report) => {
            let f = report.fits.singularity;
            row.gamma_hat = f.map(|f| f.gamma_hat);
            row.ell_hat = f.map(|f| f.ell_hat);
            row.beta_hat = report.fits.decay.map(|d| d.beta_hat);
            if let Some(v) = &report.verification {
                row.mass = v.mass.map(|m| m.mass);
                row.sandwich_lower = v.sandwich.map(|s| s.margins.lower);
                row.sandwich_upper = v.sandwich.map(|s| s.margins.upper);
                row.apriori_margin = v.apriori_margin;
            }
            let outcome = |o: Outcome| match o {
                Outcome::Pass => "pass",
                Outcome::Fail => "fail",
                Outcome::Inconclusive => "inconclusive",
            };
            row.verdict = report
                .verdict
                .iter()
                .map(|v| format!("{:?}:{}", v.theorem, outcome(v.outcome)))
                .collect::<Vec<_>>()
                .join(";");
            row
        }
        Err(e) => {
            row.status = match e {
                CliError::Validation(_) => "invalid",
                CliError::NoConvergence(_) => "no_convergence",
                CliError::Verification(_) => "verification",
                CliError::Io(_) => "io",
            }
            .into();
            row.message = e.to_string();
            row
        }
    }
}

/// Runs every grid point on a pool of `jobs` threads and writes the table.
/// Fails only when the grid is invalid or every row failed.
pub fn execute(cfg: &RunConfig, out: &Path, jobs: usize) -> Result<Vec<SweepRow>, CliError> {
    let points = grid(cfg)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .into_par_iter()
            .enumerate()
            .map(|(i, p)| run_row(&row_config(cfg, p), i, out))
            .collect()
    });
    csvio::write_rows(&out.join(&cfg.output.sweep), &rows)?;
    if rows.iter().all(|r| r.status != "ok") {
        let first = rows.first().map(|r| r.message.clone()).unwrap_or_default();
        let msg = format!("every sweep row failed; first: {first}");
        return Err(if rows.iter().all(|r| r.status == "invalid") {
            CliError::Validation(msg)
        } else {
            CliError::NoConvergence(msg)
        });
    }
    Ok(rows)
}
