//! `singlab`: solve, verify and sweep the singular elliptic problem from a
//! JSON configuration.

mod config;
mod csvio;
mod error;
mod report;
mod run;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use singlab_core::verify::{oracle_suite, OracleOptions};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "singlab", version, about = "Isolated singularities of -Δu + a·e^{bu} = m|∇u|^q in the punctured disk")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads for `sweep`.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Reserved; every algorithm is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one configuration and write the profile and report.
    Solve,
    /// Re-check a stored radial profile and write its report.
    Verify {
        /// Profile CSV written by `solve`.
        #[arg(long)]
        profile: PathBuf,
    },
    /// Run every point of the configuration's parameter grid.
    Sweep,
    /// Run the closed-form self-tests.
    Oracle {
        /// Negative control: flip the sign of the reaction term.
        #[arg(long, hide = true)]
        inject_sign_error: bool,
    },
}

fn load(path: &Option<PathBuf>) -> Result<RunConfig, CliError> {
    let p = path
        .as_ref()
        .ok_or_else(|| CliError::Validation("--config is required".into()))?;
    RunConfig::load(p)
}

fn verdict_exit(report: &report::Report) -> Result<(), CliError> {
    if report.failed() {
        let failed: Vec<String> = report
            .verdict
            .iter()
            .filter(|v| v.outcome == report::Outcome::Fail)
            .map(|v| format!("{:?}", v.theorem))
            .collect();
        return Err(CliError::Verification(failed.join(", ")));
    }
    Ok(())
}

fn summarise(report: &report::Report) {
    if let Some(f) = report.fits.singularity {
        println!("gamma_hat = {:.6}  ell_hat = {:.6}", f.gamma_hat, f.ell_hat);
    }
    for v in &report.verdict {
        println!("{:?}: {:?}", v.theorem, v.outcome);
    }
}

fn oracle(out: &Path, flip: bool) -> Result<(), CliError> {
    let report = oracle_suite(OracleOptions { flip_reaction: flip }).map_err(CliError::from_core)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    csvio::write_json(&out.join("oracle.json"), &report)?;
    for c in &report.checks {
        println!("{} {} value={:e} tol={:e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.tolerance);
    }
    println!("{}", report.note);
    if report.pass() {
        Ok(())
    } else {
        Err(CliError::Verification("oracle suite".into()))
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve => {
            let cfg = load(&cli.config)?;
            let run = run::execute(&cfg, cli.seed)?;
            run::write_outputs(&cfg, &cli.out, &run)?;
            summarise(&run.report);
            verdict_exit(&run.report)
        }
        Command::Verify { profile } => {
            let cfg = load(&cli.config)?;
            let report = run::verify_file(&cfg, profile, cli.seed)?;
            std::fs::create_dir_all(&cli.out).map_err(|e| CliError::io(&cli.out, e))?;
            csvio::write_json(&cli.out.join(&cfg.output.report), &report)?;
            summarise(&report);
            verdict_exit(&report)
        }
        Command::Sweep => {
            let cfg = load(&cli.config)?;
            let rows = sweep::execute(&cfg, &cli.out, cli.jobs)?;
            let ok = rows.iter().filter(|r| r.status == "ok").count();
            println!("{ok}/{} rows solved", rows.len());
            Ok(())
        }
        Command::Oracle { inject_sign_error } => oracle(&cli.out, *inject_sign_error),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("singlab: {e}");
            ExitCode::from(e.code())
        }
    }
}
