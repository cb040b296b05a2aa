//! CSV files: radial profiles, 2-D fields, mode norms and sweep tables.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use singlab_core::annulus2d::{Field2D, ModeDecay};
use singlab_core::{Branch, ProblemParams, RadialProfile};

use crate::error::CliError;

pub const PROFILE_HEADER: [&str; 6] = ["t", "r", "w", "w_t", "u", "u_r"];

/// Relative tolerance for the redundant `r` and `u` columns on read.
const COLUMN_TOL: f64 = 1e-9;

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(f)))
}

fn finish(mut w: csv::Writer<BufWriter<File>>, path: &Path) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::io(path, e))?;
    let inner = w.into_inner().map_err(|e| CliError::io(path, e.error()))?;
    inner.into_inner().map_err(|e| CliError::io(path, e.error()))?.sync_all().ok();
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_profile(path: &Path, p: &RadialProfile) -> Result<(), CliError> {
    let mut w = writer(path)?;
    let io = |e: csv::Error| CliError::io(path, e);
    w.write_record(PROFILE_HEADER).map_err(io)?;
    let (r, u, ur) = (p.r(), p.u(), p.u_r());
    for i in 0..p.len() {
        w.write_record([fmt(p.t[i]), fmt(r[i]), fmt(p.w[i]), fmt(p.w_t[i]), fmt(u[i]), fmt(ur[i])])
            .map_err(io)?;
    }
    finish(w, path)
}

/// Reads a profile written by [`write_profile`] for the given parameters and
/// branch. Any missing, extra or inconsistent column is an error.
pub fn read_profile(path: &Path, params: ProblemParams, branch: Branch) -> Result<RadialProfile, CliError> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    let bad = |msg: String| CliError::Validation(format!("{}: {msg}", path.display()));
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(f);
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(PROFILE_HEADER) {
        return Err(bad(format!("header must be {}", PROFILE_HEADER.join(","))));
    }
    let (mut t, mut w, mut wt) = (Vec::new(), Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let mut v = [0.0; 6];
        for (k, field) in rec.iter().enumerate() {
            v[k] = field
                .trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("row {}: `{field}` is not a number", line + 1)))?;
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(bad(format!("row {}: non-finite value", line + 1)));
        }
        let [ti, ri, wi, wti, ui, _] = v;
        let close = |a: f64, b: f64| (a - b).abs() <= COLUMN_TOL * (1.0 + b.abs());
        if !close(ri, ti.exp()) {
            return Err(bad(format!("row {}: r differs from e^t", line + 1)));
        }
        if !close(ui, branch.to_u(&params, ti, wi, wti).0) {
            return Err(bad(format!("row {}: u does not match w on this branch", line + 1)));
        }
        t.push(ti);
        w.push(wi);
        wt.push(wti);
    }
    let n = t.len();
    if n < 64 {
        return Err(bad(format!("{n} rows; a profile needs at least 64")));
    }
    if t[n - 1] != 0.0 {
        return Err(bad("the t grid must end at 0".into()));
    }
    let h = -t[0] / (n - 1) as f64;
    if t.windows(2).any(|p| ((p[1] - p[0]) - h).abs() > 1e-9 * h) {
        return Err(bad("the t grid must be uniform".into()));
    }
    RadialProfile::from_parts(t, w, wt, branch, params).map_err(|e| bad(e.to_string()))
}

/// Long format: one row per `(t_i, θ_j)`.
pub fn write_field(path: &Path, f: &Field2D) -> Result<(), CliError> {
    let mut w = writer(path)?;
    let io = |e: csv::Error| CliError::io(path, e);
    w.write_record(["t", "theta", "r", "w", "u"]).map_err(io)?;
    let (u, _) = f.u();
    let theta = f.theta();
    let m = f.n_theta;
    for (i, t) in f.t.iter().enumerate() {
        let r = t.exp();
        for (j, th) in theta.iter().enumerate() {
            let k = i * m + j;
            w.write_record([fmt(*t), fmt(*th), fmt(r), fmt(f.w[k]), fmt(u[k])]).map_err(io)?;
        }
    }
    finish(w, path)
}

pub fn write_modes(path: &Path, d: &ModeDecay) -> Result<(), CliError> {
    let mut w = writer(path)?;
    let io = |e: csv::Error| CliError::io(path, e);
    w.write_record(["t", "k", "norm", "norm_t"]).map_err(io)?;
    for (i, t) in d.t.iter().enumerate() {
        for s in &d.modes {
            w.write_record([fmt(*t), s.k.to_string(), fmt(s.norms[i]), fmt(s.norms_t[i])])
                .map_err(io)?;
        }
    }
    finish(w, path)
}

/// Writes serializable rows with a header taken from the field names.
pub fn write_rows<T: serde::Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    for r in rows {
        w.serialize(r).map_err(|e| CliError::io(path, e))?;
    }
    finish(w, path)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut b = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut b, value).map_err(|e| CliError::io(path, e))?;
    b.write_all(b"\n").map_err(|e| CliError::io(path, e))?;
    b.flush().map_err(|e| CliError::io(path, e))
}
