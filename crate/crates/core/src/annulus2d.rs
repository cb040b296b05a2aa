//! The full equation on the half-cylinder `[T0, 0] × S¹` for non-radial
//! boundary data.
//!
//! In a branch variable `w = u + shift(t)` the equation reads
//!
//! ```text
//! w_tt + w_θθ = a·e^{bu + 2t} − m·e^{(2−q)t}·(u_t² + w_θ²)^{q/2} + shift″(t)
//! ```
//!
//! and is discretised by the 5-point stencil with a periodic angular
//! direction. Rows are multiplied by the same weight as the radial solver
//! uses for the branch. At `T0` the angular mean obeys the radial inner
//! closure and the oscillating part a homogeneous Neumann condition.

use alloc::vec;
use alloc::vec::Vec;

use crate::asymptotics::{fit_decay, DecayFit, MAX_RELATIVE_RESIDUAL};
use crate::error::{Error, Result};
use crate::linalg::BlockTridiagonal;
use crate::math::{abs, cos, exp, ln, max, pow, sin, sqrt, PI};
use crate::model::{eikonal_constant, Branch, ProblemParams};
use crate::radial::{
    solve_bvp_critical, solve_bvp_subcritical, solve_regular, solve_supercritical_singular, InnerClosure,
    RadialOde, RadialProfile, SolveStats, SolverConfig,
};
use crate::verify::MassInput;

/// Initial guess for the Newton iteration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Seed {
    /// Radial solution for the mean boundary value plus the harmonic
    /// extension `φ̂_k·e^{kt}` of the oscillating part.
    #[default]
    Radial,
    /// The radial seed plus `A·sin(π(t − T0)/(−T0))·cos(kθ + φ)`.
    Perturbed { amplitude: f64, mode: usize, phase: f64 },
}

/// A solution sampled on `t_i × θ_j`, `θ_j = 2πj/n_theta`, stored row-major
/// by `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub t: Vec<f64>,
    pub n_theta: usize,
    pub w: Vec<f64>,
    pub branch: Branch,
    pub params: ProblemParams,
    pub stats: SolveStats,
}

/// `shift(t)`, `shift′(t)`, `shift″(t)` with `u = w − shift(t)`, plus the
/// log of the row weight.
#[derive(Debug, Clone, Copy)]
struct Geometry {
    sigma: f64,
    critical: bool,
    weight: f64,
}

impl Geometry {
    fn new(params: &ProblemParams, branch: Branch) -> Self {
        Geometry {
            sigma: branch.slope(params),
            critical: matches!(branch, Branch::LambdaCritical),
            weight: match branch {
                Branch::ShiftQOverB => params.q - 2.0,
                _ => 0.0,
            },
        }
    }

    fn shift(&self, t: f64) -> (f64, f64, f64) {
        let s = self.sigma;
        if self.critical {
            let l = 1.0 - t;
            (s * t + s * ln(l), s - s / l, -s / (l * l))
        } else {
            (s * t, s, 0.0)
        }
    }

    fn ln_scale(&self, t: f64) -> f64 {
        if self.critical {
            2.0 * ln(1.0 - t)
        } else {
            self.weight * t
        }
    }
}

/// Local terms of one collocation row.
struct Local {
    scale: f64,
    /// `G = A − R + S·shift″`
    g: f64,
    g_w: f64,
    g_ut: f64,
    g_wth: f64,
}

fn local(p: &ProblemParams, geo: &Geometry, t: f64, w: f64, w_t: f64, w_th: f64) -> Local {
    let (s0, s1, s2) = geo.shift(t);
    let ls = geo.ln_scale(t);
    let scale = exp(ls);
    let a = if p.a == 0.0 { 0.0 } else { p.a * exp(p.b * (w - s0) + 2.0 * t + ls) };
    let (mut r, mut r_ut, mut r_th) = (0.0, 0.0, 0.0);
    if p.m != 0.0 {
        let ut = w_t - s1;
        let x = ut * ut + w_th * w_th;
        if x > 0.0 {
            let c = p.m * exp((2.0 - p.q) * t + ls);
            let big = pow(x, 0.5 * p.q);
            r = c * big;
            let d = c * p.q * big / x;
            r_ut = d * ut;
            r_th = d * w_th;
        }
    }
    Local {
        scale,
        g: a - r + scale * s2,
        g_w: p.b * a,
        g_ut: -r_ut,
        g_wth: -r_th,
    }
}

struct Discretisation<'a> {
    params: ProblemParams,
    geo: Geometry,
    ode: RadialOde,
    t: &'a [f64],
    h: f64,
    m: usize,
    k: f64,
    closure: InnerClosure,
    boundary: &'a [f64],
}

impl Discretisation<'_> {
    /// Residual rows scaled by `h²` and, optionally, the Jacobian.
    fn residual(&self, w: &[f64], mut jac: Option<&mut BlockTridiagonal>) -> Result<Vec<f64>> {
        let (n, m, h, k) = (self.t.len(), self.m, self.h, self.k);
        let h2 = h * h;
        let rho = h2 / (k * k);
        let mut f = vec![0.0; n * m];
        let at = |i: usize, j: usize| w[i * m + (j % m)];
        let mean = |i: usize| w[i * m..(i + 1) * m].iter().sum::<f64>() / m as f64;

        match self.closure {
            InnerClosure::Dirichlet(v) => {
                let w1 = mean(1);
                for j in 0..m {
                    f[j] = w[j] - w[m + j] + w1 - v;
                }
                if let Some(jac) = jac.as_deref_mut() {
                    let mut u = vec![1.0 / m as f64; m * m];
                    for j in 0..m {
                        jac.diag[j * m + j] = 1.0;
                        u[j * m + j] -= 1.0;
                    }
                    jac.upper_first = Some(u);
                }
            }
            closure => {
                let w0 = mean(0);
                let (g, dg) = match closure {
                    InnerClosure::Neumann => (0.0, 0.0),
                    _ => self.ode.asymptotic_slope(self.t[0], w0)?,
                };
                let t0 = self.t[0];
                for j in 0..m {
                    let wj = at(0, j);
                    let w_th = (at(0, j + 1) - at(0, j + m - 1)) / (2.0 * k);
                    let lo = local(&self.params, &self.geo, t0, wj, g, w_th);
                    let s = lo.scale;
                    f[j] = s * (2.0 * at(1, j) - 2.0 * wj - 2.0 * h * g)
                        + s * rho * (at(0, j + 1) - 2.0 * wj + at(0, j + m - 1))
                        - h2 * lo.g;
                    if let Some(jac) = jac.as_deref_mut() {
                        let d = &mut jac.diag;
                        let base = j * m;
                        let dslope = (-2.0 * h * s - h2 * lo.g_ut) * dg / m as f64;
                        for l in 0..m {
                            d[base + l] += dslope;
                        }
                        d[base + j] += -2.0 * s - 2.0 * s * rho - h2 * lo.g_w;
                        let c = h2 * lo.g_wth / (2.0 * k);
                        d[base + (j + 1) % m] += s * rho - c;
                        d[base + (j + m - 1) % m] += s * rho + c;
                        jac.upper[j] = 2.0 * s;
                    }
                }
            }
        }

        for i in 1..n - 1 {
            let ti = self.t[i];
            for j in 0..m {
                let wij = at(i, j);
                let w_t = (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
                let w_th = (at(i, j + 1) - at(i, j + m - 1)) / (2.0 * k);
                let lo = local(&self.params, &self.geo, ti, wij, w_t, w_th);
                let s = lo.scale;
                f[i * m + j] = s * (at(i + 1, j) - 2.0 * wij + at(i - 1, j))
                    + s * rho * (at(i, j + 1) - 2.0 * wij + at(i, j + m - 1))
                    - h2 * lo.g;
                if let Some(jac) = jac.as_deref_mut() {
                    let base = i * m * m + j * m;
                    let c = h2 * lo.g_wth / (2.0 * k);
                    jac.diag[base + j] += -2.0 * s - 2.0 * s * rho - h2 * lo.g_w;
                    jac.diag[base + (j + 1) % m] += s * rho - c;
                    jac.diag[base + (j + m - 1) % m] += s * rho + c;
                    jac.lower[i * m + j] = s + 0.5 * h * lo.g_ut;
                    jac.upper[i * m + j] = s - 0.5 * h * lo.g_ut;
                }
            }
        }

        for j in 0..m {
            f[(n - 1) * m + j] = w[(n - 1) * m + j] - self.boundary[j];
            if let Some(jac) = jac.as_deref_mut() {
                jac.diag[(n - 1) * m * m + j * m + j] = 1.0;
            }
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFault("non-finite 2-D residual"));
        }
        Ok(f)
    }

    fn solve(&self, seed: Vec<f64>, cfg: &SolverConfig, stats: &mut SolveStats) -> Result<Vec<f64>> {
        let (n, m) = (self.t.len(), self.m);
        let norm2 = |f: &[f64]| sqrt(f.iter().map(|v| v * v).sum::<f64>());
        let mut w = seed;
        let mut jac = BlockTridiagonal::zeros(n, m);
        let mut f = self.residual(&w, Some(&mut jac))?;
        let mut fnorm = norm2(&f);
        let mut finf = crate::math::max_abs(&f);
        for _ in 0..cfg.newton_max_iter {
            if finf <= cfg.newton_tol {
                return Ok(self.polish(w, &f, jac, stats));
            }
            stats.newton_iterations += 1;
            stats.linear_solves += 1;
            let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
            let step = jac.solve(&rhs)?;
            let mut alpha = 1.0;
            let accepted = loop {
                let trial: Vec<f64> = w.iter().zip(&step).map(|(a, s)| a + alpha * s).collect();
                let mut jt = BlockTridiagonal::zeros(n, m);
                if let Ok(ft) = self.residual(&trial, Some(&mut jt)) {
                    let nt = norm2(&ft);
                    if nt <= (1.0 - 1e-4 * alpha) * fnorm || crate::math::max_abs(&ft) <= cfg.newton_tol {
                        break Some((trial, ft, jt, nt));
                    }
                }
                alpha *= cfg.damping;
                if alpha < 1e-8 {
                    break None;
                }
            };
            match accepted {
                Some((trial, ft, jt, nt)) => {
                    w = trial;
                    finf = crate::math::max_abs(&ft);
                    f = ft;
                    jac = jt;
                    fnorm = nt;
                }
                None => {
                    let step_size = crate::math::max_abs(&step);
                    if finf <= 1e3 * cfg.newton_tol && step_size <= 1e-12 * max(1.0, crate::math::max_abs(&w)) {
                        stats.residual_max = finf;
                        return Ok(w);
                    }
                    return Err(Error::NoConvergence {
                        iterations: stats.newton_iterations,
                        residual: finf,
                    });
                }
            }
        }
        if finf <= cfg.newton_tol {
            return Ok(self.polish(w, &f, jac, stats));
        }
        Err(Error::NoConvergence {
            iterations: stats.newton_iterations,
            residual: finf,
        })
    }

    /// One extra full step once the tolerance is met, kept if it does not
    /// raise the residual.
    fn polish(&self, w: Vec<f64>, f: &[f64], jac: BlockTridiagonal, stats: &mut SolveStats) -> Vec<f64> {
        let finf = crate::math::max_abs(f);
        stats.residual_max = finf;
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let Ok(step) = jac.solve(&rhs) else { return w };
        stats.linear_solves += 1;
        let trial: Vec<f64> = w.iter().zip(&step).map(|(a, s)| a + s).collect();
        match self.residual(&trial, None) {
            Ok(ft) if crate::math::max_abs(&ft) <= finf => {
                stats.residual_max = crate::math::max_abs(&ft);
                trial
            }
            _ => w,
        }
    }
}

/// The radial solution for the branch with `u = phi0` on the unit circle.
fn radial_seed(params: &ProblemParams, branch: Branch, phi0: f64, config: &SolverConfig) -> Result<RadialProfile> {
    match branch {
        Branch::ShiftGamma(g) => solve_bvp_subcritical(&params.with_gamma(Some(g))?, phi0, config),
        Branch::LambdaCritical => solve_bvp_critical(params, phi0, config),
        Branch::ShiftQOverB => solve_supercritical_singular(params, phi0, config),
        Branch::NoShift => solve_regular(params, phi0, config),
        Branch::ShiftTwoOverB => Err(Error::PreconditionViolation(
            "2-D solves use the critical lambda branch for gamma = 2/b",
        )),
    }
}

/// Solves the full equation with `u(1, θ_j) = boundary[j]` on the given
/// branch. The number of angular points is `boundary.len()`, a power of
/// two of at least 4.
pub fn solve_nonradial(
    params: &ProblemParams,
    branch: Branch,
    boundary: &[f64],
    config: &SolverConfig,
    seed: Seed,
) -> Result<Field2D> {
    config.validate()?;
    let m = boundary.len();
    if m < 4 || !m.is_power_of_two() {
        return Err(Error::InvalidInput("n_theta must be a power of two >= 4"));
    }
    if boundary.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("boundary data must be finite"));
    }
    let params = match branch {
        Branch::ShiftGamma(g) => params.with_gamma(Some(g))?,
        Branch::LambdaCritical => params.with_gamma(Some(params.two_over_b()))?,
        _ => ProblemParams { gamma: None, ..*params },
    };
    let phi_mean = boundary.iter().sum::<f64>() / m as f64;
    let radial = radial_seed(&params, branch, phi_mean, config)?;
    let ode = RadialOde::new(params, branch)?;
    let closure = match (branch, config.inner_closure) {
        (Branch::ShiftQOverB, InnerClosure::Asymptotic) => InnerClosure::Dirichlet(eikonal_constant(&params)),
        (_, c) => c,
    };

    let t = radial.t.clone();
    let n = t.len();
    let t0 = t[0];
    let modes = dft(boundary);
    let mut w0 = vec![0.0; n * m];
    for i in 0..n {
        for j in 0..m {
            let th = 2.0 * PI * j as f64 / m as f64;
            // Harmonic extension of the oscillating boundary data.
            let mut osc = 0.0;
            for (kk, &(re, im)) in modes.iter().enumerate().skip(1) {
                let weight = if 2 * kk == m { 1.0 } else { 2.0 };
                let e = exp(kk as f64 * t[i]);
                osc += weight * e * (re * cos(kk as f64 * th) - im * sin(kk as f64 * th));
            }
            let mut v = radial.w[i] + osc;
            if let Seed::Perturbed { amplitude, mode, phase } = seed {
                v += amplitude * sin(PI * (t[i] - t0) / -t0) * cos(mode as f64 * th + phase);
            }
            w0[i * m + j] = v;
        }
    }
    // The branch variable differs from u on the outer row only for λ.
    let (s_end, _, _) = Geometry::new(&params, branch).shift(0.0);
    let bw: Vec<f64> = boundary.iter().map(|v| v + s_end).collect();

    let disc = Discretisation {
        params,
        geo: Geometry::new(&params, branch),
        ode,
        t: &t,
        h: radial.h(),
        m,
        k: 2.0 * PI / m as f64,
        closure,
        boundary: &bw,
    };
    let mut stats = radial.stats;
    let w = disc.solve(w0, config, &mut stats)?;
    Ok(Field2D {
        t,
        n_theta: m,
        w,
        branch,
        params,
        stats,
    })
}

/// `c_k = (1/m)·Σ_j v_j·e^{−ikθ_j}` for `k = 0..=m/2`, as `(re, im)`.
fn dft(v: &[f64]) -> Vec<(f64, f64)> {
    let m = v.len();
    (0..=m / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, x) in v.iter().enumerate() {
                let a = 2.0 * PI * ((k * j) % m) as f64 / m as f64;
                re += x * cos(a);
                im -= x * sin(a);
            }
            (re / m as f64, im / m as f64)
        })
        .collect()
}

/// `L²(S¹)` norms of the Fourier modes `k = 0..=m/2` of one row.
pub fn mode_norms_row(row: &[f64]) -> Vec<f64> {
    let m = row.len();
    dft(row)
        .iter()
        .enumerate()
        .map(|(k, &(re, im))| {
            let copies = if k == 0 || 2 * k == m { 1.0 } else { 2.0 };
            sqrt(2.0 * PI * copies * (re * re + im * im))
        })
        .collect()
}

/// `‖v‖_{L²(S¹)}` by the trapezoidal rule.
pub fn row_l2(row: &[f64]) -> f64 {
    let m = row.len() as f64;
    sqrt(2.0 * PI / m * row.iter().map(|v| v * v).sum::<f64>())
}

impl Field2D {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn h(&self) -> f64 {
        (self.t[self.t.len() - 1] - self.t[0]) / (self.t.len() - 1) as f64
    }

    pub fn theta(&self) -> Vec<f64> {
        (0..self.n_theta)
            .map(|j| 2.0 * PI * j as f64 / self.n_theta as f64)
            .collect()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.w[i * self.n_theta..(i + 1) * self.n_theta]
    }

    /// `w_t` by centred differences, second-order one-sided at the ends.
    pub fn w_t(&self) -> Vec<f64> {
        let (n, m, h) = (self.len(), self.n_theta, self.h());
        let w = &self.w;
        let mut d = vec![0.0; n * m];
        for j in 0..m {
            d[j] = (-3.0 * w[j] + 4.0 * w[m + j] - w[2 * m + j]) / (2.0 * h);
            for i in 1..n - 1 {
                d[i * m + j] = (w[(i + 1) * m + j] - w[(i - 1) * m + j]) / (2.0 * h);
            }
            let l = (n - 1) * m + j;
            d[l] = (3.0 * w[l] - 4.0 * w[l - m] + w[l - 2 * m]) / (2.0 * h);
        }
        d
    }

    /// `(u, u_t)` everywhere.
    pub fn u(&self) -> (Vec<f64>, Vec<f64>) {
        let wt = self.w_t();
        let m = self.n_theta;
        let mut u = Vec::with_capacity(self.w.len());
        let mut ut = Vec::with_capacity(self.w.len());
        for (idx, (&w, &d)) in self.w.iter().zip(&wt).enumerate() {
            let (a, b) = self.branch.to_u(&self.params, self.t[idx / m], w, d);
            u.push(a);
            ut.push(b);
        }
        (u, ut)
    }

    /// Angular mean of `u` per row.
    pub fn u_mean(&self) -> Vec<f64> {
        let m = self.n_theta;
        let (u, _) = self.u();
        u.chunks_exact(m).map(|r| r.iter().sum::<f64>() / m as f64).collect()
    }

    /// Angular means weighted by `r²` for the distributional mass.
    pub fn mass_input(&self) -> MassInput {
        let (m, p) = (self.n_theta, &self.params);
        let k = 2.0 * PI / m as f64;
        let (u, ut) = self.u();
        let mut u_mean = Vec::with_capacity(self.len());
        let mut absorption = Vec::with_capacity(self.len());
        let mut reaction = Vec::with_capacity(self.len());
        for (i, &t) in self.t.iter().enumerate() {
            let (mut su, mut sa, mut sr) = (0.0, 0.0, 0.0);
            for j in 0..m {
                let v = u[i * m + j];
                let uth = (u[i * m + (j + 1) % m] - u[i * m + (j + m - 1) % m]) / (2.0 * k);
                let x = ut[i * m + j] * ut[i * m + j] + uth * uth;
                su += v;
                if p.a != 0.0 {
                    sa += p.a * exp(p.b * v + 2.0 * t);
                }
                if p.m != 0.0 && x > 0.0 {
                    sr += p.m * pow(x, 0.5 * p.q) * exp((2.0 - p.q) * t);
                }
            }
            u_mean.push(su / m as f64);
            absorption.push(sa / m as f64);
            reaction.push(sr / m as f64);
        }
        MassInput {
            t: self.t.clone(),
            u_mean,
            absorption,
            reaction,
        }
    }

    /// The field restricted to `θ_j` as a radial profile, for comparison
    /// with the radial solver.
    pub fn column(&self, j: usize) -> Result<RadialProfile> {
        let m = self.n_theta;
        let w: Vec<f64> = (0..self.len()).map(|i| self.w[i * m + j % m]).collect();
        let wt: Vec<f64> = {
            let d = self.w_t();
            (0..self.len()).map(|i| d[i * m + j % m]).collect()
        };
        RadialProfile::from_parts(self.t.clone(), w, wt, self.branch, self.params)
    }
}

/// Norms of one Fourier mode of `w* = w − w̄` and of `w_t*` along `t`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModeSeries {
    pub k: usize,
    pub norms: Vec<f64>,
    pub norms_t: Vec<f64>,
    /// Fitted decay rate, kept only when the fit residual is below the limit.
    pub beta_hat: Option<f64>,
    pub beta_hat_t: Option<f64>,
    pub fit: Option<DecayFit>,
    pub fit_t: Option<DecayFit>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModeDecay {
    pub t: Vec<f64>,
    pub modes: Vec<ModeSeries>,
    pub window: (f64, f64),
    /// `‖w*(t)‖` over all oscillating modes.
    pub total: Vec<f64>,
}

impl ModeDecay {
    pub fn mode(&self, k: usize) -> Option<&ModeSeries> {
        self.modes.iter().find(|s| s.k == k)
    }
}

/// Mode-fit window clear of the inner Neumann layer and of the boundary.
pub fn default_mode_window(t: &[f64]) -> (f64, f64) {
    let t0 = t[0];
    let span = t[t.len() - 1] - t0;
    (t0 + span / 3.0, t0 + 5.0 * span / 6.0)
}

/// Per-mode `L²(S¹)` norms of `w*` and `w_t*` for `k = 1..=k_max` with
/// their fitted exponential rates.
pub fn fourier_mode_norms(field: &Field2D, k_max: usize, window: Option<(f64, f64)>) -> ModeDecay {
    let (n, m) = (field.len(), field.n_theta);
    let k_max = k_max.clamp(1, m / 2);
    let window = window.unwrap_or_else(|| default_mode_window(&field.t));
    let wt = field.w_t();
    let mut norms = vec![vec![0.0; n]; k_max];
    let mut norms_t = vec![vec![0.0; n]; k_max];
    let mut total = vec![0.0; n];
    for i in 0..n {
        let a = mode_norms_row(field.row(i));
        let b = mode_norms_row(&wt[i * m..(i + 1) * m]);
        for k in 1..=k_max {
            norms[k - 1][i] = a[k];
            norms_t[k - 1][i] = b[k];
        }
        total[i] = sqrt(a[1..].iter().map(|v| v * v).sum::<f64>());
    }
    let fit = |s: &[f64]| -> (Option<f64>, Option<DecayFit>) {
        match fit_decay(&field.t, s, window) {
            Ok(f) => ((f.residual < MAX_RELATIVE_RESIDUAL).then_some(f.beta_hat), Some(f)),
            Err(_) => (None, None),
        }
    };
    let modes = norms
        .into_iter()
        .zip(norms_t)
        .enumerate()
        .map(|(idx, (nk, nt))| {
            let (beta_hat, fit_w) = fit(&nk);
            let (beta_hat_t, fit_t) = fit(&nt);
            ModeSeries {
                k: idx + 1,
                norms: nk,
                norms_t: nt,
                beta_hat,
                beta_hat_t,
                fit: fit_w,
                fit_t,
            }
        })
        .collect();
    ModeDecay {
        t: field.t.clone(),
        modes,
        window,
        total,
    }
}

/// Largest relative Parseval defect over the rows of `w`.
pub fn parseval_defect(field: &Field2D) -> f64 {
    (0..field.len()).fold(0.0, |acc, i| {
        let row = field.row(i);
        let l2 = row_l2(row);
        let s = sqrt(mode_norms_row(row).iter().map(|v| v * v).sum::<f64>());
        if l2 == 0.0 {
            acc
        } else {
            max(acc, abs(s - l2) / l2)
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AngularVariation {
    /// `max_θ w − min_θ w` per row.
    pub per_row: Vec<f64>,
    /// Supremum over the window.
    pub sup: f64,
    pub window: (f64, f64),
}

/// Angular oscillation of `w` per row; the window defaults to the deep
/// fit window.
pub fn angular_variation(field: &Field2D, window: Option<(f64, f64)>) -> AngularVariation {
    let window = window.unwrap_or_else(|| crate::asymptotics::default_window(&field.t));
    let per_row: Vec<f64> = (0..field.len())
        .map(|i| {
            let r = field.row(i);
            let hi = r.iter().fold(f64::NEG_INFINITY, |a, v| max(a, *v));
            let lo = r.iter().fold(f64::INFINITY, |a, v| crate::math::min(a, *v));
            hi - lo
        })
        .collect();
    let sup = field
        .t
        .iter()
        .zip(&per_row)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .fold(0.0, |a, (_, v)| max(a, *v));
    AngularVariation { per_row, sup, window }
}

/// `φ(θ_j)` sampled at `m` equispaced angles.
pub fn sample_boundary(m: usize, phi: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..m).map(|j| phi(2.0 * PI * j as f64 / m as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parseval_on_trigonometric_row() {
        let row = sample_boundary(16, |th| 0.5 + 0.3 * cos(th) - 0.2 * sin(3.0 * th) + 0.1 * cos(8.0 * th));
        let n = mode_norms_row(&row);
        let s = sqrt(2.0 * PI);
        assert!(abs(n[0] - 0.5 * s) < 1e-14);
        assert!(abs(n[1] - 0.3 * s / sqrt(2.0)) < 1e-14);
        assert!(abs(n[3] - 0.2 * s / sqrt(2.0)) < 1e-14);
        assert!(abs(n[8] - 0.1 * s) < 1e-14);
        let total = sqrt(n.iter().map(|v| v * v).sum::<f64>());
        assert!(abs(total - row_l2(&row)) < 1e-13);
    }

    #[test]
    fn small_radial_run_is_radial() {
        let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(1.0)).unwrap();
        let cfg = SolverConfig {
            n_points: 128,
            t0: -8.0,
            ..SolverConfig::default()
        };
        let bd = vec![0.0; 8];
        let f = solve_nonradial(
            &p,
            Branch::ShiftGamma(1.0),
            &bd,
            &cfg,
            Seed::Perturbed {
                amplitude: 0.1,
                mode: 2,
                phase: 0.3,
            },
        )
        .unwrap();
        let r = solve_bvp_subcritical(&p, 0.0, &cfg).unwrap();
        for i in 0..f.len() {
            for &v in f.row(i) {
                assert!(abs(v - r.w[i]) < 1e-9, "{i}");
            }
        }
        assert!(angular_variation(&f, None).sup < 1e-10);
    }
}
