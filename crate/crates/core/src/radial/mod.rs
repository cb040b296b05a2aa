//! Radial solutions in the log variable `t = ln r` on `[T0, 0]`.
//!
//! Newton collocation handles the boundary-value problems; an adaptive
//! Runge–Kutta integrator handles initial-value problems and shooting.
//! The inner end `T0` replaces `t = −∞` through a closure condition:
//!
//! * prescribed slope `γ < 2/b`: `w_t(T0) = a·e^{(2−bγ)T0 + bw}/(2−bγ) − m·e^{(2−q)T0}·γ^q/(2−q)`,
//!   the ODE integrated from `−∞` with frozen coefficients;
//! * critical slope `2/b`: `λ_t(T0) = (λ(T0) − ℓ)/(1 − T0)`, which keeps only
//!   the decaying mode `C/(1 − t)`;
//! * supercritical singular branch: `w(T0) = c∞`, the eikonal constant.

mod newton;
mod ode;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ivp::{dopri5, Tolerances};
use crate::math::{abs, exp, expm1, ln, ln1p, max, powq};
use crate::model::{eikonal_constant, Branch, ProblemParams, RSamples, Regime, TSamples};
use newton::Collocation;
pub(crate) use ode::RadialOde;

/// Condition imposed at the inner end `T0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InnerClosure {
    /// The branch's own asymptotic condition.
    #[default]
    Asymptotic,
    /// `w_t(T0) = 0`.
    Neumann,
    /// `w(T0)` fixed.
    Dirichlet(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SolverConfig {
    pub t0: f64,
    pub n_points: usize,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Backtracking factor of the line search.
    pub damping: f64,
    pub continuation_steps: usize,
    /// Relative and absolute tolerance of the Runge–Kutta integrator.
    pub ivp_tol: f64,
    pub inner_closure: InnerClosure,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            t0: -18.0,
            n_points: 4096,
            newton_tol: 1e-11,
            newton_max_iter: 60,
            damping: 0.5,
            continuation_steps: 8,
            ivp_tol: 1e-12,
            inner_closure: InnerClosure::Asymptotic,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t0 < -1.0 && self.t0.is_finite()) {
            return Err(Error::InvalidParameter("T0 must be below -1"));
        }
        if self.n_points < 64 {
            return Err(Error::InvalidParameter("n_points must be at least 64"));
        }
        if !(self.newton_tol > 0.0 && self.ivp_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive"));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidParameter("damping must lie in (0, 1)"));
        }
        if self.newton_max_iter == 0 {
            return Err(Error::InvalidParameter("newton_max_iter must be positive"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.t0, 0.0, self.n_points)
    }
}

pub(crate) fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
    g[n - 1] = b;
    g
}

/// Deterministic work counters of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveStats {
    pub newton_iterations: usize,
    pub linear_solves: usize,
    pub continuation_steps: usize,
    pub rk_steps: usize,
    pub residual_max: f64,
}

/// A radial solution sampled on a uniform `t` grid in a branch variable.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
    pub w_t: Vec<f64>,
    pub branch: Branch,
    pub params: ProblemParams,
    pub stats: SolveStats,
}

impl RadialProfile {
    /// Assembles a profile from stored samples and checks its invariants.
    pub fn from_parts(
        t: Vec<f64>,
        w: Vec<f64>,
        w_t: Vec<f64>,
        branch: Branch,
        params: ProblemParams,
    ) -> Result<Self> {
        let p = RadialProfile {
            t,
            w,
            w_t,
            branch,
            params,
            stats: SolveStats::default(),
        };
        p.check()?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn h(&self) -> f64 {
        self.t[1] - self.t[0]
    }

    pub fn t0(&self) -> f64 {
        self.t[0]
    }

    /// Grid order, finiteness and agreement of `w_t` with centred differences.
    pub fn check(&self) -> Result<()> {
        let n = self.t.len();
        if n < 3 || self.w.len() != n || self.w_t.len() != n {
            return Err(Error::InvalidInput("profile arrays must share a length >= 3"));
        }
        if self.t.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(Error::InvalidInput("t grid must increase strictly"));
        }
        if self.t[n - 1] > 0.0 {
            return Err(Error::InvalidInput("t grid must lie in (-inf, 0]"));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !(finite(&self.t) && finite(&self.w) && finite(&self.w_t)) {
            return Err(Error::InvalidInput("profile values must be finite"));
        }
        self.branch.check(&self.params)?;
        for i in 1..n - 1 {
            let h1 = self.t[i] - self.t[i - 1];
            let h2 = self.t[i + 1] - self.t[i];
            let fd = (self.w[i + 1] - self.w[i - 1]) / (h1 + h2);
            let scale = 1.0 + abs(self.w_t[i]) + abs(fd);
            let tol = 1e-6 * scale + 10.0 * max(h1, h2) * max(h1, h2) * scale;
            if abs(fd - self.w_t[i]) > tol {
                return Err(Error::InvalidInput("w_t inconsistent with w"));
            }
        }
        Ok(())
    }

    /// `(u, u_t)` at grid index `i`.
    pub fn u_at(&self, i: usize) -> (f64, f64) {
        self.branch
            .to_u(&self.params, self.t[i], self.w[i], self.w_t[i])
    }

    pub fn u(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.u_at(i).0).collect()
    }

    pub fn u_t(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.u_at(i).1).collect()
    }

    pub fn r(&self) -> Vec<f64> {
        self.t.iter().map(|&t| exp(t)).collect()
    }

    /// `u_r = u_t / r`.
    pub fn u_r(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.u_at(i).1 / exp(self.t[i]))
            .collect()
    }

    pub fn samples(&self) -> TSamples {
        TSamples {
            t: self.t.clone(),
            w: self.w.clone(),
            w_t: self.w_t.clone(),
        }
    }

    pub fn r_samples(&self) -> RSamples {
        RSamples {
            r: self.r(),
            u: self.u(),
            u_r: self.u_r(),
        }
    }

    /// Indices with `t` in `[lo, hi]`.
    pub fn window_indices(&self, lo: f64, hi: f64) -> core::ops::Range<usize> {
        let a = self.t.iter().position(|&t| t >= lo).unwrap_or(self.len());
        let b = self.t.iter().rposition(|&t| t <= hi).map(|i| i + 1).unwrap_or(0);
        a..b.max(a)
    }
}

/// Integrates the branch ODE from `t_start` with `(w, w_t) = (w0, w0_t)` and
/// samples `config.n_points` uniform points of `[t_start, t_end]`.
pub fn integrate_ivp(
    params: &ProblemParams,
    branch: Branch,
    t_start: f64,
    w0: f64,
    w0_t: f64,
    t_end: f64,
    config: &SolverConfig,
) -> Result<RadialProfile> {
    if !(t_start < t_end && t_end <= 0.0) {
        return Err(Error::PreconditionViolation("need t_start < t_end <= 0"));
    }
    let ode = RadialOde::new(*params, branch)?;
    integrate_with(&ode, t_start, w0, w0_t, t_end, config)
}

fn integrate_with(
    ode: &RadialOde,
    t_start: f64,
    w0: f64,
    w0_t: f64,
    t_end: f64,
    config: &SolverConfig,
) -> Result<RadialProfile> {
    let grid = uniform_grid(t_start, t_end, config.n_points.max(3));
    let tol = Tolerances {
        rtol: config.ivp_tol,
        atol: config.ivp_tol,
        ..Tolerances::default()
    };
    let (ys, st) = dopri5(
        |t, y: &[f64; 2]| [y[1], ode.acceleration(t, y[0], y[1])],
        t_start,
        [w0, w0_t],
        t_end,
        &grid,
        &tol,
    )?;
    Ok(RadialProfile {
        t: grid,
        w: ys.iter().map(|y| y[0]).collect(),
        w_t: ys.iter().map(|y| y[1]).collect(),
        branch: ode.branch,
        params: ode.params,
        stats: SolveStats {
            rk_steps: st.accepted,
            ..SolveStats::default()
        },
    })
}

fn collocate(
    ode: &RadialOde,
    closure: InnerClosure,
    phi0: f64,
    seed: Vec<f64>,
    config: &SolverConfig,
    stats: &mut SolveStats,
) -> Result<RadialProfile> {
    let t = config.grid();
    let h = t[1] - t[0];
    let c = Collocation {
        ode,
        t: &t,
        h,
        closure,
        outer: phi0,
    };
    let w = c.solve(seed, config, stats)?;
    let w_t = c.derivative(&w)?;
    Ok(RadialProfile {
        t,
        w,
        w_t,
        branch: ode.branch,
        params: ode.params,
        stats: *stats,
    })
}

/// Singular solution with prescribed strength `γ = params.gamma ∈ (0, 2/b)`
/// for `1 < q < 2`, with `u = φ0` on the unit circle.
pub fn solve_bvp_subcritical(params: &ProblemParams, phi0: f64, config: &SolverConfig) -> Result<RadialProfile> {
    config.validate()?;
    if params.regime()? != Regime::Subcritical {
        return Err(Error::PreconditionViolation("needs 1 < q < 2"));
    }
    let gamma = params
        .gamma
        .ok_or(Error::PreconditionViolation("gamma must be given"))?;
    if !(gamma > 0.0 && gamma < params.two_over_b()) {
        return Err(Error::PreconditionViolation("needs 0 < gamma < 2/b"));
    }
    solve_shifted(params, gamma, phi0, config)
}

fn solve_shifted(params: &ProblemParams, gamma: f64, phi0: f64, config: &SolverConfig) -> Result<RadialProfile> {
    let mut stats = SolveStats::default();
    let n = config.n_points;
    let ode = RadialOde::new(*params, Branch::ShiftGamma(gamma))?;
    if let Ok(p) = collocate(&ode, config.inner_closure, phi0, alloc::vec![phi0; n], config, &mut stats) {
        return Ok(p);
    }
    // Continuation in γ from 0.1·γ.
    let steps = config.continuation_steps.max(1);
    let grid = config.grid();
    let mut u_prev: Vec<f64> = alloc::vec![phi0; n];
    let mut last = None;
    for k in 0..=steps {
        let g = gamma * (0.1 + 0.9 * k as f64 / steps as f64);
        let pk = params.with_gamma(params.gamma.map(|_| g))?;
        let ode = RadialOde::new(pk, Branch::ShiftGamma(g))?;
        let seed: Vec<f64> = u_prev.iter().zip(&grid).map(|(u, t)| u + g * t).collect();
        stats.continuation_steps += 1;
        let p = collocate(&ode, config.inner_closure, phi0, seed, config, &mut stats)?;
        u_prev = p.u();
        last = Some(p);
    }
    let mut p = last.ok_or(Error::NoConvergence {
        iterations: stats.newton_iterations,
        residual: f64::NAN,
    })?;
    p.params = *params;
    Ok(p)
}

/// The critical branch `γ = 2/b` for `1 < q < 2`, solved for
/// `λ = u + (2/b)·t + (2/b)·ln(1 − t)`.
pub fn solve_bvp_critical(params: &ProblemParams, phi0: f64, config: &SolverConfig) -> Result<RadialProfile> {
    config.validate()?;
    if params.regime()? != Regime::Subcritical {
        return Err(Error::PreconditionViolation("needs 1 < q < 2"));
    }
    let p = params.with_gamma(Some(params.two_over_b()))?;
    solve_critical_inner(&p, phi0, config)
}

fn solve_critical_inner(p: &ProblemParams, phi0: f64, config: &SolverConfig) -> Result<RadialProfile> {
    let ode = RadialOde::new(*p, Branch::LambdaCritical)?;
    let ell = p.critical_constant();
    let t0 = config.t0;
    let seed: Vec<f64> = config
        .grid()
        .iter()
        .map(|&t| ell + (phi0 - ell) * (t - t0) / -t0)
        .collect();
    let mut stats = SolveStats::default();
    collocate(&ode, config.inner_closure, phi0, seed, config, &mut stats)
}

/// The singular branch with slope `q/b` for `q > 2`, solved for
/// `w = u + (q/b)·t` from the eikonal seed with continuation in the
/// truncation threshold of `|∇u|^q`.
pub fn solve_supercritical_singular(
    params: &ProblemParams,
    phi0: f64,
    config: &SolverConfig,
) -> Result<RadialProfile> {
    config.validate()?;
    if params.regime()? != Regime::Supercritical {
        return Err(Error::PreconditionViolation("needs q > 2"));
    }
    let p = ProblemParams { gamma: None, ..*params };
    let mut ode = RadialOde::new(p, Branch::ShiftQOverB)?;
    let c_inf = eikonal_constant(&p);
    if phi0 < c_inf {
        let floor = supercritical_boundary_floor(&p)?;
        if phi0 <= floor {
            return Err(Error::UnattainableBoundary { phi0, floor });
        }
    }
    let closure = match config.inner_closure {
        InnerClosure::Asymptotic => InnerClosure::Dirichlet(c_inf),
        other => other,
    };
    let grid = config.grid();
    let mut w: Vec<f64> = grid
        .iter()
        .map(|&t| c_inf + (phi0 - c_inf) * exp(2.0 * t))
        .collect();
    let mut stats = SolveStats::default();
    // Thresholds on |u_t| from 2q/b upwards, doubling.
    let steps = config.continuation_steps;
    for k in 0..steps {
        let s = 2.0 * p.q_over_b() * powq(2.0, k as f64);
        ode.threshold = Some(s);
        stats.continuation_steps += 1;
        match collocate(&ode, closure, phi0, w.clone(), config, &mut stats) {
            Ok(prof) => w = prof.w,
            Err(Error::NoConvergence { .. }) | Err(Error::NumericalFault(_)) => {}
            Err(e) => return Err(e),
        }
    }
    ode.threshold = None;
    let prof = collocate(&ode, closure, phi0, w, config, &mut stats)?;
    let slope = inner_slope(&prof);
    if abs(slope - p.q_over_b()) > 0.1 * p.q_over_b() {
        return Err(Error::BranchCollapse { slope });
    }
    Ok(prof)
}

/// Infimum of `u(1)` over radial singular solutions with slope `q/b`.
///
/// Near the origin these solutions are `w_∞` plus a multiple `ε` of the
/// fast mode, which grows like `exp(∫ m·q·(q/b)^{q−1}·e^{(2−q)t} dt)`.
/// Below `w_∞` the perturbation ends in gradient blow-up at some radius
/// `r_b(ε)`; `u` stays bounded there, and the floor is the limit of
/// `u(1)` as `r_b → 1⁺`. Values of `φ0` at or below it are reached by no
/// classical singular solution.
pub fn supercritical_boundary_floor(params: &ProblemParams) -> Result<f64> {
    let p = params;
    if p.regime()? != Regime::Supercritical || p.m <= 0.0 || p.a <= 0.0 {
        return Err(Error::PreconditionViolation("needs q > 2 and m, a > 0"));
    }
    let sigma = p.q_over_b();
    let c_inf = eikonal_constant(p);
    let big_k = p.m * powq(sigma, p.q);
    // State (v, v_t) with v = w − c_∞ keeps tiny perturbations exact.
    let rhs = |t: f64, y: &[f64; 2]| -> [f64; 2] {
        // |σ − v_t|^q − σ^q without cancellation for small v_t.
        let d = if y[1] < sigma {
            big_k / p.m * expm1(p.q * ln1p(-y[1] / sigma))
        } else {
            powq(y[1] - sigma, p.q) - powq(sigma, p.q)
        };
        let g = big_k * expm1(p.b * y[0]) - p.m * d;
        [y[1], exp((2.0 - p.q) * t) * g]
    };
    // Start where the fast rate is moderate, so explicit steps stay cheap.
    let k0 = p.m * p.q * powq(sigma, p.q - 1.0);
    let t_s = crate::math::min(-0.5, ln(50.0 / k0) / (2.0 - p.q));
    let rate = k0 * exp((2.0 - p.q) * t_s);
    // Relative control only: the perturbation starts far below any atol.
    let tol = Tolerances {
        rtol: 1e-11,
        atol: 1e-300,
        blowup: 1e6,
        max_steps: 50_000,
    };
    // `v(0)` for perturbation `ε = e^{le}`, or `None` after blow-up.
    let end_value = |le: f64| -> Result<Option<f64>> {
        let eps = exp(le);
        match dopri5(rhs, t_s, [-eps / rate, -eps], 0.0, &[0.0], &tol) {
            Ok((y, _)) => Ok(Some(y[0][0])),
            // Step underflow here means the gradient is already singular.
            Err(Error::FiniteTimeBlowup { .. }) | Err(Error::StiffnessFault { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let (mut lo, mut hi) = (-650.0, ln(sigma));
    let mut best = end_value(lo)?.ok_or(Error::NumericalFault("fast-mode bracket failed"))?;
    if end_value(hi)?.is_some() {
        return Err(Error::NumericalFault("fast-mode bracket failed"));
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        match end_value(mid)? {
            Some(v) => {
                lo = mid;
                best = v;
            }
            None => hi = mid,
        }
    }
    Ok(c_inf + best)
}

/// OLS slope of `u` against `−t` on the deepest third of the grid.
fn inner_slope(p: &RadialProfile) -> f64 {
    let t0 = p.t0();
    let idx = p.window_indices(t0 + 0.05 * -t0, t0 + -t0 / 3.0);
    let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in idx {
        let x = -p.t[i];
        let y = p.u_at(i).0;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        n += 1.0;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// The bounded solution with `u′(0) = 0`, solved for `u` itself.
pub fn solve_regular(params: &ProblemParams, phi0: f64, config: &SolverConfig) -> Result<RadialProfile> {
    config.validate()?;
    let p = ProblemParams { gamma: None, ..*params };
    let ode = RadialOde::new(p, Branch::NoShift)?;
    let mut stats = SolveStats::default();
    collocate(
        &ode,
        config.inner_closure,
        phi0,
        alloc::vec![phi0; config.n_points],
        config,
        &mut stats,
    )
}

/// The pure absorption problem `−Δv + a·e^{bv} = 2πγδ₀` (gradient term off).
pub fn solve_emden(params: &ProblemParams, gamma: f64, phi0: f64, config: &SolverConfig) -> Result<RadialProfile> {
    config.validate()?;
    let two_b = params.two_over_b();
    if !(gamma >= 0.0 && gamma <= two_b * (1.0 + 1e-12)) {
        return Err(Error::PreconditionViolation("needs 0 <= gamma <= 2/b"));
    }
    let regime_q = if params.q < 2.0 { params.q } else { 1.5 };
    let base = ProblemParams {
        m: 0.0,
        q: regime_q,
        gamma: None,
        ..*params
    };
    if gamma == 0.0 {
        let ode = RadialOde::new(base, Branch::NoShift)?;
        let mut stats = SolveStats::default();
        return collocate(
            &ode,
            config.inner_closure,
            phi0,
            alloc::vec![phi0; config.n_points],
            config,
            &mut stats,
        );
    }
    if abs(gamma - two_b) <= 1e-12 * two_b {
        let p = ProblemParams {
            gamma: Some(two_b),
            ..base
        };
        return solve_critical_inner(&p, phi0, config);
    }
    let p = ProblemParams {
        gamma: Some(gamma),
        ..base
    };
    solve_shifted(&p, gamma, phi0, config)
}

/// Shooting over the inner constant `ℓ = w(T0)`: integrates from `T0` with
/// the asymptotic slope and adjusts `ℓ` until `w(0) = φ0`.
pub fn shoot_subcritical(params: &ProblemParams, phi0: f64, config: &SolverConfig) -> Result<(RadialProfile, f64)> {
    config.validate()?;
    let gamma = params
        .gamma
        .ok_or(Error::PreconditionViolation("gamma must be given"))?;
    let ode = RadialOde::new(*params, Branch::ShiftGamma(gamma))?;
    let t0 = config.t0;
    let end_value = |ell: f64| -> Result<f64> {
        let (g, _) = ode.asymptotic_slope(t0, ell)?;
        let coarse = SolverConfig {
            n_points: 3,
            ..*config
        };
        match integrate_with(&ode, t0, ell, g, 0.0, &coarse) {
            Ok(p) => Ok(p.w[p.len() - 1] - phi0),
            Err(Error::FiniteTimeBlowup { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };
    // Bracket, then bisection polished by secant steps.
    let (mut lo, mut hi) = (phi0 - 1.0, phi0 + 1.0);
    let mut flo = end_value(lo)?;
    let mut fhi = end_value(hi)?;
    let mut guard = 0;
    while flo > 0.0 {
        hi = lo;
        fhi = flo;
        lo -= max(1.0, abs(lo));
        flo = end_value(lo)?;
        guard += 1;
        if guard > 60 {
            return Err(Error::NoConvergence { iterations: guard, residual: flo });
        }
    }
    while fhi < 0.0 {
        lo = hi;
        flo = fhi;
        hi += max(1.0, abs(hi));
        fhi = end_value(hi)?;
        guard += 1;
        if guard > 120 {
            return Err(Error::NoConvergence { iterations: guard, residual: fhi });
        }
    }
    let mut ell = 0.5 * (lo + hi);
    for it in 0..200 {
        let mid = if flo.is_finite() && fhi.is_finite() && fhi != flo {
            let s = lo - flo * (hi - lo) / (fhi - flo);
            if s > lo && s < hi && it % 3 != 2 {
                s
            } else {
                0.5 * (lo + hi)
            }
        } else {
            0.5 * (lo + hi)
        };
        let fm = end_value(mid)?;
        ell = mid;
        if fm == 0.0 || (hi - lo) < 1e-15 * max(1.0, abs(mid)) || abs(fm) < 1e-14 {
            break;
        }
        if fm < 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    let (g, _) = ode.asymptotic_slope(t0, ell)?;
    let prof = integrate_with(&ode, t0, ell, g, 0.0, config)?;
    Ok((prof, ell))
}

/// Sign census of `W = a·e^{bu} − m|u′|^q`, which satisfies `(r·u′)′ = r·W`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LyapunovCensus {
    pub w: Vec<f64>,
    pub positive: usize,
    pub negative: usize,
    /// Samples below the relative round-off threshold.
    pub zero: usize,
    pub sign_changes: usize,
    /// No significant sign change on the deepest third of the grid.
    pub inner_one_signed: bool,
}

/// Relative size below which a sample of `W` counts as zero.
pub const LYAPUNOV_ZERO: f64 = 1e-9;

pub fn lyapunov_w(profile: &RadialProfile) -> LyapunovCensus {
    let p = &profile.params;
    let n = profile.len();
    let mut w = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        let (u, ut) = profile.u_at(i);
        let ur = ut / exp(profile.t[i]);
        let abs_term = p.a * exp(p.b * u);
        let grad = p.m * powq(ur, p.q);
        let v = abs_term - grad;
        w.push(v);
        let sc = abs_term + grad;
        signs.push(if abs(v) <= LYAPUNOV_ZERO * sc {
            0i8
        } else if v > 0.0 {
            1
        } else {
            -1
        });
    }
    let mut changes = 0;
    let mut last = 0i8;
    for &s in &signs {
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    let t0 = profile.t0();
    let inner = profile.window_indices(t0, t0 + -t0 / 3.0);
    let inner_pos = signs[inner.clone()].iter().any(|&s| s > 0);
    let inner_neg = signs[inner].iter().any(|&s| s < 0);
    LyapunovCensus {
        positive: signs.iter().filter(|&&s| s > 0).count(),
        negative: signs.iter().filter(|&&s| s < 0).count(),
        zero: signs.iter().filter(|&&s| s == 0).count(),
        sign_changes: changes,
        inner_one_signed: !(inner_pos && inner_neg),
        w,
    }
}
