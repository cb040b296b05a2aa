//! Verification of computed and closed-form solutions: distributional mass,
//! integrability, the `2π` quadrature identity, sandwich margins, residual
//! sign certificates, gradient-bound censuses and the closed-form oracle
//! suite.
//!
//! Quantities over the disk are written in `t = ln r`, where
//! `dx = 2π·r²·dt` after angular averaging.

use alloc::vec::Vec;

use crate::asymptotics::MAX_RELATIVE_RESIDUAL;
use crate::error::{Error, Result};
use crate::interp::Pchip;
use crate::linalg::least_squares;
use crate::math::{abs, exp, ln, max, min, pow, powq, sqrt, PI};
use crate::model::{
    eikonal_wc_jet, eikonal_winf_jet, emden_critical_exact_jet, intro_profile, truncated_power_jet, upper_branch,
    lower_branch, ClosedForm, Jet, ProblemParams, Regime, Terms,
};
use crate::quadrature::{integrate_to_infinity, simpson_uniform};
use crate::radial::RadialProfile;

/// Fitted exponents with `|c| < DEAD_ZONE` are not read as a sign.
pub const DEAD_ZONE: f64 = 0.05;

/// Radial test functions `ζ` with `ζ(0) = 1` and `ζ, ζ′, ζ″` vanishing at
/// `r = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TestFunction {
    /// `(1 − r²)³`
    #[default]
    Cubic,
    /// `(1 − r²)⁴`
    Quartic,
    /// `1` on `r ≤ ρ`, then a quintic smoothstep in `r²` down to `0` at `r = 1`.
    Plateau(f64),
}

impl TestFunction {
    /// `(f, f′, f″)` as a function of `s = r²`.
    fn of_s(&self, s: f64) -> (f64, f64, f64) {
        let s = min(max(s, 0.0), 1.0);
        match *self {
            TestFunction::Cubic => {
                let d = 1.0 - s;
                (d * d * d, -3.0 * d * d, 6.0 * d)
            }
            TestFunction::Quartic => {
                let d = 1.0 - s;
                (d * d * d * d, -4.0 * d * d * d, 12.0 * d * d)
            }
            TestFunction::Plateau(rho) => {
                let s0 = rho * rho;
                if s <= s0 {
                    return (1.0, 0.0, 0.0);
                }
                let w = 1.0 - s0;
                let x = (s - s0) / w;
                let x2 = x * x;
                let step = x2 * x * (10.0 - 15.0 * x + 6.0 * x2);
                let d1 = 30.0 * x2 * (1.0 - x) * (1.0 - x);
                let d2 = 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
                (1.0 - step, -d1 / w, -d2 / (w * w))
            }
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.of_s(r * r).0
    }

    /// `Δζ = 4f′(s) + 4s·f″(s)` with `s = r²`.
    pub fn laplacian(&self, r: f64) -> f64 {
        let s = r * r;
        let (_, d1, d2) = self.of_s(s);
        4.0 * d1 + 4.0 * s * d2
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TestFunction::Plateau(rho) if !(0.0..1.0).contains(&rho) => {
                Err(Error::InvalidInput("plateau radius must lie in [0, 1)"))
            }
            _ => Ok(()),
        }
    }
}

/// Angular means of the solution on a uniform `t` grid, already weighted
/// by the area factor `r²`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassInput {
    pub t: Vec<f64>,
    /// `ū(t)`
    pub u_mean: Vec<f64>,
    /// mean of `a·e^{bu}·r²`
    pub absorption: Vec<f64>,
    /// mean of `m·|∇u|^q·r²`
    pub reaction: Vec<f64>,
}

impl MassInput {
    pub fn from_profile(profile: &RadialProfile) -> Self {
        let p = &profile.params;
        let n = profile.len();
        let mut u_mean = Vec::with_capacity(n);
        let mut absorption = Vec::with_capacity(n);
        let mut reaction = Vec::with_capacity(n);
        for i in 0..n {
            let t = profile.t[i];
            let (u, ut) = profile.u_at(i);
            u_mean.push(u);
            absorption.push(if p.a == 0.0 { 0.0 } else { p.a * exp(p.b * u + 2.0 * t) });
            reaction.push(if p.m == 0.0 {
                0.0
            } else {
                p.m * powq(ut, p.q) * exp((2.0 - p.q) * t)
            });
        }
        MassInput {
            t: profile.t.clone(),
            u_mean,
            absorption,
            reaction,
        }
    }

    fn check(&self) -> Result<f64> {
        let n = self.t.len();
        if n < 8 || self.u_mean.len() != n || self.absorption.len() != n || self.reaction.len() != n {
            return Err(Error::InvalidInput("mass input needs equal arrays of length >= 8"));
        }
        let h = (self.t[n - 1] - self.t[0]) / (n - 1) as f64;
        if self.t.windows(2).any(|w| abs(w[1] - w[0] - h) > 1e-9 * max(1.0, abs(h))) {
            return Err(Error::InvalidInput("mass quadrature needs a uniform t grid"));
        }
        if abs(self.t[n - 1]) > 1e-12 {
            return Err(Error::InvalidInput("grid must end at t = 0"));
        }
        Ok(h)
    }
}

/// Verdict on the integrability of one `t`-integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Integrability {
    Integrable,
    Divergent,
    Inconclusive,
}

/// Asymptotic model `g(t) ≈ ±exp(c₀ + c₁t)` or `±exp(c₀)·(1 − t)^κ`,
/// whichever fits better on the deepest quarter of the grid. The power model
/// is forced when `|c₁|` is inside the dead zone.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TailFit {
    pub exponent: f64,
    /// `κ`, set when the power model was chosen.
    pub log_exponent: Option<f64>,
    pub residual: f64,
    pub sign: f64,
    /// `∫_{−∞}^{T0} g`, infinite when the model diverges.
    pub tail: f64,
    /// The integrand is negligible (below `1e−30`) on the fit window.
    pub vanishes: bool,
}

impl TailFit {
    pub fn integrability(&self) -> Integrability {
        if self.vanishes {
            return Integrability::Integrable;
        }
        match self.log_exponent {
            None if self.exponent > 0.0 => Integrability::Integrable,
            None => Integrability::Divergent,
            Some(k) if k < -1.0 - DEAD_ZONE => Integrability::Integrable,
            Some(k) if k > -1.0 + DEAD_ZONE => Integrability::Divergent,
            Some(_) => Integrability::Inconclusive,
        }
    }
}

fn relative_spread(res: &[f64], y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let spread = sqrt(y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>());
    let r = sqrt(res.iter().map(|v| v * v).sum::<f64>());
    if spread > 0.0 {
        r / spread
    } else if r == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Fits the asymptotic model of `g` on the deepest quarter of `t`.
pub fn fit_tail(t: &[f64], g: &[f64]) -> Result<TailFit> {
    let n = t.len();
    let k = max(4.0, (n / 4) as f64) as usize;
    let (ts, gs) = (&t[..k], &g[..k]);
    let big = gs.iter().fold(0.0, |m, v| max(m, abs(*v)));
    // Below this the piece contributes nothing at double precision.
    if big <= 1e-30 {
        return Ok(TailFit {
            exponent: 0.0,
            log_exponent: None,
            residual: 0.0,
            sign: 0.0,
            tail: 0.0,
            vanishes: true,
        });
    }
    let sign = if gs[0] >= 0.0 { 1.0 } else { -1.0 };
    if gs.iter().any(|v| *v * sign <= 0.0) {
        return Err(Error::UnreliableTail {
            residual: f64::INFINITY,
            partial: f64::NAN,
        });
    }
    let y: Vec<f64> = gs.iter().map(|v| ln(abs(*v))).collect();
    let one = alloc::vec![1.0; k];
    let (c, res) = least_squares(&[one.clone(), ts.to_vec()], &y)?;
    let t0 = t[0];
    let lt: Vec<f64> = ts.iter().map(|v| ln(1.0 - v)).collect();
    let (c2, res2) = least_squares(&[one, lt], &y)?;
    let (r1, r2) = (relative_spread(&res, &y), relative_spread(&res2, &y));
    if abs(c[1]) >= DEAD_ZONE && r1 <= r2 {
        let tail = if c[1] > 0.0 {
            sign * exp(c[0] + c[1] * t0) / c[1]
        } else {
            sign * f64::INFINITY
        };
        return Ok(TailFit {
            exponent: c[1],
            log_exponent: None,
            residual: r1,
            sign,
            tail,
            vanishes: false,
        });
    }
    let kappa = c2[1];
    // ∫_{−∞}^{T0} (1 − t)^κ dt = (1 − T0)^{κ+1} / (−κ − 1).
    let tail = if kappa < -1.0 {
        sign * exp(c2[0]) * pow(1.0 - t0, kappa + 1.0) / (-kappa - 1.0)
    } else {
        sign * f64::INFINITY
    };
    Ok(TailFit {
        exponent: c[1],
        log_exponent: Some(kappa),
        residual: r2,
        sign,
        tail,
        vanishes: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MassEstimate {
    /// `∫(−uΔζ + (a·e^{bu} − m|∇u|^q)ζ) dx / 2π`.
    pub mass: f64,
    /// Contribution of `[T0, 0]`.
    pub window: f64,
    /// Extrapolated contribution of `(−∞, T0)`.
    pub tail: f64,
    pub test_fn: TestFunction,
}

/// Distributional mass over `2π`, which equals `γ` for a `γ`-singular
/// solution.
pub fn distributional_mass(input: &MassInput, test_fn: TestFunction) -> Result<MassEstimate> {
    test_fn.validate()?;
    let h = input.check()?;
    let n = input.t.len();
    let mut pieces: [Vec<f64>; 3] = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    for i in 0..n {
        let t = input.t[i];
        let r = exp(t);
        let z = test_fn.value(r);
        pieces[0].push(-input.u_mean[i] * test_fn.laplacian(r) * r * r);
        pieces[1].push(input.absorption[i] * z);
        pieces[2].push(-input.reaction[i] * z);
    }
    let mut window = 0.0;
    let mut tail = 0.0;
    let mut worst = 0.0;
    let mut unreliable = false;
    for piece in &pieces {
        let part = simpson_uniform(h, piece);
        window += part;
        match fit_tail(&input.t, piece) {
            Ok(fit) => {
                worst = max(worst, fit.residual);
                if !fit.tail.is_finite() || fit.residual > MAX_RELATIVE_RESIDUAL {
                    unreliable = true;
                } else {
                    tail += fit.tail;
                }
            }
            // A sign change this deep is harmless only if negligible.
            Err(Error::UnreliableTail { .. }) => {
                let deep = piece[..n / 4].iter().fold(0.0, |m, v| max(m, abs(*v)));
                if deep > 1e-12 * max(1.0, abs(part)) {
                    unreliable = true;
                    worst = f64::INFINITY;
                }
            }
            Err(e) => return Err(e),
        }
    }
    if unreliable {
        return Err(Error::UnreliableTail {
            residual: worst,
            partial: window,
        });
    }
    Ok(MassEstimate {
        mass: window + tail,
        window,
        tail,
        test_fn,
    })
}

pub fn profile_mass(profile: &RadialProfile, test_fn: TestFunction) -> Result<MassEstimate> {
    distributional_mass(&MassInput::from_profile(profile), test_fn)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PieceReport {
    pub verdict: Integrability,
    pub fit: TailFit,
    /// `∫_{T0}^0` of the `t`-integrand.
    pub window_integral: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntegrabilityReport {
    /// `e^{bu}·r²`
    pub exp: PieceReport,
    /// `|∇u|^q·r²`
    pub grad: PieceReport,
}

/// Integrability of `e^{bu}` and `|∇u|^q` from the decay of their
/// `t`-integrands.
pub fn integrability_report(profile: &RadialProfile) -> Result<IntegrabilityReport> {
    let p = &profile.params;
    let n = profile.len();
    let mut e = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for i in 0..n {
        let t = profile.t[i];
        let (u, ut) = profile.u_at(i);
        e.push(exp(p.b * u + 2.0 * t));
        g.push(powq(ut, p.q) * exp((2.0 - p.q) * t));
    }
    let h = profile.h();
    let piece = |v: &[f64]| -> Result<PieceReport> {
        let fit = fit_tail(&profile.t, v)?;
        if fit.residual > MAX_RELATIVE_RESIDUAL {
            return Err(Error::UnreliableTail {
                residual: fit.residual,
                partial: simpson_uniform(h, v),
            });
        }
        Ok(PieceReport {
            verdict: fit.integrability(),
            fit,
            window_integral: simpson_uniform(h, v),
        })
    };
    Ok(IntegrabilityReport {
        exp: piece(&e)?,
        grad: piece(&g)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentityCheck {
    /// `2π·∫_{−∞}^0 dt/(1 − t)²`
    pub value: f64,
    /// `2π·∫_{T0}^0`
    pub truncated: f64,
    /// `2π/(1 − T0)`, the exact tail below `T0`.
    pub exact_tail: f64,
    pub t0: f64,
}

/// `∫_{B₁} dx / (|x|²(1 − ln|x|)²) = 2π`, evaluated in `t`.
pub fn quadrature_identity_check(t0: f64) -> IdentityCheck {
    let f = |t: f64| 1.0 / ((1.0 - t) * (1.0 - t));
    let full = integrate_to_infinity(|s| f(-s), 0.0, 1e-15, 1e-14);
    let part = crate::quadrature::integrate(f, t0, 0.0, 1e-15, 1e-14);
    IdentityCheck {
        value: 2.0 * PI * full.value,
        truncated: 2.0 * PI * part.value,
        exact_tail: 2.0 * PI / (1.0 - t0),
        t0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SandwichMargins {
    /// `min(u − lower)`
    pub lower: f64,
    /// `min(upper − u)`
    pub upper: f64,
    pub lower_at: f64,
    pub upper_at: f64,
    pub points: usize,
}

/// Margins of `lower ≤ u ≤ upper` on the grid `t`, with barriers given as
/// functions of `t`.
pub fn sandwich_check_fn(
    t: &[f64],
    u: &[f64],
    lower: impl Fn(f64) -> Option<f64>,
    upper: impl Fn(f64) -> Option<f64>,
) -> Result<SandwichMargins> {
    let mut m = SandwichMargins {
        lower: f64::INFINITY,
        upper: f64::INFINITY,
        lower_at: f64::NAN,
        upper_at: f64::NAN,
        points: 0,
    };
    for (&ti, &ui) in t.iter().zip(u) {
        let (Some(lo), Some(hi)) = (lower(ti), upper(ti)) else {
            continue;
        };
        m.points += 1;
        if ui - lo < m.lower {
            m.lower = ui - lo;
            m.lower_at = ti;
        }
        if hi - ui < m.upper {
            m.upper = hi - ui;
            m.upper_at = ti;
        }
    }
    if m.points < 2 {
        return Err(Error::InvalidInput("barriers do not overlap the solution grid"));
    }
    Ok(m)
}

/// Sampled barriers `(t, v)` resampled onto the solution grid by monotone
/// cubic interpolation.
pub fn sandwich_check(
    t: &[f64],
    u: &[f64],
    lower: (&[f64], &[f64]),
    upper: (&[f64], &[f64]),
) -> Result<SandwichMargins> {
    let lo = Pchip::new(lower.0, lower.1)?;
    let hi = Pchip::new(upper.0, upper.1)?;
    let inside = |p: &Pchip, x: f64| {
        let (a, b) = p.domain();
        x >= a - 1e-12 && x <= b + 1e-12
    };
    sandwich_check_fn(
        t,
        u,
        |x| inside(&lo, x).then(|| lo.eval(x)),
        |x| inside(&hi, x).then(|| hi.eval(x)),
    )
}

/// Sign class of a residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SignClass {
    Supersolution,
    Subsolution,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Certification {
    pub class: SignClass,
    pub min: f64,
    pub max: f64,
    pub argmin: f64,
    pub argmax: f64,
    pub samples: usize,
}

impl Certification {
    fn from_values(points: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut c = Certification {
            class: SignClass::Neither,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            argmin: f64::NAN,
            argmax: f64::NAN,
            samples: 0,
        };
        for (x, e) in points {
            c.samples += 1;
            if e < c.min {
                c.min = e;
                c.argmin = x;
            }
            if e > c.max {
                c.max = e;
                c.argmax = x;
            }
        }
        c.class = if c.samples == 0 {
            SignClass::Neither
        } else if c.min >= 0.0 && c.max > 0.0 {
            SignClass::Supersolution
        } else if c.max <= 0.0 && c.min < 0.0 {
            SignClass::Subsolution
        } else {
            SignClass::Neither
        };
        c
    }

    /// Distance to the wrong sign for the class found; `max|E|` for `Neither`.
    pub fn margin(&self) -> f64 {
        match self.class {
            SignClass::Supersolution => self.min,
            SignClass::Subsolution => -self.max,
            SignClass::Neither => max(abs(self.min), abs(self.max)),
        }
    }
}

/// Which operator a candidate is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Operator {
    /// `−Δv + a·e^{bv} − m|∇v|^q`
    Full,
    /// `−Δv + a·e^{bv}`
    Emden,
}

/// Residual sign of a closed form on the radii `rs`, reported as `r²·E`
/// so that values near the origin stay comparable.
pub fn certify_subsuper(candidate: &ClosedForm, op: Operator, rs: &[f64]) -> Result<Certification> {
    let mut vals = Vec::with_capacity(rs.len());
    for &r in rs {
        let jet = candidate.jet(r)?;
        let terms = Terms::of(&jet, &candidate.params);
        let e = match op {
            Operator::Full => terms.full(),
            Operator::Emden => terms.emden(),
        };
        if !e.is_finite() {
            return Err(Error::NumericalFault("non-finite residual"));
        }
        vals.push((r, r * r * e));
    }
    Ok(Certification::from_values(vals.into_iter()))
}

/// Residual sign of a computed profile, `r²·E(u)` from second differences
/// of `w` at interior grid points.
pub fn certify_profile(profile: &RadialProfile) -> Certification {
    let p = &profile.params;
    let n = profile.len();
    let h = profile.h();
    let pts = (1..n - 1).map(|i| {
        let t = profile.t[i];
        let w_tt = (profile.w[i + 1] - 2.0 * profile.w[i] + profile.w[i - 1]) / (h * h);
        let (u, ut) = profile.u_at(i);
        // u_tt = w_tt except on the critical branch, where u = λ − c·ln(1−t) − c·t.
        let u_tt = match profile.branch {
            crate::model::Branch::LambdaCritical => {
                let c = p.two_over_b();
                w_tt + c / ((1.0 - t) * (1.0 - t))
            }
            _ => w_tt,
        };
        let absorption = if p.a == 0.0 { 0.0 } else { p.a * exp(p.b * u + 2.0 * t) };
        let reaction = if p.m == 0.0 {
            0.0
        } else {
            p.m * powq(ut, p.q) * exp((2.0 - p.q) * t)
        };
        (t, -u_tt + absorption - reaction)
    });
    Certification::from_values(pts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradientCensus {
    /// `sup r|u′|` over the inner half of the grid.
    pub sup_r_grad: f64,
    /// `inf |u′|·r^{1/(q−1)}` over the window, for `q > 2`.
    pub inf_lower: Option<f64>,
    /// `((q−2)/(m(q−1)))^{1/(q−1)}`, for `q > 2`.
    pub lower_reference: Option<f64>,
    pub window: (f64, f64),
}

/// Upper and lower gradient constants of a radial profile.
pub fn gradient_bound_census(profile: &RadialProfile, window: Option<(f64, f64)>) -> Result<GradientCensus> {
    let p = &profile.params;
    let n = profile.len();
    let window = window.unwrap_or_else(|| crate::asymptotics::default_window(&profile.t));
    let mid = 0.5 * (profile.t[0] + profile.t[n - 1]);
    let sup = (0..n)
        .filter(|&i| profile.t[i] <= mid)
        .fold(0.0, |m, i| max(m, abs(profile.u_at(i).1)));
    let supercritical = p.regime()? == Regime::Supercritical && p.m > 0.0;
    let (inf_lower, lower_reference) = if supercritical {
        let e = (p.q - 2.0) / (p.q - 1.0);
        let idx = profile.window_indices(window.0, window.1);
        if idx.is_empty() {
            return Err(Error::InvalidWindow("census window misses the grid"));
        }
        // |u′|·r^{1/(q−1)} = |u_t|·e^{−t(q−2)/(q−1)}.
        let inf = idx.fold(f64::INFINITY, |m, i| {
            min(m, abs(profile.u_at(i).1) * exp(-e * profile.t[i]))
        });
        (Some(inf), Some(pow(e / p.m, 1.0 / (p.q - 1.0))))
    } else {
        (None, None)
    };
    Ok(GradientCensus {
        sup_r_grad: sup,
        inf_lower,
        lower_reference,
        window,
    })
}

/// `K(b)`: `1` for `b ≥ 2`, `2/b` for `0 < b ≤ 2`.
pub fn loglog_k(b: f64) -> f64 {
    if b >= 2.0 {
        1.0
    } else {
        2.0 / b
    }
}

/// Barriers for a singular `q > 2` profile at `t`:
/// `(2/b)·(−t) − K(b)·ln(1 − t)` and `(q/b)·(−t) + (q/b)·[(ln β)₊ − ln β]`
/// with `β = b/(q·m^{1/q})`.
pub fn supercritical_barriers(params: &ProblemParams, t: f64) -> (f64, f64) {
    let lower = params.two_over_b() * -t - loglog_k(params.b) * ln(1.0 - t);
    let beta = ln(params.b / (params.q * pow(params.m, 1.0 / params.q)));
    let upper = params.q_over_b() * (-t + max(beta, 0.0) - beta);
    (lower, upper)
}

/// One line of the oracle suite.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OracleCheck {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
    /// Eikonal residual of the introduction's explicit profile with `m ≠ a`;
    /// zero only when `m = a`.
    pub intro_discrepancy: f64,
    pub note: &'static str,
}

impl OracleReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Options of the oracle suite; `flip_reaction` injects a sign error in
/// `m|∇u|^q` as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleOptions {
    pub flip_reaction: bool,
}

/// Parameter sets `(m, a, b, q)` for the eikonal checks.
pub const EIKONAL_SETS: [(f64, f64, f64, f64); 6] = [
    (1.0, 1.0, 1.0, 3.0),
    (2.0, 1.0, 1.0, 3.0),
    (1.0, 3.0, 0.5, 2.5),
    (0.5, 2.0, 2.0, 4.0),
    (1.0, 1.0, 1.0, 1.5),
    (3.0, 0.7, 1.3, 6.0),
];

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (ln(lo), ln(hi));
    (0..n).map(move |i| exp(a + (b - a) * i as f64 / (n - 1) as f64))
}

fn signed_reaction(terms: &Terms, flip: bool) -> f64 {
    if flip {
        -terms.reaction
    } else {
        terms.reaction
    }
}

/// Exact-solution residual suites and the `2π` identity.
pub fn oracle_suite(opts: OracleOptions) -> Result<OracleReport> {
    let mut checks = Vec::new();
    let mut push = |name, value: f64, tolerance| {
        checks.push(OracleCheck {
            name,
            value,
            tolerance,
            pass: value.is_finite() && value < tolerance,
        })
    };
    let eik_rel = |jet: &Jet, p: &ProblemParams| {
        let terms = Terms::of(jet, p);
        let react = signed_reaction(&terms, opts.flip_reaction);
        abs(terms.absorption - react) / (terms.absorption + abs(react))
    };
    let (mut wc, mut winf, mut full) = (0.0, 0.0, 0.0);
    for &(m, a, b, q) in &EIKONAL_SETS {
        let p = ProblemParams::new(m, a, b, q, None)?;
        for r in log_grid(1e-8, 10.0, 400) {
            for c in [0.0, 5.0] {
                wc = max(wc, eik_rel(&eikonal_wc_jet(&p, c, r), &p));
            }
            let jet = eikonal_winf_jet(&p, r)?;
            winf = max(winf, eik_rel(&jet, &p));
            let terms = Terms::of(&jet, &p);
            let e = terms.diffusion + terms.absorption - signed_reaction(&terms, opts.flip_reaction);
            full = max(full, abs(e) / terms.scale());
        }
    }
    push("eikonal w_c relative residual", wc, 1e-12);
    push("eikonal w_inf relative residual", winf, 1e-12);
    push("full equation on w_inf, relative", full, 1e-10);

    let mut emden = 0.0;
    for (a, b) in [(1.0, 2.0), (2.0, 1.0), (4.0, 0.5)] {
        let p = ProblemParams::new(1.0, a, b, 1.5, None)?.emden_companion();
        for r in log_grid(1e-6, 1.0 - 1e-6, 400) {
            let terms = Terms::of(&emden_critical_exact_jet(&p, r)?, &p);
            emden = max(emden, abs(terms.emden()) / terms.scale());
        }
    }
    push("critical Emden exact profile, relative", emden, 1e-10);

    let id = quadrature_identity_check(-18.0);
    push("2pi identity", abs(id.value - 2.0 * PI), 1e-10);
    push(
        "2pi identity tail at T0 = -18",
        abs(id.value - id.truncated - id.exact_tail),
        1e-10,
    );

    let mut junction: f64 = 0.0;
    for q in [2.5, 3.0, 4.0] {
        for s in [1.0, 10.0, 100.0] {
            let xi = s * s;
            let lo = lower_branch(xi, q);
            let hi = upper_branch(xi, s, q);
            let rel = |x: f64, y: f64| abs(x - y) / max(abs(x), abs(y));
            junction = junction
                .max(rel(lo.value, hi.value))
                .max(rel(lo.d1, hi.d1))
                .max(rel(lo.d2, hi.d2));
            let v = truncated_power_jet(1.0001 * xi, s, q).value;
            junction = junction.max(if v >= lo.value { 0.0 } else { 1.0 });
        }
    }
    push("truncated power junction, relative", junction, 1e-6);

    let p = ProblemParams::new(2.0, 1.0, 1.0, 3.0, None)?;
    let intro_discrepancy = log_grid(1e-3, 1.0, 50).fold(0.0, |m: f64, r| {
        let h = 1e-6 * r;
        let v_r = (intro_profile(&p, r + h) - intro_profile(&p, r - h)) / (2.0 * h);
        let a = p.a * exp(p.b * intro_profile(&p, r));
        let rr = p.m * powq(v_r, p.q);
        max(m, abs(a - rr) / (a + rr))
    });
    Ok(OracleReport {
        checks,
        intro_discrepancy,
        note: "the introduction's explicit profile (q/b)(m/a)^{1/q} ln(q/(b|x|)) solves the eikonal \
               equation only when m = a; the eikonal section's w_inf is exact for all parameters and is used",
    })
}

/// Which barriers a sandwich check used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SandwichKind {
    /// `v_γ ≤ u ≤ v_γ + m·c^q·η` with `v_γ` the pure absorption solution.
    Emden,
    /// `ψ_{κ₂} ≤ u ≤ ψ_{κ₁} + m·c^q·η`.
    PsiKappa,
    /// `(2/b)ln(1/r) − K(b)ln(1 − ln r) ≤ u ≤ (q/b)ln(1/r) + const`.
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SandwichReport {
    pub kind: SandwichKind,
    pub margins: SandwichMargins,
    /// Gradient constant `c` with `r|∇u| ≤ c`, when the upper barrier uses it.
    pub c: Option<f64>,
}

/// Which checks [`verify_profile`] runs.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct VerifyOptions {
    pub mass: bool,
    pub integrability: bool,
    pub sandwich: bool,
    pub apriori: bool,
    pub census: bool,
    pub test_function: TestFunction,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mass: true,
            integrability: true,
            sandwich: true,
            apriori: true,
            census: true,
            test_function: TestFunction::Cubic,
        }
    }
}

/// Quantitative evidence for one radial profile. Checks that could not be
/// evaluated leave `None` and a line in `issues`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct VerificationReport {
    pub mass: Option<MassEstimate>,
    /// `γ` for singular subcritical branches, `0` for bounded ones.
    pub mass_target: Option<f64>,
    pub integrability: Option<IntegrabilityReport>,
    pub sandwich: Option<SandwichReport>,
    /// `min(bound − u)` for the a priori bound over `r ∈ (0, 1)`.
    pub apriori_margin: Option<f64>,
    pub census: Option<GradientCensus>,
    /// Sign of `r²·E(u)` on the grid.
    pub residual_sign: Certification,
    pub issues: Vec<alloc::string::String>,
}

/// Runs the checks selected in `opts` on a computed profile. `config` is
/// used for the auxiliary pure absorption solve of the subcritical sandwich.
pub fn verify_profile(
    profile: &RadialProfile,
    opts: &VerifyOptions,
    config: &crate::radial::SolverConfig,
) -> Result<VerificationReport> {
    use crate::model::Branch;
    use alloc::format;
    profile.check()?;
    let p = profile.params;
    p.validate()?;
    let mut issues = Vec::new();
    let mass_target = match profile.branch {
        Branch::ShiftGamma(g) => Some(g),
        Branch::LambdaCritical | Branch::ShiftTwoOverB => Some(p.two_over_b()),
        Branch::NoShift => Some(0.0),
        Branch::ShiftQOverB => None,
    };
    let mass = if opts.mass {
        match profile_mass(profile, opts.test_function) {
            Ok(m) => Some(m),
            Err(e) => {
                issues.push(format!("mass: {e}"));
                None
            }
        }
    } else {
        None
    };
    let integrability = if opts.integrability {
        match integrability_report(profile) {
            Ok(r) => Some(r),
            Err(e) => {
                issues.push(format!("integrability: {e}"));
                None
            }
        }
    } else {
        None
    };
    let census = if opts.census {
        match gradient_bound_census(profile, None) {
            Ok(c) => Some(c),
            Err(e) => {
                issues.push(format!("census: {e}"));
                None
            }
        }
    } else {
        None
    };
    let u = profile.u();
    let apriori_margin = if opts.apriori {
        let mut margin = f64::INFINITY;
        for (t, v) in profile.t.iter().zip(&u) {
            let r = exp(*t);
            if r < 1.0 {
                match crate::model::apriori_bound(&p, r) {
                    Ok(b) => margin = min(margin, b - v),
                    Err(e) => {
                        issues.push(format!("a priori bound: {e}"));
                        break;
                    }
                }
            }
        }
        margin.is_finite().then_some(margin)
    } else {
        None
    };
    let sandwich = if opts.sandwich {
        match sandwich_for(profile, &u, config) {
            Ok(s) => s,
            Err(e) => {
                issues.push(format!("sandwich: {e}"));
                None
            }
        }
    } else {
        None
    };
    Ok(VerificationReport {
        mass,
        mass_target,
        integrability,
        sandwich,
        apriori_margin,
        census,
        residual_sign: certify_profile(profile),
        issues,
    })
}

/// `sup r|u′|` over the whole grid.
fn gradient_constant(profile: &RadialProfile) -> f64 {
    (0..profile.len()).fold(0.0, |m, i| max(m, abs(profile.u_at(i).1)))
}

fn sandwich_for(
    profile: &RadialProfile,
    u: &[f64],
    config: &crate::radial::SolverConfig,
) -> Result<Option<SandwichReport>> {
    use crate::model::{eta_profile, kappa_bounds, psi_kappa, Branch};
    let p = profile.params;
    let t = &profile.t;
    let phi0 = u[u.len() - 1];
    let eta = |tt: f64| eta_profile(p.q, exp(tt)).ok();
    match profile.branch {
        Branch::ShiftGamma(g) => {
            let cfg = crate::radial::SolverConfig {
                t0: t[0],
                n_points: t.len(),
                ..*config
            };
            let v = crate::radial::solve_emden(&p, g, phi0, &cfg)?;
            let vu = v.u();
            let c = gradient_constant(profile);
            let k = p.m * powq(c, p.q);
            let margins = sandwich_check_fn(
                t,
                u,
                |tt| index_of(t, tt).map(|i| vu[i]),
                |tt| Some(vu[index_of(t, tt)?] + k * eta(tt)?),
            )?;
            Ok(Some(SandwichReport {
                kind: SandwichKind::Emden,
                margins,
                c: Some(c),
            }))
        }
        Branch::LambdaCritical => {
            let (k1, k2) = kappa_bounds(&p);
            let c = gradient_constant(profile);
            let k = p.m * powq(c, p.q);
            let margins = sandwich_check_fn(
                t,
                u,
                |tt| Some(psi_kappa(&p, k2, exp(tt)).0),
                |tt| Some(psi_kappa(&p, k1, exp(tt)).0 + k * eta(tt)?),
            )?;
            Ok(Some(SandwichReport {
                kind: SandwichKind::PsiKappa,
                margins,
                c: Some(c),
            }))
        }
        Branch::ShiftQOverB | Branch::NoShift if p.regime()? == Regime::Supercritical => {
            let margins = sandwich_check_fn(
                t,
                u,
                |tt| Some(supercritical_barriers(&p, tt).0),
                |tt| Some(supercritical_barriers(&p, tt).1),
            )?;
            Ok(Some(SandwichReport {
                kind: SandwichKind::Supercritical,
                margins,
                c: None,
            }))
        }
        _ => Ok(None),
    }
}

/// Index of `x` in the uniform grid `t`, if it is a grid point.
fn index_of(t: &[f64], x: f64) -> Option<usize> {
    let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    let i = crate::math::round((x - t[0]) / h) as usize;
    (i < t.len() && abs(t[i] - x) <= 1e-9 * h).then_some(i)
}
