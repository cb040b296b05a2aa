//! The radial equation in a branch variable, written as
//! `A(t)·w_tt = G(t, w, w_t)`.
//!
//! For a shift `σ` (`w = u + σt`, `θ = 2 − bσ`):
//!
//! ```text
//! w_tt = a·e^{θt}·e^{bw} − m·e^{(2−q)t}·|σ − w_t|^q
//! ```
//!
//! The `q/b` branch is multiplied through by `e^{(q−2)t}` so that neither
//! side grows as `t → −∞`; the critical `λ` branch is multiplied by `(1 − t)²`.

use crate::error::{Error, Result};
use crate::ivp::{dopri5, Tolerances};
use crate::math::{abs, dpowq, exp, powq};
use crate::model::{truncated_power_jet, Branch, ProblemParams, Regime};

#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialOde {
    pub params: ProblemParams,
    pub branch: Branch,
    sigma: f64,
    /// Extra exponential weight on both sides (`q − 2` for the `q/b` branch).
    weight: f64,
    critical: bool,
    /// Truncation threshold `s` for `r|∇u| = |u_t|`, if any.
    pub threshold: Option<f64>,
}

/// `G` and its partial derivatives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Forcing {
    pub scale: f64,
    pub g: f64,
    pub g_w: f64,
    pub g_wt: f64,
}

impl RadialOde {
    pub fn new(params: ProblemParams, branch: Branch) -> Result<Self> {
        params.validate()?;
        branch.check(&params)?;
        let weight = match branch {
            Branch::ShiftQOverB => params.q - 2.0,
            _ => 0.0,
        };
        Ok(RadialOde {
            params,
            branch,
            sigma: branch.slope(&params),
            weight,
            critical: matches!(branch, Branch::LambdaCritical),
            threshold: None,
        })
    }

    /// `u_t` as a function of `(t, w_t)`; `∂u_t/∂w_t = 1`.
    #[inline]
    pub fn u_t(&self, t: f64, wt: f64) -> f64 {
        if self.critical {
            wt + self.sigma / (1.0 - t) - self.sigma
        } else {
            wt - self.sigma
        }
    }

    pub fn forcing(&self, t: f64, w: f64, wt: f64) -> Forcing {
        let p = &self.params;
        let ut = self.u_t(t, wt);
        if self.critical {
            let l2 = (1.0 - t) * (1.0 - t);
            let ab = p.a * exp(p.b * w);
            let (gr, gr_d) = self.reaction(t, ut, 2.0 - p.q, l2);
            return Forcing {
                scale: l2,
                g: ab - self.sigma - gr,
                g_w: p.b * ab,
                g_wt: -gr_d,
            };
        }
        let theta = 2.0 - p.b * self.sigma;
        let ab = if p.a == 0.0 {
            0.0
        } else {
            p.a * exp(p.b * w + (theta + self.weight) * t)
        };
        let (gr, gr_d) = self.reaction(t, ut, 2.0 - p.q + self.weight, 1.0);
        Forcing {
            scale: if self.weight == 0.0 { 1.0 } else { exp(self.weight * t) },
            g: ab - gr,
            g_w: p.b * ab,
            g_wt: -gr_d,
        }
    }

    /// `pre·m·e^{κt}·|u_t|^q` (or its truncated version) and its `u_t`-derivative.
    fn reaction(&self, t: f64, ut: f64, kappa: f64, pre: f64) -> (f64, f64) {
        let p = &self.params;
        if p.m == 0.0 {
            return (0.0, 0.0);
        }
        match self.threshold {
            None => {
                let c = pre * p.m * exp(kappa * t);
                (c * powq(ut, p.q), c * dpowq(ut, p.q))
            }
            Some(s) => {
                // |u_t|^q replaced by φ_s(u_t²).
                let j = truncated_power_jet(ut * ut, s, p.q);
                let c = pre * p.m * exp(kappa * t);
                (c * j.value, c * j.d1 * 2.0 * ut)
            }
        }
    }

    /// `w_tt` for the first-order system used by shooting.
    pub fn acceleration(&self, t: f64, w: f64, wt: f64) -> f64 {
        let f = self.forcing(t, w, wt);
        f.g / f.scale
    }

    /// Frozen-coefficient inner Robin data `w_t(T0) = g(w(T0))` and `g′`.
    pub fn asymptotic_slope(&self, t0: f64, w: f64) -> Result<(f64, f64)> {
        let p = &self.params;
        if self.critical {
            let d = 1.0 - t0;
            let (f, df) = critical_manifold(p.b, w - p.critical_constant())?;
            return Ok((-f / d, -df / d));
        }
        if matches!(self.branch, Branch::ShiftQOverB) {
            return Err(Error::PreconditionViolation(
                "the q/b branch uses a Dirichlet inner condition",
            ));
        }
        let theta = 2.0 - p.b * self.sigma;
        if theta <= 0.0 {
            return Err(Error::PreconditionViolation("asymptotic closure needs b·gamma < 2"));
        }
        let ab = p.a * exp(p.b * w + theta * t0) / theta;
        let grad = if p.m == 0.0 || self.sigma == 0.0 {
            0.0
        } else {
            if p.regime()? == Regime::Supercritical {
                return Err(Error::PreconditionViolation(
                    "asymptotic closure with a positive shift needs q < 2",
                ));
            }
            p.m * exp((2.0 - p.q) * t0) * powq(self.sigma, p.q) / (2.0 - p.q)
        };
        Ok((ab - grad, p.b * ab))
    }
}

/// Decaying manifold `V′ = F(V)` of `V″ − V′ = (2/b)(e^{bV} − 1)`, the
/// critical equation in `τ = ln(1 − t)` once the gradient term is dropped.
/// Returns `F(v)` and `F′(v)`.
pub(crate) fn critical_manifold(b: f64, v: f64) -> Result<(f64, f64)> {
    let series = |v: f64| -v - 0.25 * b * v * v - b * b * v * v * v / 24.0;
    let slope = |v: f64, f: f64| (f + 2.0 * (exp(b * v) - 1.0) / b) / f;
    let start = 1e-3 / b;
    if abs(v) <= start {
        let f = series(v);
        return Ok((f, if v == 0.0 { -1.0 } else { slope(v, f) }));
    }
    let sign = if v > 0.0 { 1.0 } else { -1.0 };
    let tol = Tolerances {
        rtol: 1e-13,
        atol: 1e-14,
        ..Tolerances::default()
    };
    let x = abs(v);
    let (ys, _) = dopri5(
        |x, y: &[f64; 1]| [sign * slope(sign * x, y[0])],
        start,
        [series(sign * start)],
        x,
        &[x],
        &tol,
    )
    .map_err(|_| Error::NumericalFault("critical inner manifold"))?;
    let f = ys[0][0];
    if !(f.is_finite() && f * v < 0.0) {
        return Err(Error::NumericalFault("critical inner manifold"));
    }
    Ok((f, slope(v, f)))
}

#[cfg(test)]
mod tests {
    use super::critical_manifold;
    use crate::ivp::{dopri5, Tolerances};
    use crate::math::exp;

    #[test]
    fn manifold_trajectory_decays() {
        // Start on the manifold, integrate V″ = V′ + (2/b)(e^{bV} − 1) forward
        // in τ and check that V returns to the manifold and shrinks.
        for &(b, v0) in &[(1.0, 0.8), (2.0, -0.4), (0.5, 1.5)] {
            let (f0, _) = critical_manifold(b, v0).unwrap();
            let rhs = |_: f64, y: &[f64; 2]| [y[1], y[1] + 2.0 * (exp(b * y[0]) - 1.0) / b];
            let (ys, _) = dopri5(rhs, 0.0, [v0, f0], 3.0, &[3.0], &Tolerances::default()).unwrap();
            let (f3, _) = critical_manifold(b, ys[0][0]).unwrap();
            assert!((f3 - ys[0][1]).abs() < 1e-6 * (1.0 + f3.abs()), "b={b} v0={v0}");
            assert!(ys[0][0].abs() < v0.abs() * 0.2);
        }
    }
}
