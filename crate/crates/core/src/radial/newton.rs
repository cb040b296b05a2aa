//! Damped Newton collocation on a uniform `t` grid.

use alloc::vec::Vec;

use super::ode::RadialOde;
use super::{InnerClosure, SolveStats, SolverConfig};
use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::math::{abs, max, sqrt};

pub(crate) struct Collocation<'a> {
    pub ode: &'a RadialOde,
    pub t: &'a [f64],
    pub h: f64,
    pub closure: InnerClosure,
    pub outer: f64,
}

impl Collocation<'_> {
    /// Inner ghost-point data `(w_t(T0), ∂w_t/∂w₀)` for derivative closures.
    fn inner_slope(&self, w0: f64) -> Result<(f64, f64)> {
        match self.closure {
            InnerClosure::Asymptotic => self.ode.asymptotic_slope(self.t[0], w0),
            InnerClosure::Neumann => Ok((0.0, 0.0)),
            InnerClosure::Dirichlet(_) => unreachable!(),
        }
    }

    fn inner_dirichlet(&self) -> Option<f64> {
        match self.closure {
            InnerClosure::Dirichlet(v) => Some(v),
            _ => None,
        }
    }

    /// Residual rows scaled by `h²`; optionally fills the tridiagonal Jacobian.
    pub fn residual(&self, w: &[f64], mut jac: Option<&mut BandMatrix>) -> Result<Vec<f64>> {
        let n = w.len();
        let h = self.h;
        let h2 = h * h;
        let mut f = alloc::vec![0.0; n];
        if let Some(v) = self.inner_dirichlet() {
            f[0] = w[0] - v;
            if let Some(j) = jac.as_deref_mut() {
                j.set(0, 0, 1.0);
            }
        } else {
            let (g, dg) = self.inner_slope(w[0])?;
            let fo = self.ode.forcing(self.t[0], w[0], g);
            f[0] = fo.scale * (2.0 * w[1] - 2.0 * w[0] - 2.0 * h * g) - h2 * fo.g;
            if let Some(j) = jac.as_deref_mut() {
                j.set(0, 0, fo.scale * (-2.0 - 2.0 * h * dg) - h2 * (fo.g_w + fo.g_wt * dg));
                j.set(0, 1, 2.0 * fo.scale);
            }
        }
        for i in 1..n - 1 {
            let wt = (w[i + 1] - w[i - 1]) / (2.0 * h);
            let fo = self.ode.forcing(self.t[i], w[i], wt);
            f[i] = fo.scale * (w[i + 1] - 2.0 * w[i] + w[i - 1]) - h2 * fo.g;
            if let Some(j) = jac.as_deref_mut() {
                j.set(i, i - 1, fo.scale + 0.5 * h * fo.g_wt);
                j.set(i, i, -2.0 * fo.scale - h2 * fo.g_w);
                j.set(i, i + 1, fo.scale - 0.5 * h * fo.g_wt);
            }
        }
        f[n - 1] = w[n - 1] - self.outer;
        if let Some(j) = jac {
            j.set(n - 1, n - 1, 1.0);
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFault("non-finite collocation residual"));
        }
        Ok(f)
    }

    /// Stored derivative: closure value at `T0`, centred inside, one-sided at `0`.
    pub fn derivative(&self, w: &[f64]) -> Result<Vec<f64>> {
        let n = w.len();
        let h = self.h;
        let mut d = alloc::vec![0.0; n];
        d[0] = match self.inner_dirichlet() {
            Some(_) => (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h),
            None => self.inner_slope(w[0])?.0,
        };
        for i in 1..n - 1 {
            d[i] = (w[i + 1] - w[i - 1]) / (2.0 * h);
        }
        d[n - 1] = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h);
        Ok(d)
    }

    pub fn solve(&self, seed: Vec<f64>, cfg: &SolverConfig, stats: &mut SolveStats) -> Result<Vec<f64>> {
        let n = seed.len();
        let mut w = seed;
        let norm2 = |f: &[f64]| sqrt(f.iter().map(|v| v * v).sum::<f64>());
        let mut jac = BandMatrix::zeros(n, 1, 1);
        let mut f = self.residual(&w, Some(&mut jac))?;
        let mut fnorm = norm2(&f);
        let mut finf = crate::math::max_abs(&f);
        for _ in 0..cfg.newton_max_iter {
            if finf <= cfg.newton_tol {
                return Ok(self.polish(w, &f, jac, stats));
            }
            stats.newton_iterations += 1;
            stats.linear_solves += 1;
            let lu = jac.factor()?;
            let mut step: Vec<f64> = f.iter().map(|v| -v).collect();
            lu.solve(&mut step);
            let mut alpha = 1.0;
            let accepted = loop {
                let trial: Vec<f64> = w.iter().zip(&step).map(|(a, s)| a + alpha * s).collect();
                let mut jt = BandMatrix::zeros(n, 1, 1);
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
                    // A stalled line search at round-off level still counts.
                    let step_size = crate::math::max_abs(&step);
                    let scale = max(1.0, crate::math::max_abs(&w));
                    if finf <= 1e3 * cfg.newton_tol && step_size <= 1e-12 * scale {
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
            residual: abs(finf),
        })
    }

    /// One extra full step once the tolerance is met, kept if it does not
    /// raise the residual. The scaled rows are badly conditioned, so the
    /// tolerance alone leaves errors well above round-off.
    fn polish(&self, w: Vec<f64>, f: &[f64], jac: BandMatrix, stats: &mut SolveStats) -> Vec<f64> {
        let finf = crate::math::max_abs(f);
        stats.residual_max = finf;
        let Ok(lu) = jac.factor() else { return w };
        let mut step: Vec<f64> = f.iter().map(|v| -v).collect();
        lu.solve(&mut step);
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
