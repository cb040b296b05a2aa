//! Log-variable changes of unknown.
//!
//! With `t = ln r`, every branch writes `w = u + σ·t` for a slope `σ`:
//! `ShiftGamma(γ)` uses `σ = γ`, `ShiftTwoOverB` uses `2/b`, `ShiftQOverB`
//! uses `q/b` and `NoShift` uses `0`. `LambdaCritical` adds the log-log
//! correction, `λ = u + (2/b)·t + (2/b)·ln(1 − t)`.

use alloc::vec::Vec;

use super::params::{ProblemParams, Regime};
use crate::error::{Error, Result};
use crate::math::{abs, exp, ln};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Branch {
    ShiftGamma(f64),
    ShiftTwoOverB,
    ShiftQOverB,
    NoShift,
    LambdaCritical,
}

impl Branch {
    /// Rejects combinations that make no sense for `params`.
    pub fn check(&self, params: &ProblemParams) -> Result<()> {
        match *self {
            Branch::ShiftGamma(g) => {
                if !g.is_finite() || g < 0.0 {
                    return Err(Error::BranchMismatch("shift must be nonnegative"));
                }
                if let Some(pg) = params.gamma {
                    if abs(pg - g) > 1e-12 * (1.0 + g) {
                        return Err(Error::BranchMismatch("shift differs from params.gamma"));
                    }
                }
                Ok(())
            }
            Branch::ShiftQOverB => {
                if params.regime()? != Regime::Supercritical {
                    return Err(Error::BranchMismatch("q/b shift needs q > 2"));
                }
                Ok(())
            }
            Branch::LambdaCritical => {
                if params.regime()? != Regime::Subcritical {
                    return Err(Error::BranchMismatch("critical branch needs q < 2"));
                }
                if let Some(g) = params.gamma {
                    if abs(g - params.two_over_b()) > 1e-12 * params.two_over_b() {
                        return Err(Error::BranchMismatch("critical branch needs gamma = 2/b"));
                    }
                }
                Ok(())
            }
            Branch::ShiftTwoOverB | Branch::NoShift => Ok(()),
        }
    }

    /// The slope `σ` in `w = u + σt` (for `LambdaCritical`, `2/b`).
    pub fn slope(&self, params: &ProblemParams) -> f64 {
        match *self {
            Branch::ShiftGamma(g) => g,
            Branch::ShiftTwoOverB | Branch::LambdaCritical => params.two_over_b(),
            Branch::ShiftQOverB => params.q_over_b(),
            Branch::NoShift => 0.0,
        }
    }

    /// `(u, u_t)` from `(w, w_t)` at `t`.
    pub fn to_u(&self, params: &ProblemParams, t: f64, w: f64, w_t: f64) -> (f64, f64) {
        let s = self.slope(params);
        match self {
            Branch::LambdaCritical => {
                let c = params.two_over_b();
                (w - c * ln(1.0 - t) - s * t, w_t + c / (1.0 - t) - s)
            }
            _ => (w - s * t, w_t - s),
        }
    }

    /// `(w, w_t)` from `(u, u_t)` at `t`.
    pub fn from_u(&self, params: &ProblemParams, t: f64, u: f64, u_t: f64) -> (f64, f64) {
        let s = self.slope(params);
        match self {
            Branch::LambdaCritical => {
                let c = params.two_over_b();
                (u + s * t + c * ln(1.0 - t), u_t + s - c / (1.0 - t))
            }
            _ => (u + s * t, u_t + s),
        }
    }
}

/// A profile sampled in `r`: values and radial derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct RSamples {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub u_r: Vec<f64>,
}

/// A profile sampled in `t` in a branch variable.
#[derive(Debug, Clone, PartialEq)]
pub struct TSamples {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
    pub w_t: Vec<f64>,
}

pub fn transform_log(params: &ProblemParams, branch: Branch, input: &RSamples) -> Result<TSamples> {
    branch.check(params)?;
    let n = input.r.len();
    if input.u.len() != n || input.u_r.len() != n {
        return Err(Error::InvalidInput("length mismatch"));
    }
    let mut out = TSamples {
        t: Vec::with_capacity(n),
        w: Vec::with_capacity(n),
        w_t: Vec::with_capacity(n),
    };
    for i in 0..n {
        let r = input.r[i];
        if !(r > 0.0) {
            return Err(Error::InvalidRadius(r));
        }
        let t = ln(r);
        let (w, w_t) = branch.from_u(params, t, input.u[i], r * input.u_r[i]);
        out.t.push(t);
        out.w.push(w);
        out.w_t.push(w_t);
    }
    Ok(out)
}

pub fn inverse_log(params: &ProblemParams, branch: Branch, input: &TSamples) -> Result<RSamples> {
    branch.check(params)?;
    let n = input.t.len();
    if input.w.len() != n || input.w_t.len() != n {
        return Err(Error::InvalidInput("length mismatch"));
    }
    let mut out = RSamples {
        r: Vec::with_capacity(n),
        u: Vec::with_capacity(n),
        u_r: Vec::with_capacity(n),
    };
    for i in 0..n {
        let t = input.t[i];
        if t > 0.0 {
            return Err(Error::InvalidRadius(exp(t)));
        }
        let r = exp(t);
        let (u, u_t) = branch.to_u(params, t, input.w[i], input.w_t[i]);
        out.r.push(r);
        out.u.push(u);
        out.u_r.push(u_t / r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p() -> ProblemParams {
        ProblemParams::new(1.0, 1.0, 1.0, 1.5, None).unwrap()
    }

    fn log_profile() -> RSamples {
        let r = vec![0.1, 0.25, 0.5, 0.9];
        let u = r.iter().map(|&r: &f64| -ln(r)).collect();
        let u_r = r.iter().map(|&r: &f64| -1.0 / r).collect();
        RSamples { r, u, u_r }
    }

    #[test]
    fn no_shift_gives_minus_t() {
        let out = transform_log(&p(), Branch::NoShift, &log_profile()).unwrap();
        for (t, w) in out.t.iter().zip(&out.w) {
            assert!((w + t).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_shift_cancels() {
        let out = transform_log(&p(), Branch::ShiftGamma(1.0), &log_profile()).unwrap();
        assert!(out.w.iter().all(|w| w.abs() < 1e-15));
        assert!(out.w_t.iter().all(|w| w.abs() < 1e-15));
    }

    #[test]
    fn mismatched_branches() {
        let g = p().with_gamma(Some(1.0)).unwrap();
        assert!(Branch::LambdaCritical.check(&g).is_err());
        assert!(Branch::ShiftQOverB.check(&p()).is_err());
        assert!(Branch::ShiftGamma(0.5).check(&g).is_err());
    }
}
