//! Asymptotic quantities fitted on computed profiles: the singularity slope
//! `γ̂`, the additive constant `ℓ̂`, log-log corrections, exponential decay
//! rates and Hölder exponents at the origin.
//!
//! All fits are ordinary least squares over a window `[lo, hi]` of the `t`
//! grid. The default window is the deepest third of the grid without the 5%
//! nearest to `T0`, where the artificial inner closure acts.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::math::{abs, ln, sqrt};
use crate::radial::RadialProfile;

/// A log-log coefficient above this magnitude marks a `γ̂` fit as biased.
pub const LOGLOG_SUSPECT: f64 = 0.05;

/// Fits with a relative residual above this are not trusted.
pub const MAX_RELATIVE_RESIDUAL: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SingularityFit {
    pub gamma_hat: f64,
    pub ell_hat: f64,
    pub beta_hat: Option<f64>,
    /// Coefficient of `−ln(1 − t)`; only set by [`fit_critical`].
    pub loglog_coefficient: Option<f64>,
    pub window: (f64, f64),
    /// `‖residual‖₂ / ‖u − ū‖₂` over the window.
    pub residual: f64,
    /// The window still carries a visible `ln(1 − t)` drift.
    pub loglog_suspect: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayFit {
    pub beta_hat: f64,
    pub window: (f64, f64),
    pub residual: f64,
    /// The series touched zero and its envelope of local maxima was fitted.
    pub envelope: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HolderFit {
    pub exponent: f64,
    pub u0: f64,
    pub window: (f64, f64),
    pub residual: f64,
    /// `1 − 2/q`, valid for every solution.
    pub general_bound: f64,
    /// `(q − 2)/(q − 1)`, valid for radial solutions.
    pub radial_bound: f64,
}

/// Deepest third of `[t₀, t_end]` minus its first 5%.
pub fn default_window(t: &[f64]) -> (f64, f64) {
    let t0 = t[0];
    let span = t[t.len() - 1] - t0;
    (t0 + 0.05 * span, t0 + span / 3.0)
}

fn window_range(t: &[f64], window: (f64, f64), min_points: usize) -> Result<core::ops::Range<usize>> {
    let (lo, hi) = window;
    if !(hi - lo >= 2.0) {
        return Err(Error::InvalidWindow("window shorter than 2 in t"));
    }
    let a = t.iter().position(|&x| x >= lo).unwrap_or(t.len());
    let b = t.iter().rposition(|&x| x <= hi).map_or(0, |i| i + 1);
    if b < a + min_points {
        return Err(Error::InvalidWindow("too few grid points in the window"));
    }
    Ok(a..b)
}

fn relative_residual(res: &[f64], y: &[f64]) -> f64 {
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

/// Least squares `u ≈ γ̂·(−t) + ℓ̂` on sampled data.
pub fn fit_gamma_samples(t: &[f64], u: &[f64], window: (f64, f64)) -> Result<SingularityFit> {
    let idx = window_range(t, window, 3)?;
    let ts = &t[idx.clone()];
    let y = &u[idx];
    let x: Vec<f64> = ts.iter().map(|v| -v).collect();
    let one = alloc::vec![1.0; ts.len()];
    let (c, res) = least_squares(&[x.clone(), one.clone()], y).map_err(|_| Error::InvalidWindow("degenerate window"))?;
    let loglog = {
        let ll: Vec<f64> = ts.iter().map(|v| -ln(1.0 - v)).collect();
        least_squares(&[x, ll, one], y).map(|(c3, _)| c3[1]).ok()
    };
    Ok(SingularityFit {
        gamma_hat: c[0],
        ell_hat: c[1],
        beta_hat: None,
        loglog_coefficient: None,
        window,
        residual: relative_residual(&res, y),
        loglog_suspect: loglog.is_some_and(|v| abs(v) > LOGLOG_SUSPECT),
    })
}

/// Slope of `u` against `ln(1/r)` on a profile.
pub fn fit_gamma(profile: &RadialProfile, window: Option<(f64, f64)>) -> Result<SingularityFit> {
    let w = window.unwrap_or_else(|| default_window(&profile.t));
    fit_gamma_samples(&profile.t, &profile.u(), w)
}

/// Critical-mode fit on sampled data with reaction exponent `b`.
///
/// The log-log coefficient comes from the free fit
/// `u ≈ γ̂·(−t) + c·(−ln(1−t)) + k`, which is biased by the slow decay of
/// `λ − ℓ`. `γ̂` and `ℓ̂` come from
/// `u + (2/b)·ln(1−t) ≈ γ̂·(−t) + ℓ̂ + C₁/(1−t) + C₂/(1−t)²`.
pub fn fit_critical_samples(t: &[f64], u: &[f64], b: f64, window: (f64, f64)) -> Result<SingularityFit> {
    let idx = window_range(t, window, 4)?;
    let ts = &t[idx.clone()];
    let y = &u[idx];
    let x: Vec<f64> = ts.iter().map(|v| -v).collect();
    let ll: Vec<f64> = ts.iter().map(|v| -ln(1.0 - v)).collect();
    let one = alloc::vec![1.0; ts.len()];
    let (c, res) = least_squares(&[x.clone(), ll, one.clone()], y)
        .map_err(|_| Error::InvalidWindow("collinear regressors on this window"))?;
    let s = 2.0 / b;
    let fixed: Vec<f64> = ts.iter().zip(y).map(|(t, u)| u + s * ln(1.0 - t)).collect();
    let inv: Vec<f64> = ts.iter().map(|t| 1.0 / (1.0 - t)).collect();
    let inv2: Vec<f64> = inv.iter().map(|v| v * v).collect();
    let (cl, _) = least_squares(&[x, one, inv, inv2], &fixed)
        .map_err(|_| Error::InvalidWindow("degenerate window"))?;
    Ok(SingularityFit {
        gamma_hat: cl[0],
        ell_hat: cl[1],
        beta_hat: None,
        loglog_coefficient: Some(c[1]),
        window,
        residual: relative_residual(&res, y),
        loglog_suspect: abs(c[1]) > LOGLOG_SUSPECT,
    })
}

pub fn fit_critical(profile: &RadialProfile, window: Option<(f64, f64)>) -> Result<SingularityFit> {
    let w = window.unwrap_or_else(|| default_window(&profile.t));
    fit_critical_samples(&profile.t, &profile.u(), profile.params.b, w)
}

/// Rate `β̂` of `s(t) ≈ C·e^{β̂t}` from the slope of `ln s`.
///
/// A series that is not strictly positive on the window is replaced by the
/// local maxima of `|s|`, and the fit is flagged.
pub fn fit_decay(t: &[f64], s: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    let idx = window_range(t, window, 3)?;
    let ts = &t[idx.clone()];
    let ss = &s[idx];
    let envelope = ss.iter().any(|v| !(*v > 0.0));
    let (x, y): (Vec<f64>, Vec<f64>) = if envelope {
        let a: Vec<f64> = ss.iter().map(|v| abs(*v)).collect();
        (1..a.len() - 1)
            .filter(|&i| a[i] > 0.0 && a[i] >= a[i - 1] && a[i] >= a[i + 1])
            .map(|i| (ts[i], ln(a[i])))
            .unzip()
    } else {
        ts.iter().zip(ss).map(|(t, v)| (*t, ln(*v))).unzip()
    };
    if x.len() < 2 {
        return Err(Error::InvalidWindow("too few local maxima for an envelope"));
    }
    let one = alloc::vec![1.0; x.len()];
    let (c, res) = least_squares(&[x, one], &y).map_err(|_| Error::InvalidWindow("degenerate window"))?;
    Ok(DecayFit {
        beta_hat: c[0],
        window,
        residual: relative_residual(&res, &y),
        envelope,
    })
}

/// Limit `ℓ̂ = lim w` and decay rate of `|w − ℓ̂|` from samples of `w`, `w_t`.
///
/// The rate is read off `|w_t|` first; for `w = ℓ + A·e^{βt}` one has
/// `ℓ = w − w_t/β`, which is averaged over the window.
pub fn fit_limit_decay(t: &[f64], w: &[f64], w_t: &[f64], window: (f64, f64)) -> Result<(f64, DecayFit)> {
    let slope: Vec<f64> = w_t.iter().map(|v| abs(*v)).collect();
    let d = fit_decay(t, &slope, window)?;
    let idx = window_range(t, window, 3)?;
    let n = idx.len() as f64;
    let ell = idx.map(|i| w[i] - w_t[i] / d.beta_hat).sum::<f64>() / n;
    let gap: Vec<f64> = w.iter().map(|v| abs(v - ell)).collect();
    Ok((ell, fit_decay(t, &gap, window)?))
}

/// Exponent `α` of `|u(r) − u(0)| ≈ c·r^α` on sampled data.
///
/// `u(0)` is Aitken-extrapolated from three deep samples spaced equally in
/// `t`. The fit uses the samples with `t ≤ −1` where `|u − u(0)|` stands
/// clear of round-off.
pub fn holder_exponent_samples(t: &[f64], u: &[f64], q: f64) -> Result<HolderFit> {
    let n = t.len();
    if n < 48 {
        return Err(Error::InvalidWindow("too few samples for a Hölder fit"));
    }
    let k = n / 16;
    let (u1, u2, u3) = (u[0], u[k], u[2 * k]);
    let scale = 1.0 + abs(u1);
    let d = u1 + u3 - 2.0 * u2;
    let u0 = if abs(u2 - u1) <= 1e-13 * scale {
        u1
    } else if abs(d) <= 1e-13 * scale || (u2 - u1) * (u3 - u2) <= 0.0 {
        return Err(Error::InvalidWindow("u(0) extrapolation unstable"));
    } else {
        u1 - (u2 - u1) * (u2 - u1) / d
    };
    let floor = 1e-9 * scale;
    let (x, y): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(u)
        .filter(|(t, v)| **t <= -1.0 && abs(**v - u0) > floor)
        .map(|(t, v)| (*t, ln(abs(v - u0))))
        .unzip();
    if x.len() < 3 || x[x.len() - 1] - x[0] < 2.0 {
        return Err(Error::InvalidWindow("no resolvable Hölder window"));
    }
    let window = (x[0], x[x.len() - 1]);
    let one = alloc::vec![1.0; x.len()];
    let (c, res) = least_squares(&[x, one], &y).map_err(|_| Error::InvalidWindow("degenerate window"))?;
    Ok(HolderFit {
        exponent: c[0],
        u0,
        window,
        residual: relative_residual(&res, &y),
        general_bound: 1.0 - 2.0 / q,
        radial_bound: (q - 2.0) / (q - 1.0),
    })
}

pub fn holder_exponent(profile: &RadialProfile) -> Result<HolderFit> {
    holder_exponent_samples(&profile.t, &profile.u(), profile.params.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;

    fn grid(t0: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| t0 - t0 * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn exact_line() {
        let t = grid(-18.0, 1000);
        let u: Vec<f64> = t.iter().map(|t| -1.3 * t + 0.2).collect();
        let f = fit_gamma_samples(&t, &u, (-16.0, -10.0)).unwrap();
        assert!(abs(f.gamma_hat - 1.3) < 1e-13 && abs(f.ell_hat - 0.2) < 1e-12);
        assert!(f.residual < 1e-12 && !f.loglog_suspect);
    }

    #[test]
    fn loglog_term_is_flagged_and_recovered() {
        let t = grid(-18.0, 2000);
        let u: Vec<f64> = t.iter().map(|t| -t - ln(1.0 - t)).collect();
        assert!(fit_gamma_samples(&t, &u, default_window(&t)).unwrap().loglog_suspect);
        let f = fit_critical_samples(&t, &u, 2.0, default_window(&t)).unwrap();
        assert!(abs(f.gamma_hat - 1.0) < 1e-10);
        assert!(abs(f.loglog_coefficient.unwrap() - 1.0) < 1e-9);
        assert!(abs(f.ell_hat) < 1e-10);
    }

    #[test]
    fn short_window_is_rejected() {
        let t = grid(-18.0, 100);
        assert!(matches!(
            fit_gamma_samples(&t, &t, (-5.0, -4.0)),
            Err(Error::InvalidWindow(_))
        ));
    }

    #[test]
    fn decay_of_pure_and_oscillating_series() {
        let t = grid(-18.0, 3000);
        let s: Vec<f64> = t.iter().map(|t| 3.0 * exp(0.5 * t)).collect();
        let d = fit_decay(&t, &s, (-17.0, -5.0)).unwrap();
        assert!(abs(d.beta_hat - 0.5) < 1e-12 && !d.envelope);
        let o: Vec<f64> = t.iter().map(|t| exp(0.5 * t) * libm::cos(3.0 * t)).collect();
        let d = fit_decay(&t, &o, (-17.0, -5.0)).unwrap();
        assert!(d.envelope && abs(d.beta_hat - 0.5) < 2e-2, "{d:?}");
    }

    #[test]
    fn limit_and_rate() {
        let t = grid(-18.0, 3000);
        let w: Vec<f64> = t.iter().map(|t| 0.7 - 2.0 * exp(0.5 * t)).collect();
        let wt: Vec<f64> = t.iter().map(|t| -exp(0.5 * t)).collect();
        let (ell, d) = fit_limit_decay(&t, &w, &wt, (-17.0, -6.0)).unwrap();
        assert!(abs(ell - 0.7) < 1e-12 && abs(d.beta_hat - 0.5) < 1e-9);
    }

    #[test]
    fn holder_of_square_root() {
        let t = grid(-18.0, 4096);
        let u: Vec<f64> = t.iter().map(|t| 1.0 - exp(0.5 * t)).collect();
        let h = holder_exponent_samples(&t, &u, 3.0).unwrap();
        assert!(abs(h.exponent - 0.5) < 1e-9, "{h:?}");
        assert!(abs(h.radial_bound - 0.5) < 1e-15 && abs(h.general_bound - 1.0 / 3.0) < 1e-15);
    }
}
