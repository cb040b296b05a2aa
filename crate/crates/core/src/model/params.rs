use crate::error::{Error, Result};
use crate::math::ln;

/// The two regimes separated by `q = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Regime {
    Subcritical,
    Supercritical,
}

pub fn classify_regime(q: f64) -> Result<Regime> {
    if !q.is_finite() || q <= 1.0 {
        Err(Error::InvalidParameter("q must exceed 1"))
    } else if q == 2.0 {
        Err(Error::CriticalExponentUnsupported)
    } else if q < 2.0 {
        Ok(Regime::Subcritical)
    } else {
        Ok(Regime::Supercritical)
    }
}

/// Coefficients `(m, a, b, q)` and an optional singularity strength `γ`.
///
/// [`ProblemParams::new`] enforces `m, a, b > 0`, `q > 1`, `q ≠ 2`, and
/// `0 ≤ γ ≤ 2/b` when `q < 2`. [`ProblemParams::emden_companion`] and
/// [`ProblemParams::harmonic`] build the degenerate limits `m = 0` and
/// `a = m = 0` used as baselines.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProblemParams {
    pub m: f64,
    pub a: f64,
    pub b: f64,
    pub q: f64,
    pub gamma: Option<f64>,
}

impl ProblemParams {
    pub fn new(m: f64, a: f64, b: f64, q: f64, gamma: Option<f64>) -> Result<Self> {
        if !(m > 0.0 && a > 0.0) {
            return Err(Error::InvalidParameter("m and a must be positive"));
        }
        let p = ProblemParams { m, a, b, q, gamma };
        p.validate()?;
        Ok(p)
    }

    /// Same coefficients with the gradient term switched off.
    pub fn emden_companion(&self) -> Self {
        ProblemParams { m: 0.0, ..*self }
    }

    /// `a = m = 0`: radial solutions are affine in `t`.
    pub fn harmonic(b: f64, q: f64) -> Self {
        ProblemParams {
            m: 0.0,
            a: 0.0,
            b,
            q,
            gamma: None,
        }
    }

    pub fn with_gamma(&self, gamma: Option<f64>) -> Result<Self> {
        let p = ProblemParams { gamma, ..*self };
        p.validate()?;
        Ok(p)
    }

    /// Checks the invariants, allowing the `m = 0` and `a = 0` limits.
    pub fn validate(&self) -> Result<()> {
        let finite = [self.m, self.a, self.b, self.q]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("coefficients must be finite"));
        }
        if self.m < 0.0 || self.a < 0.0 {
            return Err(Error::InvalidParameter("m and a must be positive"));
        }
        if self.b <= 0.0 {
            return Err(Error::InvalidParameter("b must be positive"));
        }
        if self.m > 0.0 && self.a == 0.0 {
            return Err(Error::InvalidParameter("a must be positive"));
        }
        let regime = classify_regime(self.q)?;
        if let Some(g) = self.gamma {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::InvalidParameter("gamma must be nonnegative"));
            }
            if regime == Regime::Subcritical && g > self.two_over_b() * (1.0 + 1e-14) {
                return Err(Error::InvalidParameter("gamma must not exceed 2/b"));
            }
        }
        Ok(())
    }

    pub fn regime(&self) -> Result<Regime> {
        classify_regime(self.q)
    }

    pub fn is_emden(&self) -> bool {
        self.m == 0.0
    }

    pub fn two_over_b(&self) -> f64 {
        2.0 / self.b
    }

    pub fn q_over_b(&self) -> f64 {
        self.q / self.b
    }

    /// `(1/b)·ln(2/(ab))`, the additive constant of the critical branch.
    pub fn critical_constant(&self) -> f64 {
        ln(2.0 / (self.a * self.b)) / self.b
    }

    /// `β = min{2 − q, 2 − bγ}`.
    pub fn decay_rate(&self, gamma: f64) -> f64 {
        crate::math::min(2.0 - self.q, 2.0 - self.b * gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        assert_eq!(classify_regime(1.5), Ok(Regime::Subcritical));
        assert_eq!(classify_regime(3.0), Ok(Regime::Supercritical));
        assert_eq!(
            classify_regime(2.0),
            Err(Error::CriticalExponentUnsupported)
        );
        assert!(matches!(
            classify_regime(1.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn gamma_range() {
        assert!(ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(2.0)).is_ok());
        assert!(ProblemParams::new(1.0, 1.0, 1.0, 1.5, Some(2.5)).is_err());
        assert!(ProblemParams::new(1.0, 1.0, 1.0, 3.0, Some(3.0)).is_ok());
        assert!(ProblemParams::new(0.0, 1.0, 1.0, 1.5, None).is_err());
        assert!(ProblemParams::new(1.0, 1.0, 1.0, 2.0, None).is_err());
    }
}
