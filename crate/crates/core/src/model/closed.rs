//! Closed-form profiles with analytic derivatives.
//!
//! Each profile is returned as a [`Jet`]: value, radial derivative and
//! Laplacian, with the Laplacian simplified by hand so that residuals are
//! limited by round-off only.

use super::bessel::EigenData;
use super::params::{ProblemParams, Regime};
use crate::error::{Error, Result};
use crate::math::{abs, exp, ln, max, pow, powq};

/// Value, `∂_r` and `Δ` of a radial function at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub r: f64,
    pub v: f64,
    pub v_r: f64,
    pub lap: f64,
}

/// The three terms of `E(v) = −Δv + a·e^{bv} − m|∇v|^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Terms {
    pub diffusion: f64,
    pub absorption: f64,
    pub reaction: f64,
}

impl Terms {
    pub fn of(jet: &Jet, params: &ProblemParams) -> Terms {
        Terms {
            diffusion: -jet.lap,
            absorption: params.a * exp(params.b * jet.v),
            reaction: params.m * powq(jet.v_r, params.q),
        }
    }

    pub fn full(&self) -> f64 {
        self.diffusion + self.absorption - self.reaction
    }

    pub fn emden(&self) -> f64 {
        self.diffusion + self.absorption
    }

    pub fn eikonal(&self) -> f64 {
        self.absorption - self.reaction
    }

    /// Sum of magnitudes, the natural scale for relative residuals.
    pub fn scale(&self) -> f64 {
        abs(self.diffusion) + self.absorption + self.reaction
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidRadius(r))
    }
}

/// `K = q·m^{1/q} / (b·a^{1/q})`, so that `w_∞ = (q/b)·ln(K/r)`.
pub fn eikonal_root_radius(params: &ProblemParams) -> f64 {
    let q = params.q;
    q * pow(params.m, 1.0 / q) / (params.b * pow(params.a, 1.0 / q))
}

/// `w_∞(r) = (q/b)·ln(q·m^{1/q} / (b·a^{1/q}·r))`.
pub fn eikonal_winf(params: &ProblemParams, r: f64) -> Result<f64> {
    Ok(eikonal_winf_jet(params, r)?.v)
}

pub fn eikonal_winf_jet(params: &ProblemParams, r: f64) -> Result<Jet> {
    check_radius(r)?;
    let s = params.q_over_b();
    Ok(Jet {
        r,
        v: s * ln(eikonal_root_radius(params) / r),
        v_r: -s / r,
        lap: 0.0,
    })
}

/// The eikonal family `w_c` with `w_c(0) = c`.
pub fn eikonal_wc(params: &ProblemParams, c: f64, r: f64) -> f64 {
    eikonal_wc_jet(params, c, r).v
}

pub fn eikonal_wc_jet(params: &ProblemParams, c: f64, r: f64) -> Jet {
    let q = params.q;
    let s = params.q_over_b();
    let p = q * pow(params.m, 1.0 / q);
    let bb = params.b * pow(params.a, 1.0 / q);
    let e = p * exp(-params.b * c / q);
    let d = bb * r + e;
    // v_r = −s·B/d, v_rr = s·B²/d², Δv = s·B·(B·r − d)/(r·d²) = −s·B·e/(r·d²).
    let lap = if r > 0.0 { -s * bb * e / (r * d * d) } else { f64::NEG_INFINITY };
    Jet {
        r,
        v: if r == 0.0 { c } else { s * ln(p / d) },
        v_r: -s * bb / d,
        lap,
    }
}

/// `(2/b)·(ln(1/r) − ln(1 − ln r))`, the exact Emden solution when `ab = 2`.
pub fn emden_critical_exact(params: &ProblemParams, r: f64) -> Result<f64> {
    Ok(emden_critical_exact_jet(params, r)?.v)
}

pub fn emden_critical_exact_jet(params: &ProblemParams, r: f64) -> Result<Jet> {
    if abs(params.a * params.b - 2.0) > 1e-12 {
        return Err(Error::PreconditionViolation("requires a·b = 2"));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidRadius(r));
    }
    Ok(psi_kappa_jet(params, 0.0, r))
}

/// `ψ_κ(r) = (2/b)(ln(1/r) − ln(1 − ln r)) + κ` and its Emden residual
/// `r^{−2}·(a·e^{bκ} − 2/b)/(1 − ln r)²`.
pub fn psi_kappa(params: &ProblemParams, kappa: f64, r: f64) -> (f64, f64) {
    let t = ln(r);
    let l = 1.0 - t;
    let res = (params.a * exp(params.b * kappa) - params.two_over_b()) / (r * r * l * l);
    (psi_kappa_jet(params, kappa, r).v, res)
}

pub fn psi_kappa_jet(params: &ProblemParams, kappa: f64, r: f64) -> Jet {
    let c = params.two_over_b();
    let t = ln(r);
    let l = 1.0 - t;
    // In t: v_t = c·(1/l − 1), v_tt = c/l²; Δv = v_tt/r².
    Jet {
        r,
        v: c * (-t - ln(l)) + kappa,
        v_r: c * (1.0 / l - 1.0) / r,
        lap: c / (l * l * r * r),
    }
}

/// `κ₁ = max{0, ℓ}`, `κ₂ = min{0, ℓ}` with `ℓ = (1/b)·ln(2/(ab))`.
pub fn kappa_bounds(params: &ProblemParams) -> (f64, f64) {
    let l = params.critical_constant();
    (max(0.0, l), crate::math::min(0.0, l))
}

/// `η(r) = (1 − r^{2−q})/(2−q)²`, the solution of `−Δη = r^{−q}`, `η(1) = 0`.
pub fn eta_profile(q: f64, r: f64) -> Result<f64> {
    Ok(eta_profile_jet(q, r)?.v)
}

pub fn eta_profile_jet(q: f64, r: f64) -> Result<Jet> {
    if q == 2.0 {
        return Err(Error::PreconditionViolation("eta needs q != 2"));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidRadius(r));
    }
    let k = 2.0 - q;
    if r == 0.0 {
        if q > 2.0 {
            return Err(Error::InvalidRadius(r));
        }
        return Ok(Jet {
            r,
            v: 1.0 / (k * k),
            v_r: 0.0,
            lap: f64::NEG_INFINITY,
        });
    }
    let p = pow(r, k);
    Ok(Jet {
        r,
        v: (1.0 - p) / (k * k),
        v_r: -p / (k * r),
        lap: -p / (r * r),
    })
}

/// `h_A(r) = γ·ln(1/r) − A·r^θ·φ₁(r)` with `θ = 2 − bγ`, and the residual
/// of `−Δh_A + a·e^{b·h_A}` for `r > 0`.
pub fn subsol_h_a(params: &ProblemParams, gamma: f64, amp: f64, r: f64) -> Result<(f64, f64)> {
    let jet = subsol_h_a_jet(params, gamma, amp, r, &EigenData::new())?;
    Ok((jet.v, Terms::of(&jet, params).emden()))
}

pub fn subsol_h_a_jet(
    params: &ProblemParams,
    gamma: f64,
    amp: f64,
    r: f64,
    eig: &EigenData,
) -> Result<Jet> {
    if !(gamma > 0.0 && gamma < params.two_over_b()) {
        return Err(Error::PreconditionViolation("h_A needs 0 < gamma < 2/b"));
    }
    if !(amp > 0.0) {
        return Err(Error::PreconditionViolation("h_A needs A > 0"));
    }
    check_radius(r)?;
    let th = 2.0 - params.b * gamma;
    let phi = eig.phi1(r);
    let dphi = eig.dphi1(r);
    let rt = pow(r, th);
    // −Δ(−A r^θ φ₁) = A·(θ² r^{θ−2} φ₁ − λ₁ r^θ φ₁ + 2θ r^{θ−1} φ₁′).
    let minus_lap = amp * (th * th * rt * phi / (r * r) - eig.lambda1 * rt * phi + 2.0 * th * rt * dphi / r);
    Ok(Jet {
        r,
        v: -gamma * ln(r) - amp * rt * phi,
        v_r: -gamma / r - amp * (th * rt * phi / r + rt * dphi),
        lap: -minus_lap,
    })
}

/// Constants of the a priori supersolution `ψ = λ·ln(1/(R²−r²)) + μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AprioriConstants {
    /// `2/b` below `q = 2`, `q/b` above.
    pub lambda: f64,
    /// The maximised bracket constant, margin included.
    pub lambda_star: f64,
    /// `(1/b)·ln(Λ*/a)`, the additive constant of the bound.
    pub big_lambda: f64,
}

/// Safety factor applied to the maximised bracket.
pub const APRIORI_MARGIN: f64 = 1.01;

fn maximise(f: impl Fn(f64) -> f64) -> f64 {
    let n = 4096;
    let mut best_s = 0.0;
    let mut best = f(0.0);
    for i in 1..=n {
        let s = i as f64 / n as f64;
        let v = f(s);
        if v > best {
            best = v;
            best_s = s;
        }
    }
    // Golden-section polish in the bracketing cell pair.
    let h = 1.0 / n as f64;
    let (mut lo, mut hi) = (max(0.0, best_s - h), crate::math::min(1.0, best_s + h));
    let g = 0.5 * (crate::math::sqrt(5.0) - 1.0);
    for _ in 0..80 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) > f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    max(best, f(0.5 * (lo + hi)))
}

pub fn apriori_constants(params: &ProblemParams) -> Result<AprioriConstants> {
    let (m, b, q) = (params.m, params.b, params.q);
    let (lambda, star) = match params.regime()? {
        Regime::Subcritical => {
            let c = pow(4.0 / b, q) * m;
            let peak = maximise(|s| c * powq(s, q) * pow(1.0 - s * s, 2.0 - q));
            (2.0 / b, 8.0 / b + peak)
        }
        Regime::Supercritical => {
            let c1 = 4.0 * q / b;
            let c2 = pow(2.0 * q / b, q) * m;
            let peak = maximise(|s| c1 * pow(1.0 - s * s, q - 2.0) + c2 * powq(s, q));
            (q / b, peak)
        }
    };
    let lambda_star = APRIORI_MARGIN * star;
    Ok(AprioriConstants {
        lambda,
        lambda_star,
        big_lambda: ln(lambda_star / params.a) / b,
    })
}

/// `ψ(r) = λ·ln(1/(R²−r²)) + μ` centred at a point at distance `R` from the
/// origin, with `r` the distance to that centre. Returns `ψ(r)` and `E(ψ)(r)`.
pub fn supersol_apriori(params: &ProblemParams, big_r: f64, r: f64) -> Result<(f64, f64)> {
    let c = apriori_constants(params)?;
    let jet = supersol_apriori_jet(&c, big_r, r)?;
    Ok((jet.v, Terms::of(&jet, params).full()))
}

/// `μ = λ·ln R + Λ`, which makes `e^{bμ} = R^{bλ}·Λ*/a`.
pub fn apriori_mu(c: &AprioriConstants, big_r: f64) -> f64 {
    c.lambda * ln(big_r) + c.big_lambda
}

pub fn supersol_apriori_jet(
    c: &AprioriConstants,
    big_r: f64,
    r: f64,
) -> Result<Jet> {
    if !(big_r > 0.0 && big_r <= 1.0) {
        return Err(Error::PreconditionViolation("need 0 < R <= 1"));
    }
    if !(r >= 0.0 && r < big_r) {
        return Err(Error::InvalidRadius(r));
    }
    let d = big_r * big_r - r * r;
    let l = c.lambda;
    Ok(Jet {
        r,
        v: -l * ln(d) + apriori_mu(c, big_r),
        v_r: 2.0 * l * r / d,
        lap: 4.0 * l * big_r * big_r / (d * d),
    })
}

/// Pointwise bound `λ·ln(1/R) + Λ` with `R = min(r, 1 − r)`, the largest
/// admissible ball radius around a point at distance `r` from the origin.
pub fn apriori_bound(params: &ProblemParams, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidRadius(r));
    }
    let c = apriori_constants(params)?;
    let big_r = crate::math::min(r, 1.0 - r);
    Ok(-c.lambda * ln(big_r) + c.big_lambda)
}

/// The catalogue of closed forms as a single evaluable value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormKind {
    EikonalWc(f64),
    EikonalWinf,
    EmdenCriticalExact,
    EtaProfile,
    PsiKappa(f64),
    /// Amplitude `A`; `θ = 2 − bγ` is recovered from `gamma`.
    SubsolHA { amp: f64, gamma: f64 },
    /// Ball radius `R`.
    SupersolAPriori { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub kind: ClosedFormKind,
    pub params: ProblemParams,
}

impl ClosedForm {
    pub fn new(kind: ClosedFormKind, params: ProblemParams) -> Result<Self> {
        match kind {
            ClosedFormKind::EmdenCriticalExact if abs(params.a * params.b - 2.0) > 1e-12 => {
                return Err(Error::PreconditionViolation("requires a·b = 2"))
            }
            ClosedFormKind::EtaProfile if params.q == 2.0 => {
                return Err(Error::PreconditionViolation("eta needs q != 2"))
            }
            ClosedFormKind::SubsolHA { amp, gamma }
                if !(gamma > 0.0 && gamma < params.two_over_b() && amp > 0.0) =>
            {
                return Err(Error::PreconditionViolation("h_A needs 0 < gamma < 2/b, A > 0"))
            }
            _ => {}
        }
        Ok(ClosedForm { kind, params })
    }

    pub fn jet(&self, r: f64) -> Result<Jet> {
        let p = &self.params;
        match self.kind {
            ClosedFormKind::EikonalWc(c) => Ok(eikonal_wc_jet(p, c, r)),
            ClosedFormKind::EikonalWinf => eikonal_winf_jet(p, r),
            ClosedFormKind::EmdenCriticalExact => emden_critical_exact_jet(p, r),
            ClosedFormKind::EtaProfile => eta_profile_jet(p.q, r),
            ClosedFormKind::PsiKappa(k) => {
                check_radius(r)?;
                Ok(psi_kappa_jet(p, k, r))
            }
            ClosedFormKind::SubsolHA { amp, gamma } => {
                subsol_h_a_jet(p, gamma, amp, r, &EigenData::new())
            }
            ClosedFormKind::SupersolAPriori { radius } => {
                let c = apriori_constants(p)?;
                supersol_apriori_jet(&c, radius, r)
            }
        }
    }

    /// `θ = 2 − bγ` for the `h_A` family.
    pub fn theta(&self) -> Option<f64> {
        match self.kind {
            ClosedFormKind::SubsolHA { gamma, .. } => Some(2.0 - self.params.b * gamma),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(q: f64) -> ProblemParams {
        ProblemParams::new(1.0, 1.0, 1.0, q, None).unwrap()
    }

    #[test]
    fn winf_values() {
        let v = eikonal_winf(&unit(3.0), 1.0).unwrap();
        assert!((v - 3.0 * ln(3.0)).abs() < 1e-14);
        let p = ProblemParams::new(16.0, 1.0, 2.0, 4.0, None).unwrap();
        assert!(eikonal_winf(&p, 4.0).unwrap().abs() < 1e-14);
        assert!(eikonal_winf(&p, 0.0).is_err());
    }

    #[test]
    fn wc_at_origin_and_ordering() {
        let p = unit(3.0);
        assert_eq!(eikonal_wc(&p, 5.0, 0.0), 5.0);
        let winf = eikonal_winf(&p, 0.5).unwrap();
        let gaps: alloc::vec::Vec<f64> = [5.0, 10.0, 20.0]
            .iter()
            .map(|&c| winf - eikonal_wc(&p, c, 0.5))
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] >= 0.0);
    }

    #[test]
    fn emden_exact_values() {
        let p = ProblemParams::new(1.0, 1.0, 2.0, 1.5, None).unwrap();
        let v = emden_critical_exact(&p, (-1.0f64).exp()).unwrap();
        assert!((v - (1.0 - crate::math::LN_2)).abs() < 1e-15);
        assert_eq!(emden_critical_exact(&p, 1.0).unwrap(), 0.0);
        assert!(emden_critical_exact(&unit(1.5), 0.5).is_err());
    }

    #[test]
    fn psi_kappa_residuals() {
        let p = unit(1.5);
        let (_, res) = psi_kappa(&p, 0.0, (-1.0f64).exp());
        let e2 = (2.0f64).exp();
        assert!((res + e2 / 4.0).abs() < 1e-13);
        let (_, res) = psi_kappa(&p, crate::math::LN_2, 0.3);
        assert!(res.abs() < 1e-13);
    }

    #[test]
    fn kappa_values() {
        let (k1, k2) = kappa_bounds(&unit(1.5));
        assert!((k1 - crate::math::LN_2).abs() < 1e-15 && k2 == 0.0);
        let p = ProblemParams::new(1.0, 4.0, 1.0, 1.5, None).unwrap();
        let (k1, k2) = kappa_bounds(&p);
        assert!(k1 == 0.0 && (k2 + crate::math::LN_2).abs() < 1e-15);
    }

    #[test]
    fn eta_values() {
        assert!((eta_profile(1.5, 0.0).unwrap() - 4.0).abs() < 1e-15);
        assert_eq!(eta_profile(1.5, 1.0).unwrap(), 0.0);
        let j = eta_profile_jet(3.0, 0.5).unwrap();
        assert!((-j.lap - 8.0).abs() < 1e-13);
        assert!(eta_profile(2.0, 0.5).is_err());
    }

    #[test]
    fn h_a_boundary_and_below_log() {
        let p = unit(1.5);
        let (v, _) = subsol_h_a(&p, 1.0, 0.1, 1.0).unwrap();
        assert!(v.abs() < 1e-12);
        for i in 1..100 {
            let r = i as f64 / 100.0;
            let (v, _) = subsol_h_a(&p, 1.0, 0.1, r).unwrap();
            assert!(v < -ln(r));
        }
        assert!(subsol_h_a(&p, 2.0, 0.1, 0.5).is_err());
    }

    #[test]
    fn apriori_centre_value() {
        for &q in &[1.5, 3.0] {
            let p = unit(q);
            let c = apriori_constants(&p).unwrap();
            let (v, _) = supersol_apriori(&p, 0.5, 0.0).unwrap();
            let expect = c.lambda * ln(1.0 / 0.5) + ln(c.lambda_star / p.a) / p.b;
            assert!((v - expect).abs() < 1e-13);
        }
    }
}
