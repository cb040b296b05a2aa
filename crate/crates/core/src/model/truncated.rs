//! The C² convex regularisation `φ_s` of `ξ ↦ ξ^{q/2}`.
//!
//! For `ξ ≤ s²` it is `ξ^{q/2}`; above it grows linearly in `ξ`:
//!
//! ```text
//! φ_s(ξ) = q(q−1)/2·s^{q−2}·ξ + q(2−q)·s^{q−1}·√ξ + (q²−3q+2)/2·s^q
//! ```
//!
//! so `φ_s(|∇u|²)` agrees with `|∇u|^q` wherever `|∇u| ≤ s`.

use crate::math::{pow, sqrt};

/// Value and first two `ξ`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// The pure power `ξ^{q/2}`.
pub fn lower_branch(xi: f64, q: f64) -> PowerJet {
    if xi <= 0.0 {
        return PowerJet {
            value: 0.0,
            d1: 0.0,
            d2: 0.0,
        };
    }
    let v = pow(xi, 0.5 * q);
    PowerJet {
        value: v,
        d1: 0.5 * q * v / xi,
        d2: 0.5 * q * (0.5 * q - 1.0) * v / (xi * xi),
    }
}

/// The quadratic-growth continuation used for `ξ ≥ s²`.
pub fn upper_branch(xi: f64, s: f64, q: f64) -> PowerJet {
    let c2 = 0.5 * q * (q - 1.0) * pow(s, q - 2.0);
    let c1 = q * (2.0 - q) * pow(s, q - 1.0);
    let c0 = 0.5 * (q * q - 3.0 * q + 2.0) * pow(s, q);
    let r = sqrt(xi);
    PowerJet {
        value: c2 * xi + c1 * r + c0,
        d1: c2 + 0.5 * c1 / r,
        d2: -0.25 * c1 / (r * xi),
    }
}

pub fn truncated_power_jet(xi: f64, s: f64, q: f64) -> PowerJet {
    if xi <= s * s {
        lower_branch(xi, q)
    } else {
        upper_branch(xi, s, q)
    }
}

pub fn truncated_power(xi: f64, s: f64, q: f64) -> f64 {
    truncated_power_jet(xi, s, q).value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_branch_value() {
        assert_eq!(truncated_power(1.0, 2.0, 3.0), 1.0);
    }

    #[test]
    fn junction_value_is_s_to_the_q() {
        for &q in &[2.5, 3.0, 4.0] {
            for &s in &[1.0, 10.0, 100.0] {
                let lo = lower_branch(s * s, q);
                let hi = upper_branch(s * s, s, q);
                let sq = pow(s, q);
                assert!((lo.value - sq).abs() <= 1e-13 * sq);
                assert!((hi.value - sq).abs() <= 1e-12 * sq);
            }
        }
    }

    #[test]
    fn monotone() {
        let mut prev = -1.0;
        for i in 0..2000 {
            let v = truncated_power(i as f64 * 0.01, 3.0, 3.0);
            assert!(v >= prev);
            prev = v;
        }
    }
}
