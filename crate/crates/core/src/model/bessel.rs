//! `J₀`, `J₁` by power series and the first Dirichlet eigenpair of the unit disk.

use crate::math::{abs, max};

const SERIES_CUTOFF: f64 = 1e-17;

fn series(x: f64, order: u32) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = if order == 0 { 1.0 } else { h };
    let mut sum = term;
    let mut largest = abs(term);
    let mut k = 1.0;
    loop {
        term *= -h2 / (k * (k + order as f64));
        sum += term;
        largest = max(largest, abs(term));
        if abs(term) < SERIES_CUTOFF * largest || k > 200.0 {
            return sum;
        }
        k += 1.0;
    }
}

pub fn j0(x: f64) -> f64 {
    series(x, 0)
}

pub fn j1(x: f64) -> f64 {
    series(x, 1)
}

/// First positive zero of `J₀`, by bisection on `[2, 3]`.
pub fn j01() -> f64 {
    let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First Dirichlet eigenpair of `−Δ` on the unit disk, normalised so `φ₁(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenData {
    pub j01: f64,
    pub lambda1: f64,
}

impl Default for EigenData {
    fn default() -> Self {
        Self::new()
    }
}

impl EigenData {
    pub fn new() -> Self {
        let j = j01();
        EigenData {
            j01: j,
            lambda1: j * j,
        }
    }

    pub fn phi1(&self, r: f64) -> f64 {
        j0(self.j01 * r)
    }

    pub fn dphi1(&self, r: f64) -> f64 {
        -self.j01 * j1(self.j01 * r)
    }
}

/// `(φ₁(r), j01)`.
pub fn bessel_phi1(r: f64) -> (f64, f64) {
    let e = EigenData::new();
    (e.phi1(r), e.j01)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_normalisation() {
        let e = EigenData::new();
        assert!((e.j01 - 2.404825557695773).abs() < 1e-12);
        assert_eq!(e.phi1(0.0), 1.0);
        assert!(e.phi1(1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_ode_by_differences() {
        let e = EigenData::new();
        let h = 1e-4;
        let mut r = 0.01;
        while r < 0.99 {
            let d2 = (e.phi1(r + h) - 2.0 * e.phi1(r) + e.phi1(r - h)) / (h * h);
            let d1 = (e.phi1(r + h) - e.phi1(r - h)) / (2.0 * h);
            assert!((d2 + d1 / r + e.lambda1 * e.phi1(r)).abs() < 1e-6);
            assert!((d1 - e.dphi1(r)).abs() < 1e-8);
            r += 0.01;
        }
    }

    #[test]
    fn strictly_decreasing() {
        let e = EigenData::new();
        let mut prev = e.phi1(0.0);
        for i in 1..=1000 {
            let v = e.phi1(i as f64 / 1000.0);
            assert!(v < prev);
            prev = v;
        }
    }
}
