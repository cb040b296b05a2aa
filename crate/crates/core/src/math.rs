//! Thin wrappers over `libm` so the rest of the crate reads like `std`.

pub use core::f64::consts::{LN_2, PI};

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn ln1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `|s|^q` with `0^q = 0`.
#[inline]
pub fn powq(s: f64, q: f64) -> f64 {
    let a = abs(s);
    if a == 0.0 {
        0.0
    } else {
        pow(a, q)
    }
}

/// Derivative of `|s|^q` in `s`: `q|s|^{q−1}·sign(s)`, zero at the kink.
#[inline]
pub fn dpowq(s: f64, q: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        let d = q * pow(abs(s), q - 1.0);
        if s > 0.0 {
            d
        } else {
            -d
        }
    }
}

#[inline]
pub fn max(a: f64, b: f64) -> f64 {
    if a >= b {
        a
    } else {
        b
    }
}

#[inline]
pub fn min(a: f64, b: f64) -> f64 {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, &x| max(m, abs(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powq_conventions() {
        assert_eq!(powq(0.0, 1.5), 0.0);
        assert!((powq(-4.0, 1.5) - 8.0).abs() < 1e-14);
        assert_eq!(dpowq(0.0, 3.0), 0.0);
        assert!((dpowq(-2.0, 3.0) + 12.0).abs() < 1e-13);
    }
}
