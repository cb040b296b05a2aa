//! Adaptive Gauss–Kronrod (7/15) and composite rules on uniform grids.

use alloc::vec::Vec;

use crate::math::{abs, max};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, abs((k - g) * h))
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Globally adaptive Gauss–Kronrod on `[a, b]`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quad {
    let mut parts: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = gk15(&mut f, a, b);
    parts.push((a, b, v, e));
    let mut evals = 15;
    for _ in 0..2000 {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= max(abs_tol, rel_tol * abs(total)) {
            break;
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        evals += 30;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
    // Sum in interval order so the result does not depend on refinement history.
    parts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(core::cmp::Ordering::Equal));
    Quad {
        value: parts.iter().map(|p| p.2).sum(),
        error: parts.iter().map(|p| p.3).sum(),
        evaluations: evals,
    }
}

/// `∫_a^∞ f` through the map `x = a + s/(1 − s)`.
pub fn integrate_to_infinity(mut f: impl FnMut(f64) -> f64, a: f64, abs_tol: f64, rel_tol: f64) -> Quad {
    integrate(
        |s| {
            if s >= 1.0 {
                return 0.0;
            }
            let d = 1.0 - s;
            let v = f(a + s / d) / (d * d);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

/// Composite Simpson on a uniform grid with spacing `h`; an even number of
/// samples closes with the 3/8 rule on the last three intervals.
pub fn simpson_uniform(h: f64, f: &[f64]) -> f64 {
    let n = f.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (f[0] + f[1]),
        3 => h / 3.0 * (f[0] + 4.0 * f[1] + f[2]),
        _ => {
            let intervals = n - 1;
            let (simpson_end, tail) = if intervals % 2 == 0 {
                (n - 1, 0.0)
            } else {
                let k = n - 4;
                (k, 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]))
            };
            let mut s = f[0] + f[simpson_end];
            for (i, v) in f.iter().enumerate().take(simpson_end).skip(1) {
                s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            s * h / 3.0 + tail
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{exp, sin, PI};

    #[test]
    fn smooth_integral() {
        let q = integrate(sin, 0.0, PI, 1e-14, 1e-14);
        assert!((q.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn infinite_range() {
        let q = integrate_to_infinity(|x| exp(-x), 0.0, 1e-13, 1e-13);
        assert!((q.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        for n in [5usize, 6, 9, 10] {
            let h = 1.0 / (n - 1) as f64;
            let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
            assert!((simpson_uniform(h, &f) - 0.25).abs() < 1e-14);
        }
    }
}
