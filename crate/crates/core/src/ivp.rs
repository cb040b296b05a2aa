//! Adaptive Dormand–Prince 5(4) with the standard fourth-order dense output.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, max, min, pow};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Any state component above this magnitude counts as blow-up.
    pub blowup: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-12,
            atol: 1e-12,
            blowup: 1e8,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IvpStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Integrates `y′ = f(t, y)` from `t0` and samples the dense output at
/// every point of `outputs` (increasing, within `[t0, t_end]`).
pub fn dopri5<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    outputs: &[f64],
    tol: &Tolerances,
) -> Result<(Vec<[f64; N]>, IvpStats)> {
    let mut stats = IvpStats::default();
    let mut out = Vec::with_capacity(outputs.len());
    let mut next_out = 0;
    while next_out < outputs.len() && outputs[next_out] <= t0 {
        out.push(y0);
        next_out += 1;
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.evaluations += 1;
    let span = t_end - t0;
    let mut h = min(1e-3 * abs(span), 1e-2);
    let hmin = 1e-13 * max(1.0, abs(t0) + abs(t_end));
    let mut err_prev: f64 = 1e-4;
    let comb = |y: &[f64; N], ks: &[(&[f64; N], f64)], h: f64| -> [f64; N] {
        let mut r = *y;
        for (k, c) in ks {
            for i in 0..N {
                r[i] += h * c * k[i];
            }
        }
        r
    };
    while t < t_end {
        if stats.accepted + stats.rejected > tol.max_steps {
            return Err(Error::StiffnessFault { t });
        }
        if t + h > t_end {
            h = t_end - t;
        }
        let k2 = f(t + C2 * h, &comb(&y, &[(&k1, A21)], h));
        let k3 = f(t + C3 * h, &comb(&y, &[(&k1, A31), (&k2, A32)], h));
        let k4 = f(t + C4 * h, &comb(&y, &[(&k1, A41), (&k2, A42), (&k3, A43)], h));
        let k5 = f(
            t + C5 * h,
            &comb(&y, &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)], h),
        );
        let k6 = f(
            t + h,
            &comb(&y, &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)], h),
        );
        let y1 = comb(&y, &[(&k1, A71), (&k3, A73), (&k4, A74), (&k5, A75), (&k6, A76)], h);
        let k7 = f(t + h, &y1);
        stats.evaluations += 6;
        let mut err = 0.0;
        let mut finite = true;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.atol + tol.rtol * max(abs(y[i]), abs(y1[i]));
            err += (e / sc) * (e / sc);
            finite &= y1[i].is_finite() && k7[i].is_finite();
        }
        let err = crate::math::sqrt(err / N as f64);
        if !finite || !err.is_finite() || err > 1.0 {
            stats.rejected += 1;
            let fac = if finite && err.is_finite() {
                max(0.2, 0.9 * pow(err, -0.2))
            } else {
                0.1
            };
            h *= fac;
            if h < hmin {
                let big = y.iter().any(|v| abs(*v) > 1e3);
                return Err(if big || !finite {
                    Error::FiniteTimeBlowup { t }
                } else {
                    Error::StiffnessFault { t }
                });
            }
            continue;
        }
        // Dense output on [t, t + h].
        let mut rc = [[0.0; N]; 5];
        for i in 0..N {
            let dy = y1[i] - y[i];
            let bspl = h * k1[i] - dy;
            rc[0][i] = y[i];
            rc[1][i] = dy;
            rc[2][i] = bspl;
            rc[3][i] = dy - h * k7[i] - bspl;
            rc[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        let t_new = if t + h >= t_end { t_end } else { t + h };
        while next_out < outputs.len() && outputs[next_out] <= t_new {
            let th = (outputs[next_out] - t) / h;
            let th1 = 1.0 - th;
            let mut v = [0.0; N];
            for i in 0..N {
                v[i] = rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
            }
            out.push(v);
            next_out += 1;
        }
        stats.accepted += 1;
        t = t_new;
        y = y1;
        k1 = k7;
        if y.iter().any(|v| abs(*v) > tol.blowup) {
            return Err(Error::FiniteTimeBlowup { t });
        }
        // PI step-size control.
        let e = max(err, 1e-10);
        let fac = 0.9 * pow(e, -0.7 / 5.0) * pow(err_prev, 0.4 / 5.0);
        err_prev = e;
        h *= min(5.0, max(0.2, fac));
    }
    while next_out < outputs.len() {
        out.push(y);
        next_out += 1;
    }
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, sin};

    #[test]
    fn harmonic_oscillator_with_dense_output() {
        let outputs: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
        let (ys, st) = dopri5(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            10.0,
            &outputs,
            &Tolerances::default(),
        )
        .unwrap();
        assert!(st.accepted > 10);
        for (t, y) in outputs.iter().zip(&ys) {
            assert!((y[0] - sin(*t)).abs() < 1e-9, "t={t}");
            assert!((y[1] - cos(*t)).abs() < 1e-9);
        }
    }

    #[test]
    fn detects_blowup() {
        // y′ = y², y(0) = 1 blows up at t = 1.
        let r = dopri5(
            |_, y: &[f64; 1]| [y[0] * y[0]],
            0.0,
            [1.0],
            2.0,
            &[],
            &Tolerances::default(),
        );
        match r {
            Err(Error::FiniteTimeBlowup { t }) => assert!((t - 1.0).abs() < 1e-3),
            other => panic!("{other:?}"),
        }
    }
}
