use alloc::vec::Vec;

use super::params::ProblemParams;
use crate::error::{Error, Result};
use crate::math::{exp, max, min, powq};

/// `u`, `|∇u|` and `Δu` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub u: f64,
    pub grad: f64,
    pub lap: f64,
}

/// Pointwise `E(u)` with its extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualField {
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

pub fn residual_point(s: &FieldSample, params: &ProblemParams) -> Result<f64> {
    if !(s.u.is_finite() && s.grad.is_finite() && s.lap.is_finite()) {
        return Err(Error::NumericalFault("non-finite field sample"));
    }
    let e = -s.lap + params.a * exp(params.b * s.u) - params.m * powq(s.grad, params.q);
    if e.is_finite() {
        Ok(e)
    } else {
        Err(Error::NumericalFault("residual overflow"))
    }
}

/// `E(u) = −Δu + a·e^{bu} − m|∇u|^q` at every sample.
pub fn residual_strong(samples: &[FieldSample], params: &ProblemParams) -> Result<ResidualField> {
    let mut values = Vec::with_capacity(samples.len());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in samples {
        let e = residual_point(s, params)?;
        lo = min(lo, e);
        hi = max(hi, e);
        values.push(e);
    }
    Ok(ResidualField {
        values,
        min: lo,
        max: hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_leaves_absorption() {
        let p = ProblemParams::new(1.0, 2.5, 1.0, 1.5, None).unwrap();
        let s = FieldSample {
            u: 0.0,
            grad: 0.0,
            lap: 0.0,
        };
        let f = residual_strong(&[s; 4], &p).unwrap();
        assert!(f.values.iter().all(|&e| e == 2.5));
        assert_eq!((f.min, f.max), (2.5, 2.5));
    }

    #[test]
    fn non_finite_rejected() {
        let p = ProblemParams::new(1.0, 1.0, 1.0, 1.5, None).unwrap();
        let s = FieldSample {
            u: f64::NAN,
            grad: 0.0,
            lap: 0.0,
        };
        assert!(residual_strong(&[s], &p).is_err());
    }
}
