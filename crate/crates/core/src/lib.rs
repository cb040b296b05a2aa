//! Numerical laboratory for the singular elliptic equation
//!
//! ```text
//! −Δu + a·e^{bu} − m|∇u|^q = 0   in B₁ \ {0} ⊂ ℝ²
//! ```
//!
//! The crate classifies, solves and verifies isolated singularities at the
//! origin. Everything works in the log variable `t = ln r`, which turns the
//! punctured disk into the half-cylinder `(−∞, 0] × S¹`.
//!
//! * [`model`] holds parameters, transforms, closed-form solutions and
//!   special functions.
//! * [`radial`] solves the radial ODE by Newton collocation or shooting.
//! * [`annulus2d`] solves the full `(t, θ)` problem for non-radial data.
//! * [`verify`] checks masses, integrability, sandwiches and residual signs.
//! * [`asymptotics`] fits slopes, constants, decay rates and Hölder exponents.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod annulus2d;
pub mod asymptotics;
mod error;
pub mod interp;
pub mod ivp;
pub mod linalg;
pub mod math;
pub mod model;
pub mod quadrature;
pub mod radial;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Branch, ProblemParams, Regime};
pub use radial::{InnerClosure, RadialProfile, SolverConfig};
