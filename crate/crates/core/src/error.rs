use core::fmt;

/// Every failure the solvers and verifiers can report.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Error {
    InvalidParameter(&'static str),
    /// `q = 2` is excluded.
    CriticalExponentUnsupported,
    InvalidRadius(f64),
    PreconditionViolation(&'static str),
    NumericalFault(&'static str),
    BranchMismatch(&'static str),
    FiniteTimeBlowup { t: f64 },
    StiffnessFault { t: f64 },
    NoConvergence { iterations: usize, residual: f64 },
    /// The supercritical solve settled on a bounded profile.
    BranchCollapse { slope: f64 },
    /// No classical singular solution takes this boundary value.
    UnattainableBoundary { phi0: f64, floor: f64 },
    InvalidWindow(&'static str),
    UnreliableTail { residual: f64, partial: f64 },
    InvalidInput(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(s) => write!(f, "invalid parameter: {s}"),
            Error::CriticalExponentUnsupported => {
                write!(f, "unsupported critical exponent q = 2")
            }
            Error::InvalidRadius(r) => write!(f, "invalid radius {r}"),
            Error::PreconditionViolation(s) => write!(f, "precondition violated: {s}"),
            Error::NumericalFault(s) => write!(f, "numerical fault: {s}"),
            Error::BranchMismatch(s) => write!(f, "branch does not match parameters: {s}"),
            Error::FiniteTimeBlowup { t } => write!(f, "solution blew up near t = {t}"),
            Error::StiffnessFault { t } => write!(f, "step size underflow at t = {t}"),
            Error::NoConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "Newton did not converge after {iterations} iterations (residual {residual:e})"
            ),
            Error::BranchCollapse { slope } => {
                write!(f, "collapsed to the regular branch (inner slope {slope})")
            }
            Error::UnattainableBoundary { phi0, floor } => write!(
                f,
                "boundary value {phi0} is below the singular branch floor {floor}"
            ),
            Error::InvalidWindow(s) => write!(f, "invalid fit window: {s}"),
            Error::UnreliableTail { residual, partial } => write!(
                f,
                "tail extrapolation unreliable (fit residual {residual:.3}, partial value {partial})"
            ),
            Error::InvalidInput(s) => write!(f, "invalid input: {s}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
