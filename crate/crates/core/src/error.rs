use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced anywhere in the core crate.
///
/// Solver failures carry the last accepted time and state so callers can
/// report how far an integration got.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    NewtonDivergence { t: f64, state: Vec<f64> },
    StepUnderflow { t: f64, h: f64, state: Vec<f64> },
    MaxStepsExceeded { t: f64, state: Vec<f64> },
    NoInteriorMaximum,
    NotInvertibleOnBlowupLocus,
    ChartUndefined(&'static str),
    PoleAt { y: f64 },
    SingularJacobian,
    CenterTrackingFailed(String),
    ReducedFlowStalled { at: Vec<f64> },
    RegimeOrigin,
    RegimeMismatch(String),
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NewtonDivergence { t, .. } => {
                write!(f, "Newton iteration diverged at minimum step size (t = {t})")
            }
            Error::StepUnderflow { t, h, .. } => {
                write!(f, "step size {h} fell below the minimum at t = {t}")
            }
            Error::MaxStepsExceeded { t, .. } => {
                write!(f, "maximum number of steps exceeded at t = {t}")
            }
            Error::NoInteriorMaximum => write!(f, "y component has no interior maximum"),
            Error::NotInvertibleOnBlowupLocus => {
                write!(f, "point lies on the blow-up locus; inverse map undefined")
            }
            Error::ChartUndefined(why) => write!(f, "chart undefined: {why}"),
            Error::PoleAt { y } => write!(f, "critical manifold has a pole at y = {y}"),
            Error::SingularJacobian => write!(f, "chart map Jacobian is singular"),
            Error::CenterTrackingFailed(why) => write!(f, "center segment tracking failed: {why}"),
            Error::ReducedFlowStalled { at } => write!(f, "reduced flow stalled at {at:?}"),
            Error::RegimeOrigin => write!(f, "eps1 = eps2 = 0: y = 0 is a line of equilibria, no dynamics"),
            Error::RegimeMismatch(why) => write!(f, "regime mismatch: {why}"),
            Error::InvalidArgument(why) => write!(f, "invalid argument: {why}"),
        }
    }
}

impl Error {
    /// Short machine-readable tag, used by report writers.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NewtonDivergence { .. } => "NewtonDivergence",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::MaxStepsExceeded { .. } => "MaxStepsExceeded",
            Error::NoInteriorMaximum => "NoInteriorMaximum",
            Error::NotInvertibleOnBlowupLocus => "NotInvertibleOnBlowupLocus",
            Error::ChartUndefined(_) => "ChartUndefined",
            Error::PoleAt { .. } => "PoleAt",
            Error::SingularJacobian => "SingularJacobian",
            Error::CenterTrackingFailed(_) => "CenterTrackingFailed",
            Error::ReducedFlowStalled { .. } => "ReducedFlowStalled",
            Error::RegimeOrigin => "RegimeOrigin",
            Error::RegimeMismatch(_) => "RegimeMismatch",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
