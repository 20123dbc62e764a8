use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: condition `{condition}` fails")]
    InvalidModel { condition: String },
    #[error("degenerate model: `{condition}` holds with equality within {margin:e}")]
    Degenerate { condition: String, margin: f64 },
    #[error("point {0} lies on a branch cut")]
    OnCut(String),
    #[error("G has a pole at {0}")]
    PoleOfG(String),
    #[error("E has a pole at {0}")]
    PoleOfE(String),
    #[error("evaluation point {0} is the pole of phi1")]
    AtPole(String),
    #[error("kernel vanishes at ({0})")]
    AtKernelZero(String),
    #[error("root search did not converge: {0}")]
    NoConvergence(String),
    #[error("numerical input is ambiguous: {0}")]
    AmbiguousNumerical(String),
    #[error("not covered: {0}")]
    NotCovered(String),
    #[error("degree mismatch for {which}: expected {expected}, counted {found}")]
    DegreeMismatch { which: String, expected: i64, found: i64 },
    #[error("no decoupling function: neither angle condition holds")]
    NoDecoupling,
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("pushback did not restore the quadrant at step {step}")]
    PushbackDivergence { step: u64 },
    #[error("series radius too small: {0:e}")]
    RadiusTooSmall(f64),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidModel { .. }
            | Error::Degenerate { .. }
            | Error::Input(_)
            | Error::AmbiguousNumerical(_)
            | Error::OnCut(_)
            | Error::AtPole(_)
            | Error::AtKernelZero(_) => 2,
            Error::NotCovered(_) | Error::NoDecoupling => 3,
            _ => 4,
        }
    }
}
