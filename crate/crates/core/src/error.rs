use alloc::string::String;
use core::fmt;

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Requested working precision is below the supported floor.
    PrecisionTooLow { digits: u32, min: u32 },
    /// An argument lies outside the domain of the routine.
    Domain(String),
    /// Evaluation at (or too close to) a pole.
    Pole(String),
    /// An iterative procedure failed to reach the requested accuracy.
    NonConvergence(String),
    /// A value left the finite range.
    Overflow(String),
    /// Malformed textual input.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PrecisionTooLow { digits, min } => {
                write!(f, "precision of {digits} digits is below the minimum of {min}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Pole(msg) => write!(f, "pole: {msg}"),
            Error::NonConvergence(msg) => write!(f, "no convergence: {msg}"),
            Error::Overflow(msg) => write!(f, "overflow: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
