use thiserror::Error;

use crate::intpoly::IntPoly;

/// Errors raised by the library.
///
/// The split between user-facing failures and internal consistency failures
/// matters to the CLI, which maps the latter to exit code 2.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("the zero polynomial is not accepted here")]
    ZeroPolynomial,

    #[error("polynomial {0} is not monic")]
    NotMonic(IntPoly),

    #[error("polynomial {0} is not palindromic")]
    NotPalindromic(IntPoly),

    #[error("polynomial {0} has odd degree")]
    OddDegree(IntPoly),

    #[error("element is not invertible modulo {modulus}: gcd with the modulus is {gcd}")]
    NotInvertible { modulus: IntPoly, gcd: IntPoly },

    #[error("root certification failed for {poly}: achieved radius {achieved:e}, requested {requested:e}")]
    Certification {
        poly: IntPoly,
        achieved: f64,
        requested: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0} is not a Salem polynomial")]
    NotSalem(IntPoly),

    #[error("{poly} is not in any class P(s,r): {reason}")]
    NotMember { poly: IntPoly, reason: String },

    #[error("polynomials belong to different classes: ({0}, {1}) vs ({2}, {3})")]
    MixedClasses(usize, usize, usize, usize),

    #[error("search box produced no admissible polynomial")]
    EmptySearch,

    #[error("singular matrix")]
    SingularMatrix,

    #[error("io error: {0}")]
    Io(String),

    /// A computed quantity contradicts a theorem the code relies on.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
