use thiserror::Error;

use crate::jets::JetError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the physical or mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed-form evaluation produced a value that violates a structural
    /// property (realness, positivity) beyond tolerance.
    #[error("numeric consistency violated in {context}: {detail}")]
    NumericConsistency { context: &'static str, detail: String },

    /// Mandel Q requires a nonzero mean photon number.
    #[error("Mandel Q is undefined: mean photon number is zero")]
    UndefinedMandelQ,

    /// The truncated Fock basis loses more weight than the oracle tolerates.
    #[error("Fock cutoff {cutoff} too small: leakage {leakage:.3e} exceeds {threshold:.1e}")]
    CutoffTooSmall {
        cutoff: usize,
        leakage: f64,
        threshold: f64,
    },

    /// The quadrature window misses too much of the initial Wigner function.
    #[error("quadrature window too small: mass deficit {deficit:.3e} exceeds {threshold:.1e}")]
    QuadratureWindow { deficit: f64, threshold: f64 },

    /// A root search interval does not contain a sign change.
    #[error("not bracketed: {0}")]
    NotBracketed(String),

    #[error("invalid usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Jet(#[from] JetError),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

/// Returns the real part of `value` after checking that the imaginary part is
/// negligible relative to its modulus.
pub(crate) fn assert_real(
    value: num_complex::Complex64,
    tolerance: f64,
    context: &'static str,
) -> Result<f64> {
    let scale = value.norm().max(f64::MIN_POSITIVE);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NumericConsistency {
            context,
            detail: format!("non-finite value {value}"),
        });
    }
    if value.im.abs() > tolerance * scale {
        return Err(Error::NumericConsistency {
            context,
            detail: format!(
                "imaginary residue {:.3e} exceeds {:.1e} relative",
                value.im.abs() / scale,
                tolerance
            ),
        });
    }
    Ok(value.re)
}
